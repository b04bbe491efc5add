#pragma once

#include <optional>

#include "spi/congruence.hpp"
#include "spi/term.hpp"

namespace spi {

/// Outcome of evaluating a ground term or formula. Partiality is a value.
class EvalResult {
 public:
  enum class Kind { Value, Truth, Undefined };

  static EvalResult value(Message m) { return EvalResult(Kind::Value, std::move(m), false); }
  static EvalResult truth(bool b) { return EvalResult(Kind::Truth, {}, b); }
  static EvalResult undefined() { return EvalResult(Kind::Undefined, {}, false); }

  Kind kind() const { return kind_; }
  bool defined() const { return kind_ != Kind::Undefined; }
  /// Canonical value; requires kind() == Value.
  const Message& message() const { return message_; }
  /// Requires kind() == Truth.
  bool truth_value() const { return truth_; }

  friend bool operator==(const EvalResult&, const EvalResult&) = default;

 private:
  EvalResult(Kind k, Message m, bool b) : kind_(k), message_(std::move(m)), truth_(b) {}
  Kind kind_;
  Message message_;
  bool truth_;
};

/// ⟦t⟧ for ground t. Encryption and decryption keys must evaluate to names.
EvalResult eval_term(const Term& t, const CongruencePlugin& plugin);
/// ⟦φ⟧; `[t1 = t2]` is undefined when either side is.
EvalResult eval_formula(const Formula& f, const CongruencePlugin& plugin);

/// Shorthand for eval_term returning the canonical value, if any.
std::optional<Message> evaluate(const Term& t, const CongruencePlugin& plugin);

}  // namespace spi

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spi/term.hpp"

namespace spi {

/// One way of reading a message as an encryption `enc(payload, key)`.
struct EncView {
  Message payload;
  Name key;

  friend bool operator==(const EncView&, const EncView&) = default;
};

/// Raised when a theory yields two non-congruent payloads for the same
/// (cipher, key) pair.
class CoherenceViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An equational theory over messages, decided through canonical forms.
///
/// Implementations must make `canonical` idempotent, and `enc_views(m)` must
/// list every decomposition of m's class as an encryption, each payload in
/// canonical form.
class CongruencePlugin {
 public:
  virtual ~CongruencePlugin() = default;

  virtual std::string_view id() const = 0;
  virtual Message canonical(const Message& m) const = 0;
  virtual std::vector<EncView> enc_views(const Message& m) const = 0;

  /// The payload t with m ≡ enc(t, k), canonical; empty if there is none.
  std::optional<Message> decrypt(const Message& m, const Name& k) const;
  bool equiv(const Message& m, const Message& n) const { return canonical(m) == canonical(n); }
};

/// Syntactic equality: canonical is the identity.
class DefaultCongruence final : public CongruencePlugin {
 public:
  std::string_view id() const override { return "default"; }
  Message canonical(const Message& m) const override { return m; }
  std::vector<EncView> enc_views(const Message& m) const override;
};

/// Adds enc(enc(M, k), j) ≡ enc(enc(M, j), k). Every maximal run of nested
/// encryptions has its keys sorted ascending from the innermost layer out.
class CommutativeCongruence final : public CongruencePlugin {
 public:
  std::string_view id() const override { return "commutative"; }
  Message canonical(const Message& m) const override;
  std::vector<EncView> enc_views(const Message& m) const override;
};

const CongruencePlugin& default_congruence();
const CongruencePlugin& commutative_congruence();

/// Looks up a shipped theory by id ("default", "commutative").
/// Throws std::invalid_argument for unknown ids.
const CongruencePlugin& congruence_by_id(std::string_view id);

inline bool equiv(const CongruencePlugin& plugin, const Message& m, const Message& n) {
  return plugin.equiv(m, n);
}
inline Message canonical(const CongruencePlugin& plugin, const Message& m) { return plugin.canonical(m); }
inline std::optional<Message> decrypt(const CongruencePlugin& plugin, const Message& m, const Name& k) {
  return plugin.decrypt(m, k);
}

// --- randomized coherence checking ------------------------------------------

enum class CoherenceCondition { TypePreservation, Equivariance, DeterministicDecryption };

std::string_view to_string(CoherenceCondition c);

struct CoherenceCounterexample {
  Message lhs;
  Message rhs;
  /// The renaming {to/from} applied, for equivariance failures.
  std::optional<std::pair<Name, Name>> renaming;
};

struct CoherenceReport {
  CoherenceCondition condition;
  std::size_t samples_tested = 0;
  std::vector<CoherenceCounterexample> counterexamples;

  bool passed() const { return counterexamples.empty(); }
};

/// Falsification-only check of the three coherence conditions on random
/// messages over the names {a, b, k}. Deterministic for a given seed.
std::vector<CoherenceReport> check_coherence(const CongruencePlugin& plugin, std::size_t samples,
                                             std::size_t max_depth, std::uint64_t seed);

}  // namespace spi

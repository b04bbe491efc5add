#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>

#include "spi/term.hpp"

namespace spi {

enum class ProcKind : std::uint8_t { Nil, Input, Output, Par, Sum, Restrict, Bang, Guard, Let };

/// Immutable spi-calculus process.
struct ProcessBuilder;

class Process {
 public:
  Process() = default;

  static Process nil();
  /// chan(x). body — `chan` is a name or a variable.
  static Process input(Term chan, Variable x, Process body);
  /// chan<payload>. body
  static Process output(Term chan, Term payload, Process body);
  static Process par(Process a, Process b);
  static Process sum(Process a, Process b);
  static Process restrict(Name n, Process body);
  static Process bang(Process body);
  static Process guard(Formula f, Process body);
  static Process let_in(Variable x, Term t, Process body);

  bool empty() const { return node_ == nullptr; }
  ProcKind kind() const;

  const Term& chan() const;        // input, output
  const Variable& var() const;     // input, let
  const Term& payload() const;     // output
  const Term& term() const;        // let
  const Formula& formula() const;  // guard
  const Name& name() const;        // restrict
  const Process& body() const;     // prefixes, restrict, bang, guard, let
  const Process& left() const;     // par, sum
  const Process& right() const;    // par, sum

  std::size_t hash() const;
  /// Number of input and output prefixes.
  std::size_t prefix_count() const;
  bool has_bang() const;

  friend bool operator==(const Process& a, const Process& b);
  /// Structural total order.
  friend std::strong_ordering operator<=>(const Process& a, const Process& b);

  struct Node;

 private:
  friend struct ProcessBuilder;
  explicit Process(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct ProcessHash {
  std::size_t operator()(const Process& p) const noexcept { return p.hash(); }
};

class ReplicationError : public std::invalid_argument {
 public:
  ReplicationError() : std::invalid_argument("replication (!P) is not supported: processes must be finite") {}
};

std::set<Name> free_names(const Process& p);
void collect_free_names(const Process& p, std::set<Name>& out);
std::set<Variable> free_vars(const Process& p);
/// Every name occurring in p, bound or free.
std::set<Name> all_names(const Process& p);

bool is_finite(const Process& p);
bool is_closed(const Process& p);

/// P{s/x}, renaming binders that would capture names or variables of s.
Process substitute(const Process& p, const Variable& x, const Term& s);
/// P{b/a} for free occurrences of the name a.
Process rename_name(const Process& p, const Name& a, const Name& b);

/// Canonical representative of p's structural-congruence class under
/// α-conversion, associativity/commutativity of | and +, the unit law of |,
/// scope extrusion, binder commutation and (νm)0 ≡ 0.
///
/// Restriction binders are hoisted to the enclosing parallel group and
/// renamed `_n<depth>_<i>`; input and let binders become `_x<depth>`.
/// Throws ReplicationError on `!`.
Process normalize(const Process& p);

/// ad(P). Throws ReplicationError on `!`.
std::size_t analysis_depth(const Process& p);

std::string to_string(const Process& p);
inline std::ostream& operator<<(std::ostream& os, const Process& p) { return os << to_string(p); }

// ---------------------------------------------------------------------------

struct Process::Node {
  ProcKind kind;
  Term chan;
  Variable var;
  Term term;
  Formula formula;
  Name name;
  Process lhs;
  Process rhs;
  std::size_t hash = 0;
  std::size_t prefixes = 0;
  bool bang = false;
};

inline ProcKind Process::kind() const { return node_->kind; }
inline const Term& Process::chan() const { return node_->chan; }
inline const Variable& Process::var() const { return node_->var; }
inline const Term& Process::payload() const { return node_->term; }
inline const Term& Process::term() const { return node_->term; }
inline const Formula& Process::formula() const { return node_->formula; }
inline const Name& Process::name() const { return node_->name; }
inline const Process& Process::body() const { return node_->lhs; }
inline const Process& Process::left() const { return node_->lhs; }
inline const Process& Process::right() const { return node_->rhs; }
inline std::size_t Process::hash() const { return node_->hash; }
inline std::size_t Process::prefix_count() const { return node_->prefixes; }
inline bool Process::has_bang() const { return node_->bang; }

}  // namespace spi

template <>
struct std::hash<spi::Process> {
  std::size_t operator()(const spi::Process& p) const noexcept { return p.hash(); }
};

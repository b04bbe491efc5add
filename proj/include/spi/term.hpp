#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

#include "spi/symbol.hpp"

namespace spi {

enum class TermKind : std::uint8_t { Name, Var, Pair, Enc, Dec, Proj1, Proj2 };

/// Immutable spi-calculus term. Nodes are shared; copying is cheap.
///
/// Child accessors are overloaded by role: for `pair` they return the two
/// components, for `enc`/`dec` the payload (or cipher) and the key, and for
/// the projections `arg()` is the projected term.
class Term {
 public:
  /// Empty handle; only meaningful as an assignment target.
  Term() = default;

  static Term name(Name n);
  static Term name(std::string_view n) { return name(Name(n)); }
  static Term var(Variable x);
  static Term var(std::string_view x) { return var(Variable(x)); }
  static Term pair(Term first, Term second);
  static Term enc(Term payload, Term key);
  static Term dec(Term cipher, Term key);
  static Term proj1(Term arg);
  static Term proj2(Term arg);

  bool empty() const { return node_ == nullptr; }
  TermKind kind() const;
  bool is_name() const { return kind() == TermKind::Name; }
  bool is_var() const { return kind() == TermKind::Var; }
  bool is_pair() const { return kind() == TermKind::Pair; }
  bool is_enc() const { return kind() == TermKind::Enc; }

  const Name& as_name() const;
  const Variable& as_var() const;

  const Term& first() const;   // pair
  const Term& second() const;  // pair
  const Term& payload() const; // enc, dec (cipher)
  const Term& key() const;     // enc, dec
  const Term& arg() const;     // proj1, proj2

  /// No free variables.
  bool is_ground() const;
  /// Ground, destructor-free, and every encryption key is a name.
  bool is_message() const;
  std::size_t hash() const;
  /// Number of nodes.
  std::size_t size() const;

  friend bool operator==(const Term& a, const Term& b);
  /// Structural total order; names compare by spelling.
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// A ground constructor-only term (see Term::is_message).
using Message = Term;
/// Output of ds(): a term built from names and pairs only.
using Skeleton = Term;

enum class FormulaKind : std::uint8_t { True, Not, And, Eq };

class Formula {
 public:
  Formula() = default;

  static Formula tru();
  static Formula fls() { return negate(tru()); }
  static Formula negate(Formula f);
  static Formula conj(Formula a, Formula b);
  static Formula eq(Term lhs, Term rhs);

  bool empty() const { return node_ == nullptr; }
  FormulaKind kind() const;
  const Formula& operand() const;  // not
  const Formula& left() const;     // and
  const Formula& right() const;    // and
  const Term& lhs() const;         // eq
  const Term& rhs() const;         // eq

  std::size_t hash() const;
  friend bool operator==(const Formula& a, const Formula& b);
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

enum class TypeKind : std::uint8_t { Names, Booleans, Product, Cipher, Unknown };

/// τ ::= N | B | τ1 × τ2 | C(τ), plus inference unknowns.
class Type {
 public:
  Type() = default;
  static Type names();
  static Type booleans();
  static Type product(Type a, Type b);
  static Type cipher(Type payload);
  static Type unknown(std::uint32_t id);

  bool empty() const { return node_ == nullptr; }
  TypeKind kind() const;
  const Type& first() const;
  const Type& second() const;
  const Type& payload() const;
  std::uint32_t unknown_id() const;

  friend bool operator==(const Type& a, const Type& b);
  friend std::ostream& operator<<(std::ostream& os, const Type& t);

 private:
  struct Node;
  explicit Type(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

class TypeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using TypeEnv = std::map<Variable, Type>;

std::set<Variable> free_vars(const Term& t);
std::set<Variable> free_vars(const Formula& f);
std::set<Name> names_of(const Term& t);
std::set<Name> names_of(const Formula& f);
void collect_names(const Term& t, std::set<Name>& out);

/// t{s/x}
Term substitute(const Term& t, const Variable& x, const Term& s);
Formula substitute(const Formula& f, const Variable& x, const Term& s);
/// t{s/a}: syntactic replacement of a name.
Term substitute_name(const Term& t, const Name& a, const Term& s);

/// Principal type of `t`. Variables missing from `env` get fresh unknowns;
/// unknowns that remain unconstrained stay symbolic in the result.
Type infer_type(const Term& t, const TypeEnv& env = {});
Type infer_type(const Formula& f, const TypeEnv& env = {});

/// Maximal constructor depth. Destructors do not add depth: proj_i is
/// transparent and dec takes the max of its arguments.
std::size_t mcd(const Term& t);
std::size_t mcd(const Formula& f);
/// Maximal destructor depth.
std::size_t mdd(const Term& t);
/// Decryption skeleton: strips every encryption layer, keeps pairs.
Skeleton ds(const Message& m);

/// Smallest `hint<i>` (i = 1, 2, ...) that is not in `avoid`.
Name fresh_name(const std::set<Name>& avoid, std::string_view hint);

std::string to_string(const Term& t);
std::string to_string(const Formula& f);
std::string to_string(const Type& t);
inline std::ostream& operator<<(std::ostream& os, const Term& t) { return os << to_string(t); }
inline std::ostream& operator<<(std::ostream& os, const Formula& f) { return os << to_string(f); }

struct TermHash {
  std::size_t operator()(const Term& t) const noexcept { return t.hash(); }
};

// ---------------------------------------------------------------------------

struct Term::Node {
  TermKind kind;
  Name name;
  Variable var;
  Term lhs;
  Term rhs;
  std::size_t hash = 0;
  std::size_t size = 1;
  bool ground = true;
  bool message = true;
};

inline TermKind Term::kind() const { return node_->kind; }
inline const Name& Term::as_name() const { return node_->name; }
inline const Variable& Term::as_var() const { return node_->var; }
inline const Term& Term::first() const { return node_->lhs; }
inline const Term& Term::second() const { return node_->rhs; }
inline const Term& Term::payload() const { return node_->lhs; }
inline const Term& Term::key() const { return node_->rhs; }
inline const Term& Term::arg() const { return node_->lhs; }
inline bool Term::is_ground() const { return node_->ground; }
inline bool Term::is_message() const { return node_->message; }
inline std::size_t Term::hash() const { return node_->hash; }
inline std::size_t Term::size() const { return node_->size; }

struct Formula::Node {
  FormulaKind kind;
  Formula lhs;
  Formula rhs;
  Term t1;
  Term t2;
  std::size_t hash = 0;
};

inline FormulaKind Formula::kind() const { return node_->kind; }
inline const Formula& Formula::operand() const { return node_->lhs; }
inline const Formula& Formula::left() const { return node_->lhs; }
inline const Formula& Formula::right() const { return node_->rhs; }
inline const Term& Formula::lhs() const { return node_->t1; }
inline const Term& Formula::rhs() const { return node_->t2; }
inline std::size_t Formula::hash() const { return node_->hash; }

struct Type::Node {
  TypeKind kind;
  Type a;
  Type b;
  std::uint32_t id = 0;
};

inline TypeKind Type::kind() const { return node_->kind; }
inline const Type& Type::first() const { return node_->a; }
inline const Type& Type::second() const { return node_->b; }
inline const Type& Type::payload() const { return node_->a; }
inline std::uint32_t Type::unknown_id() const { return node_->id; }

}  // namespace spi

template <>
struct std::hash<spi::Term> {
  std::size_t operator()(const spi::Term& t) const noexcept { return t.hash(); }
};

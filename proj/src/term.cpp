#include "spi/term.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <vector>

namespace spi {
namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t spelling_hash(const std::string& s) { return std::hash<std::string>{}(s); }

}  // namespace

// --- Term ------------------------------------------------------------------

Term Term::name(Name n) {
  auto node = std::make_shared<Node>();
  node->kind = TermKind::Name;
  node->hash = mix(1, spelling_hash(n.str()));
  node->name = n;
  return Term(std::move(node));
}

Term Term::var(Variable x) {
  auto node = std::make_shared<Node>();
  node->kind = TermKind::Var;
  node->hash = mix(2, spelling_hash(x.str()));
  node->var = x;
  node->ground = false;
  node->message = false;
  return Term(std::move(node));
}

namespace {

template <class Node, class T>
std::shared_ptr<Node> binary(TermKind kind, T lhs, T rhs) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->hash = mix(mix(static_cast<std::size_t>(kind) + 11, lhs.hash()), rhs.hash());
  node->size = 1 + lhs.size() + rhs.size();
  node->ground = lhs.is_ground() && rhs.is_ground();
  node->lhs = std::move(lhs);
  node->rhs = std::move(rhs);
  return node;
}

}  // namespace

Term Term::pair(Term first, Term second) {
  bool msg = first.is_message() && second.is_message();
  auto node = binary<Node>(TermKind::Pair, std::move(first), std::move(second));
  node->message = msg;
  return Term(std::move(node));
}

Term Term::enc(Term payload, Term key) {
  bool msg = payload.is_message() && key.is_name();
  auto node = binary<Node>(TermKind::Enc, std::move(payload), std::move(key));
  node->message = msg;
  return Term(std::move(node));
}

Term Term::dec(Term cipher, Term key) {
  auto node = binary<Node>(TermKind::Dec, std::move(cipher), std::move(key));
  node->message = false;
  return Term(std::move(node));
}

Term Term::proj1(Term arg) {
  auto node = std::make_shared<Node>();
  node->kind = TermKind::Proj1;
  node->hash = mix(21, arg.hash());
  node->size = 1 + arg.size();
  node->ground = arg.is_ground();
  node->message = false;
  node->lhs = std::move(arg);
  return Term(std::move(node));
}

Term Term::proj2(Term arg) {
  auto node = std::make_shared<Node>();
  node->kind = TermKind::Proj2;
  node->hash = mix(22, arg.hash());
  node->size = 1 + arg.size();
  node->ground = arg.is_ground();
  node->message = false;
  node->lhs = std::move(arg);
  return Term(std::move(node));
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.hash() != b.hash() || a.kind() != b.kind() || a.size() != b.size()) return false;
  switch (a.kind()) {
    case TermKind::Name: return a.as_name() == b.as_name();
    case TermKind::Var: return a.as_var() == b.as_var();
    case TermKind::Proj1:
    case TermKind::Proj2: return a.arg() == b.arg();
    default: return a.first() == b.first() && a.second() == b.second();
  }
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (!a.node_) return std::strong_ordering::less;
  if (!b.node_) return std::strong_ordering::greater;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  switch (a.kind()) {
    case TermKind::Name: return a.as_name() <=> b.as_name();
    case TermKind::Var: return a.as_var() <=> b.as_var();
    case TermKind::Proj1:
    case TermKind::Proj2: return a.arg() <=> b.arg();
    default:
      if (auto c = a.first() <=> b.first(); c != 0) return c;
      return a.second() <=> b.second();
  }
}

// --- Formula ---------------------------------------------------------------

Formula Formula::tru() {
  static const Formula t = [] {
    auto node = std::make_shared<Node>();
    node->kind = FormulaKind::True;
    node->hash = 31;
    return Formula(std::move(node));
  }();
  return t;
}

Formula Formula::negate(Formula f) {
  auto node = std::make_shared<Node>();
  node->kind = FormulaKind::Not;
  node->hash = mix(32, f.hash());
  node->lhs = std::move(f);
  return Formula(std::move(node));
}

Formula Formula::conj(Formula a, Formula b) {
  auto node = std::make_shared<Node>();
  node->kind = FormulaKind::And;
  node->hash = mix(mix(33, a.hash()), b.hash());
  node->lhs = std::move(a);
  node->rhs = std::move(b);
  return Formula(std::move(node));
}

Formula Formula::eq(Term lhs, Term rhs) {
  auto node = std::make_shared<Node>();
  node->kind = FormulaKind::Eq;
  node->hash = mix(mix(34, lhs.hash()), rhs.hash());
  node->t1 = std::move(lhs);
  node->t2 = std::move(rhs);
  return Formula(std::move(node));
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.hash() != b.hash() || a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case FormulaKind::True: return true;
    case FormulaKind::Not: return a.operand() == b.operand();
    case FormulaKind::And: return a.left() == b.left() && a.right() == b.right();
    case FormulaKind::Eq: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
  return false;
}

std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (!a.node_) return std::strong_ordering::less;
  if (!b.node_) return std::strong_ordering::greater;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  switch (a.kind()) {
    case FormulaKind::True: return std::strong_ordering::equal;
    case FormulaKind::Not: return a.operand() <=> b.operand();
    case FormulaKind::And:
      if (auto c = a.left() <=> b.left(); c != 0) return c;
      return a.right() <=> b.right();
    case FormulaKind::Eq:
      if (auto c = a.lhs() <=> b.lhs(); c != 0) return c;
      return a.rhs() <=> b.rhs();
  }
  return std::strong_ordering::equal;
}

// --- Type ------------------------------------------------------------------

Type Type::names() {
  static const Type t = [] {
    auto node = std::make_shared<Node>();
    node->kind = TypeKind::Names;
    return Type(std::move(node));
  }();
  return t;
}

Type Type::booleans() {
  static const Type t = [] {
    auto node = std::make_shared<Node>();
    node->kind = TypeKind::Booleans;
    return Type(std::move(node));
  }();
  return t;
}

Type Type::product(Type a, Type b) {
  auto node = std::make_shared<Node>();
  node->kind = TypeKind::Product;
  node->a = std::move(a);
  node->b = std::move(b);
  return Type(std::move(node));
}

Type Type::cipher(Type payload) {
  auto node = std::make_shared<Node>();
  node->kind = TypeKind::Cipher;
  node->a = std::move(payload);
  return Type(std::move(node));
}

Type Type::unknown(std::uint32_t id) {
  auto node = std::make_shared<Node>();
  node->kind = TypeKind::Unknown;
  node->id = id;
  return Type(std::move(node));
}

bool operator==(const Type& a, const Type& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TypeKind::Names:
    case TypeKind::Booleans: return true;
    case TypeKind::Product: return a.first() == b.first() && a.second() == b.second();
    case TypeKind::Cipher: return a.payload() == b.payload();
    case TypeKind::Unknown: return a.unknown_id() == b.unknown_id();
  }
  return false;
}

std::ostream& operator<<(std::ostream& os, const Type& t) { return os << to_string(t); }

// --- free variables, names, substitution -----------------------------------

namespace {

void collect_vars(const Term& t, std::set<Variable>& out) {
  if (t.is_ground()) return;
  switch (t.kind()) {
    case TermKind::Name: return;
    case TermKind::Var: out.insert(t.as_var()); return;
    case TermKind::Proj1:
    case TermKind::Proj2: collect_vars(t.arg(), out); return;
    default:
      collect_vars(t.first(), out);
      collect_vars(t.second(), out);
  }
}

void collect_vars(const Formula& f, std::set<Variable>& out) {
  switch (f.kind()) {
    case FormulaKind::True: return;
    case FormulaKind::Not: collect_vars(f.operand(), out); return;
    case FormulaKind::And:
      collect_vars(f.left(), out);
      collect_vars(f.right(), out);
      return;
    case FormulaKind::Eq:
      collect_vars(f.lhs(), out);
      collect_vars(f.rhs(), out);
      return;
  }
}

void collect_formula_names(const Formula& f, std::set<Name>& out) {
  switch (f.kind()) {
    case FormulaKind::True: return;
    case FormulaKind::Not: collect_formula_names(f.operand(), out); return;
    case FormulaKind::And:
      collect_formula_names(f.left(), out);
      collect_formula_names(f.right(), out);
      return;
    case FormulaKind::Eq:
      collect_names(f.lhs(), out);
      collect_names(f.rhs(), out);
      return;
  }
}

// Rebuilds `t` bottom-up with `leaf` applied to every name/variable node.
template <class Leaf>
Term rebuild(const Term& t, const Leaf& leaf) {
  switch (t.kind()) {
    case TermKind::Name:
    case TermKind::Var: return leaf(t);
    case TermKind::Pair: {
      Term a = rebuild(t.first(), leaf), b = rebuild(t.second(), leaf);
      if (a == t.first() && b == t.second()) return t;
      return Term::pair(std::move(a), std::move(b));
    }
    case TermKind::Enc: {
      Term a = rebuild(t.payload(), leaf), b = rebuild(t.key(), leaf);
      if (a == t.payload() && b == t.key()) return t;
      return Term::enc(std::move(a), std::move(b));
    }
    case TermKind::Dec: {
      Term a = rebuild(t.payload(), leaf), b = rebuild(t.key(), leaf);
      if (a == t.payload() && b == t.key()) return t;
      return Term::dec(std::move(a), std::move(b));
    }
    case TermKind::Proj1: {
      Term a = rebuild(t.arg(), leaf);
      return a == t.arg() ? t : Term::proj1(std::move(a));
    }
    case TermKind::Proj2: {
      Term a = rebuild(t.arg(), leaf);
      return a == t.arg() ? t : Term::proj2(std::move(a));
    }
  }
  return t;
}

}  // namespace

std::set<Variable> free_vars(const Term& t) {
  std::set<Variable> out;
  collect_vars(t, out);
  return out;
}

std::set<Variable> free_vars(const Formula& f) {
  std::set<Variable> out;
  collect_vars(f, out);
  return out;
}

void collect_names(const Term& t, std::set<Name>& out) {
  switch (t.kind()) {
    case TermKind::Name: out.insert(t.as_name()); return;
    case TermKind::Var: return;
    case TermKind::Proj1:
    case TermKind::Proj2: collect_names(t.arg(), out); return;
    default:
      collect_names(t.first(), out);
      collect_names(t.second(), out);
  }
}

std::set<Name> names_of(const Term& t) {
  std::set<Name> out;
  collect_names(t, out);
  return out;
}

std::set<Name> names_of(const Formula& f) {
  std::set<Name> out;
  collect_formula_names(f, out);
  return out;
}

Term substitute(const Term& t, const Variable& x, const Term& s) {
  if (t.is_ground()) return t;
  return rebuild(t, [&](const Term& leaf) { return leaf.is_var() && leaf.as_var() == x ? s : leaf; });
}

Formula substitute(const Formula& f, const Variable& x, const Term& s) {
  switch (f.kind()) {
    case FormulaKind::True: return f;
    case FormulaKind::Not: return Formula::negate(substitute(f.operand(), x, s));
    case FormulaKind::And: return Formula::conj(substitute(f.left(), x, s), substitute(f.right(), x, s));
    case FormulaKind::Eq: return Formula::eq(substitute(f.lhs(), x, s), substitute(f.rhs(), x, s));
  }
  return f;
}

Term substitute_name(const Term& t, const Name& a, const Term& s) {
  return rebuild(t, [&](const Term& leaf) { return leaf.is_name() && leaf.as_name() == a ? s : leaf; });
}

// --- typing ----------------------------------------------------------------

namespace {

class Unifier {
 public:
  Type fresh() {
    bindings_.emplace_back();
    return Type::unknown(static_cast<std::uint32_t>(bindings_.size() - 1));
  }

  Type resolve(const Type& t) const {
    switch (t.kind()) {
      case TypeKind::Unknown: {
        const Type& bound = bindings_[t.unknown_id()];
        return !bound.empty() ? resolve(bound) : t;
      }
      case TypeKind::Product: return Type::product(resolve(t.first()), resolve(t.second()));
      case TypeKind::Cipher: return Type::cipher(resolve(t.payload()));
      default: return t;
    }
  }

  void unify(const Type& a0, const Type& b0) {
    Type a = shallow(a0), b = shallow(b0);
    if (a.kind() == TypeKind::Unknown && b.kind() == TypeKind::Unknown &&
        a.unknown_id() == b.unknown_id())
      return;
    if (a.kind() == TypeKind::Unknown) return bind(a.unknown_id(), b);
    if (b.kind() == TypeKind::Unknown) return bind(b.unknown_id(), a);
    if (a.kind() != b.kind())
      throw TypeError("cannot unify " + to_string(resolve(a)) + " with " + to_string(resolve(b)));
    switch (a.kind()) {
      case TypeKind::Product:
        unify(a.first(), b.first());
        unify(a.second(), b.second());
        return;
      case TypeKind::Cipher: unify(a.payload(), b.payload()); return;
      default: return;
    }
  }

 private:
  Type shallow(const Type& t) const {
    Type cur = t;
    while (cur.kind() == TypeKind::Unknown && !bindings_[cur.unknown_id()].empty())
      cur = bindings_[cur.unknown_id()];
    return cur;
  }

  bool occurs(std::uint32_t id, const Type& t) const {
    Type s = shallow(t);
    switch (s.kind()) {
      case TypeKind::Unknown: return s.unknown_id() == id;
      case TypeKind::Product: return occurs(id, s.first()) || occurs(id, s.second());
      case TypeKind::Cipher: return occurs(id, s.payload());
      default: return false;
    }
  }

  void bind(std::uint32_t id, const Type& t) {
    if (occurs(id, t)) throw TypeError("recursive type constraint");
    bindings_[id] = t;
  }

  std::vector<Type> bindings_;
};

struct Inference {
  Unifier unifier;
  std::map<Variable, Type> env;

  Type var_type(const Variable& x) {
    auto it = env.find(x);
    if (it != env.end()) return it->second;
    Type t = unifier.fresh();
    env.emplace(x, t);
    return t;
  }

  Type term(const Term& t) {
    switch (t.kind()) {
      case TermKind::Name: return Type::names();
      case TermKind::Var: return var_type(t.as_var());
      case TermKind::Pair: return Type::product(term(t.first()), term(t.second()));
      case TermKind::Enc: {
        Type payload = term(t.payload());
        unifier.unify(term(t.key()), Type::names());
        return Type::cipher(payload);
      }
      case TermKind::Dec: {
        Type result = unifier.fresh();
        unifier.unify(term(t.payload()), Type::cipher(result));
        unifier.unify(term(t.key()), Type::names());
        return result;
      }
      case TermKind::Proj1:
      case TermKind::Proj2: {
        Type a = unifier.fresh(), b = unifier.fresh();
        unifier.unify(term(t.arg()), Type::product(a, b));
        return t.kind() == TermKind::Proj1 ? a : b;
      }
    }
    throw TypeError("unknown term");
  }

  Type formula(const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::True: break;
      case FormulaKind::Not: unifier.unify(formula(f.operand()), Type::booleans()); break;
      case FormulaKind::And:
        unifier.unify(formula(f.left()), Type::booleans());
        unifier.unify(formula(f.right()), Type::booleans());
        break;
      case FormulaKind::Eq:
        term(f.lhs());
        term(f.rhs());
        break;
    }
    return Type::booleans();
  }
};

}  // namespace

Type infer_type(const Term& t, const TypeEnv& env) {
  Inference inf;
  inf.env = env;
  return inf.unifier.resolve(inf.term(t));
}

Type infer_type(const Formula& f, const TypeEnv& env) {
  Inference inf;
  inf.env = env;
  return inf.unifier.resolve(inf.formula(f));
}

// --- depth measures ---------------------------------------------------------

std::size_t mcd(const Term& t) {
  switch (t.kind()) {
    case TermKind::Name:
    case TermKind::Var: return 0;
    case TermKind::Pair: return std::max(mcd(t.first()), mcd(t.second())) + 1;
    case TermKind::Enc: return mcd(t.payload()) + 1;
    case TermKind::Dec: return std::max(mcd(t.payload()), mcd(t.key()));
    case TermKind::Proj1:
    case TermKind::Proj2: return mcd(t.arg());
  }
  return 0;
}

std::size_t mcd(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::True: return 0;
    case FormulaKind::Not: return mcd(f.operand());
    case FormulaKind::And: return std::max(mcd(f.left()), mcd(f.right()));
    case FormulaKind::Eq: return std::max(mcd(f.lhs()), mcd(f.rhs()));
  }
  return 0;
}

std::size_t mdd(const Term& t) {
  switch (t.kind()) {
    case TermKind::Name:
    case TermKind::Var: return 0;
    case TermKind::Pair:
    case TermKind::Enc: return std::max(mdd(t.first()), mdd(t.second()));
    case TermKind::Dec: return std::max(mdd(t.payload()), mdd(t.key())) + 1;
    case TermKind::Proj1:
    case TermKind::Proj2: return mdd(t.arg()) + 1;
  }
  return 0;
}

Skeleton ds(const Message& m) {
  switch (m.kind()) {
    case TermKind::Pair: return Term::pair(ds(m.first()), ds(m.second()));
    case TermKind::Enc: return ds(m.payload());
    default: return m;
  }
}

Name fresh_name(const std::set<Name>& avoid, std::string_view hint) {
  std::string base(hint);
  for (std::size_t i = 1;; ++i) {
    Name candidate(base + std::to_string(i));
    if (!avoid.contains(candidate)) return candidate;
  }
}

// --- printing ----------------------------------------------------------------

namespace {

void print(std::ostream& os, const Term& t) {
  switch (t.kind()) {
    case TermKind::Name: os << t.as_name(); return;
    case TermKind::Var: os << t.as_var(); return;
    case TermKind::Pair:
      os << '(';
      print(os, t.first());
      os << ", ";
      print(os, t.second());
      os << ')';
      return;
    case TermKind::Enc:
    case TermKind::Dec:
      os << (t.kind() == TermKind::Enc ? "enc(" : "dec(");
      print(os, t.payload());
      os << ", ";
      print(os, t.key());
      os << ')';
      return;
    case TermKind::Proj1:
    case TermKind::Proj2:
      os << (t.kind() == TermKind::Proj1 ? "fst(" : "snd(");
      print(os, t.arg());
      os << ')';
      return;
  }
}

// Precedence: 0 = and-level, 1 = operand of `and`/`not`.
void print(std::ostream& os, const Formula& f, int level) {
  switch (f.kind()) {
    case FormulaKind::True: os << "true"; return;
    case FormulaKind::Not:
      os << "not ";
      print(os, f.operand(), 1);
      return;
    case FormulaKind::And:
      if (level > 0) os << '(';
      print(os, f.left(), 1);
      os << " and ";
      print(os, f.right(), 0);
      if (level > 0) os << ')';
      return;
    case FormulaKind::Eq:
      os << '[';
      print(os, f.lhs());
      os << " = ";
      print(os, f.rhs());
      os << ']';
      return;
  }
}

}  // namespace

std::string to_string(const Term& t) {
  std::ostringstream os;
  print(os, t);
  return os.str();
}

std::string to_string(const Formula& f) {
  std::ostringstream os;
  print(os, f, 0);
  return os.str();
}

std::string to_string(const Type& t) {
  switch (t.kind()) {
    case TypeKind::Names: return "N";
    case TypeKind::Booleans: return "B";
    case TypeKind::Product: return "(" + to_string(t.first()) + " * " + to_string(t.second()) + ")";
    case TypeKind::Cipher: return "C(" + to_string(t.payload()) + ")";
    case TypeKind::Unknown: return "?" + std::to_string(t.unknown_id());
  }
  return "?";
}

}  // namespace spi

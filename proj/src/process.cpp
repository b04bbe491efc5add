#include "spi/process.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <vector>

namespace spi {
namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t spelling_hash(const std::string& s) { return std::hash<std::string>{}(s); }

}  // namespace

// --- construction -------------------------------------------------------------

namespace {

struct Builder {
  std::shared_ptr<Process::Node> node = std::make_shared<Process::Node>();
  explicit Builder(ProcKind kind) {
    node->kind = kind;
    node->hash = static_cast<std::size_t>(kind) * 0x51ed27ULL + 7;
  }
  void add(std::size_t h) { node->hash = mix(node->hash, h); }
};

}  // namespace

struct ProcessBuilder {
  static Process make(std::shared_ptr<Process::Node> n) { return Process(std::move(n)); }
};

namespace {

}  // namespace

Process Process::nil() {
  static const Process instance = [] {
    Builder b(ProcKind::Nil);
    return Process(std::move(b.node));
  }();
  return instance;
}

Process Process::input(Term chan, Variable x, Process body) {
  Builder b(ProcKind::Input);
  b.add(chan.hash());
  b.add(spelling_hash(x.str()));
  b.add(body.hash());
  b.node->prefixes = body.prefix_count() + 1;
  b.node->bang = body.has_bang();
  b.node->chan = std::move(chan);
  b.node->var = x;
  b.node->lhs = std::move(body);
  return Process(std::move(b.node));
}

Process Process::output(Term chan, Term payload, Process body) {
  Builder b(ProcKind::Output);
  b.add(chan.hash());
  b.add(payload.hash());
  b.add(body.hash());
  b.node->prefixes = body.prefix_count() + 1;
  b.node->bang = body.has_bang();
  b.node->chan = std::move(chan);
  b.node->term = std::move(payload);
  b.node->lhs = std::move(body);
  return Process(std::move(b.node));
}

namespace {

Process binary(ProcKind kind, Process a, Process c, auto make) {
  Builder b(kind);
  b.add(a.hash());
  b.add(c.hash());
  b.node->prefixes = a.prefix_count() + c.prefix_count();
  b.node->bang = a.has_bang() || c.has_bang();
  b.node->lhs = std::move(a);
  b.node->rhs = std::move(c);
  return make(std::move(b.node));
}

}  // namespace

Process Process::par(Process a, Process b) {
  return binary(ProcKind::Par, std::move(a), std::move(b),
                [](std::shared_ptr<Node> n) { return Process(std::move(n)); });
}

Process Process::sum(Process a, Process b) {
  return binary(ProcKind::Sum, std::move(a), std::move(b),
                [](std::shared_ptr<Node> n) { return Process(std::move(n)); });
}

Process Process::restrict(Name n, Process body) {
  Builder b(ProcKind::Restrict);
  b.add(spelling_hash(n.str()));
  b.add(body.hash());
  b.node->prefixes = body.prefix_count();
  b.node->bang = body.has_bang();
  b.node->name = n;
  b.node->lhs = std::move(body);
  return Process(std::move(b.node));
}

Process Process::bang(Process body) {
  Builder b(ProcKind::Bang);
  b.add(body.hash());
  b.node->prefixes = body.prefix_count();
  b.node->bang = true;
  b.node->lhs = std::move(body);
  return Process(std::move(b.node));
}

Process Process::guard(Formula f, Process body) {
  Builder b(ProcKind::Guard);
  b.add(f.hash());
  b.add(body.hash());
  b.node->prefixes = body.prefix_count();
  b.node->bang = body.has_bang();
  b.node->formula = std::move(f);
  b.node->lhs = std::move(body);
  return Process(std::move(b.node));
}

Process Process::let_in(Variable x, Term t, Process body) {
  Builder b(ProcKind::Let);
  b.add(spelling_hash(x.str()));
  b.add(t.hash());
  b.add(body.hash());
  b.node->prefixes = body.prefix_count();
  b.node->bang = body.has_bang();
  b.node->var = x;
  b.node->term = std::move(t);
  b.node->lhs = std::move(body);
  return Process(std::move(b.node));
}

bool operator==(const Process& a, const Process& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  return a.hash() == b.hash() && (a <=> b) == 0;
}

std::strong_ordering operator<=>(const Process& a, const Process& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (!a.node_) return std::strong_ordering::less;
  if (!b.node_) return std::strong_ordering::greater;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  switch (a.kind()) {
    case ProcKind::Nil: return std::strong_ordering::equal;
    case ProcKind::Input:
      if (auto c = a.chan() <=> b.chan(); c != 0) return c;
      if (auto c = a.var() <=> b.var(); c != 0) return c;
      return a.body() <=> b.body();
    case ProcKind::Output:
      if (auto c = a.chan() <=> b.chan(); c != 0) return c;
      if (auto c = a.payload() <=> b.payload(); c != 0) return c;
      return a.body() <=> b.body();
    case ProcKind::Par:
    case ProcKind::Sum:
      if (auto c = a.left() <=> b.left(); c != 0) return c;
      return a.right() <=> b.right();
    case ProcKind::Restrict:
      if (auto c = a.name() <=> b.name(); c != 0) return c;
      return a.body() <=> b.body();
    case ProcKind::Bang: return a.body() <=> b.body();
    case ProcKind::Guard:
      if (auto c = a.formula() <=> b.formula(); c != 0) return c;
      return a.body() <=> b.body();
    case ProcKind::Let:
      if (auto c = a.var() <=> b.var(); c != 0) return c;
      if (auto c = a.term() <=> b.term(); c != 0) return c;
      return a.body() <=> b.body();
  }
  return std::strong_ordering::equal;
}

// --- free names and variables ---------------------------------------------------

void collect_free_names(const Process& p, std::set<Name>& out) {
  switch (p.kind()) {
    case ProcKind::Nil: return;
    case ProcKind::Input:
      collect_names(p.chan(), out);
      collect_free_names(p.body(), out);
      return;
    case ProcKind::Output:
      collect_names(p.chan(), out);
      collect_names(p.payload(), out);
      collect_free_names(p.body(), out);
      return;
    case ProcKind::Par:
    case ProcKind::Sum:
      collect_free_names(p.left(), out);
      collect_free_names(p.right(), out);
      return;
    case ProcKind::Restrict: {
      std::set<Name> inner;
      collect_free_names(p.body(), inner);
      inner.erase(p.name());
      out.insert(inner.begin(), inner.end());
      return;
    }
    case ProcKind::Bang: collect_free_names(p.body(), out); return;
    case ProcKind::Guard:
      for (const auto& n : names_of(p.formula())) out.insert(n);
      collect_free_names(p.body(), out);
      return;
    case ProcKind::Let:
      collect_names(p.term(), out);
      collect_free_names(p.body(), out);
      return;
  }
}

std::set<Name> free_names(const Process& p) {
  std::set<Name> out;
  collect_free_names(p, out);
  return out;
}

namespace {

void collect_free_vars(const Process& p, std::set<Variable>& out) {
  auto add_term = [&](const Term& t) {
    if (!t.is_ground())
      for (const auto& v : free_vars(t)) out.insert(v);
  };
  auto add_bound_body = [&](const Variable& x, const Process& body) {
    std::set<Variable> inner;
    collect_free_vars(body, inner);
    inner.erase(x);
    out.insert(inner.begin(), inner.end());
  };
  switch (p.kind()) {
    case ProcKind::Nil: return;
    case ProcKind::Input:
      add_term(p.chan());
      add_bound_body(p.var(), p.body());
      return;
    case ProcKind::Output:
      add_term(p.chan());
      add_term(p.payload());
      collect_free_vars(p.body(), out);
      return;
    case ProcKind::Par:
    case ProcKind::Sum:
      collect_free_vars(p.left(), out);
      collect_free_vars(p.right(), out);
      return;
    case ProcKind::Restrict:
    case ProcKind::Bang: collect_free_vars(p.body(), out); return;
    case ProcKind::Guard:
      for (const auto& v : free_vars(p.formula())) out.insert(v);
      collect_free_vars(p.body(), out);
      return;
    case ProcKind::Let:
      add_term(p.term());
      add_bound_body(p.var(), p.body());
      return;
  }
}

void collect_all_names(const Process& p, std::set<Name>& out) {
  switch (p.kind()) {
    case ProcKind::Nil: return;
    case ProcKind::Input:
      collect_names(p.chan(), out);
      break;
    case ProcKind::Output:
      collect_names(p.chan(), out);
      collect_names(p.payload(), out);
      break;
    case ProcKind::Par:
    case ProcKind::Sum:
      collect_all_names(p.left(), out);
      collect_all_names(p.right(), out);
      return;
    case ProcKind::Restrict: out.insert(p.name()); break;
    case ProcKind::Bang: break;
    case ProcKind::Guard:
      for (const auto& n : names_of(p.formula())) out.insert(n);
      break;
    case ProcKind::Let: collect_names(p.term(), out); break;
  }
  collect_all_names(p.body(), out);
}

}  // namespace

std::set<Variable> free_vars(const Process& p) {
  std::set<Variable> out;
  collect_free_vars(p, out);
  return out;
}

std::set<Name> all_names(const Process& p) {
  std::set<Name> out;
  collect_all_names(p, out);
  return out;
}

bool is_finite(const Process& p) { return !p.has_bang(); }

bool is_closed(const Process& p) { return free_vars(p).empty(); }

// --- substitution -----------------------------------------------------------------

namespace {

Variable fresh_variable(const std::set<Variable>& avoid, const std::string& hint) {
  for (std::size_t i = 1;; ++i) {
    Variable v(hint + std::to_string(i));
    if (!avoid.contains(v)) return v;
  }
}

void collect_all_vars(const Process& p, std::set<Variable>& out) {
  auto add = [&](const Term& t) {
    for (const auto& v : free_vars(t)) out.insert(v);
  };
  switch (p.kind()) {
    case ProcKind::Nil: return;
    case ProcKind::Input:
      add(p.chan());
      out.insert(p.var());
      break;
    case ProcKind::Output:
      add(p.chan());
      add(p.payload());
      break;
    case ProcKind::Par:
    case ProcKind::Sum:
      collect_all_vars(p.left(), out);
      collect_all_vars(p.right(), out);
      return;
    case ProcKind::Restrict:
    case ProcKind::Bang: break;
    case ProcKind::Guard:
      for (const auto& v : free_vars(p.formula())) out.insert(v);
      break;
    case ProcKind::Let:
      add(p.term());
      out.insert(p.var());
      break;
  }
  collect_all_vars(p.body(), out);
}

struct Substitution {
  const Variable& x;
  const Term& s;
  std::set<Variable> s_vars;
  std::set<Name> s_names;

  // Renames binder y in body when it would capture a variable of s.
  std::pair<Variable, Process> open_binder(const Variable& y, const Process& body) const {
    if (!s_vars.contains(y) || !free_vars(body).contains(x)) return {y, body};
    std::set<Variable> avoid = s_vars;
    collect_all_vars(body, avoid);
    avoid.insert(x);
    Variable fresh = fresh_variable(avoid, y.str());
    return {fresh, spi::substitute(body, y, Term::var(fresh))};
  }

  Process apply(const Process& p) const {
    switch (p.kind()) {
      case ProcKind::Nil: return p;
      case ProcKind::Input: {
        Term c = substitute(p.chan(), x, s);
        if (p.var() == x) return Process::input(std::move(c), p.var(), p.body());
        auto [y, body] = open_binder(p.var(), p.body());
        return Process::input(std::move(c), y, apply(body));
      }
      case ProcKind::Output:
        return Process::output(substitute(p.chan(), x, s), substitute(p.payload(), x, s), apply(p.body()));
      case ProcKind::Par: return Process::par(apply(p.left()), apply(p.right()));
      case ProcKind::Sum: return Process::sum(apply(p.left()), apply(p.right()));
      case ProcKind::Restrict: {
        if (s_names.contains(p.name()) && free_vars(p.body()).contains(x)) {
          std::set<Name> avoid = s_names;
          collect_all_names(p.body(), avoid);
          Name fresh = fresh_name(avoid, p.name().str());
          return Process::restrict(fresh, apply(rename_name(p.body(), p.name(), fresh)));
        }
        return Process::restrict(p.name(), apply(p.body()));
      }
      case ProcKind::Bang: return Process::bang(apply(p.body()));
      case ProcKind::Guard: return Process::guard(substitute(p.formula(), x, s), apply(p.body()));
      case ProcKind::Let: {
        Term t = substitute(p.term(), x, s);
        if (p.var() == x) return Process::let_in(p.var(), std::move(t), p.body());
        auto [y, body] = open_binder(p.var(), p.body());
        return Process::let_in(y, std::move(t), apply(body));
      }
    }
    return p;
  }
};

Formula rename_in_formula(const Formula& f, const Name& a, const Term& b) {
  switch (f.kind()) {
    case FormulaKind::True: return f;
    case FormulaKind::Not: return Formula::negate(rename_in_formula(f.operand(), a, b));
    case FormulaKind::And:
      return Formula::conj(rename_in_formula(f.left(), a, b), rename_in_formula(f.right(), a, b));
    case FormulaKind::Eq: return Formula::eq(substitute_name(f.lhs(), a, b), substitute_name(f.rhs(), a, b));
  }
  return f;
}

Process rename_rec(const Process& p, const Name& a, const Name& b, const Term& bt) {
  switch (p.kind()) {
    case ProcKind::Nil: return p;
    case ProcKind::Input:
      return Process::input(substitute_name(p.chan(), a, bt), p.var(), rename_rec(p.body(), a, b, bt));
    case ProcKind::Output:
      return Process::output(substitute_name(p.chan(), a, bt), substitute_name(p.payload(), a, bt),
                             rename_rec(p.body(), a, b, bt));
    case ProcKind::Par: return Process::par(rename_rec(p.left(), a, b, bt), rename_rec(p.right(), a, b, bt));
    case ProcKind::Sum: return Process::sum(rename_rec(p.left(), a, b, bt), rename_rec(p.right(), a, b, bt));
    case ProcKind::Restrict: {
      if (p.name() == a) return p;
      if (p.name() == b) {
        if (!free_names(p.body()).contains(a)) return p;
        std::set<Name> avoid = all_names(p.body());
        avoid.insert(a);
        avoid.insert(b);
        Name fresh = fresh_name(avoid, p.name().str());
        Process body = rename_rec(p.body(), p.name(), fresh, Term::name(fresh));
        return Process::restrict(fresh, rename_rec(body, a, b, bt));
      }
      return Process::restrict(p.name(), rename_rec(p.body(), a, b, bt));
    }
    case ProcKind::Bang: return Process::bang(rename_rec(p.body(), a, b, bt));
    case ProcKind::Guard:
      return Process::guard(rename_in_formula(p.formula(), a, bt), rename_rec(p.body(), a, b, bt));
    case ProcKind::Let:
      return Process::let_in(p.var(), substitute_name(p.term(), a, bt), rename_rec(p.body(), a, b, bt));
  }
  return p;
}

}  // namespace

Process substitute(const Process& p, const Variable& x, const Term& s) {
  if (!free_vars(p).contains(x)) return p;
  Substitution sub{x, s, free_vars(s), names_of(s)};
  return sub.apply(p);
}

Process rename_name(const Process& p, const Name& a, const Name& b) {
  if (a == b) return p;
  return rename_rec(p, a, b, Term::name(b));
}

// --- normal forms -------------------------------------------------------------------

namespace {

// Blocks with more binders than this are named in flattening order only.
constexpr std::size_t kMaxPermutedBinders = 6;

class Normalizer {
 public:
  Process group(const Process& p, std::size_t depth) {
    std::vector<Name> binders;
    std::vector<Process> comps;
    flatten(p, binders, comps);
    if (comps.empty()) return Process::nil();

    std::set<Name> used;
    for (const auto& c : comps) collect_free_names(c, used);
    std::erase_if(binders, [&](const Name& n) { return !used.contains(n); });

    const std::size_t k = binders.size();
    std::vector<Name> canon;
    for (std::size_t i = 0; i < k; ++i)
      canon.emplace_back("_n" + std::to_string(depth) + "_" + std::to_string(i));

    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    Process best;
    do {
      std::vector<Process> named;
      named.reserve(comps.size());
      for (const auto& c : comps) {
        Process r = c;
        for (std::size_t j = 0; j < k; ++j) r = rename_name(r, binders[j], canon[perm[j]]);
        named.push_back(component(r, depth));
      }
      std::sort(named.begin(), named.end());
      Process out = named.back();
      for (std::size_t i = named.size() - 1; i-- > 0;) out = Process::par(named[i], out);
      for (std::size_t i = k; i-- > 0;) out = Process::restrict(canon[i], out);
      if (best.empty() || out < best) best = out;
    } while (k <= kMaxPermutedBinders && std::next_permutation(perm.begin(), perm.end()));
    return best;
  }

 private:
  void flatten(const Process& p, std::vector<Name>& binders, std::vector<Process>& comps) {
    switch (p.kind()) {
      case ProcKind::Nil: return;
      case ProcKind::Par:
        flatten(p.left(), binders, comps);
        flatten(p.right(), binders, comps);
        return;
      case ProcKind::Restrict: {
        Name temp("_t" + std::to_string(temp_counter_++));
        binders.push_back(temp);
        flatten(rename_name(p.body(), p.name(), temp), binders, comps);
        return;
      }
      case ProcKind::Bang: throw ReplicationError();
      default: comps.push_back(p);
    }
  }

  Process component(const Process& c, std::size_t depth) {
    switch (c.kind()) {
      case ProcKind::Input: {
        Variable v("_x" + std::to_string(depth));
        Process body = c.var() == v ? c.body() : substitute(c.body(), c.var(), Term::var(v));
        return Process::input(c.chan(), v, group(body, depth + 1));
      }
      case ProcKind::Output: return Process::output(c.chan(), c.payload(), group(c.body(), depth + 1));
      case ProcKind::Sum: {
        std::vector<Process> summands;
        collect_summands(c, summands);
        for (auto& s : summands) s = group(s, depth + 1);
        std::sort(summands.begin(), summands.end());
        Process out = summands.back();
        for (std::size_t i = summands.size() - 1; i-- > 0;) out = Process::sum(summands[i], out);
        return out;
      }
      case ProcKind::Guard: return Process::guard(c.formula(), group(c.body(), depth + 1));
      case ProcKind::Let: {
        Variable v("_x" + std::to_string(depth));
        Process body = c.var() == v ? c.body() : substitute(c.body(), c.var(), Term::var(v));
        return Process::let_in(v, c.term(), group(body, depth + 1));
      }
      case ProcKind::Bang: throw ReplicationError();
      default: return c;
    }
  }

  static void collect_summands(const Process& p, std::vector<Process>& out) {
    if (p.kind() == ProcKind::Sum) {
      collect_summands(p.left(), out);
      collect_summands(p.right(), out);
    } else {
      out.push_back(p);
    }
  }

  std::size_t temp_counter_ = 0;
};

}  // namespace

Process normalize(const Process& p) {
  if (p.has_bang()) throw ReplicationError();
  for (const auto& n : free_names(p)) {
    const auto& s = n.str();
    if (s.starts_with("_n") || s.starts_with("_t"))
      throw std::logic_error("normalize: free name '" + s + "' clashes with canonical binder names");
  }
  Normalizer normalizer;
  return normalizer.group(p, 0);
}

// --- analysis depth ---------------------------------------------------------------

std::size_t analysis_depth(const Process& p) {
  switch (p.kind()) {
    case ProcKind::Nil: return 0;
    case ProcKind::Input:
    case ProcKind::Output:
    case ProcKind::Restrict: return analysis_depth(p.body());
    case ProcKind::Par: return analysis_depth(p.left()) + analysis_depth(p.right());
    case ProcKind::Sum: return std::max(analysis_depth(p.left()), analysis_depth(p.right()));
    case ProcKind::Guard: return std::max(analysis_depth(p.body()), mcd(p.formula()));
    case ProcKind::Let: {
      // Placeholder of the same constructor depth as the bound term.
      const Term pad = Term::name("_pad");
      Term placeholder = pad;
      for (std::size_t i = mcd(p.term()); i > 0; --i) placeholder = Term::enc(placeholder, pad);
      return analysis_depth(substitute(p.body(), p.var(), placeholder)) + mdd(p.term());
    }
    case ProcKind::Bang: throw ReplicationError();
  }
  return 0;
}

// --- printing -------------------------------------------------------------------------

namespace {

// Levels: 0 = sum, 1 = parallel, 2 = prefix.
void print(std::ostream& os, const Process& p, int level) {
  auto open = [&](int needed) {
    if (level > needed) os << '(';
  };
  auto close = [&](int needed) {
    if (level > needed) os << ')';
  };
  switch (p.kind()) {
    case ProcKind::Nil: os << '0'; return;
    case ProcKind::Input:
      os << p.chan() << '(' << p.var() << ").";
      print(os, p.body(), 2);
      return;
    case ProcKind::Output:
      os << p.chan() << '<' << p.payload() << ">.";
      print(os, p.body(), 2);
      return;
    case ProcKind::Sum:
      open(0);
      print(os, p.left(), 1);
      os << " + ";
      print(os, p.right(), 0);
      close(0);
      return;
    case ProcKind::Par:
      open(1);
      print(os, p.left(), 2);
      os << " | ";
      print(os, p.right(), 1);
      close(1);
      return;
    case ProcKind::Restrict:
      os << "new " << p.name() << '.';
      print(os, p.body(), 2);
      return;
    case ProcKind::Bang:
      os << '!';
      print(os, p.body(), 2);
      return;
    case ProcKind::Guard:
      if (p.formula().kind() == FormulaKind::Eq)
        os << p.formula() << ' ';
      else
        os << "if " << p.formula() << " then ";
      print(os, p.body(), 2);
      return;
    case ProcKind::Let:
      os << "let " << p.var() << " = " << p.term() << " in ";
      print(os, p.body(), 2);
      return;
  }
}

}  // namespace

std::string to_string(const Process& p) {
  std::ostringstream os;
  print(os, p, 0);
  return os.str();
}

}  // namespace spi

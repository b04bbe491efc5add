#include "spi/frontend.hpp"

namespace spi {
namespace {

bool has_destructor(const Term& t) {
  switch (t.kind()) {
    case TermKind::Name:
    case TermKind::Var: return false;
    case TermKind::Pair:
    case TermKind::Enc: return has_destructor(t.first()) || has_destructor(t.second());
    default: return true;
  }
}

struct Hoisting {
  std::set<Variable> avoid;
  std::vector<std::pair<Variable, Term>> lets;

  Term hoist(const Term& t) {
    if (!has_destructor(t)) return t;
    for (std::size_t i = 1;; ++i) {
      Variable v("x" + std::to_string(i));
      if (avoid.contains(v)) continue;
      avoid.insert(v);
      lets.emplace_back(v, t);
      return Term::var(v);
    }
  }

  Formula hoist(const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::True: return f;
      case FormulaKind::Not: return Formula::negate(hoist(f.operand()));
      case FormulaKind::And: {
        Formula a = hoist(f.left());
        return Formula::conj(std::move(a), hoist(f.right()));
      }
      case FormulaKind::Eq: {
        Term a = hoist(f.lhs());
        return Formula::eq(std::move(a), hoist(f.rhs()));
      }
    }
    return f;
  }

  Process wrap(Process p) const {
    for (auto it = lets.rbegin(); it != lets.rend(); ++it) p = Process::let_in(it->first, it->second, std::move(p));
    return p;
  }
};

void add_vars(std::set<Variable>& out, const Term& t) {
  for (const auto& v : free_vars(t)) out.insert(v);
}

}  // namespace

Process desugar(const Process& p) {
  switch (p.kind()) {
    case ProcKind::Nil: return p;
    case ProcKind::Input: return Process::input(p.chan(), p.var(), desugar(p.body()));
    case ProcKind::Output: {
      Process body = desugar(p.body());
      Hoisting h{free_vars(body), {}};
      add_vars(h.avoid, p.payload());
      add_vars(h.avoid, p.chan());
      Term payload = h.hoist(p.payload());
      return h.wrap(Process::output(p.chan(), std::move(payload), std::move(body)));
    }
    case ProcKind::Par: return Process::par(desugar(p.left()), desugar(p.right()));
    case ProcKind::Sum: return Process::sum(desugar(p.left()), desugar(p.right()));
    case ProcKind::Restrict: return Process::restrict(p.name(), desugar(p.body()));
    case ProcKind::Bang: return Process::bang(desugar(p.body()));
    case ProcKind::Guard: {
      Process body = desugar(p.body());
      Hoisting h{free_vars(body), {}};
      for (const auto& v : free_vars(p.formula())) h.avoid.insert(v);
      Formula f = h.hoist(p.formula());
      return h.wrap(Process::guard(std::move(f), std::move(body)));
    }
    case ProcKind::Let: return Process::let_in(p.var(), p.term(), desugar(p.body()));
  }
  return p;
}

}  // namespace spi

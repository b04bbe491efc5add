#pragma once

// Pruning correspondence: an abstraction instantiated with M and with its
// d-pruned counterpart N has the same moves, up to undoing the pruning.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "generators.hpp"
#include "spi/bisim.hpp"
#include "spi/lts.hpp"

namespace spi::pruning {

using NameMap = std::map<Name, Term>;

inline Term subst(const Term& t, const NameMap& s) {
  Term out = t;
  for (const auto& [n, m] : s) out = substitute_name(out, n, m);
  return out;
}

inline Formula subst(const Formula& f, const NameMap& s) {
  switch (f.kind()) {
    case FormulaKind::True: return f;
    case FormulaKind::Not: return Formula::negate(subst(f.operand(), s));
    case FormulaKind::And: return Formula::conj(subst(f.left(), s), subst(f.right(), s));
    case FormulaKind::Eq: return Formula::eq(subst(f.lhs(), s), subst(f.rhs(), s));
  }
  return f;
}

inline Process subst(const Process& p, const NameMap& s) {
  switch (p.kind()) {
    case ProcKind::Nil: return p;
    case ProcKind::Input: return Process::input(subst(p.chan(), s), p.var(), subst(p.body(), s));
    case ProcKind::Output: return Process::output(subst(p.chan(), s), subst(p.payload(), s), subst(p.body(), s));
    case ProcKind::Par: return Process::par(subst(p.left(), s), subst(p.right(), s));
    case ProcKind::Sum: return Process::sum(subst(p.left(), s), subst(p.right(), s));
    case ProcKind::Restrict: return Process::restrict(p.name(), subst(p.body(), s));
    case ProcKind::Bang: return Process::bang(subst(p.body(), s));
    case ProcKind::Guard: return Process::guard(subst(p.formula(), s), subst(p.body(), s));
    case ProcKind::Let: return Process::let_in(p.var(), subst(p.term(), s), subst(p.body(), s));
  }
  return p;
}

/// The substitution taking the pruned message back to the original one.
inline void unprune(const Message& pruned, const Message& original, const std::set<Name>& fresh, NameMap& out) {
  if (pruned.is_name() && fresh.contains(pruned.as_name())) {
    out.emplace(pruned.as_name(), original);
    return;
  }
  if (pruned.kind() != original.kind() || pruned.is_name()) return;
  if (pruned.is_pair()) {
    unprune(pruned.first(), original.first(), fresh, out);
    unprune(pruned.second(), original.second(), fresh, out);
  } else if (pruned.is_enc()) {
    unprune(pruned.payload(), original.payload(), fresh, out);
  }
}

inline Agent subst(const Agent& a, const NameMap& s, const CongruencePlugin& plugin) {
  switch (a.kind()) {
    case AgentKind::Proc: return Agent::proc(reduce_fully(subst(a.body(), s), plugin));
    case AgentKind::Abstraction: return Agent::abstraction(a.var(), subst(a.body(), s)).canonical();
    case AgentKind::Concretion:
      return Agent::concretion(a.bound(), plugin.canonical(subst(a.message(), s)), subst(a.body(), s)).canonical();
  }
  return a;
}

struct Triple {
  Process body;
  Variable var;
  Hedge hedge;
  Message message;
  std::size_t depth = 0;
};

/// A random abstraction body over x, a hedge and a message the hedge
/// synthesizes on both sides, with mcd(M) up to CD + 2.
inline Triple random_triple(gen::Rng& rng, const CongruencePlugin& plugin) {
  gen::ProcessShape shape;
  shape.max_prefixes = 4;
  shape.term_depth = 2;
  Variable x("x");
  Triple t;
  t.var = x;
  t.body = gen::open_process(rng, shape, {x});
  std::set<Name> ids(shape.names.begin(), shape.names.end());
  t.hedge = identity_hedge(ids);
  std::vector<Message> leaves;
  for (const auto& n : shape.names) leaves.push_back(Term::name(n));
  if (rng.chance(0.5)) {
    Message secret = Term::enc(Term::name(rng.pick(shape.names)), Term::name("s"));
    t.hedge.insert(secret, secret);
    leaves.push_back(secret);
  }
  t.depth = critical_depth(t.hedge, t.body, t.body);
  std::size_t target = rng.below(t.depth + 3);
  std::function<Message(std::size_t)> build = [&](std::size_t depth) -> Message {
    if (depth == 0) return rng.pick(leaves);
    if (rng.chance(0.5)) return Term::pair(build(depth - 1), build(rng.below(depth)));
    return Term::enc(build(depth - 1), Term::name(rng.pick(shape.names)));
  };
  t.message = plugin.canonical(build(target));
  return t;
}

/// Empty when the reductions and commitments of P{M/x} and P{N/x}
/// correspond; otherwise a description of the mismatch.
inline std::optional<std::string> check_triple(const Triple& t, const CongruencePlugin& plugin) {
  Pruning pr = prune(t.hedge, t.message, t.message, t.depth, plugin);
  std::set<Name> fresh = names_of(pr.hedge);
  for (const auto& n : names_of(t.hedge)) fresh.erase(n);
  NameMap back;
  unprune(pr.right, t.message, fresh, back);
  if (subst(pr.right, back) != t.message) return "pruned message does not map back to the original";

  Process with_m = substitute(t.body, t.var, t.message);
  Process with_n = substitute(t.body, t.var, pr.right);

  // one-step reductions
  auto rm = reduce(with_m, plugin), rn = reduce(with_n, plugin);
  std::vector<Process> mapped;
  for (const auto& r : rn) mapped.push_back(normalize(subst(r, back)));
  std::sort(mapped.begin(), mapped.end());
  mapped.erase(std::unique(mapped.begin(), mapped.end()), mapped.end());
  if (mapped != rm) return "reductions differ";

  // commitments
  auto sm = step(with_m, plugin), sn = step(with_n, plugin);
  if (sm.size() != sn.size()) return "different numbers of commitments";
  std::vector<Transition> mapped_steps;
  for (const auto& tr : sn) mapped_steps.push_back({tr.label, subst(tr.agent, back, plugin)});
  std::sort(mapped_steps.begin(), mapped_steps.end());
  if (mapped_steps != sm) return "commitments differ";
  return std::nullopt;
}

}  // namespace spi::pruning

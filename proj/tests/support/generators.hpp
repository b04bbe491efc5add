#pragma once

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "spi/hedge.hpp"
#include "spi/process.hpp"
#include "spi/term.hpp"

namespace spi::gen {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(engine_() % n); }
  bool chance(double p) { return std::uniform_real_distribution<double>(0, 1)(engine_) < p; }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }

 private:
  std::mt19937_64 engine_;
};

inline std::vector<Name> names(std::initializer_list<const char*> spellings) {
  std::vector<Name> out;
  for (auto s : spellings) out.emplace_back(s);
  return out;
}

inline Message message(Rng& rng, const std::vector<Name>& pool, std::size_t depth) {
  if (depth == 0 || rng.chance(0.4)) return Term::name(rng.pick(pool));
  if (rng.chance(0.5)) return Term::pair(message(rng, pool, depth - 1), message(rng, pool, depth - 1));
  return Term::enc(message(rng, pool, depth - 1), Term::name(rng.pick(pool)));
}

/// A term over names and the given variables; destructors when `destructors`.
inline Term term(Rng& rng, const std::vector<Name>& pool, const std::vector<Variable>& vars, std::size_t depth,
                 bool destructors) {
  auto leaf = [&]() -> Term {
    if (!vars.empty() && rng.chance(0.5)) return Term::var(rng.pick(vars));
    return Term::name(rng.pick(pool));
  };
  if (depth == 0 || rng.chance(0.4)) return leaf();
  std::size_t choices = destructors ? 5 : 2;
  switch (rng.below(choices)) {
    case 0: return Term::pair(term(rng, pool, vars, depth - 1, destructors), term(rng, pool, vars, depth - 1, destructors));
    case 1: return Term::enc(term(rng, pool, vars, depth - 1, destructors), leaf());
    case 2: return Term::dec(term(rng, pool, vars, depth - 1, destructors), leaf());
    case 3: return Term::proj1(term(rng, pool, vars, depth - 1, destructors));
    default: return Term::proj2(term(rng, pool, vars, depth - 1, destructors));
  }
}

struct ProcessShape {
  std::vector<Name> names = spi::gen::names({"a", "b", "c"});
  std::size_t max_prefixes = 5;
  std::size_t term_depth = 1;
  bool restrictions = true;
  bool guards = true;
  bool lets = true;
  bool sums = true;
  bool destructors = false;
  /// Channels are drawn from the first `channels` names (plus restricted ones).
  std::size_t channels = 2;
};

namespace detail {

struct ProcessGen {
  Rng& rng;
  const ProcessShape& shape;
  std::size_t var_counter = 0;
  std::size_t name_counter = 0;

  Process make(std::size_t budget, std::vector<Variable> vars, std::vector<Name> chans, std::vector<Name> pool) {
    if (budget == 0) return Process::nil();
    std::size_t roll = rng.below(20);
    if (roll < 2) return Process::nil();
    if (roll < 7) {
      Variable x("x" + std::to_string(++var_counter));
      Term chan = Term::name(rng.pick(chans));
      auto inner = vars;
      inner.push_back(x);
      return Process::input(chan, x, make(budget - 1, inner, chans, pool));
    }
    if (roll < 12) {
      Term chan = Term::name(rng.pick(chans));
      Term payload = term(rng, pool, vars, shape.term_depth, shape.destructors);
      return Process::output(chan, payload, make(budget - 1, vars, chans, pool));
    }
    if (roll < 14 && budget >= 2) {
      std::size_t l = 1 + rng.below(budget - 1);
      return Process::par(make(l, vars, chans, pool), make(budget - l, vars, chans, pool));
    }
    if (roll < 15 && shape.sums && budget >= 2) {
      std::size_t l = 1 + rng.below(budget - 1);
      return Process::sum(make(l, vars, chans, pool), make(budget - l, vars, chans, pool));
    }
    if (roll < 17 && shape.restrictions) {
      Name k("k" + std::to_string(++name_counter));
      auto inner_pool = pool;
      inner_pool.push_back(k);
      auto inner_chans = chans;
      if (rng.chance(0.3)) inner_chans.push_back(k);
      return Process::restrict(k, make(budget, vars, inner_chans, inner_pool));
    }
    if (roll < 19 && shape.guards) {
      Term l = term(rng, pool, vars, 0, false);
      Term r = term(rng, pool, vars, shape.term_depth, shape.destructors);
      Formula f = Formula::eq(l, r);
      if (rng.chance(0.2)) f = Formula::negate(f);
      return Process::guard(f, make(budget, vars, chans, pool));
    }
    if (shape.lets && !vars.empty()) {
      Variable x("x" + std::to_string(++var_counter));
      Term t = rng.chance(0.5) ? Term::proj1(Term::var(rng.pick(vars)))
                               : Term::dec(Term::var(rng.pick(vars)), Term::name(rng.pick(pool)));
      auto inner = vars;
      inner.push_back(x);
      return Process::let_in(x, t, make(budget, inner, chans, pool));
    }
    return Process::output(Term::name(rng.pick(chans)), Term::name(rng.pick(pool)),
                           make(budget - 1, vars, chans, pool));
  }
};

}  // namespace detail

/// A closed finite process with at most `shape.max_prefixes` prefixes.
inline Process process(Rng& rng, const ProcessShape& shape) {
  detail::ProcessGen g{rng, shape};
  std::vector<Name> chans(shape.names.begin(), shape.names.begin() + std::min(shape.channels, shape.names.size()));
  return g.make(shape.max_prefixes, {}, chans, shape.names);
}

inline std::size_t input_count(const Process& p) {
  switch (p.kind()) {
    case ProcKind::Nil: return 0;
    case ProcKind::Input: return 1 + input_count(p.body());
    case ProcKind::Par:
    case ProcKind::Sum: return input_count(p.left()) + input_count(p.right());
    default: return input_count(p.body());
  }
}

/// Input enumeration grows as (2^d names at depth d)^inputs; keep instances
/// where that stays small: two inputs when ad(P) = 0, one when ad(P) = 1.
inline bool affordable(const Process& p) {
  std::size_t ad = analysis_depth(p), inputs = input_count(p);
  return (ad == 0 && inputs <= 2) || (ad == 1 && inputs <= 1);
}

/// Rejection-samples `process` until `affordable`.
inline Process affordable_process(Rng& rng, const ProcessShape& shape) {
  for (;;) {
    Process p = process(rng, shape);
    if (affordable(p)) return p;
  }
}

/// A finite process whose only free variables are `vars`.
inline Process open_process(Rng& rng, const ProcessShape& shape, const std::vector<Variable>& vars) {
  detail::ProcessGen g{rng, shape};
  std::vector<Name> chans(shape.names.begin(), shape.names.begin() + std::min(shape.channels, shape.names.size()));
  return g.make(shape.max_prefixes, vars, chans, shape.names);
}

/// A small consistent hedge over `pool`: identities, sometimes a renamed
/// pair of names and an opaque cipher pair.
inline Hedge hedge(Rng& rng, const std::set<Name>& must, const std::vector<Name>& pool,
                   const CongruencePlugin& plugin) {
  Hedge h = identity_hedge(must);
  for (int attempt = 0; attempt < 4; ++attempt) {
    Hedge candidate = h;
    if (rng.chance(0.3)) {
      Name k = rng.pick(pool), j = rng.pick(pool);
      Message m = Term::enc(Term::name(rng.pick(pool)), Term::name(Name("s" + k.str())));
      Message n = Term::enc(Term::name(rng.pick(pool)), Term::name(Name("s" + j.str())));
      candidate.insert(plugin.canonical(m), plugin.canonical(n));
    }
    if (is_consistent(candidate, plugin)) return candidate;
  }
  return h;
}

/// Random permutation-free renaming of free names to fresh spellings.
inline std::map<Name, Name> fresh_renaming(const std::set<Name>& names, const std::string& prefix) {
  std::map<Name, Name> out;
  std::size_t i = 0;
  for (const auto& n : names) out.emplace(n, Name(prefix + std::to_string(++i)));
  return out;
}

}  // namespace spi::gen

#pragma once

// Random tiny (h, P, Q) instances within the oracle's limits.

#include <optional>
#include <string>

#include "generators.hpp"
#include "oracle.hpp"
#include "spi/bisim.hpp"

namespace spi::differential {

struct Instance {
  Hedge hedge;
  Process left, right;
};

inline Instance random_instance(gen::Rng& rng) {
  gen::ProcessShape shape;
  shape.names = gen::names({"a", "b"});
  shape.max_prefixes = 1 + rng.below(3);
  shape.channels = 1 + rng.below(2);
  shape.lets = rng.chance(0.3);
  Instance in;
  in.left = gen::affordable_process(rng, shape);
  std::size_t kind = rng.below(4);
  in.right = kind == 0 ? in.left : gen::affordable_process(rng, shape);
  std::set<Name> fn = free_names(in.left);
  collect_free_names(in.right, fn);
  fn.insert(Name("a"));
  in.hedge = identity_hedge(fn);
  if (kind == 3 && fn.size() <= 2)
    in.hedge.insert(Term::enc(Term::name("a"), Term::name("s")), Term::enc(Term::name("b"), Term::name("s")));
  return in;
}

struct Tally {
  std::size_t agree = 0;
  std::size_t disagree = 0;
  std::size_t skipped = 0;
  std::size_t bisimilar = 0;
  std::optional<std::string> first_disagreement;
};

/// Runs `count` instances; skips those the oracle or decide cannot finish.
inline Tally run(std::size_t count, std::uint64_t seed, const CongruencePlugin& plugin) {
  gen::Rng rng(seed);
  Tally t;
  for (std::size_t i = 0; i < count; ++i) {
    Instance in = random_instance(rng);
    std::size_t d = critical_depth(in.hedge, in.left, in.right);
    bool expected;
    try {
      expected = oracle::naive_d_bisim({in.hedge.begin(), in.hedge.end()}, in.left, in.right, d, plugin);
    } catch (const oracle::Blowup&) {
      ++t.skipped;
      continue;
    }
    CheckConfig cfg;
    cfg.plugin = &plugin;
    Verdict v = decide(in.hedge, in.left, in.right, cfg);
    if (v.kind == VerdictKind::ResourceExceeded) {
      ++t.skipped;
      continue;
    }
    bool got = v.kind == VerdictKind::Bisimilar;
    t.bisimilar += expected;
    if (got == expected) {
      ++t.agree;
    } else {
      ++t.disagree;
      if (!t.first_disagreement)
        t.first_disagreement = "oracle says " + std::string(expected ? "bisimilar" : "distinguished") +
                               " for h = " + to_string(in.hedge) + ", P = " + to_string(in.left) +
                               ", Q = " + to_string(in.right);
    }
  }
  return t;
}

}  // namespace spi::differential

#pragma once

// Reference implementations for differential testing. Written against the
// term, congruence, evaluation and process-syntax layers only: transitions,
// hedge operations and the bisimulation are reimplemented naively here.

#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spi/congruence.hpp"
#include "spi/process.hpp"
#include "spi/term.hpp"

namespace spi::oracle {

using Pair = std::pair<Message, Message>;
using PairSet = std::set<Pair>;

struct Universe {
  std::set<Name> names;
  std::size_t depth = 0;
};

/// Every canonical message over the names with at most `depth` nested
/// constructors; keys are names.
std::set<Message> all_messages(const Universe& u, const CongruencePlugin& plugin);

// Hedge operations, by direct fixpoint iteration.
PairSet canon(const PairSet& h, const CongruencePlugin& plugin);
PairSet analyze(const PairSet& h, const CongruencePlugin& plugin);
PairSet irreducible(const PairSet& h, const CongruencePlugin& plugin);
bool consistent(const PairSet& h, const CongruencePlugin& plugin);
/// All (M, N) in S(h) with max(mcd(M), mcd(N)) ≤ d.
PairSet homologous(const PairSet& h, std::size_t d, const CongruencePlugin& plugin);

// Late transitions, straight from the rules.
enum class Act { Tau, In, Out };

struct OAgent {
  enum Kind { Proc, Abs, Conc } kind = Proc;
  Process body;
  Variable var;
  std::vector<Name> bound;
  Message msg;
};

struct OStep {
  Act act;
  Name chan;
  OAgent agent;
};

std::vector<OStep> steps(const Process& p, const CongruencePlugin& plugin);
std::vector<Process> tau_closure(const Process& p, const CongruencePlugin& plugin);

class Blowup : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Limits {
  std::size_t max_configs = 200000;
  std::size_t max_prefixes = 4;
  std::size_t max_names = 3;
  std::size_t max_depth = 2;
};

/// h ⊢ P ∼^d Q, as membership in the greatest d-hedged bisimulation over
/// the configurations reachable from (h, P, Q). Throws Blowup past limits.
bool naive_d_bisim(const PairSet& h, const Process& p, const Process& q, std::size_t d,
                   const CongruencePlugin& plugin, const Limits& limits = {});

struct FixpointStats {
  std::size_t configs = 0;
  std::size_t rounds = 0;
};
const FixpointStats& last_stats();

}  // namespace spi::oracle

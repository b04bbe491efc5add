#pragma once

#include <chrono>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "spi/congruence.hpp"
#include "spi/hedge.hpp"
#include "spi/lts.hpp"
#include "spi/process.hpp"

namespace spi {

struct CheckConfig {
  const CongruencePlugin* plugin = &default_congruence();
  /// Most pairs a single input enumeration may generate.
  std::size_t pair_cap = 200000;
  std::chrono::milliseconds time_budget{std::chrono::seconds(60)};
  bool trace = false;

  /// Added to the critical depth before enumerating inputs.
  std::size_t depth_offset = 0;
  /// Fresh names beyond the 2^d bound.
  std::size_t extra_fresh = 0;
  /// Report input pairs once per permutation of the fresh names.
  bool fresh_quotient = true;
};

/// mcd(h) + max(ad(P), ad(Q)) + 1.
std::size_t critical_depth(const Hedge& h, const Process& p, const Process& q);

enum class Side : std::uint8_t { Left, Right };
std::string_view to_string(Side s);

/// One attacker move: `side` performs `label`, the other side answers with
/// `answer`. Orientation is always that of the original (P, Q) question.
struct WitnessStep {
  Side side = Side::Left;
  Label label;
  Label answer;
  /// Output: the two emitted messages. Input: the two received messages.
  std::optional<MessagePair> messages;
  /// Output: names the two concretions extrude. Input: the fresh set B.
  std::vector<Name> left_fresh;
  std::vector<Name> right_fresh;
  Hedge hedge_after;
  Process left_before, right_before;
  Process left_after, right_after;
};

enum class FailureKind : std::uint8_t { NoMatch, InconsistentHedge };
std::string_view to_string(FailureKind k);

struct Witness {
  std::vector<WitnessStep> steps;
  FailureKind failure = FailureKind::NoMatch;
  /// The unmatched move.
  Side side = Side::Left;
  Label label;
  Process left_state, right_state;
  Hedge hedge;
  /// For output moves that could only be answered inconsistently: the hedge
  /// the first answer would have produced.
  std::optional<Hedge> rejected_hedge;
  std::optional<MessagePair> messages;
};

struct CheckStats {
  std::size_t hb_calls = 0;
  std::size_t states = 0;
  std::size_t pairs_enumerated = 0;
  std::size_t memo_hits = 0;
  std::size_t max_depth = 0;
};

enum class VerdictKind : std::uint8_t { Bisimilar, Distinguished, ResourceExceeded };
std::string_view to_string(VerdictKind k);

struct Verdict {
  VerdictKind kind = VerdictKind::Bisimilar;
  std::optional<Witness> witness;
  std::string reason;  // resource_exceeded
  Hedge initial_hedge;
  std::vector<std::string> warnings;
  CheckStats stats;
  double seconds = 0;
};

/// Input that cannot be checked: open or infinite processes, inconsistent hedges.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ResourceExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// HB(h, P, Q) for one direction. Throws ResourceExceeded.
class Checker {
 public:
  explicit Checker(CheckConfig cfg);

  /// Requires prepared states (see TransitionSystem) and a consistent, canonical h.
  bool hb(const Hedge& h, const Process& p, const Process& q, Witness* witness = nullptr);

  TransitionSystem& transitions() { return ts_; }
  const CheckStats& stats() const { return stats_; }

 private:
  using HedgeId = std::size_t;
  struct Interned {
    Hedge hedge;
    HedgeId inverse;
  };
  struct HedgeHash {
    std::size_t operator()(const Hedge& h) const noexcept;
  };
  struct MemoHash {
    std::size_t operator()(const std::tuple<HedgeId, Process, Process>& k) const noexcept;
  };

  HedgeId intern(Hedge h);
  HedgeId inverse(HedgeId id);
  bool hb(HedgeId h, const Process& p, const Process& q, bool flipped, Witness* witness);
  bool both(HedgeId h, const Process& p, const Process& q, bool flipped, Witness* witness);
  void tick();
  std::optional<MessagePair> input(HedgeId h_in, std::size_t d, const std::set<Name>& fresh, std::size_t i);

  CheckConfig cfg_;
  std::deque<Interned> hedges_;
  std::unordered_map<Hedge, HedgeId, HedgeHash> hedge_ids_;
  std::map<std::tuple<HedgeId, std::size_t, std::set<Name>>, std::unique_ptr<HomologousEnumerator>> inputs_;
  TransitionSystem ts_;
  std::unordered_set<std::tuple<HedgeId, Process, Process>, MemoHash> memo_;
  CheckStats stats_;
  std::chrono::steady_clock::time_point deadline_;
  std::size_t depth_ = 0;
};

/// h ⊢ P ∼ Q, as HB(h, P, Q) ∧ HB(h⁻¹, Q, P). Throws ValidationError.
Verdict decide(const Hedge& h, const Process& p, const Process& q, const CheckConfig& cfg = {});

/// Renames a canonical concretion's binders to `names` (same length) and
/// prepares the body. Returns the emitted message and the continuation.
std::pair<Message, Process> open_concretion(const Agent& c, const std::vector<Name>& names,
                                            const CongruencePlugin& plugin);

/// Replays a witness against the original processes; empty on success,
/// otherwise a description of the first step that is not a legal move.
std::optional<std::string> replay_witness(const Witness& w, const Hedge& h, const Process& p, const Process& q,
                                          const CongruencePlugin& plugin);

}  // namespace spi

#include "spi/bisim.hpp"

#include <algorithm>

namespace spi {

std::size_t critical_depth(const Hedge& h, const Process& p, const Process& q) {
  return hedge_mcd(h) + std::max(analysis_depth(p), analysis_depth(q)) + 1;
}

std::string_view to_string(Side s) { return s == Side::Left ? "left" : "right"; }

std::string_view to_string(FailureKind k) {
  return k == FailureKind::NoMatch ? "no_matching_transition" : "inconsistent_hedge";
}

std::string_view to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Bisimilar: return "bisimilar";
    case VerdictKind::Distinguished: return "distinguished";
    case VerdictKind::ResourceExceeded: return "resource_exceeded";
  }
  return "?";
}

std::pair<Message, Process> open_concretion(const Agent& c, const std::vector<Name>& names,
                                            const CongruencePlugin& plugin) {
  Message msg = c.message();
  Process body = c.body();
  for (std::size_t i = 0; i < c.bound().size(); ++i) {
    msg = substitute_name(msg, c.bound()[i], Term::name(names[i]));
    body = rename_name(body, c.bound()[i], names[i]);
  }
  return {plugin.canonical(msg), reduce_fully(body, plugin)};
}

namespace {

std::vector<Name> fresh_names(std::set<Name> avoid, std::size_t count, std::string_view hint) {
  std::vector<Name> out;
  for (std::size_t i = 0; i < count; ++i) {
    Name n = fresh_name(avoid, hint);
    avoid.insert(n);
    out.push_back(n);
  }
  return out;
}

// Channels b with (a, b) ∈ h.
std::vector<Name> partners(const Hedge& h, const Name& a) {
  std::vector<Name> out;
  Term at = Term::name(a);
  for (const auto& [m, n] : h)
    if (m == at && n.is_name()) out.push_back(n.as_name());
  return out;
}

constexpr std::size_t kNoInverse = static_cast<std::size_t>(-1);

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

std::size_t Checker::HedgeHash::operator()(const Hedge& h) const noexcept {
  std::size_t seed = h.size();
  for (const auto& [m, n] : h) seed = mix(mix(seed, m.hash()), n.hash());
  return seed;
}

std::size_t Checker::MemoHash::operator()(const std::tuple<HedgeId, Process, Process>& k) const noexcept {
  return mix(mix(std::get<0>(k), std::get<1>(k).hash()), std::get<2>(k).hash());
}

Checker::HedgeId Checker::intern(Hedge h) {
  if (auto it = hedge_ids_.find(h); it != hedge_ids_.end()) return it->second;
  HedgeId id = hedges_.size();
  hedges_.push_back({h, kNoInverse});
  hedge_ids_.emplace(std::move(h), id);
  return id;
}

Checker::HedgeId Checker::inverse(HedgeId id) {
  if (hedges_[id].inverse == kNoInverse) {
    HedgeId inv = intern(invert(hedges_[id].hedge));
    hedges_[id].inverse = inv;
    hedges_[inv].inverse = id;
  }
  return hedges_[id].inverse;
}

Checker::Checker(CheckConfig cfg)
    : cfg_(cfg), ts_(*cfg.plugin), deadline_(std::chrono::steady_clock::now() + cfg.time_budget) {}

void Checker::tick() {
  if ((++stats_.hb_calls & 0x3f) == 0 && std::chrono::steady_clock::now() > deadline_)
    throw ResourceExceeded("time budget of " + std::to_string(cfg_.time_budget.count() / 1000.0) +
                           " s exhausted");
}

std::optional<MessagePair> Checker::input(HedgeId h_in, std::size_t d, const std::set<Name>& fresh, std::size_t i) {
  auto key = std::make_tuple(h_in, d, fresh);
  auto it = inputs_.find(key);
  const bool created = it == inputs_.end();
  if (created)
    it = inputs_
             .emplace(std::move(key), std::make_unique<HomologousEnumerator>(
                                          hedges_[h_in].hedge, d, *cfg_.plugin, cfg_.pair_cap,
                                          cfg_.fresh_quotient ? fresh : std::set<Name>{}))
             .first;
  HomologousEnumerator& e = *it->second;
  const std::size_t before = created ? 0 : e.generated();
  const MessagePair* p = e.at(i);
  stats_.pairs_enumerated += e.generated() - before;
  if (!p) return std::nullopt;
  return *p;
}

bool Checker::hb(const Hedge& h, const Process& p, const Process& q, Witness* witness) {
  return hb(intern(h), p, q, false, witness);
}

bool Checker::both(HedgeId h, const Process& p, const Process& q, bool flipped, Witness* witness) {
  if (!hb(h, p, q, flipped, witness)) return false;
  return hb(inverse(h), q, p, !flipped, witness);
}

bool Checker::hb(HedgeId hid, const Process& p, const Process& q, bool flipped, Witness* witness) {
  tick();
  auto key = std::make_tuple(hid, p, q);
  if (memo_.contains(key)) {
    ++stats_.memo_hits;
    return true;
  }
  ++depth_;
  stats_.max_depth = std::max(stats_.max_depth, depth_);
  struct Exit {
    std::size_t& depth;
    ~Exit() { --depth; }
  } exit{depth_};

  const CongruencePlugin& plugin = *cfg_.plugin;
  const Hedge& h = hedges_[hid].hedge;
  const Side mover = flipped ? Side::Right : Side::Left;
  auto orient = [&](const auto& mine, const auto& theirs) {
    return flipped ? std::make_pair(theirs, mine) : std::make_pair(mine, theirs);
  };
  auto oriented_hedge = [&](const Hedge& g) { return flipped ? invert(g) : g; };

  auto terminal = [&](const Label& label, FailureKind kind) {
    if (!witness) return;
    *witness = Witness{};
    witness->failure = kind;
    witness->side = mover;
    witness->label = label;
    std::tie(witness->left_state, witness->right_state) = orient(p, q);
    witness->hedge = oriented_hedge(h);
  };
  auto prepend = [&](Witness& sub, WitnessStep step) {
    sub.steps.insert(sub.steps.begin(), std::move(step));
    *witness = std::move(sub);
  };
  auto make_step = [&](const Label& label, const Label& answer, const Hedge& after, const Process& p_after,
                       const Process& q_after) {
    WitnessStep s;
    s.side = mover;
    s.label = label;
    s.answer = answer;
    s.hedge_after = oriented_hedge(after);
    std::tie(s.left_before, s.right_before) = orient(p, q);
    std::tie(s.left_after, s.right_after) = orient(p_after, q_after);
    return s;
  };

  const std::vector<Transition> moves = ts_.step(p);
  for (const auto& t : moves) {
    switch (t.label.kind) {
      case LabelKind::Tau: {
        const Process& p_after = t.agent.body();
        const std::vector<Process> answers = ts_.weak_tau(q);
        bool matched = false;
        for (std::size_t i = 0; i < answers.size() && !matched; ++i) {
          Witness sub;
          bool record = witness && i == 0;
          matched = both(hid, p_after, answers[i], flipped, record ? &sub : nullptr);
          if (!matched && record) prepend(sub, make_step(t.label, Label::tau(), h, p_after, answers[i]));
        }
        if (!matched) return false;
        break;
      }
      case LabelKind::Out: {
        std::set<Name> left_avoid = free_names(p);
        for (const auto& n : left_names(h)) left_avoid.insert(n);
        auto mine = fresh_names(left_avoid, t.agent.bound().size(), "n");
        auto [m, p_after] = open_concretion(t.agent, mine, plugin);

        bool matched = false, any = false, recorded = false;
        for (const auto& b : partners(h, t.label.chan)) {
          Label answer = Label::out(b);
          std::set<Name> right_avoid = free_names(q);
          for (const auto& n : right_names(h)) right_avoid.insert(n);
          for (const auto& c : ts_.weak_step(q, answer)) {
            auto theirs = fresh_names(right_avoid, c.bound().size(), "n");
            auto [n, q_after] = open_concretion(c, theirs, plugin);
            Hedge extended = h;
            extended.insert(m, n);
            Hedge h_out = irreducibles(extended, plugin);
            bool first = !any;
            any = true;
            if (!is_consistent(h_out, plugin)) {
              if (first && witness) {
                terminal(t.label, FailureKind::InconsistentHedge);
                witness->rejected_hedge = oriented_hedge(h_out);
                witness->messages = orient(m, n);
                recorded = true;
              }
              continue;
            }
            Witness sub;
            bool record = witness && !recorded;
            if (both(intern(h_out), p_after, q_after, flipped, record ? &sub : nullptr)) {
              matched = true;
              break;
            }
            if (record) {
              WitnessStep s = make_step(t.label, answer, h_out, p_after, q_after);
              s.messages = orient(m, n);
              std::tie(s.left_fresh, s.right_fresh) = orient(mine, theirs);
              prepend(sub, std::move(s));
              recorded = true;
            }
          }
          if (matched) break;
        }
        if (!matched) {
          if (!any) terminal(t.label, FailureKind::NoMatch);
          return false;
        }
        break;
      }
      case LabelKind::In: {
        const std::size_t d = critical_depth(h, p, q) + cfg_.depth_offset;
        if (d >= 20 || (std::size_t{1} << d) > cfg_.pair_cap)
          throw ResourceExceeded("input depth " + std::to_string(d) + " needs more fresh names than pair_cap allows");
        bool matched = false, any = false, recorded = false;
        for (const auto& b : partners(h, t.label.chan)) {
          Label answer = Label::in(b);
          const std::vector<Agent> answers = ts_.weak_step(q, answer);
          if (answers.empty()) continue;
          std::set<Name> avoid = free_names(p);
          for (const auto& n : free_names(q)) avoid.insert(n);
          for (const auto& n : names_of(h)) avoid.insert(n);
          avoid.insert(t.label.chan);
          avoid.insert(b);
          auto fresh_list = fresh_names(avoid, (std::size_t{1} << d) + cfg_.extra_fresh, "f");
          std::set<Name> fresh(fresh_list.begin(), fresh_list.end());
          Hedge h_in = hedge_union(h, identity_hedge(fresh));
          if (!is_consistent(h_in, plugin)) continue;
          const HedgeId in_id = intern(h_in);
          for (const auto& c : answers) {
            bool first = !any;
            any = true;
            bool all = true;
            // Neither side reads its input: every pair leads to the same configuration.
            const bool vacuous =
                !free_vars(t.agent.body()).contains(t.agent.var()) && !free_vars(c.body()).contains(c.var());
            for (std::size_t i = 0; !vacuous || i < 1; ++i) {
              const std::optional<MessagePair> mp = input(in_id, d, fresh, i);
              if (!mp) break;
              const auto& [m, n] = *mp;
              Process p_after = apply(t.agent, m, plugin);
              Process q_after = apply(c, n, plugin);
              Witness sub;
              bool record = witness && first && !recorded;
              if (both(in_id, p_after, q_after, flipped, record ? &sub : nullptr)) continue;
              all = false;
              if (record) {
                WitnessStep s = make_step(t.label, answer, h_in, p_after, q_after);
                s.messages = orient(m, n);
                s.left_fresh = s.right_fresh = fresh_list;
                prepend(sub, std::move(s));
                recorded = true;
              }
              break;
            }
            if (all) {
              matched = true;
              break;
            }
          }
          if (matched) break;
        }
        if (!matched) {
          if (!any) terminal(t.label, FailureKind::NoMatch);
          return false;
        }
        break;
      }
    }
  }
  memo_.insert(std::move(key));
  return true;
}

Verdict decide(const Hedge& h0, const Process& p, const Process& q, const CheckConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const CongruencePlugin& plugin = *cfg.plugin;
  for (const auto* proc : {&p, &q}) {
    if (!is_finite(*proc)) throw ValidationError("replication (!P) is not supported: processes must be finite");
    if (!is_closed(*proc)) throw ValidationError("process is not closed: " + to_string(*proc));
  }
  if (cfg.pair_cap == 0) throw ValidationError("pair_cap must be at least 1");

  Verdict v;
  Hedge h = canonicalize(h0, plugin);
  Hedge reduced = irreducibles(h, plugin);
  if (reduced != h) {
    v.warnings.push_back("initial hedge " + to_string(h) + " was replaced by its irreducibles " +
                         to_string(reduced));
    h = reduced;
  }
  if (!is_consistent(h, plugin)) throw ValidationError("initial hedge " + to_string(h) + " is not consistent");
  v.initial_hedge = h;

  Checker checker(cfg);
  TransitionSystem& ts = checker.transitions();
  Process ps = ts.prepare(p), qs = ts.prepare(q);
  try {
    Witness w;
    if (!checker.hb(h, ps, qs, &w)) {
      v.kind = VerdictKind::Distinguished;
      v.witness = std::move(w);
    } else {
      // The reverse direction: orientation of steps is flipped back to (P, Q).
      Witness rw;
      if (!checker.hb(invert(h), qs, ps, &rw)) {
        v.kind = VerdictKind::Distinguished;
        auto flip = [](Side s) { return s == Side::Left ? Side::Right : Side::Left; };
        for (auto& s : rw.steps) {
          s.side = flip(s.side);
          std::swap(s.left_before, s.right_before);
          std::swap(s.left_after, s.right_after);
          std::swap(s.left_fresh, s.right_fresh);
          if (s.messages) std::swap(s.messages->first, s.messages->second);
          s.hedge_after = invert(s.hedge_after);
        }
        rw.side = flip(rw.side);
        std::swap(rw.left_state, rw.right_state);
        rw.hedge = invert(rw.hedge);
        if (rw.rejected_hedge) rw.rejected_hedge = invert(*rw.rejected_hedge);
        if (rw.messages) std::swap(rw.messages->first, rw.messages->second);
        v.witness = std::move(rw);
      }
    }
  } catch (const ResourceExceeded& e) {
    v = Verdict{VerdictKind::ResourceExceeded, std::nullopt, e.what(), h, v.warnings, {}, 0};
  } catch (const EnumerationOverflow& e) {
    v = Verdict{VerdictKind::ResourceExceeded, std::nullopt, e.what(), h, v.warnings, {}, 0};
  }
  v.stats = checker.stats();
  v.stats.states = ts.states_seen();
  v.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return v;
}

// --- replay -------------------------------------------------------------------------

namespace {

bool strong_move(TransitionSystem& ts, const Process& from, const WitnessStep& s, bool moving_left,
                 const CongruencePlugin& plugin) {
  const Label& label = moving_left == (s.side == Side::Left) ? s.label : s.answer;
  const Process& after = moving_left ? s.left_after : s.right_after;
  const auto& fresh = moving_left ? s.left_fresh : s.right_fresh;
  auto matches = [&](const Agent& a) {
    switch (a.kind()) {
      case AgentKind::Proc: return a.body() == after;
      case AgentKind::Abstraction: {
        if (!s.messages) return false;
        const Message& m = moving_left ? s.messages->first : s.messages->second;
        return apply(a, m, plugin) == after;
      }
      case AgentKind::Concretion: {
        if (!s.messages || a.bound().size() != fresh.size()) return false;
        const Message& m = moving_left ? s.messages->first : s.messages->second;
        auto [msg, cont] = open_concretion(a, fresh, plugin);
        return msg == m && cont == after;
      }
    }
    return false;
  };
  bool strong = moving_left == (s.side == Side::Left);
  if (strong) {
    for (const auto& t : ts.step(from))
      if (t.label == label && matches(t.agent)) return true;
    return false;
  }
  if (label.kind == LabelKind::Tau) {
    const auto& closure = ts.weak_tau(from);
    return std::find(closure.begin(), closure.end(), after) != closure.end();
  }
  for (const auto& a : ts.weak_step(from, label))
    if (matches(a)) return true;
  return false;
}

}  // namespace

std::optional<std::string> replay_witness(const Witness& w, const Hedge&, const Process& p, const Process& q,
                                          const CongruencePlugin& plugin) {
  TransitionSystem ts(plugin);
  Process left = ts.prepare(p), right = ts.prepare(q);
  for (std::size_t i = 0; i < w.steps.size(); ++i) {
    const auto& s = w.steps[i];
    if (s.left_before != left || s.right_before != right)
      return "step " + std::to_string(i) + " does not start from the previous states";
    if (!strong_move(ts, left, s, true, plugin))
      return "step " + std::to_string(i) + ": left side cannot perform its move";
    if (!strong_move(ts, right, s, false, plugin))
      return "step " + std::to_string(i) + ": right side cannot perform its move";
    left = s.left_after;
    right = s.right_after;
  }
  if (w.left_state != left || w.right_state != right) return "final states do not match the last step";
  const Process& mover = w.side == Side::Left ? left : right;
  for (const auto& t : ts.step(mover))
    if (t.label == w.label) return std::nullopt;
  return "the unmatched move is not a transition of the " + std::string(to_string(w.side)) + " state";
}

}  // namespace spi

#include "spi/congruence.hpp"

#include <algorithm>
#include <map>
#include <random>

namespace spi {

std::optional<Message> CongruencePlugin::decrypt(const Message& m, const Name& k) const {
  std::optional<Message> found;
  for (auto& view : enc_views(m)) {
    if (view.key != k) continue;
    if (found && !equiv(*found, view.payload))
      throw CoherenceViolation("theory '" + std::string(id()) + "' decrypts " + to_string(m) +
                               " with key " + k.str() + " to two different payloads");
    if (!found) found = view.payload;
  }
  return found;
}

std::vector<EncView> DefaultCongruence::enc_views(const Message& m) const {
  if (!m.is_enc() || !m.key().is_name()) return {};
  return {EncView{m.payload(), m.key().as_name()}};
}

namespace {

// Peels a run enc(...enc(core, k1)..., kn); keys are returned innermost first.
Message peel_run(const Message& m, std::vector<Name>& keys) {
  Message cur = m;
  while (cur.is_enc()) {
    keys.push_back(cur.key().as_name());
    cur = cur.payload();
  }
  std::reverse(keys.begin(), keys.end());
  return cur;
}

Message wrap_run(Message core, const std::vector<Name>& keys) {
  for (const auto& k : keys) core = Term::enc(std::move(core), Term::name(k));
  return core;
}

}  // namespace

Message CommutativeCongruence::canonical(const Message& m) const {
  switch (m.kind()) {
    case TermKind::Pair: {
      Message a = canonical(m.first()), b = canonical(m.second());
      if (a == m.first() && b == m.second()) return m;
      return Term::pair(std::move(a), std::move(b));
    }
    case TermKind::Enc: {
      std::vector<Name> keys;
      Message core = canonical(peel_run(m, keys));
      std::sort(keys.begin(), keys.end());
      return wrap_run(std::move(core), keys);
    }
    default: return m;
  }
}

std::vector<EncView> CommutativeCongruence::enc_views(const Message& m) const {
  Message c = canonical(m);
  if (!c.is_enc()) return {};
  std::vector<Name> keys;
  Message core = peel_run(c, keys);
  std::vector<EncView> views;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (i > 0 && keys[i] == keys[i - 1]) continue;
    std::vector<Name> rest = keys;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
    views.push_back(EncView{wrap_run(core, rest), keys[i]});
  }
  return views;
}

const CongruencePlugin& default_congruence() {
  static const DefaultCongruence instance;
  return instance;
}

const CongruencePlugin& commutative_congruence() {
  static const CommutativeCongruence instance;
  return instance;
}

const CongruencePlugin& congruence_by_id(std::string_view id) {
  if (id == "default") return default_congruence();
  if (id == "commutative") return commutative_congruence();
  throw std::invalid_argument("unknown congruence '" + std::string(id) + "'");
}

std::string_view to_string(CoherenceCondition c) {
  switch (c) {
    case CoherenceCondition::TypePreservation: return "type_preservation";
    case CoherenceCondition::Equivariance: return "equivariance";
    case CoherenceCondition::DeterministicDecryption: return "deterministic_decryption";
  }
  return "?";
}

namespace {

constexpr std::size_t kMaxCounterexamples = 8;

class Sampler {
 public:
  Sampler(const CongruencePlugin& plugin, std::size_t max_depth, std::uint64_t seed)
      : plugin_(plugin), max_depth_(max_depth), rng_(seed) {}

  std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

  Message name() { return Term::name(pool_[below(pool_.size())]); }

  Message message(std::size_t depth) {
    if (depth == 0) return name();
    switch (below(4)) {
      case 0: return name();
      case 1: return Term::pair(message(depth - 1), message(depth - 1));
      default: return Term::enc(message(depth - 1), name());
    }
  }

  Message message() { return message(below(max_depth_ + 1)); }

  // A congruent, possibly syntactically different, spelling of m built from
  // the theory's own encryption views.
  Message variant(const Message& m) {
    switch (m.kind()) {
      case TermKind::Pair: return Term::pair(variant(m.first()), variant(m.second()));
      case TermKind::Enc: {
        auto views = plugin_.enc_views(m);
        if (views.empty()) return m;
        const auto& v = views[below(views.size())];
        return Term::enc(variant(v.payload), Term::name(v.key));
      }
      default: return m;
    }
  }

 private:
  const CongruencePlugin& plugin_;
  std::size_t max_depth_;
  std::mt19937_64 rng_;
  std::vector<Name> pool_{Name("a"), Name("b"), Name("k")};
};

void record(CoherenceReport& report, CoherenceCounterexample cx) {
  if (report.counterexamples.size() < kMaxCounterexamples) report.counterexamples.push_back(std::move(cx));
}

}  // namespace

std::vector<CoherenceReport> check_coherence(const CongruencePlugin& plugin, std::size_t samples,
                                             std::size_t max_depth, std::uint64_t seed) {
  CoherenceReport types{CoherenceCondition::TypePreservation, 0, {}};
  CoherenceReport equivariance{CoherenceCondition::Equivariance, 0, {}};
  CoherenceReport decryption{CoherenceCondition::DeterministicDecryption, 0, {}};

  Sampler sampler(plugin, max_depth, seed);
  std::map<Message, Message> first_by_class;

  auto check_congruent_pair = [&](const Message& x, const Message& y) {
    if (x.is_enc() && y.is_enc()) {
      ++types.samples_tested;
      if (!(infer_type(x.payload()) == infer_type(y.payload()))) record(types, {x, y, std::nullopt});
    }
    ++decryption.samples_tested;
    if (ds(x) != ds(y)) record(decryption, {x, y, std::nullopt});
  };

  auto check_renaming = [&](const Message& x, const Message& y) {
    std::set<Name> used = names_of(x);
    collect_names(y, used);
    std::vector<Name> candidates(used.begin(), used.end());
    Name from = candidates[sampler.below(candidates.size())];
    Name to = fresh_name(used, "b");
    Term replacement = Term::name(to);
    bool before = plugin.equiv(x, y);
    bool after = plugin.equiv(substitute_name(x, from, replacement), substitute_name(y, from, replacement));
    ++equivariance.samples_tested;
    if (before != after) record(equivariance, {x, y, std::make_pair(to, from)});
  };

  for (std::size_t i = 0; i < samples; ++i) {
    Message m = sampler.message();
    Message v = sampler.variant(m);
    Message other = sampler.message();

    if (plugin.equiv(m, v)) check_congruent_pair(m, v);
    auto [it, inserted] = first_by_class.emplace(plugin.canonical(m), m);
    if (!inserted && it->second != m) check_congruent_pair(it->second, m);

    check_renaming(m, v);
    check_renaming(m, other);
    if (!inserted) check_renaming(it->second, m);
  }
  return {types, equivariance, decryption};
}

}  // namespace spi

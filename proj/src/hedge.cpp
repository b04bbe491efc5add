#include "spi/hedge.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

namespace spi {

Hedge make_hedge(std::initializer_list<MessagePair> pairs, const CongruencePlugin& plugin) {
  return make_hedge(std::vector<MessagePair>(pairs), plugin);
}

Hedge make_hedge(const std::vector<MessagePair>& pairs, const CongruencePlugin& plugin) {
  Hedge h;
  for (const auto& [m, n] : pairs) h.insert(plugin.canonical(m), plugin.canonical(n));
  return h;
}

Hedge canonicalize(const Hedge& h, const CongruencePlugin& plugin) {
  return make_hedge(std::vector<MessagePair>(h.begin(), h.end()), plugin);
}

Hedge identity_hedge(const std::set<Name>& names) {
  Hedge h;
  for (const auto& n : names) h.insert(Term::name(n), Term::name(n));
  return h;
}

Hedge hedge_union(const Hedge& a, const Hedge& b) {
  Hedge out = a;
  for (const auto& [m, n] : b) out.insert(m, n);
  return out;
}

std::set<Name> names_of(const Hedge& h) {
  std::set<Name> out;
  for (const auto& [m, n] : h) {
    collect_names(m, out);
    collect_names(n, out);
  }
  return out;
}

std::set<Name> left_names(const Hedge& h) {
  std::set<Name> out;
  for (const auto& [m, n] : h) collect_names(m, out);
  return out;
}

std::set<Name> right_names(const Hedge& h) {
  std::set<Name> out;
  for (const auto& [m, n] : h) collect_names(n, out);
  return out;
}

bool is_consistent(const Hedge& h, const CongruencePlugin& plugin) {
  std::set<Message> lefts, rights;
  std::map<Message, Message> by_left, by_right;
  std::vector<MessagePair> entries;
  for (const auto& [m0, n0] : h) {
    Message m = plugin.canonical(m0), n = plugin.canonical(n0);
    if (m.is_pair() || n.is_pair()) return false;
    if (m.is_name() != n.is_name()) return false;
    auto [l, lnew] = by_left.emplace(m, n);
    if (!lnew && l->second != n) return false;
    auto [r, rnew] = by_right.emplace(n, m);
    if (!rnew && r->second != m) return false;
    lefts.insert(m);
    rights.insert(n);
    entries.emplace_back(m, n);
  }
  for (const auto& [m, n] : entries) {
    auto mv = plugin.enc_views(m);
    auto nv = plugin.enc_views(n);
    if (mv.empty() || nv.empty()) continue;
    for (const auto& v : mv)
      if (lefts.contains(Term::name(v.key))) return false;
    for (const auto& v : nv)
      if (rights.contains(Term::name(v.key))) return false;
  }
  return true;
}

namespace {

bool synth(const Hedge& h, const Message& m, const Message& n, const CongruencePlugin& plugin) {
  if (h.contains(m, n)) return true;
  if (m.is_pair() && n.is_pair())
    return synth(h, m.first(), n.first(), plugin) && synth(h, m.second(), n.second(), plugin);
  if (m.is_enc() && n.is_enc()) {
    auto mv = plugin.enc_views(m);
    auto nv = plugin.enc_views(n);
    for (const auto& a : mv)
      for (const auto& b : nv)
        if (h.contains(Term::name(a.key), Term::name(b.key)) && synth(h, a.payload, b.payload, plugin))
          return true;
  }
  return false;
}

// Every way of opening (c, d) jointly with a key pair present in `known`.
std::vector<MessagePair> openings(const Message& c, const Message& d, const Hedge& known,
                                  const CongruencePlugin& plugin) {
  std::vector<MessagePair> out;
  if (!c.is_enc() || !d.is_enc()) return out;
  for (const auto& a : plugin.enc_views(c))
    for (const auto& b : plugin.enc_views(d))
      if (known.contains(Term::name(a.key), Term::name(b.key))) out.emplace_back(a.payload, b.payload);
  return out;
}

}  // namespace

bool synthesizes(const Hedge& h, const Message& m, const Message& n, const CongruencePlugin& plugin) {
  return synth(h, plugin.canonical(m), plugin.canonical(n), plugin);
}

Hedge analysis(const Hedge& h, const CongruencePlugin& plugin) {
  Hedge a = canonicalize(h, plugin);
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<MessagePair> added;
    for (const auto& [c, d] : a) {
      if (c.is_pair() && d.is_pair()) {
        added.emplace_back(c.first(), d.first());
        added.emplace_back(c.second(), d.second());
      }
      for (auto& p : openings(c, d, a, plugin)) added.push_back(std::move(p));
    }
    for (const auto& [m, n] : added) changed |= a.insert(m, n);
  }
  return a;
}

Hedge irreducibles(const Hedge& h, const CongruencePlugin& plugin) {
  Hedge a = analysis(h, plugin);
  Hedge out;
  for (const auto& [c, d] : a) {
    if (c.is_pair() && d.is_pair()) continue;
    if (!openings(c, d, a, plugin).empty()) continue;
    out.insert(c, d);
  }
  return out;
}

std::size_t hedge_mcd(const Hedge& h) {
  std::size_t out = 0;
  for (const auto& [m, n] : h) out = std::max({out, mcd(m), mcd(n)});
  return out;
}

Hedge invert(const Hedge& h) {
  Hedge out;
  for (const auto& [m, n] : h) out.insert(n, m);
  return out;
}

// --- enumeration ------------------------------------------------------------------

namespace {

std::size_t depth_of(const MessagePair& p) { return std::max(mcd(p.first), mcd(p.second)); }

void collect_in_order(const Term& t, const std::set<Name>& pool, std::vector<Name>& out) {
  switch (t.kind()) {
    case TermKind::Name:
      if (pool.contains(t.as_name()) && std::find(out.begin(), out.end(), t.as_name()) == out.end())
        out.push_back(t.as_name());
      return;
    case TermKind::Pair:
    case TermKind::Enc:
      collect_in_order(t.first(), pool, out);
      collect_in_order(t.second(), pool, out);
      return;
    default: return;
  }
}

Term rename_all(const Term& t, const std::map<Name, Name>& map) {
  switch (t.kind()) {
    case TermKind::Name: {
      auto it = map.find(t.as_name());
      return it == map.end() ? t : Term::name(it->second);
    }
    case TermKind::Pair: return Term::pair(rename_all(t.first(), map), rename_all(t.second(), map));
    case TermKind::Enc: return Term::enc(rename_all(t.payload(), map), rename_all(t.key(), map));
    default: return t;
  }
}

}  // namespace

HomologousEnumerator::HomologousEnumerator(const Hedge& h0, std::size_t d, const CongruencePlugin& plugin,
                                           std::size_t cap, const std::set<Name>& interchangeable)
    : plugin_(plugin), d_(d), cap_(cap), pool_(interchangeable.begin(), interchangeable.end()), levels_(d + 1) {
  Hedge h = canonicalize(h0, plugin);
  for (const auto& [m, n] : h) {
    bool pooled = m.is_name() && interchangeable.contains(m.as_name());
    if (m.is_name() && n.is_name() && !pooled) keys_.emplace_back(m, n);
    if (pooled) continue;
    if (!m.is_pair() && !n.is_pair()) add(m, n);
  }
  if (!pool_.empty()) add(Term::name(pool_[0]), Term::name(pool_[0]));
  // Pair entries of h are synthesizable too, but only through their components.
  for (const auto& [m, n] : h)
    if (m.is_pair() || n.is_pair())
      if (synthesizes(h, m, n, plugin)) add(m, n);
}

void HomologousEnumerator::add(const Message& m, const Message& n) {
  MessagePair p{plugin_.canonical(m), plugin_.canonical(n)};
  std::size_t used = 0;
  if (!pool_.empty()) {
    std::set<Name> pool(pool_.begin(), pool_.end());
    std::vector<Name> order;
    collect_in_order(p.first, pool, order);
    collect_in_order(p.second, pool, order);
    std::map<Name, Name> map;
    for (std::size_t i = 0; i < order.size(); ++i) map.emplace(order[i], pool_[i]);
    if (!map.empty()) p = {plugin_.canonical(rename_all(p.first, map)), plugin_.canonical(rename_all(p.second, map))};
    used = order.size();
  }
  std::size_t depth = depth_of(p);
  if (depth > d_ || depth < built_ || !seen_.insert(p).second) return;
  if (++generated_ > cap_) throw EnumerationOverflow(cap_);
  levels_[depth].push_back({std::move(p), used});
}

// pair(x, y) or pair(y, x), for every way y's interchangeable names can
// coincide with x's or be new.
void HomologousEnumerator::add_merged(const Item& x, const Item& y, bool x_first) {
  std::map<Name, Name> map;
  std::vector<bool> taken(x.used, false);
  std::function<void(std::size_t, std::size_t)> choose = [&](std::size_t i, std::size_t fresh) {
    if (i == y.used) {
      Message m = rename_all(y.pair.first, map), n = rename_all(y.pair.second, map);
      if (x_first)
        add(Term::pair(x.pair.first, m), Term::pair(x.pair.second, n));
      else
        add(Term::pair(m, x.pair.first), Term::pair(n, x.pair.second));
      return;
    }
    for (std::size_t j = 0; j < x.used; ++j) {
      if (taken[j]) continue;
      taken[j] = true;
      map[pool_[i]] = pool_[j];
      choose(i + 1, fresh);
      taken[j] = false;
    }
    if (x.used + fresh < pool_.size()) {
      map[pool_[i]] = pool_[x.used + fresh];
      choose(i + 1, fresh + 1);
    }
    map.erase(pool_[i]);
  };
  choose(0, 0);
}

bool HomologousEnumerator::build_next_level() {
  if (built_ > d_) return false;
  if (built_ > 0) {
    const std::size_t depth = built_;
    for (const auto& x : levels_[depth - 1]) {
      for (std::size_t lower = 0; lower < depth; ++lower)
        for (const auto& y : levels_[lower]) {
          add_merged(x, y, true);
          if (lower < depth - 1) add_merged(x, y, false);
        }
      for (const auto& [k, j] : keys_) add(Term::enc(x.pair.first, k), Term::enc(x.pair.second, j));
      for (std::size_t i = 0; i < x.used && i < pool_.size(); ++i) {
        Message k = Term::name(pool_[i]);
        add(Term::enc(x.pair.first, k), Term::enc(x.pair.second, k));
      }
      if (x.used < pool_.size()) {
        Message k = Term::name(pool_[x.used]);
        add(Term::enc(x.pair.first, k), Term::enc(x.pair.second, k));
      }
    }
  }
  auto& level = levels_[built_];
  std::sort(level.begin(), level.end(), [](const Item& a, const Item& b) { return a.pair < b.pair; });
  for (const auto& item : level) out_.push_back(item.pair);
  ++built_;
  return true;
}

const MessagePair* HomologousEnumerator::at(std::size_t i) {
  while (i >= out_.size())
    if (!build_next_level()) return nullptr;
  return &out_[i];
}

std::vector<MessagePair> enumerate_homologous(const Hedge& h, std::size_t d, const CongruencePlugin& plugin,
                                              std::size_t cap, const std::set<Name>& interchangeable) {
  HomologousEnumerator e(h, d, plugin, cap, interchangeable);
  std::vector<MessagePair> out;
  for (std::size_t i = 0; const MessagePair* p = e.at(i); ++i) out.push_back(*p);
  return out;
}

// --- pruning ------------------------------------------------------------------------

namespace {

struct Pruner {
  const CongruencePlugin& plugin;
  std::set<Name> avoid;

  Pruning run(const Hedge& h, const Message& m, const Message& n, std::size_t d) {
    if (h.contains(m, n)) return {h, m, n};
    if (d == 0) {
      std::set<Name> used = names_of(h);
      used.insert(avoid.begin(), avoid.end());
      Name a = fresh_name(used, "f");
      avoid.insert(a);
      Hedge out = h;
      out.insert(Term::name(a), Term::name(a));
      return {out, Term::name(a), Term::name(a)};
    }
    if (m.is_pair() && n.is_pair()) {
      Pruning left = run(h, m.first(), n.first(), d - 1);
      Pruning right = run(left.hedge, m.second(), n.second(), d - 1);
      return {right.hedge, plugin.canonical(Term::pair(left.left, right.left)),
              plugin.canonical(Term::pair(left.right, right.right))};
    }
    if (m.is_enc() && n.is_enc()) {
      for (const auto& a : plugin.enc_views(m))
        for (const auto& b : plugin.enc_views(n)) {
          if (!h.contains(Term::name(a.key), Term::name(b.key))) continue;
          if (!synthesizes(h, a.payload, b.payload, plugin)) continue;
          Pruning inner = run(h, a.payload, b.payload, d - 1);
          return {inner.hedge, plugin.canonical(Term::enc(inner.left, Term::name(a.key))),
                  plugin.canonical(Term::enc(inner.right, Term::name(b.key)))};
        }
    }
    throw std::logic_error("prune: " + to_string(m) + " and " + to_string(n) + " are not homologous");
  }
};

}  // namespace

Pruning prune(const Hedge& h0, const Message& m0, const Message& n0, std::size_t d,
              const CongruencePlugin& plugin) {
  Hedge h = canonicalize(h0, plugin);
  Message m = plugin.canonical(m0), n = plugin.canonical(n0);
  if (!synthesizes(h, m, n, plugin))
    throw std::logic_error("prune: " + to_string(m) + " and " + to_string(n) + " are not homologous");
  Pruner pruner{plugin, names_of(m)};
  collect_names(n, pruner.avoid);
  return pruner.run(h, m, n, d);
}

std::string to_string(const Hedge& h) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& [m, n] : h) {
    os << (first ? " " : "; ") << m << " <-> " << n;
    first = false;
  }
  os << (first ? "}" : " }");
  return os.str();
}

}  // namespace spi

#pragma once

#include <initializer_list>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spi/congruence.hpp"
#include "spi/term.hpp"

namespace spi {

using MessagePair = std::pair<Message, Message>;

/// A finite set of message pairs. Construct through make_hedge (or keep
/// entries canonical yourself) so set semantics hold modulo ≡.
class Hedge {
 public:
  using const_iterator = std::set<MessagePair>::const_iterator;

  Hedge() = default;
  explicit Hedge(std::set<MessagePair> pairs) : pairs_(std::move(pairs)) {}

  bool insert(const Message& m, const Message& n) { return pairs_.emplace(m, n).second; }
  bool contains(const Message& m, const Message& n) const { return pairs_.contains({m, n}); }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  const_iterator begin() const { return pairs_.begin(); }
  const_iterator end() const { return pairs_.end(); }
  const std::set<MessagePair>& pairs() const { return pairs_; }

  friend bool operator==(const Hedge&, const Hedge&) = default;
  friend auto operator<=>(const Hedge&, const Hedge&) = default;

 private:
  std::set<MessagePair> pairs_;
};

/// Canonicalizes every entry under the plugin.
Hedge make_hedge(std::initializer_list<MessagePair> pairs, const CongruencePlugin& plugin);
Hedge make_hedge(const std::vector<MessagePair>& pairs, const CongruencePlugin& plugin);
Hedge canonicalize(const Hedge& h, const CongruencePlugin& plugin);

/// {(n, n) | n ∈ names}.
Hedge identity_hedge(const std::set<Name>& names);
Hedge hedge_union(const Hedge& a, const Hedge& b);

/// n(h), n(π1(h)) and n(π2(h)).
std::set<Name> names_of(const Hedge& h);
std::set<Name> left_names(const Hedge& h);
std::set<Name> right_names(const Hedge& h);

bool is_consistent(const Hedge& h, const CongruencePlugin& plugin);
/// h ⊢ m ↔ n.
bool synthesizes(const Hedge& h, const Message& m, const Message& n, const CongruencePlugin& plugin);
/// A(h).
Hedge analysis(const Hedge& h, const CongruencePlugin& plugin);
/// I(h).
Hedge irreducibles(const Hedge& h, const CongruencePlugin& plugin);
std::size_t hedge_mcd(const Hedge& h);
Hedge invert(const Hedge& h);

class EnumerationOverflow : public std::runtime_error {
 public:
  explicit EnumerationOverflow(std::size_t cap)
      : std::runtime_error("homologous-pair enumeration exceeded the cap of " + std::to_string(cap) + " pairs"),
        cap_(cap) {}
  std::size_t cap() const { return cap_; }

 private:
  std::size_t cap_;
};

/// Every (M, N) with h ⊢k M ↔ N for some k ≤ d, modulo ≡ componentwise,
/// ordered by depth and then structurally. Levels are built on demand, so
/// a consumer that stops early never pays for the deeper ones.
///
/// When `interchangeable` is non-empty its names must each occur in h only
/// as identity entries; pairs that differ by a permutation of those names
/// are then reported once, as the member whose interchangeable names are
/// the smallest ones in order of first occurrence. Throws
/// EnumerationOverflow once more than `cap` pairs have been generated.
class HomologousEnumerator {
 public:
  HomologousEnumerator(const Hedge& h, std::size_t d, const CongruencePlugin& plugin, std::size_t cap,
                       const std::set<Name>& interchangeable = {});

  /// The i-th pair, or nullptr past the end.
  const MessagePair* at(std::size_t i);
  std::size_t generated() const { return generated_; }

 private:
  struct Item {
    MessagePair pair;
    std::size_t used;  // interchangeable names occurring: pool_[0, used)
  };

  bool build_next_level();
  void add(const Message& m, const Message& n);
  void add_merged(const Item& x, const Item& y, bool x_first);

  const CongruencePlugin& plugin_;
  std::size_t d_;
  std::size_t cap_;
  std::vector<Name> pool_;
  std::vector<MessagePair> keys_;  // name pairs outside the pool
  std::vector<std::vector<Item>> levels_;
  std::size_t built_ = 0;  // levels_[0, built_) are complete and sorted
  std::set<MessagePair> seen_;
  std::vector<MessagePair> out_;
  std::size_t generated_ = 0;
};

std::vector<MessagePair> enumerate_homologous(const Hedge& h, std::size_t d, const CongruencePlugin& plugin,
                                              std::size_t cap, const std::set<Name>& interchangeable = {});

struct Pruning {
  Hedge hedge;
  Message left;
  Message right;
};

/// pr_d(h, m, n). Requires h ⊢ m ↔ n; throws std::logic_error otherwise.
Pruning prune(const Hedge& h, const Message& m, const Message& n, std::size_t d, const CongruencePlugin& plugin);

std::string to_string(const Hedge& h);

}  // namespace spi

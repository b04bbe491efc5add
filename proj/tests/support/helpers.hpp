#pragma once

#include <string>
#include <utility>
#include <vector>

#include "spi/frontend.hpp"
#include "spi/hedge.hpp"

namespace spi::test {

inline Term T(const std::string& s) { return parse_term(s); }
inline Formula F(const std::string& s) { return parse_formula(s); }
inline Process P(const std::string& s) { return parse_process(s); }

inline Hedge H(const std::vector<std::pair<std::string, std::string>>& entries,
               const CongruencePlugin& plugin = default_congruence()) {
  std::vector<MessagePair> pairs;
  for (const auto& [l, r] : entries) pairs.emplace_back(T(l), T(r));
  return make_hedge(pairs, plugin);
}

}  // namespace spi::test

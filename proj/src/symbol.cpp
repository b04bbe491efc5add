#include "spi/symbol.hpp"

#include <mutex>
#include <unordered_set>

namespace spi::detail {

const std::string* intern(std::string_view text) {
  static std::mutex mutex;
  static std::unordered_set<std::string> table;
  std::lock_guard lock(mutex);
  return &*table.emplace(text).first;
}

}  // namespace spi::detail

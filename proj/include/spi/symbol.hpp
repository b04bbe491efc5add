#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

namespace spi {

namespace detail {
// Returns a stable pointer to the interned copy of `text`. Thread-safe.
const std::string* intern(std::string_view text);
}  // namespace detail

/// An interned identifier. Equality is pointer equality; ordering is the
/// lexicographic order of the spelling, so it does not depend on the order
/// in which symbols were first seen.
template <class Tag>
class Symbol {
 public:
  Symbol() : text_(empty_text()) {}
  explicit Symbol(std::string_view text) : text_(detail::intern(text)) {}

  const std::string& str() const { return *text_; }
  std::size_t hash() const { return std::hash<const void*>{}(text_); }

  friend bool operator==(const Symbol& a, const Symbol& b) { return a.text_ == b.text_; }
  friend std::strong_ordering operator<=>(const Symbol& a, const Symbol& b) {
    if (a.text_ == b.text_) return std::strong_ordering::equal;
    return a.text_->compare(*b.text_) < 0 ? std::strong_ordering::less
                                          : std::strong_ordering::greater;
  }
  friend std::ostream& operator<<(std::ostream& os, const Symbol& s) { return os << s.str(); }

 private:
  static const std::string* empty_text() {
    static const std::string* empty = detail::intern("");
    return empty;
  }
  const std::string* text_;
};

struct NameTag {};
struct VariableTag {};

using Name = Symbol<NameTag>;
using Variable = Symbol<VariableTag>;

/// Spellings that start with an underscore are reserved for canonical
/// binders and placeholders; the parser never produces them.
inline bool is_reserved(std::string_view text) { return !text.empty() && text.front() == '_'; }

}  // namespace spi

template <class Tag>
struct std::hash<spi::Symbol<Tag>> {
  std::size_t operator()(const spi::Symbol<Tag>& s) const noexcept { return s.hash(); }
};

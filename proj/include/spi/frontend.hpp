#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "spi/hedge.hpp"
#include "spi/process.hpp"

namespace spi {

struct SourceLocation {
  std::size_t line = 1;
  std::size_t column = 1;
};

/// Syntax or semantic error in a source text; what() is "line:column: message".
class ParseError : public std::runtime_error {
 public:
  ParseError(SourceLocation loc, const std::string& message);
  SourceLocation location() const { return loc_; }
  const std::string& message() const { return message_; }

 private:
  SourceLocation loc_;
  std::string message_;
};

struct Definition {
  std::string name;
  Process body;
  SourceLocation location;
};

struct CheckDirective {
  std::string left_text;
  std::string right_text;
  Process left;
  Process right;
  /// Entries as written; they are ground messages.
  std::vector<MessagePair> hedge;
  /// False when `with hedge` is omitted: the hedge is then the identity on
  /// the declared names.
  bool explicit_hedge = false;
  SourceLocation location;
};

struct SourceFile {
  std::optional<std::string> congruence;
  std::set<Name> names;
  std::vector<Definition> definitions;
  std::vector<CheckDirective> checks;

  const Definition* find(std::string_view name) const;
};

/// Parses a whole file. Definitions are expanded as macros at their use.
SourceFile parse(std::string_view text);

/// A single process or term. Lowercase identifiers not bound by an input
/// or let are names; no declarations are needed.
Process parse_process(std::string_view text);
Term parse_term(std::string_view text);
Formula parse_formula(std::string_view text);

/// Declared-name and closedness checks for one check directive: every free
/// name must be declared with `names` or occur in the hedge. Throws ParseError.
void validate_check(const SourceFile& file, const CheckDirective& check);

/// Hoists destructors out of output payloads and guards into lets.
Process desugar(const Process& p);

/// Inverse of parse_process on every AST it produces.
inline std::string pretty_print(const Process& p) { return to_string(p); }

}  // namespace spi

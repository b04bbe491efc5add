#include <cctype>
#include <map>
#include <sstream>

#include "spi/frontend.hpp"

namespace spi {

ParseError::ParseError(SourceLocation loc, const std::string& message)
    : std::runtime_error(std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " + message),
      loc_(loc),
      message_(message) {}

const Definition* SourceFile::find(std::string_view name) const {
  for (const auto& d : definitions)
    if (d.name == name) return &d;
  return nullptr;
}

namespace {

enum class Tok {
  Ident,
  Zero,
  LParen,
  RParen,
  Comma,
  Less,
  Greater,
  Dot,
  Bar,
  Plus,
  Bang,
  LBracket,
  RBracket,
  Equals,
  Semi,
  LBrace,
  RBrace,
  Tilde,
  Arrow,
  End
};

struct Token {
  Tok kind;
  std::string text;
  SourceLocation loc;
  std::size_t begin = 0;
  std::size_t end = 0;
};

std::string describe(const Token& t) {
  if (t.kind == Tok::End) return "end of input";
  return "'" + t.text + "'";
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.loc = loc_;
      t.begin = pos_;
      if (pos_ >= text_.size()) {
        t.kind = Tok::End;
        t.end = pos_;
        out.push_back(t);
        return out;
      }
      char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c))) {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
          advance();
        t.kind = Tok::Ident;
        t.text = std::string(text_.substr(start, pos_ - start));
      } else if (c == '<' && text_.substr(pos_, 3) == "<->") {
        advance(3);
        t.kind = Tok::Arrow;
        t.text = "<->";
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) advance();
        t.text = std::string(text_.substr(start, pos_ - start));
        if (t.text != "0") throw ParseError(t.loc, "unexpected number '" + t.text + "' (only 0 is a process)");
        t.kind = Tok::Zero;
      } else {
        static const std::map<char, Tok> single{
            {'(', Tok::LParen}, {')', Tok::RParen},   {',', Tok::Comma},    {'<', Tok::Less},
            {'>', Tok::Greater}, {'.', Tok::Dot},     {'|', Tok::Bar},      {'+', Tok::Plus},
            {'!', Tok::Bang},   {'[', Tok::LBracket}, {']', Tok::RBracket}, {'=', Tok::Equals},
            {';', Tok::Semi},   {'{', Tok::LBrace},   {'}', Tok::RBrace},   {'~', Tok::Tilde}};
        auto it = single.find(c);
        if (it == single.end()) throw ParseError(t.loc, std::string("unexpected character '") + c + "'");
        t.kind = it->second;
        t.text = std::string(1, c);
        advance();
      }
      t.end = pos_;
      out.push_back(std::move(t));
    }
  }

 private:
  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < text_.size(); ++i, ++pos_) {
      if (text_[pos_] == '\n') {
        ++loc_.line;
        loc_.column = 1;
      } else {
        ++loc_.column;
      }
    }
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '#' || (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/')) {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  SourceLocation loc_;
};

const std::set<std::string, std::less<>> kKeywords{"new",   "let",  "in",   "if",    "then",   "true",
                                                   "false", "not",  "and",  "enc",   "dec",    "fst",
                                                   "snd",   "check", "with", "hedge", "define", "names",
                                                   "congruence"};

bool is_keyword(std::string_view s) { return kKeywords.contains(s); }
bool is_upper(const std::string& s) { return !s.empty() && std::isupper(static_cast<unsigned char>(s[0])); }

class Parser {
 public:
  Parser(std::string_view text, const SourceFile* defs) : text_(text), toks_(Lexer(text).run()), defs_(defs) {}

  SourceFile file() {
    SourceFile out;
    defs_ = &out;
    while (!at(Tok::End)) directive(out);
    return out;
  }

  Process whole_process() {
    Process p = process();
    expect(Tok::End, "end of input");
    return p;
  }

  Term whole_term() {
    Term t = term();
    expect(Tok::End, "end of input");
    return t;
  }

  Formula whole_formula() {
    Formula f = formula();
    expect(Tok::End, "end of input");
    return f;
  }

 private:
  // --- token helpers ---
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_keyword(std::string_view kw) const { return at(Tok::Ident) && peek().text == kw; }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(peek().loc, "expected " + what + ", found " + describe(peek()));
  }
  const Token& expect(Tok k, const std::string& what) {
    if (!at(k)) fail(what);
    return next();
  }
  void expect_keyword(std::string_view kw) {
    if (!at_keyword(kw)) fail("'" + std::string(kw) + "'");
    next();
  }
  const Token& identifier(const std::string& what) {
    if (!at(Tok::Ident) || is_keyword(peek().text)) fail(what);
    return next();
  }
  const Token& lower_identifier(const std::string& what) {
    const Token& t = identifier(what);
    if (is_upper(t.text)) throw ParseError(t.loc, what + " must start with a lowercase letter, found '" + t.text + "'");
    return t;
  }

  // --- directives ---
  void directive(SourceFile& out) {
    const Token& head = peek();
    if (at_keyword("congruence")) {
      next();
      const Token& id = identifier("a congruence id");
      if (out.congruence) throw ParseError(head.loc, "duplicate congruence directive");
      out.congruence = id.text;
      expect(Tok::Semi, "';'");
    } else if (at_keyword("names")) {
      next();
      do {
        out.names.insert(Name(lower_identifier("a name").text));
      } while (at(Tok::Comma) && (next(), true));
      expect(Tok::Semi, "';'");
    } else if (at_keyword("define")) {
      next();
      const Token& id = identifier("a process name");
      if (!is_upper(id.text)) throw ParseError(id.loc, "process names must start with an uppercase letter");
      if (out.find(id.text)) throw ParseError(id.loc, "process '" + id.text + "' is already defined");
      expect(Tok::Equals, "'='");
      Process body = process();
      expect(Tok::Semi, "';'");
      out.definitions.push_back({id.text, std::move(body), id.loc});
    } else if (at_keyword("check")) {
      next();
      CheckDirective c;
      c.location = head.loc;
      std::size_t b = peek().begin;
      c.left = process();
      c.left_text = source(b);
      expect(Tok::Tilde, "'~'");
      b = peek().begin;
      c.right = process();
      c.right_text = source(b);
      if (at_keyword("with")) {
        next();
        expect_keyword("hedge");
        c.hedge = hedge();
        c.explicit_hedge = true;
      }
      expect(Tok::Semi, "';'");
      out.checks.push_back(std::move(c));
    } else {
      fail("'congruence', 'names', 'define' or 'check'");
    }
  }

  std::string source(std::size_t begin) const {
    std::size_t end = toks_[pos_ > 0 ? pos_ - 1 : 0].end;
    return std::string(text_.substr(begin, end - begin));
  }

  std::vector<MessagePair> hedge() {
    std::vector<MessagePair> out;
    expect(Tok::LBrace, "'{'");
    while (!at(Tok::RBrace)) {
      SourceLocation loc = peek().loc;
      Term m = term();
      expect(Tok::Arrow, "'<->'");
      Term n = term();
      if (!m.is_message() || !n.is_message())
        throw ParseError(loc, "hedge entries must be messages (names, pairs and encryptions)");
      out.emplace_back(m, n);
      if (!at(Tok::Semi)) break;
      next();
    }
    expect(Tok::RBrace, "'}'");
    return out;
  }

  // --- terms ---
  Term atom_term(const Token& id) {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (*it == id.text) return Term::var(Variable(id.text));
    return Term::name(Name(id.text));
  }

  Term term() {
    if (at(Tok::LParen)) {
      next();
      Term a = term();
      if (at(Tok::Comma)) {
        next();
        Term b = term();
        expect(Tok::RParen, "')'");
        return Term::pair(std::move(a), std::move(b));
      }
      expect(Tok::RParen, "',' or ')'");
      return a;
    }
    if (at(Tok::Ident)) {
      const std::string& s = peek().text;
      if (s == "enc" || s == "dec") {
        bool enc = s == "enc";
        next();
        expect(Tok::LParen, "'('");
        Term a = term();
        expect(Tok::Comma, "','");
        Term b = term();
        expect(Tok::RParen, "')'");
        return enc ? Term::enc(std::move(a), std::move(b)) : Term::dec(std::move(a), std::move(b));
      }
      if (s == "fst" || s == "snd") {
        bool first = s == "fst";
        next();
        expect(Tok::LParen, "'('");
        Term a = term();
        expect(Tok::RParen, "')'");
        return first ? Term::proj1(std::move(a)) : Term::proj2(std::move(a));
      }
    }
    return atom_term(lower_identifier("a term"));
  }

  // --- formulas ---
  Formula formula() {
    Formula left = unary_formula();
    if (at_keyword("and")) {
      next();
      return Formula::conj(std::move(left), formula());
    }
    return left;
  }

  Formula unary_formula() {
    if (at_keyword("not")) {
      next();
      return Formula::negate(unary_formula());
    }
    if (at_keyword("true")) {
      next();
      return Formula::tru();
    }
    if (at_keyword("false")) {
      next();
      return Formula::fls();
    }
    if (at(Tok::LBracket)) return match();
    if (at(Tok::LParen)) {
      next();
      Formula f = formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    fail("a formula");
  }

  Formula match() {
    expect(Tok::LBracket, "'['");
    Term a = term();
    expect(Tok::Equals, "'='");
    Term b = term();
    expect(Tok::RBracket, "']'");
    return Formula::eq(std::move(a), std::move(b));
  }

  // --- processes ---
  Process process() {
    Process left = parallel();
    if (at(Tok::Plus)) {
      next();
      return Process::sum(std::move(left), process());
    }
    return left;
  }

  Process parallel() {
    Process left = prefix();
    if (at(Tok::Bar)) {
      next();
      return Process::par(std::move(left), parallel());
    }
    return left;
  }

  // Optional ". P" after a prefix.
  Process continuation() {
    if (!at(Tok::Dot)) return Process::nil();
    next();
    return prefix();
  }

  Process bound(const std::string& var, auto&& body) {
    scope_.push_back(var);
    Process p = body();
    scope_.pop_back();
    return p;
  }

  Process prefix() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Zero: next(); return Process::nil();
      case Tok::Bang: next(); return Process::bang(prefix());
      case Tok::LParen: {
        next();
        Process p = process();
        expect(Tok::RParen, "')'");
        return p;
      }
      case Tok::LBracket: {
        Formula f = match();
        if (at(Tok::Dot)) next();
        return Process::guard(std::move(f), prefix());
      }
      case Tok::Ident: break;
      default: fail("a process");
    }
    if (t.text == "new") {
      next();
      std::vector<Name> names;
      do {
        names.emplace_back(lower_identifier("a name").text);
      } while (at(Tok::Comma) && (next(), true));
      expect(Tok::Dot, "'.'");
      Process body = prefix();
      for (auto it = names.rbegin(); it != names.rend(); ++it) body = Process::restrict(*it, std::move(body));
      return body;
    }
    if (t.text == "if") {
      next();
      Formula f = formula();
      expect_keyword("then");
      return Process::guard(std::move(f), prefix());
    }
    if (t.text == "let") {
      next();
      const Token& x = lower_identifier("a variable");
      expect(Tok::Equals, "'='");
      Term value = term();
      expect_keyword("in");
      std::string var = x.text;
      Process body = bound(var, [&] { return prefix(); });
      return Process::let_in(Variable(var), std::move(value), std::move(body));
    }
    if (is_upper(t.text)) {
      next();
      const Definition* d = defs_ ? defs_->find(t.text) : nullptr;
      if (!d) throw ParseError(t.loc, "unknown process '" + t.text + "' (definitions must precede their use)");
      return d->body;
    }
    const Token& chan_tok = lower_identifier("a process");
    Term chan = atom_term(chan_tok);
    if (at(Tok::LParen)) {
      next();
      std::string var = lower_identifier("a variable").text;
      expect(Tok::RParen, "')'");
      Process body = bound(var, [&] { return continuation(); });
      return Process::input(std::move(chan), Variable(var), std::move(body));
    }
    if (at(Tok::Less)) {
      next();
      Term payload = term();
      expect(Tok::Greater, "'>'");
      return Process::output(std::move(chan), std::move(payload), continuation());
    }
    fail("'(' or '<' after channel '" + chan_tok.text + "'");
  }

  std::string_view text_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const SourceFile* defs_;
  std::vector<std::string> scope_;
};

}  // namespace

SourceFile parse(std::string_view text) { return Parser(text, nullptr).file(); }

Process parse_process(std::string_view text) { return Parser(text, nullptr).whole_process(); }

Term parse_term(std::string_view text) { return Parser(text, nullptr).whole_term(); }

Formula parse_formula(std::string_view text) { return Parser(text, nullptr).whole_formula(); }

void validate_check(const SourceFile& file, const CheckDirective& check) {
  std::set<Name> known = file.names;
  for (const auto& [m, n] : check.hedge) {
    collect_names(m, known);
    collect_names(n, known);
  }
  for (const auto* p : {&check.left, &check.right}) {
    if (!is_closed(*p)) throw ParseError(check.location, "check target is not closed: " + to_string(*p));
    for (const auto& n : free_names(*p))
      if (!known.contains(n))
        throw ParseError(check.location,
                         "undeclared name '" + n.str() + "' (declare it with 'names' or mention it in the hedge)");
  }
}

}  // namespace spi

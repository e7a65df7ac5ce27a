#include "rwd/ariel/lexer.hpp"

#include <array>
#include <charconv>
#include <utility>

namespace rwd::ariel {
namespace {

constexpr std::array<std::pair<std::string_view, TokenKind>, 28> kKeywords{{
    {"TASK", TokenKind::KwTask},         {"IS", TokenKind::KwIs},
    {"NODE", TokenKind::KwNode},         {"TASKID", TokenKind::KwTaskid},
    {"WATCHDOG", TokenKind::KwWatchdog}, {"WATCHES", TokenKind::KwWatches},
    {"HEARTBEATS", TokenKind::KwHeartbeats}, {"EVERY", TokenKind::KwEvery},
    {"MS", TokenKind::KwMs},             {"ON", TokenKind::KwOn},
    {"ERROR", TokenKind::KwError},       {"WARN", TokenKind::KwWarn},
    {"BACKBONE", TokenKind::KwBackbone}, {"END", TokenKind::KwEnd},
    {"LOGICAL", TokenKind::KwLogical},   {"IF", TokenKind::KwIf},
    {"THEN", TokenKind::KwThen},         {"FI", TokenKind::KwFi},
    {"SEND", TokenKind::KwSend},         {"REMOVE", TokenKind::KwRemove},
    {"PHASE", TokenKind::KwPhase},       {"FROM", TokenKind::KwFrom},
    {"ERRORLIST", TokenKind::KwErrorlist}, {"INCLUDE", TokenKind::KwInclude},
    {"AND", TokenKind::KwAnd},           {"OR", TokenKind::KwOr},
    {"NOT", TokenKind::KwNot},           {"COUNT", TokenKind::KwCount},
}};

bool is_ident_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}
bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      if (at_end()) break;
      out.push_back(next());
    }
    return out;
  }

 private:
  bool at_end() const { return i_ >= src_.size(); }
  char peek(std::size_t ahead = 0) const {
    return i_ + ahead < src_.size() ? src_[i_ + ahead] : '\0';
  }

  void advance() {
    if (src_[i_] == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else if ((static_cast<unsigned char>(src_[i_]) & 0xC0) != 0x80) {
      ++pos_.column;  // count code points, not continuation bytes
    }
    ++i_;
  }

  void skip_space() {
    while (!at_end()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v')
        advance();
      else
        break;
    }
  }

  [[noreturn]] void fail(SourcePos at, const std::string& msg) const { throw CompileError(at, msg); }

  Token make(TokenKind kind, SourcePos at, std::string text = {}) {
    return Token{kind, std::move(text), 0, at};
  }

  Token next() {
    const SourcePos start = pos_;
    const char c = peek();
    switch (c) {
      case ',': advance(); return make(TokenKind::Comma, start, ",");
      case '[': advance(); return make(TokenKind::LBracket, start, "[");
      case ']': advance(); return make(TokenKind::RBracket, start, "]");
      case '(': advance(); return make(TokenKind::LParen, start, "(");
      case ')': advance(); return make(TokenKind::RParen, start, ")");
      case '=':
        advance();
        if (peek() == '=') {
          advance();
          return make(TokenKind::EqualEqual, start, "==");
        }
        return make(TokenKind::Assign, start, "=");
      case '>':
        advance();
        if (peek() != '=') fail(start, "unexpected character '>'");
        advance();
        return make(TokenKind::GreaterEqual, start, ">=");
      case '{': return macro(start);
      case '"': return string(start);
      default: break;
    }
    if (is_digit(c)) return integer(start);
    if (is_ident_start(c)) return keyword(start);
    if (static_cast<unsigned char>(c) >= 0x80) fail(start, "unexpected non-ASCII character");
    fail(start, std::string("unexpected character '") + c + "'");
  }

  Token macro(SourcePos start) {
    advance();  // {
    while (peek() == ' ' || peek() == '\t') advance();
    if (!is_ident_start(peek())) fail(start, "malformed macro reference");
    std::size_t begin = i_;
    while (is_ident_char(peek())) advance();
    std::string name(src_.substr(begin, i_ - begin));
    while (peek() == ' ' || peek() == '\t') advance();
    if (peek() != '}') fail(start, "unterminated macro reference '{" + name + "'");
    advance();
    return make(TokenKind::Macro, start, std::move(name));
  }

  Token string(SourcePos start) {
    advance();  // "
    std::string text;
    while (true) {
      if (at_end() || peek() == '\n') fail(start, "unterminated string literal");
      char c = peek();
      if (c == '"') {
        advance();
        break;
      }
      if (c == '\\') {
        advance();
        char e = peek();
        if (e != '"' && e != '\\') fail(pos_, "invalid escape in string literal");
        text.push_back(e);
        advance();
        continue;
      }
      text.push_back(c);
      advance();
    }
    return make(TokenKind::String, start, std::move(text));
  }

  Token integer(SourcePos start) {
    std::size_t begin = i_;
    while (is_digit(peek())) advance();
    if (is_ident_start(peek())) fail(start, "malformed number");
    std::string_view digits = src_.substr(begin, i_ - begin);
    Token t = make(TokenKind::Integer, start, std::string(digits));
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), t.value);
    if (ec != std::errc{}) fail(start, "integer literal out of range");
    return t;
  }

  Token keyword(SourcePos start) {
    std::size_t begin = i_;
    while (is_ident_char(peek())) advance();
    std::string_view word = src_.substr(begin, i_ - begin);
    for (const auto& [spelling, kind] : kKeywords) {
      if (spelling == word) return make(kind, start, std::string(word));
    }
    fail(start, "unknown word '" + std::string(word) + "' (macros must be written {NAME})");
  }

  std::string_view src_;
  std::size_t i_ = 0;
  SourcePos pos_;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

std::string_view token_kind_name(TokenKind kind) {
  for (const auto& [spelling, k] : kKeywords) {
    if (k == kind) return spelling;
  }
  switch (kind) {
    case TokenKind::Macro: return "macro";
    case TokenKind::Integer: return "integer";
    case TokenKind::String: return "string";
    case TokenKind::Comma: return "','";
    case TokenKind::Assign: return "'='";
    case TokenKind::EqualEqual: return "'=='";
    case TokenKind::GreaterEqual: return "'>='";
    case TokenKind::LBracket: return "'['";
    case TokenKind::RBracket: return "']'";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    default: return "token";
  }
}

}  // namespace rwd::ariel

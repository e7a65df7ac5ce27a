#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace rwd::ariel {

struct SourcePos {
  int line = 1;
  int column = 1;
};

enum class TokenKind {
  // keywords
  KwTask, KwIs, KwNode, KwTaskid, KwWatchdog, KwWatches, KwHeartbeats, KwEvery, KwMs,
  KwOn, KwError, KwWarn, KwBackbone, KwEnd, KwLogical, KwIf, KwThen, KwFi, KwSend,
  KwRemove, KwPhase, KwFrom, KwErrorlist, KwInclude, KwAnd, KwOr, KwNot, KwCount,
  // literals
  Macro,    // {NAME}
  Integer,  // 42
  String,   // "text"
  // punctuation
  Comma, Assign, EqualEqual, GreaterEqual, LBracket, RBracket, LParen, RParen,
};

struct Token {
  TokenKind kind;
  std::string text;        // macro name, string contents or keyword spelling
  std::int64_t value = 0;  // Integer only
  SourcePos pos;

  bool operator==(const Token&) const = default;
};

std::string_view token_kind_name(TokenKind kind);

}  // namespace rwd::ariel

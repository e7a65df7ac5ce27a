#pragma once

#include <string>

#include "rwd/ariel/token.hpp"
#include "rwd/error.hpp"

namespace rwd::ariel {

// Lexical, syntax and resolution errors. what() is "line:col: message".
class CompileError : public InputError {
 public:
  CompileError(SourcePos pos, const std::string& message)
      : InputError(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + message),
        pos_(pos),
        message_(message) {}

  SourcePos pos() const noexcept { return pos_; }
  const std::string& message() const noexcept { return message_; }

 private:
  SourcePos pos_;
  std::string message_;
};

}  // namespace rwd::ariel

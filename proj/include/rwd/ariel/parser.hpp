#pragma once

#include <span>
#include <string_view>

#include "rwd/ariel/ast.hpp"
#include "rwd/ariel/definitions.hpp"
#include "rwd/ariel/diagnostic.hpp"
#include "rwd/ariel/token.hpp"

namespace rwd::ariel {

// Builds and validates a program from a token stream. Every `{MACRO}` is
// resolved against `definitions`. Errors: syntax, unresolved macro, negative
// value, duplicate declaration, reference to an undeclared entity.
ArielProgram parse(std::span<const Token> tokens, const Definitions& definitions);

// tokenize + parse.
ArielProgram parse_source(std::string_view source, const Definitions& definitions);

// Renders a program as Ariel source that parses back to an equal AST.
std::string to_source(const ArielProgram& program);

}  // namespace rwd::ariel

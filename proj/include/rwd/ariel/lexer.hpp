#pragma once

#include <string_view>
#include <vector>

#include "rwd/ariel/diagnostic.hpp"
#include "rwd/ariel/token.hpp"

namespace rwd::ariel {

// Splits Ariel source into tokens. Throws CompileError on the first
// unrecognised character sequence.
std::vector<Token> tokenize(std::string_view source);

}  // namespace rwd::ariel

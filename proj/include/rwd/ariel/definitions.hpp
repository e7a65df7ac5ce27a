#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace rwd::ariel {

// Macro table that backs `INCLUDE "file"`: NAME -> integer.
using Definitions = std::map<std::string, std::int64_t, std::less<>>;

// Reads `NAME=INTEGER` lines. Blank lines and `#` comments are ignored.
// Throws InputError naming the offending line.
Definitions parse_definitions(std::string_view text);

}  // namespace rwd::ariel

#include "rwd/ariel/definitions.hpp"

#include <charconv>

#include "rwd/error.hpp"

namespace rwd::ariel {
namespace {

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

bool valid_name(std::string_view name) {
  if (name.empty()) return false;
  auto ok_start = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
  if (!ok_start(name.front())) return false;
  for (char c : name) {
    if (!ok_start(c) && !(c >= '0' && c <= '9')) return false;
  }
  return true;
}

}  // namespace

Definitions parse_definitions(std::string_view text) {
  Definitions defs;
  int lineno = 0;
  while (!text.empty()) {
    ++lineno;
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const std::string where = std::to_string(lineno) + ":1: ";
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw InputError(where + "expected NAME=INTEGER");
    std::string_view name = trim(line.substr(0, eq));
    std::string_view number = trim(line.substr(eq + 1));
    if (!valid_name(name)) throw InputError(where + "invalid macro name '" + std::string(name) + "'");

    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), value);
    if (ec != std::errc{} || ptr != number.data() + number.size())
      throw InputError(where + "invalid integer '" + std::string(number) + "'");
    if (!defs.emplace(std::string(name), value).second)
      throw InputError(where + "macro '" + std::string(name) + "' defined twice");
  }
  return defs;
}

}  // namespace rwd::ariel

#pragma once

#include <string>

namespace rwd {

// Whole-file read/write. Failures throw InputError naming the path.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace rwd

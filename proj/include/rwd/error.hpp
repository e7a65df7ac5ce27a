#pragma once

#include <stdexcept>
#include <string>

namespace rwd {

// Broad failure classes. They map one-to-one onto the C API status codes and
// the CLI exit codes.
enum class ErrorClass { Usage = 1, Input = 2, Analysis = 3 };

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), class_(cls) {}
  ErrorClass error_class() const noexcept { return class_; }

 private:
  ErrorClass class_;
};

// Malformed or inconsistent input: source text, definitions, scenarios, net files.
class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(ErrorClass::Input, what) {}
};

}  // namespace rwd

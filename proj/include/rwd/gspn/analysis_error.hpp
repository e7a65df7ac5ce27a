#pragma once

#include <string>

#include "rwd/error.hpp"

namespace rwd::gspn {

class AnalysisError : public Error {
 public:
  enum class Kind { StateSpaceExceeded, VanishingLoop, NotErgodic, SolverFailure };

  AnalysisError(Kind kind, const std::string& what) : Error(ErrorClass::Analysis, what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

const char* kind_name(AnalysisError::Kind kind);

}  // namespace rwd::gspn

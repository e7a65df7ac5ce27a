#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rwd/gspn/chain.hpp"

namespace rwd::gspn {

struct SolverOptions {
  double tolerance = 1e-10;
  std::size_t direct_limit = 2000;  // above this, Gauss-Seidel
  std::size_t max_sweeps = 200000;
};

// Throws AnalysisError::NotErgodic or AnalysisError::SolverFailure.
std::vector<double> steady_state(const TangibleChain& chain, const SolverOptions& options = {});

// max_j |(pi Q)_j|
double residual(const TangibleChain& chain, std::span<const double> pi);

// Indexed by TransitionId.
std::vector<double> throughputs(const TangibleChain& chain, std::span<const double> pi);

// True when every state reaches every other.
bool is_irreducible(const TangibleChain& chain);

}  // namespace rwd::gspn

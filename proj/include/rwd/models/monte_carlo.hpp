#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rwd/gspn/net.hpp"
#include "rwd/gspn/solver.hpp"
#include "rwd/models/rwd_model.hpp"

namespace rwd::models {

struct McOptions {
  double horizon = 5000;
  double warmup = 0;  // firings before this time are not counted
  std::size_t replications = 50;
  std::uint64_t seed = 1;
};

struct McEstimate {
  std::vector<double> mean;       // firings per unit time, by TransitionId
  std::vector<double> std_error;  // standard error of the mean over replications
  std::size_t replications = 0;
};

// Token-game simulation: exponential delays for timed transitions, weight
// proportional choice among enabled immediates.
McEstimate monte_carlo(const gspn::PetriNet& net, const McOptions& options);
McEstimate monte_carlo(const RwdParams& params, const McOptions& options);

struct ValidationRow {
  std::string transition;
  double analytic = 0;
  double estimate = 0;
  double std_error = 0;
  bool within = false;  // |estimate - analytic| <= z * std_error
};

// Analytic throughputs against simulation for every transition of the model.
std::vector<ValidationRow> validate(const RwdParams& params, const McOptions& mc, double z = 3.0,
                                    const gspn::SolverOptions& solver = {});
std::string validation_csv(const std::string& policy, const std::vector<ValidationRow>& rows, bool header);

}  // namespace rwd::models

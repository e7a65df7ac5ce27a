#pragma once

#include <span>
#include <string>
#include <vector>

#include "rwd/gspn/chain.hpp"
#include "rwd/gspn/solver.hpp"
#include "rwd/models/rwd_model.hpp"

namespace rwd::models {

struct RwdSolution {
  gspn::ReachabilityGraph graph;
  gspn::TangibleChain chain;
  std::vector<double> pi;
  std::vector<double> throughput;  // by TransitionId
};

RwdSolution solve(const RwdModel& model, const gspn::SolverOptions& options = {},
                  std::size_t state_cap = gspn::kDefaultStateCap);

struct SweepRow {
  VotingPolicy policy;
  int n_replicas = 0;
  double timeout_rate = 0;
  bool failed = false;
  std::string error;
  double activity = 0, ok = 0, timeout = 0, delayed = 0, faulty = 0, cycle = 0;
};

// Rows ordered by policy (as given), then by rate (as given). A failing row
// is marked and the sweep continues.
std::vector<SweepRow> sweep(const RwdParams& tmpl, std::span<const VotingPolicy> policies,
                            std::span<const double> timeout_rates, const gspn::SolverOptions& options = {},
                            std::size_t state_cap = gspn::kDefaultStateCap);

std::string sweep_csv(std::span<const SweepRow> rows);
// One block per policy, separated by two blank lines (gnuplot `index`).
std::string sweep_gnuplot(std::span<const SweepRow> rows);

}  // namespace rwd::models

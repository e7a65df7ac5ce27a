#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rwd/policy.hpp"
#include "rwd/sim/simulator.hpp"

namespace rwd::sim {

struct Statistic {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation; 0 for a single run
  std::size_t samples = 0;
};

struct AggregatedMetrics {
  std::string policy;
  std::vector<std::uint64_t> seeds;
  std::vector<SimMetrics> runs;
  Statistic alarms, false_alarms, mean_latency_ms, useful_cycles, heartbeats, notifications;
};

// Runs `replications` copies of the template with seeds seed, seed+1, ...
// under the given voting policy (the template's r-code is replaced).
AggregatedMetrics measure_policy(const SimScenario& scenario_template, const VotingPolicy& policy,
                                 std::size_t replications, std::uint64_t seed);

// Same, keeping the template's own r-code.
AggregatedMetrics measure(const SimScenario& scenario, std::size_t replications, std::uint64_t seed);

// policy,seed,alarms,false_alarms,mean_latency_ms,useful_cycles,heartbeats,notifications
std::string metrics_csv_header();
std::string metrics_csv_row(const std::string& policy, std::uint64_t seed, const SimMetrics& m);

}  // namespace rwd::sim

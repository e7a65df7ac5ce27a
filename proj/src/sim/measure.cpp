#include "rwd/sim/measure.hpp"

#include <cmath>
#include <cstdio>

#include "rwd/error.hpp"

namespace rwd::sim {
namespace {

template <class F>
Statistic summarize(const std::vector<SimMetrics>& runs, F value) {
  Statistic s;
  double sum = 0.0;
  std::vector<double> xs;
  for (const auto& r : runs) {
    double v = value(r);
    if (std::isnan(v)) continue;
    xs.push_back(v);
    sum += v;
  }
  s.samples = xs.size();
  if (xs.empty()) {
    s.mean = std::nan("");
    return s;
  }
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double v : xs) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

std::string number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

AggregatedMetrics measure(const SimScenario& scenario, std::size_t replications, std::uint64_t seed) {
  if (replications < 1) throw InputError("replications must be at least 1");
  AggregatedMetrics out;
  out.policy = scenario.label;
  for (std::size_t i = 0; i < replications; ++i) {
    SimScenario s = scenario;
    s.rng_seed = seed + i;
    out.seeds.push_back(s.rng_seed);
    out.runs.push_back(run(s).metrics);
  }
  out.alarms = summarize(out.runs, [](const SimMetrics& m) { return static_cast<double>(m.alarms.size()); });
  out.false_alarms = summarize(out.runs, [](const SimMetrics& m) { return static_cast<double>(m.false_alarms); });
  out.mean_latency_ms = summarize(out.runs, [](const SimMetrics& m) { return m.mean_latency_ms(); });
  out.useful_cycles = summarize(out.runs, [](const SimMetrics& m) { return static_cast<double>(m.useful_cycles); });
  out.heartbeats = summarize(out.runs, [](const SimMetrics& m) { return static_cast<double>(m.heartbeat_messages); });
  out.notifications = summarize(out.runs, [](const SimMetrics& m) { return static_cast<double>(m.notifications); });
  return out;
}

AggregatedMetrics measure_policy(const SimScenario& scenario_template, const VotingPolicy& policy,
                                 std::size_t replications, std::uint64_t seed) {
  return measure(with_policy(scenario_template, policy), replications, seed);
}

std::string metrics_csv_header() {
  return "policy,seed,alarms,false_alarms,mean_latency_ms,useful_cycles,heartbeats,notifications\n";
}

std::string metrics_csv_row(const std::string& policy, std::uint64_t seed, const SimMetrics& m) {
  std::string quoted = policy;
  if (quoted.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char c : policy) {
      if (c == '"') q += '"';
      q += c;
    }
    quoted = q + "\"";
  }
  return quoted + "," + std::to_string(seed) + "," + std::to_string(m.alarms.size()) + "," +
         std::to_string(m.false_alarms) + "," + number(m.mean_latency_ms()) + "," + std::to_string(m.useful_cycles) +
         "," + std::to_string(m.heartbeat_messages) + "," + std::to_string(m.notifications) + "\n";
}

}  // namespace rwd::sim

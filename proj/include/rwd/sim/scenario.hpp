#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rwd/ariel/config.hpp"
#include "rwd/ariel/policy.hpp"
#include "rwd/ariel/rcode.hpp"

namespace rwd::sim {

inline constexpr double kForever = std::numeric_limits<double>::infinity();

// Per-link message delay. Tasks on the same node always communicate with
// zero delay.
struct DelayModel {
  enum class Kind { Constant, Exponential };

  Kind kind = Kind::Constant;
  double mean_ms = 0.0;
};

struct FaultInjection {
  enum class Kind { Crash, Hang, DelayHeartbeats, NodeReset };

  double time_ms = 0.0;
  std::int64_t target = 0;      // task id, or node id for NodeReset
  Kind kind = Kind::Crash;
  double extra_ms = 0.0;        // DelayHeartbeats
  double duration_ms = kForever;  // Hang, DelayHeartbeats
};

struct SimScenario {
  ariel::DeploymentConfig deployment;
  ariel::RCode rcode;
  std::int64_t backbone_task = 0;
  std::optional<std::int64_t> heartbeat_logical;  // multicast target; default: the client's watchdogs
  double heartbeat_period_ms = 500.0;
  double timeout_ms = 1000.0;
  DelayModel delay;
  std::vector<FaultInjection> faults;
  double horizon_ms = 60000.0;
  std::uint64_t rng_seed = 1;

  std::int64_t expired_phase = 1;
  bool counter_persistent = true;
  double reboot_delay_ms = 0.0;

  // Used when the r-code is generated from a voting policy.
  std::int64_t alarm_message = 1;
  std::int64_t alarm_task = 0;

  std::string label = "custom";
};

// Throws InputError describing the first problem found.
void validate(const SimScenario& scenario);

// Watchdog replicas the scenario votes over: the heartbeat logical if set,
// otherwise the only declared logical.
ariel::AlarmRecipe alarm_recipe(const SimScenario& scenario);

// Replaces the scenario's r-code with the clause implementing `policy`.
SimScenario with_policy(SimScenario scenario, const VotingPolicy& policy);

// JSON scenario document. Relative "deployment"/"rcode" paths are resolved
// against `base_dir`. The schema is described in README.md.
SimScenario load_scenario(std::string_view json_text, const std::string& base_dir);

}  // namespace rwd::sim

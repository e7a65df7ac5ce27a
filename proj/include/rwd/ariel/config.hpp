#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rwd/ariel/ast.hpp"

namespace rwd::ariel {

struct TaskPlacement {
  std::int64_t task_id = 0;
  std::string name;
  std::int64_t node = 0;
  std::int64_t local_taskid = 0;

  bool operator==(const TaskPlacement&) const = default;
};

struct WatchdogBinding {
  std::int64_t watchdog_task = 0;
  std::vector<std::int64_t> watched;
  std::int64_t period_ms = 0;
  OnError on_error = OnError::WarnBackbone;

  bool operator==(const WatchdogBinding&) const = default;
};

struct LogicalMembership {
  std::int64_t logical_id = 0;
  std::vector<std::int64_t> members;

  bool operator==(const LogicalMembership&) const = default;
};

// What the runtime needs to instantiate a program: where tasks live, which
// watchdogs watch whom, and which tasks form each logical.
struct DeploymentConfig {
  std::vector<TaskPlacement> tasks;
  std::vector<WatchdogBinding> watchdogs;
  std::vector<LogicalMembership> logicals;

  const TaskPlacement* find_task(std::int64_t id) const;
  const WatchdogBinding* find_watchdog(std::int64_t id) const;
  const LogicalMembership* find_logical(std::int64_t id) const;

  bool operator==(const DeploymentConfig&) const = default;
};

DeploymentConfig emit_config(const ArielProgram& program);

// Key-value text form:
//
//   [task 21]
//   name = "W1"
//   node = 1
//   local_taskid = 21
//
//   [watchdog 21]
//   watches = 10
//   period_ms = 500
//   on_error = WARN_BACKBONE
//
//   [logical 30]
//   members = 21, 22, 23
std::string to_text(const DeploymentConfig& config);

// Throws InputError on malformed documents or dangling references.
DeploymentConfig parse_config(std::string_view text);

// Declarations-only Ariel source equivalent to `config`.
std::string to_ariel_source(const DeploymentConfig& config);

}  // namespace rwd::ariel

#pragma once

#include <cstdint>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rwd/sim/backbone.hpp"
#include "rwd/sim/scenario.hpp"

namespace rwd::sim {

struct Alarm {
  double time_ms = 0.0;
  std::size_t clause = 0;
  bool false_alarm = false;

  bool operator==(const Alarm&) const = default;
};

struct SimMetrics {
  std::vector<Alarm> alarms;
  std::size_t false_alarms = 0;
  std::vector<double> detection_latency_ms;  // one per detected application fault
  std::size_t undetected_faults = 0;
  std::uint64_t useful_cycles = 0;
  std::uint64_t heartbeat_messages = 0;
  std::uint64_t notifications = 0;

  // NaN when no application fault was detected.
  double mean_latency_ms() const;

  bool operator==(const SimMetrics&) const = default;
};

struct WatchdogState {
  std::int64_t watchdog_id = 0;
  std::set<std::int64_t> watched;
  double deadline_ms = 0.0;
  std::set<std::int64_t> received_this_cycle;
  bool counter_persistent = true;
  bool alive = true;

  std::uint64_t generation = 0;      // invalidates superseded deadline events
  bool missed_while_inactive = false;
};

struct SimResult {
  SimMetrics metrics;
  std::string trace;  // time<TAB>event<TAB>details lines
};

// One simulation run. The individual steps are public so tests can drive
// them directly; run() is the normal entry point.
class Simulation {
 public:
  explicit Simulation(SimScenario scenario);

  SimResult run();

  // Processes queued events with time <= until (bounded by the horizon).
  void run_until(double until_ms);

  void deliver_heartbeat(std::int64_t client);
  void watchdog_tick(std::int64_t watchdog);
  void backbone_on_notification(std::int64_t watchdog);

  double now() const { return now_; }
  const BackboneDB& backbone() const { return db_; }
  const WatchdogState& watchdog(std::int64_t id) const;
  const SimMetrics& metrics() const { return metrics_; }
  const std::string& trace() const { return trace_; }

  struct PendingMessage {
    double time_ms;
    std::int64_t destination;
    std::int64_t source;
  };
  std::vector<PendingMessage> pending_heartbeats() const;

 private:
  enum class EventKind { Fault, FaultEnd, Revive, Deadline, Notification, ActionMessage, Heartbeat, Cycle };

  struct Event {
    double time;
    int cls;
    std::uint64_t seq;
    EventKind kind;
    std::int64_t a = 0;
    std::int64_t b = 0;
    std::uint64_t generation = 0;

    bool operator>(const Event& o) const {
      if (time != o.time) return time > o.time;
      if (cls != o.cls) return cls > o.cls;
      return seq > o.seq;
    }
  };

  struct TaskState {
    std::int64_t node = 0;
    bool crashed = false;
    int hung = 0;
    bool down = false;
    double extra_heartbeat_delay = 0.0;
    bool operational() const { return !crashed && hung == 0 && !down; }
  };

  struct AppFault {
    std::int64_t client;
    double start;
    double end;
  };

  void push(double time, EventKind kind, std::int64_t a = 0, std::int64_t b = 0, std::uint64_t gen = 0);
  void dispatch(const Event& e);
  void apply_fault(std::size_t index);
  void end_fault(std::size_t index);
  void revive_node(std::int64_t node);
  void resume_watchdog(WatchdogState& wd);
  void arm(WatchdogState& wd, double deadline);
  double link_delay(std::int64_t from_task, std::int64_t to_task, std::mt19937_64& rng) const;
  bool operational(std::int64_t task) const;
  void log(const char* kind, const std::string& details);
  void finish();

  SimScenario sc_;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue_;
  std::uint64_t seq_ = 0;
  double now_ = 0.0;
  bool finished_ = false;

  std::map<std::int64_t, TaskState> tasks_;
  std::map<std::int64_t, WatchdogState> watchdogs_;
  std::set<std::int64_t> clients_;
  std::vector<AppFault> app_faults_;
  BackboneDB db_;
  SimMetrics metrics_;
  std::string trace_;

  std::mt19937_64 heartbeat_rng_;
  std::mt19937_64 notification_rng_;
  std::mt19937_64 action_rng_;
};

// Convenience: Simulation(scenario).run().
SimResult run(const SimScenario& scenario);

}  // namespace rwd::sim

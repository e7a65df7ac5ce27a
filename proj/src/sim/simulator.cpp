#include "rwd/sim/simulator.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace rwd::sim {
namespace {

// Equal-timestamp ordering: environment changes first, then watchdog
// timers, then the Backbone, then message arrival at watchdogs, then the
// application.
constexpr int kClassFault = 0;
constexpr int kClassWatchdog = 1;
constexpr int kClassBackbone = 2;
constexpr int kClassHeartbeat = 3;
constexpr int kClassApplication = 4;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::string fmt_time(double t) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3f", t);
  return buf;
}

}  // namespace

double SimMetrics::mean_latency_ms() const {
  if (detection_latency_ms.empty()) return std::nan("");
  return std::accumulate(detection_latency_ms.begin(), detection_latency_ms.end(), 0.0) /
         static_cast<double>(detection_latency_ms.size());
}

Simulation::Simulation(SimScenario scenario)
    : sc_(std::move(scenario)),
      heartbeat_rng_(splitmix64(sc_.rng_seed ^ 0x1)),
      notification_rng_(splitmix64(sc_.rng_seed ^ 0x2)),
      action_rng_(splitmix64(sc_.rng_seed ^ 0x3)) {
  validate(sc_);

  for (const auto& t : sc_.deployment.tasks) tasks_[t.task_id].node = t.node;
  for (const auto& w : sc_.deployment.watchdogs) {
    WatchdogState st;
    st.watchdog_id = w.watchdog_task;
    st.watched.insert(w.watched.begin(), w.watched.end());
    st.counter_persistent = sc_.counter_persistent;
    watchdogs_[w.watchdog_task] = st;
    clients_.insert(w.watched.begin(), w.watched.end());
  }

  for (auto& [id, wd] : watchdogs_) arm(wd, sc_.timeout_ms);
  for (auto c : clients_) push(sc_.heartbeat_period_ms, EventKind::Cycle, c);
  for (std::size_t i = 0; i < sc_.faults.size(); ++i) {
    const auto& f = sc_.faults[i];
    push(f.time_ms, EventKind::Fault, static_cast<std::int64_t>(i));
    const bool app_fault = f.kind == FaultInjection::Kind::Crash || f.kind == FaultInjection::Kind::Hang;
    if (app_fault && clients_.count(f.target)) {
      const double end = f.kind == FaultInjection::Kind::Crash ? kForever : f.time_ms + f.duration_ms;
      app_faults_.push_back({f.target, f.time_ms, end});
    }
  }
}

const WatchdogState& Simulation::watchdog(std::int64_t id) const {
  auto it = watchdogs_.find(id);
  if (it == watchdogs_.end()) throw std::out_of_range("no watchdog " + std::to_string(id));
  return it->second;
}

void Simulation::push(double time, EventKind kind, std::int64_t a, std::int64_t b, std::uint64_t gen) {
  int cls = kClassApplication;
  switch (kind) {
    case EventKind::Fault:
    case EventKind::FaultEnd:
    case EventKind::Revive: cls = kClassFault; break;
    case EventKind::Deadline: cls = kClassWatchdog; break;
    case EventKind::Notification:
    case EventKind::ActionMessage: cls = kClassBackbone; break;
    case EventKind::Heartbeat: cls = kClassHeartbeat; break;
    case EventKind::Cycle: cls = kClassApplication; break;
  }
  queue_.push(Event{time, cls, seq_++, kind, a, b, gen});
}

void Simulation::log(const char* kind, const std::string& details) {
  trace_ += fmt_time(now_);
  trace_ += '\t';
  trace_ += kind;
  trace_ += '\t';
  trace_ += details;
  trace_ += '\n';
}

bool Simulation::operational(std::int64_t task) const {
  auto it = tasks_.find(task);
  return it != tasks_.end() && it->second.operational();
}

double Simulation::link_delay(std::int64_t from_task, std::int64_t to_task, std::mt19937_64& rng) const {
  auto from = tasks_.find(from_task);
  auto to = tasks_.find(to_task);
  if (from != tasks_.end() && to != tasks_.end() && from->second.node == to->second.node) return 0.0;
  if (sc_.delay.kind == DelayModel::Kind::Constant) return sc_.delay.mean_ms;
  return -sc_.delay.mean_ms * std::log1p(-uniform01(rng));
}

void Simulation::arm(WatchdogState& wd, double deadline) {
  wd.deadline_ms = deadline;
  ++wd.generation;
  push(deadline, EventKind::Deadline, wd.watchdog_id, 0, wd.generation);
}

SimResult run(const SimScenario& scenario) { return Simulation(scenario).run(); }

SimResult Simulation::run() {
  run_until(sc_.horizon_ms);
  finish();
  return SimResult{metrics_, trace_};
}

void Simulation::run_until(double until_ms) {
  const double limit = std::min(until_ms, sc_.horizon_ms);
  while (!queue_.empty() && queue_.top().time <= limit) {
    Event e = queue_.top();
    queue_.pop();
    now_ = e.time;
    dispatch(e);
  }
  now_ = std::max(now_, limit);
}

void Simulation::finish() {
  if (finished_) return;
  finished_ = true;
  for (const auto& f : app_faults_) {
    bool found = false;
    for (const auto& a : metrics_.alarms) {
      if (a.time_ms >= f.start) {
        metrics_.detection_latency_ms.push_back(a.time_ms - f.start);
        found = true;
        break;
      }
    }
    if (!found) ++metrics_.undetected_faults;
  }
}

void Simulation::dispatch(const Event& e) {
  switch (e.kind) {
    case EventKind::Fault:
      apply_fault(static_cast<std::size_t>(e.a));
      break;
    case EventKind::FaultEnd:
      end_fault(static_cast<std::size_t>(e.a));
      break;
    case EventKind::Revive:
      revive_node(e.a);
      break;
    case EventKind::Cycle: {
      TaskState& t = tasks_.at(e.a);
      if (t.crashed) break;  // permanent
      if (t.operational()) {
        ++metrics_.useful_cycles;
        log("cycle", "task=" + std::to_string(e.a));
        deliver_heartbeat(e.a);
      }
      push(now_ + sc_.heartbeat_period_ms, EventKind::Cycle, e.a);
      break;
    }
    case EventKind::Heartbeat: {
      if (!operational(e.a)) {
        log("hb_drop", "to=" + std::to_string(e.a) + " from=" + std::to_string(e.b));
        break;
      }
      auto it = watchdogs_.find(e.a);
      if (it == watchdogs_.end() || !it->second.watched.count(e.b)) break;
      WatchdogState& wd = it->second;
      wd.received_this_cycle.insert(e.b);
      log("hb_recv", "wd=" + std::to_string(e.a) + " from=" + std::to_string(e.b));
      if (wd.received_this_cycle == wd.watched) {
        wd.received_this_cycle.clear();
        arm(wd, now_ + sc_.timeout_ms);
      }
      break;
    }
    case EventKind::Deadline: {
      WatchdogState& wd = watchdogs_.at(e.a);
      if (e.generation != wd.generation || !wd.alive) break;
      if (!operational(e.a)) {
        wd.missed_while_inactive = true;
        break;
      }
      watchdog_tick(e.a);
      break;
    }
    case EventKind::Notification:
      if (!operational(sc_.backbone_task)) {
        log("notify_drop", "wd=" + std::to_string(e.a));
        break;
      }
      backbone_on_notification(e.a);
      break;
    case EventKind::ActionMessage:
      if (tasks_.count(e.b) && !operational(e.b)) {
        log("msg_drop", "msg=" + std::to_string(e.a) + " to=" + std::to_string(e.b));
        break;
      }
      log("msg_deliver", "msg=" + std::to_string(e.a) + " to=" + std::to_string(e.b));
      break;
  }
}

void Simulation::deliver_heartbeat(std::int64_t client) {
  std::vector<std::int64_t> targets;
  if (sc_.heartbeat_logical) {
    targets = sc_.deployment.find_logical(*sc_.heartbeat_logical)->members;
  } else {
    for (const auto& [id, wd] : watchdogs_)
      if (wd.watched.count(client)) targets.push_back(id);
  }
  metrics_.heartbeat_messages += targets.size();
  const double extra = tasks_.at(client).extra_heartbeat_delay;
  std::size_t live = 0;
  for (auto dest : targets) {
    if (!operational(dest)) continue;
    ++live;
    const double when = now_ + link_delay(client, dest, heartbeat_rng_) + extra;
    push(when, EventKind::Heartbeat, dest, client);
  }
  log("hb_send", "from=" + std::to_string(client) + " sent=" + std::to_string(targets.size()) +
                     " live=" + std::to_string(live));
}

void Simulation::watchdog_tick(std::int64_t id) {
  WatchdogState& wd = watchdogs_.at(id);
  if (!wd.alive) return;
  ++metrics_.notifications;
  log("wd_expire", "wd=" + std::to_string(id));
  push(now_ + link_delay(id, sc_.backbone_task, notification_rng_), EventKind::Notification, id);
  wd.received_this_cycle.clear();
  wd.missed_while_inactive = false;
  arm(wd, now_ + sc_.timeout_ms);
}

void Simulation::backbone_on_notification(std::int64_t watchdog) {
  db_.notify(Entity{EntityKind::Task, watchdog}, sc_.expired_phase);
  log("notify", "wd=" + std::to_string(watchdog) + " phase=" + std::to_string(sc_.expired_phase));
  for (const auto& act : run_recovery(sc_.rcode, db_, sc_.deployment)) {
    if (act.kind == ExecutedAction::Kind::Send) {
      bool fault_active = false;
      for (const auto& f : app_faults_)
        if (now_ >= f.start && now_ < f.end) fault_active = true;
      metrics_.alarms.push_back({now_, act.clause, !fault_active});
      if (!fault_active) ++metrics_.false_alarms;
      log("alarm", "clause=" + std::to_string(act.clause) + " msg=" + std::to_string(act.message) +
                       " to=" + std::to_string(act.target_task) + (fault_active ? " real" : " false"));
      push(now_ + link_delay(sc_.backbone_task, act.target_task, action_rng_), EventKind::ActionMessage,
           act.message, act.target_task);
    } else {
      log("remove", std::string(act.entity.kind == EntityKind::Task ? "task=" : "logical=") +
                        std::to_string(act.entity.id));
    }
  }
}

void Simulation::apply_fault(std::size_t index) {
  const FaultInjection& f = sc_.faults[index];
  using K = FaultInjection::Kind;
  switch (f.kind) {
    case K::Crash: {
      tasks_.at(f.target).crashed = true;
      if (auto it = watchdogs_.find(f.target); it != watchdogs_.end()) it->second.alive = false;
      log("fault", "crash task=" + std::to_string(f.target));
      break;
    }
    case K::Hang:
      ++tasks_.at(f.target).hung;
      log("fault", "hang task=" + std::to_string(f.target));
      if (f.duration_ms != kForever) push(f.time_ms + f.duration_ms, EventKind::FaultEnd, static_cast<std::int64_t>(index));
      break;
    case K::DelayHeartbeats:
      tasks_.at(f.target).extra_heartbeat_delay += f.extra_ms;
      log("fault", "delay task=" + std::to_string(f.target) + " extra=" + fmt_time(f.extra_ms));
      if (f.duration_ms != kForever) push(f.time_ms + f.duration_ms, EventKind::FaultEnd, static_cast<std::int64_t>(index));
      break;
    case K::NodeReset:
      for (auto& [id, t] : tasks_)
        if (t.node == f.target) t.down = true;
      log("fault", "reset node=" + std::to_string(f.target));
      push(f.time_ms + sc_.reboot_delay_ms, EventKind::Revive, f.target);
      break;
  }
}

void Simulation::end_fault(std::size_t index) {
  const FaultInjection& f = sc_.faults[index];
  TaskState& t = tasks_.at(f.target);
  if (f.kind == FaultInjection::Kind::Hang) {
    --t.hung;
    log("fault_end", "hang task=" + std::to_string(f.target));
    if (auto it = watchdogs_.find(f.target); it != watchdogs_.end() && t.operational()) resume_watchdog(it->second);
  } else if (f.kind == FaultInjection::Kind::DelayHeartbeats) {
    t.extra_heartbeat_delay -= f.extra_ms;
    log("fault_end", "delay task=" + std::to_string(f.target));
  }
}

void Simulation::revive_node(std::int64_t node) {
  log("revive", "node=" + std::to_string(node));
  for (auto& [id, t] : tasks_) {
    if (t.node != node || !t.down) continue;
    t.down = false;
    auto it = watchdogs_.find(id);
    if (it == watchdogs_.end() || !t.operational()) continue;
    WatchdogState& wd = it->second;
    if (wd.counter_persistent) {
      resume_watchdog(wd);
    } else {
      wd.received_this_cycle.clear();
      wd.missed_while_inactive = false;
      arm(wd, now_ + sc_.timeout_ms);
    }
  }
}

void Simulation::resume_watchdog(WatchdogState& wd) {
  // The countdown kept running while the task was inactive.
  if (wd.missed_while_inactive) watchdog_tick(wd.watchdog_id);
}

std::vector<Simulation::PendingMessage> Simulation::pending_heartbeats() const {
  std::vector<PendingMessage> out;
  auto copy = queue_;
  while (!copy.empty()) {
    const Event& e = copy.top();
    if (e.kind == EventKind::Heartbeat) out.push_back({e.time, e.a, e.b});
    copy.pop();
  }
  return out;
}

}  // namespace rwd::sim

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rwd/error.hpp"
#include "rwd/io.hpp"
#include "rwd/sim/measure.hpp"
#include "rwd/sim/scenario.hpp"
#include "sim_fixtures.hpp"

using namespace rwd::sim;
using rwd::VotingPolicy;
using namespace fixtures;

namespace {

// (time, wd) for every wd_expire line of a trace.
std::vector<std::pair<double, std::int64_t>> expiries(const std::string& trace) {
  std::vector<std::pair<double, std::int64_t>> out;
  std::istringstream in(trace);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream f(line);
    std::string t, kind, details;
    std::getline(f, t, '\t');
    std::getline(f, kind, '\t');
    std::getline(f, details);
    if (kind == "wd_expire") out.emplace_back(std::stod(t), std::stoll(details.substr(3)));
  }
  return out;
}

std::size_t count_lines(const std::string& trace, const std::string& kind) {
  std::size_t n = 0;
  std::istringstream in(trace);
  std::string line;
  while (std::getline(in, line))
    if (line.find('\t' + kind + '\t') != std::string::npos) ++n;
  return n;
}

Entity task(std::int64_t id) { return Entity{EntityKind::Task, id}; }

}  // namespace

TEST_CASE("run: no faults, no notifications") {
  const auto r = run(scenario(VotingPolicy::any()));
  CHECK(r.metrics.alarms.empty());
  CHECK(r.metrics.notifications == 0);
  CHECK(r.metrics.false_alarms == 0);
  CHECK(r.metrics.useful_cycles == 120);       // cycles at 500, 1000, ..., 60000
  CHECK(r.metrics.heartbeat_messages == 360);  // three per cycle
}

TEST_CASE("run: client crash under OR, hand schedule") {
  // Last heartbeat at 9500 rearms every watchdog to 10500; the crash at
  // 10000 precedes that instant's cycle, so nothing rearms them again.
  auto s = scenario(VotingPolicy::any());
  s.faults.push_back(crash(10000, kClient));
  const auto m = run(s).metrics;
  REQUIRE(!m.alarms.empty());
  CHECK(m.alarms.front().time_ms == 10500.0);
  CHECK(m.alarms.front().time_ms > 10000.0);
  CHECK(m.alarms.front().time_ms <= 11000.0);
  REQUIRE(m.detection_latency_ms.size() == 1);
  CHECK(m.detection_latency_ms[0] == 500.0);
  CHECK(m.false_alarms == 0);
  CHECK(m.undetected_faults == 0);
}

TEST_CASE("run: client crash with remote delay") {
  // W21 shares node 1 with client and Backbone, so its expiry at 10500 is
  // reported with no delay; the remote ones arrive later.
  auto s = scenario(VotingPolicy::any());
  s.delay.mean_ms = 5;
  s.faults.push_back(crash(10000, kClient));
  const auto m = run(s).metrics;
  REQUIRE(!m.alarms.empty());
  CHECK(m.alarms.front().time_ms == 10500.0);
}

TEST_CASE("run: AND tolerates no watchdog crash") {
  auto s = scenario(VotingPolicy::all());
  s.faults.push_back(crash(5000, watchdog_id(0)));
  s.faults.push_back(crash(10000, kClient));
  const auto m = run(s).metrics;
  CHECK(m.alarms.empty());
  CHECK(m.notifications > 0);
  CHECK(m.undetected_faults == 1);
}

TEST_CASE("run: OR detects with two watchdogs crashed") {
  auto s = scenario(VotingPolicy::any());
  s.faults.push_back(crash(2000, watchdog_id(0)));
  s.faults.push_back(crash(3000, watchdog_id(1)));
  s.faults.push_back(crash(10000, kClient));
  const auto m = run(s).metrics;
  REQUIRE(!m.alarms.empty());
  CHECK(m.alarms.front().time_ms == 10500.0);
  CHECK(m.false_alarms == 0);
}

TEST_CASE("deliver_heartbeat: multicast with constant delay") {
  auto s = scenario(VotingPolicy::any(), {2, 3, 4});
  s.delay.mean_ms = 1;
  Simulation sim(s);
  sim.run_until(100);
  sim.deliver_heartbeat(kClient);
  const auto pending = sim.pending_heartbeats();
  REQUIRE(pending.size() == 3);
  for (const auto& p : pending) {
    CHECK(p.time_ms == 101.0);
    CHECK(p.source == kClient);
  }
  CHECK(sim.metrics().heartbeat_messages == 3);
}

TEST_CASE("deliver_heartbeat: crashed member is skipped but counted") {
  auto s = scenario(VotingPolicy::any(), {2, 3, 4});
  s.delay.mean_ms = 1;
  s.faults.push_back(crash(50, watchdog_id(1)));
  Simulation sim(s);
  sim.run_until(100);
  sim.deliver_heartbeat(kClient);
  const auto pending = sim.pending_heartbeats();
  REQUIRE(pending.size() == 2);
  for (const auto& p : pending) CHECK(p.destination != watchdog_id(1));
  CHECK(sim.metrics().heartbeat_messages == 3);
}

TEST_CASE("deliver_heartbeat: same-node member has zero delay") {
  auto s = scenario(VotingPolicy::any(), {1, 2, 3});
  s.delay.mean_ms = 7;
  Simulation sim(s);
  sim.run_until(100);
  sim.deliver_heartbeat(kClient);
  for (const auto& p : sim.pending_heartbeats())
    CHECK(p.time_ms == (p.destination == watchdog_id(0) ? 100.0 : 107.0));
}

TEST_CASE("deliver_heartbeat: exponential delays are positive and seeded") {
  auto s = scenario(VotingPolicy::any(), {2, 3, 4});
  s.delay.kind = DelayModel::Kind::Exponential;
  s.delay.mean_ms = 10;
  auto times = [&](std::uint64_t seed) {
    s.rng_seed = seed;
    Simulation sim(s);
    sim.run_until(100);
    sim.deliver_heartbeat(kClient);
    std::vector<double> out;
    for (const auto& p : sim.pending_heartbeats()) {
      CHECK(p.time_ms > 100.0);
      out.push_back(p.time_ms);
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  CHECK(times(3) == times(3));
  CHECK(times(3) != times(4));
}

TEST_CASE("watchdog_tick: direct call notifies and rearms") {
  Simulation sim(scenario(VotingPolicy::all()));
  sim.run_until(100);
  sim.watchdog_tick(watchdog_id(1));
  CHECK(sim.metrics().notifications == 1);
  const auto& wd = sim.watchdog(watchdog_id(1));
  CHECK(wd.deadline_ms == 1100.0);
  CHECK(wd.received_this_cycle.empty());
}

TEST_CASE("watchdog_tick: silent client gives an arithmetic schedule") {
  auto s = scenario(VotingPolicy::all(), {1, 2, 3}, 5500);
  s.faults.push_back(crash(0, kClient));
  const auto r = run(s);
  const auto exp = expiries(r.trace);
  CHECK(exp.size() == 15);
  for (std::size_t i = 0; i < 3; ++i) {
    std::vector<double> times;
    for (const auto& [t, wd] : exp)
      if (wd == watchdog_id(i)) times.push_back(t);
    CHECK(times == std::vector<double>{1000, 2000, 3000, 4000, 5000});
  }
  CHECK(r.metrics.notifications == 15);
}

TEST_CASE("watchdog_tick: dead watchdog stays silent") {
  auto s = scenario(VotingPolicy::any(), {1, 2, 3}, 5500);
  s.faults.push_back(crash(0, kClient));
  s.faults.push_back(crash(0, watchdog_id(2)));
  const auto exp = expiries(run(s).trace);
  CHECK(exp.size() == 10);
  for (const auto& e : exp) CHECK(e.second != watchdog_id(2));
}

TEST_CASE("node reset: persistent counter keeps the countdown") {
  // Heartbeat at 1000 arms W22 to 2000. Node 2 resets at 1500 and comes
  // back at 1800.
  auto base = scenario(VotingPolicy::any());
  base.reboot_delay_ms = 300;
  base.faults.push_back(node_reset(1500, 2));

  auto persistent = base;
  persistent.counter_persistent = true;
  Simulation a(persistent);
  a.run_until(1900);
  CHECK(a.watchdog(22).deadline_ms == 2000.0);

  auto volatile_counter = base;
  volatile_counter.counter_persistent = false;
  Simulation b(volatile_counter);
  b.run_until(1900);
  CHECK(b.watchdog(22).deadline_ms == 2800.0);
}

TEST_CASE("node reset: expiry during the outage is reported on revival") {
  auto s = scenario(VotingPolicy::any());
  s.reboot_delay_ms = 2000;
  s.faults.push_back(node_reset(1500, 2));
  Simulation sim(s);
  sim.run_until(3400);
  CHECK(sim.metrics().notifications == 0);
  sim.run_until(3500);
  CHECK(sim.metrics().notifications == 1);
  CHECK(sim.watchdog(22).deadline_ms == 4500.0);
}

TEST_CASE("backbone_on_notification: AND guard") {
  Simulation sim(scenario(VotingPolicy::all()));
  sim.backbone_on_notification(21);
  CHECK(sim.metrics().alarms.empty());
  CHECK(sim.backbone().in_errorlist(task(21)));
  sim.backbone_on_notification(22);
  sim.backbone_on_notification(23);
  CHECK(sim.metrics().alarms.size() == 1);
  CHECK(sim.backbone().errorlist().empty());
  CHECK(sim.backbone().phases().empty());
  CHECK(sim.trace().find("\talarm\t") < sim.trace().find("\tremove\tlogical=30"));
}

TEST_CASE("recovery interpreter: database examples") {
  const auto s = scenario(VotingPolicy::all());
  BackboneDB db;
  for (std::int64_t w : {21, 22, 23}) db.notify(task(w), 1);
  auto acts = run_recovery(s.rcode, db, s.deployment);
  REQUIRE(acts.size() == 2);
  CHECK(acts[0].kind == ExecutedAction::Kind::Send);
  CHECK(acts[1].kind == ExecutedAction::Kind::Remove);
  CHECK(acts[1].entity == Entity{EntityKind::Logical, kLogical});
  for (std::int64_t w : {21, 22, 23}) CHECK(!db.phase(task(w)));

  BackboneDB one;
  one.notify(task(21), 1);
  CHECK(run_recovery(s.rcode, one, s.deployment).empty());
  CHECK(one.in_errorlist(task(21)));

  const auto two = scenario(VotingPolicy::k_out_of_n(2, 3));
  BackboneDB pair;
  pair.notify(task(21), 1);
  pair.notify(task(23), 1);
  acts = run_recovery(two.rcode, pair, two.deployment);
  REQUIRE(!acts.empty());
  CHECK(acts[0].kind == ExecutedAction::Kind::Send);
}

TEST_CASE("backbone database: remove semantics") {
  const auto dep = deployment({1, 2, 3});
  BackboneDB db;
  db.notify(task(21), 1);
  db.notify(task(10), 4);
  CHECK(db.phase(task(10)) == 4);
  db.remove(task(10), dep);
  CHECK(!db.phase(task(10)));
  CHECK(!db.in_errorlist(task(10)));
  CHECK(db.in_errorlist(task(21)));
}

TEST_CASE("measure: one replication equals a single run") {
  auto s = scenario(VotingPolicy::any());
  s.delay.kind = DelayModel::Kind::Exponential;
  s.delay.mean_ms = 50;
  s.faults.push_back(crash(10000, kClient));
  const auto agg = measure_policy(s, VotingPolicy::any(), 1, 9);
  s.rng_seed = 9;
  REQUIRE(agg.runs.size() == 1);
  CHECK(agg.runs[0] == run(s).metrics);
  CHECK(agg.alarms.stddev == 0.0);
  CHECK(agg.policy == "OR");
  CHECK(agg.seeds == std::vector<std::uint64_t>{9});
  CHECK_THROWS_AS(measure(s, 0, 1), rwd::InputError);
}

TEST_CASE("measure: OR raises at least as many false alarms as AND") {
  auto s = scenario(VotingPolicy::any(), {1, 2, 3}, 20000);
  s.delay.kind = DelayModel::Kind::Exponential;
  s.delay.mean_ms = 150;
  const auto orp = measure_policy(s, VotingPolicy::any(), 10, 1);
  const auto andp = measure_policy(s, VotingPolicy::all(), 10, 1);
  CHECK(orp.false_alarms.mean >= andp.false_alarms.mean);
  CHECK(orp.false_alarms.mean > 0.0);
}

TEST_CASE("metrics csv") {
  CHECK(metrics_csv_header() == "policy,seed,alarms,false_alarms,mean_latency_ms,useful_cycles,heartbeats,notifications\n");
  SimMetrics m;
  m.alarms = {{10500, 0, false}, {11000, 0, true}};
  m.false_alarms = 1;
  m.detection_latency_ms = {500};
  m.useful_cycles = 20;
  m.heartbeat_messages = 60;
  m.notifications = 4;
  CHECK(metrics_csv_row("2oo3", 7, m) == "2oo3,7,2,1,500.000,20,60,4\n");
  CHECK(metrics_csv_row("a,b", 1, SimMetrics{}) == "\"a,b\",1,0,0,nan,0,0,0\n");
}

TEST_CASE("scenario files load") {
  const std::string dir = std::string(RWD_DATA_DIR) + "/scenarios";
  for (const char* name : {"no_fault", "client_crash_or", "watchdog_crash_and", "delayed_heartbeats", "node_reset"}) {
    CAPTURE(name);
    const auto s = load_scenario(rwd::read_file(dir + "/" + name + ".json"), dir);
    CHECK_NOTHROW(validate(s));
    CHECK(s.backbone_task == 1);
  }
  const auto s = load_scenario(rwd::read_file(dir + "/client_crash_or.json"), dir);
  CHECK(s.label == "OR");
  CHECK(s.timeout_ms == 1000.0);
  CHECK(s.faults.size() == 3);
  const auto m = run(s).metrics;
  CHECK(!m.alarms.empty());
  CHECK(m.false_alarms == 0);
}

TEST_CASE("scenario documents: errors") {
  const std::string dir = std::string(RWD_DATA_DIR) + "/scenarios";
  auto fails = [&](const std::string& json, const std::string& needle) {
    CAPTURE(json);
    try {
      auto s = load_scenario(json, dir);
      validate(s);
      FAIL("accepted");
    } catch (const rwd::InputError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  const std::string head = R"({"deployment": "watchdogs.cfg", "backbone": 1, "heartbeat_logical": 30, "horizon_ms": 1000, )";
  fails("{", "malformed JSON");
  fails("[]", "top level");
  fails(head + R"("policy": "OR", "colour": 1})", "unknown key 'colour'");
  fails(head + R"("policy": "OR", "rcode": "and_strategy.rcode"})", "exactly one");
  fails(head + R"("policy": "OR", "faults": [{"time_ms": 5000, "target": 10, "kind": "crash"}]})", "outside");
  fails(head + R"("policy": "OR", "faults": [{"time_ms": 50, "target": 99, "kind": "crash"}]})", "undeployed task 99");
  fails(head + R"("policy": "OR", "faults": [{"time_ms": 50, "target": 9, "kind": "node_reset"}]})", "unknown node 9");
  fails(head + R"("policy": "OR", "faults": [{"time_ms": 50, "target": 10, "kind": "melt"}]})", "unknown fault kind");
  fails(head + R"("policy": "OR", "timeout_ms": 0})", "timeout_ms");
  fails(head + R"("policy": "OR", "delay": {"model": "pareto"}})", "unknown delay model");
  fails(R"({"deployment": "watchdogs.cfg", "backbone": 77, "horizon_ms": 1000, "policy": "OR", "heartbeat_logical": 30})",
        "backbone task 77");
  fails(R"({"deployment": "missing.cfg", "backbone": 1, "horizon_ms": 1000, "policy": "OR"})", "missing.cfg");
}

TEST_CASE("validate: r-code must name deployed entities") {
  auto s = scenario(VotingPolicy::any());
  for (auto& ins : s.rcode.code)
    if (ins.op == rwd::ariel::Opcode::ActRemove) ins.operands = {0, 99, 0};
  CHECK_THROWS_WITH_AS(validate(s), doctest::Contains("undeployed task 99"), rwd::InputError);
}

TEST_CASE("run: trace lines are well formed") {
  auto s = scenario(VotingPolicy::any(), {1, 2, 3}, 12000);
  s.faults.push_back(crash(10000, kClient));
  const auto r = run(s);
  std::istringstream in(r.trace);
  std::string line;
  double last = 0;
  while (std::getline(in, line)) {
    const auto tab1 = line.find('\t');
    REQUIRE(tab1 != std::string::npos);
    REQUIRE(line.find('\t', tab1 + 1) != std::string::npos);
    const double t = std::stod(line.substr(0, tab1));
    CHECK(t >= last);
    last = t;
  }
  CHECK(count_lines(r.trace, "alarm") == r.metrics.alarms.size());
  CHECK(count_lines(r.trace, "fault") == 1);
}

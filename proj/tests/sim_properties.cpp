#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "rwd/sim/measure.hpp"
#include "sim_fixtures.hpp"

using namespace rwd::sim;
using rwd::VotingPolicy;
using namespace fixtures;

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
int pick(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// Random mix of every fault kind against the three-watchdog deployment.
std::vector<FaultInjection> random_faults(Rng& rng, double horizon) {
  std::vector<FaultInjection> out;
  const int n = pick(rng, 0, 6);
  for (int i = 0; i < n; ++i) {
    FaultInjection f;
    f.time_ms = std::round(uniform(rng, 0, horizon));
    switch (pick(rng, 0, 3)) {
      case 0:
        f.kind = FaultInjection::Kind::Crash;
        f.target = pick(rng, 0, 3) == 0 ? kClient : watchdog_id(pick(rng, 0, 2));
        break;
      case 1:
        f.kind = FaultInjection::Kind::Hang;
        f.target = pick(rng, 0, 1) ? kClient : watchdog_id(pick(rng, 0, 2));
        f.duration_ms = uniform(rng, 100, 3000);
        break;
      case 2:
        f.kind = FaultInjection::Kind::DelayHeartbeats;
        f.target = kClient;
        f.extra_ms = uniform(rng, 0, 1500);
        f.duration_ms = uniform(rng, 100, 5000);
        break;
      default:
        f.kind = FaultInjection::Kind::NodeReset;
        f.target = pick(rng, 1, 3);
        break;
    }
    out.push_back(f);
  }
  return out;
}

SimScenario random_scenario(Rng& rng, const VotingPolicy& policy) {
  auto s = scenario(policy, {1, 2, 3}, 20000);
  s.delay.kind = pick(rng, 0, 1) ? DelayModel::Kind::Exponential : DelayModel::Kind::Constant;
  s.delay.mean_ms = uniform(rng, 0, 200);
  s.reboot_delay_ms = uniform(rng, 0, 1000);
  s.counter_persistent = pick(rng, 0, 1) == 1;
  s.rng_seed = rng();
  s.faults = random_faults(rng, s.horizon_ms);
  return s;
}

bool subset(const std::vector<double>& a, const std::vector<double>& b) {
  const std::multiset<double> sb(b.begin(), b.end());
  const std::set<double> sa(a.begin(), a.end());
  return std::all_of(sa.begin(), sa.end(), [&](double t) { return sb.count(t) > 0; });
}

}  // namespace

TEST_CASE("property: identical inputs give identical traces") {
  Rng rng(1);
  for (int trial = 0; trial < 40; ++trial) {
    const auto s = random_scenario(rng, VotingPolicy::k_out_of_n(2, 3));
    const auto a = run(s);
    const auto b = run(s);
    CHECK(a.trace == b.trace);
    CHECK(a.metrics == b.metrics);
    CHECK(a.metrics.false_alarms <= a.metrics.alarms.size());
    for (double l : a.metrics.detection_latency_ms) CHECK(l >= 0.0);
  }
}

TEST_CASE("property: a watchdog notifies iff some watched client is silent") {
  for (std::size_t k = 1; k <= 3; ++k) {
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
      SimScenario s;
      s.deployment = deployment({2}, 1, k);
      s.backbone_task = kBackbone;
      s.heartbeat_period_ms = 500;
      s.timeout_ms = 1000;
      s.horizon_ms = 6000;
      s.delay.mean_ms = 3;
      for (std::size_t c = 0; c < k; ++c)
        if (mask & (1u << c)) s.faults.push_back(crash(0, kClient + static_cast<std::int64_t>(c)));
      s = with_policy(s, VotingPolicy::any());
      const auto m = run(s).metrics;
      CAPTURE(k);
      CAPTURE(mask);
      CHECK((m.notifications > 0) == (mask != 0));
    }
  }
}

TEST_CASE("property: alarms are nested across voting policies") {
  Rng rng(2);
  for (int trial = 0; trial < 60; ++trial) {
    auto s = random_scenario(rng, VotingPolicy::any());
    const auto or_run = run(s);
    const auto two_run = run(with_policy(s, VotingPolicy::k_out_of_n(2, 3)));
    const auto and_run = run(with_policy(s, VotingPolicy::all()));
    // the notification stream does not depend on the policy
    CHECK(or_run.metrics.notifications == and_run.metrics.notifications);
    const auto t_or = alarm_times(or_run.metrics);
    const auto t_two = alarm_times(two_run.metrics);
    const auto t_and = alarm_times(and_run.metrics);
    CHECK(subset(t_and, t_or));
    CHECK(subset(t_two, t_or));
    CHECK(t_and.size() <= t_two.size());
    CHECK(t_two.size() <= t_or.size());
  }
}

TEST_CASE("property: shorter heartbeat periods detect no later and send no fewer heartbeats") {
  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const double crash_at = std::round(uniform(rng, 2000, 12000));
    double prev_latency = 0;
    std::uint64_t prev_beats = 0;
    for (double period : {1600.0, 800.0, 400.0, 200.0, 100.0}) {
      auto s = scenario(VotingPolicy::any(), {1, 2, 3}, 20000);
      s.heartbeat_period_ms = period;
      s.timeout_ms = 2 * period;
      s.faults.push_back(crash(crash_at, kClient));
      const auto m = run(s).metrics;
      REQUIRE(m.detection_latency_ms.size() == 1);
      if (period < 1600.0) {
        CHECK(m.mean_latency_ms() <= prev_latency);
        CHECK(m.heartbeat_messages >= prev_beats);
      }
      prev_latency = m.mean_latency_ms();
      prev_beats = m.heartbeat_messages;

      auto fixed = s;
      fixed.timeout_ms = 3200;
      auto half = fixed;
      half.heartbeat_period_ms = period / 2;
      CHECK(run(half).metrics.heartbeat_messages >= run(fixed).metrics.heartbeat_messages);
    }
  }
}

TEST_CASE("property: same-node watchdogs detect sooner than remote ones") {
  Rng rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const double crash_at = std::round(uniform(rng, 2000, 12000));
    const double delay = uniform(rng, 1, 200);
    auto latency = [&](std::int64_t wd_node) {
      SimScenario s;
      s.deployment = deployment({wd_node});
      s.backbone_task = kBackbone;
      s.heartbeat_logical = kLogical;
      s.horizon_ms = 20000;
      s.delay.mean_ms = delay;
      s.faults.push_back(crash(crash_at, kClient));
      s = with_policy(s, VotingPolicy::any());
      const auto m = run(s).metrics;
      REQUIRE(m.detection_latency_ms.size() == 1);
      return m.mean_latency_ms();
    };
    CHECK(latency(1) < latency(2));
  }
}

TEST_CASE("property: one watchdog crash leaves OR and 2oo3 outcomes unchanged") {
  Rng rng(5);
  for (const auto& policy : {VotingPolicy::any(), VotingPolicy::k_out_of_n(2, 3)}) {
    for (int trial = 0; trial < 30; ++trial) {
      const double client_crash = std::round(uniform(rng, 3000, 15000));
      auto s = scenario(policy, {1, 2, 3}, 20000);
      s.faults.push_back(crash(client_crash, kClient));
      auto degraded = s;
      degraded.faults.push_back(crash(std::round(uniform(rng, 0, client_crash)), watchdog_id(pick(rng, 0, 2))));
      const auto a = run(s).metrics;
      const auto b = run(degraded).metrics;
      CAPTURE(policy.label(3));
      CHECK(a.undetected_faults == 0);
      CHECK(b.undetected_faults == a.undetected_faults);
      CHECK(b.false_alarms == a.false_alarms);
      REQUIRE(!b.alarms.empty());
      CHECK(b.detection_latency_ms == a.detection_latency_ms);
    }
  }
}

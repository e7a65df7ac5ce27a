#include "rwd/models/rwd_model.hpp"

#include <cmath>

#include "rwd/gspn/net_io.hpp"

namespace rwd::models {

using gspn::ServerSemantics;

void RwdParams::validate() const {
  if (n_replicas < 1) throw InputError("n_replicas must be at least 1");
  auto positive = [](double v, const char* what) {
    if (!(v > 0) || !std::isfinite(v)) throw InputError(std::string(what) + " must be positive");
  };
  positive(rate_activity, "rate_activity");
  positive(rate_fault, "rate_fault");
  positive(rate_cycle, "rate_cycle");
  positive(rate_reboot, "rate_reboot");
  positive(rate_timeout, "rate_timeout");
  if (policy.kind == VotingPolicy::Kind::KOutOfN) {
    if (policy.k < 1 || policy.k > n_replicas)
      throw InputError("k must lie between 1 and n_replicas");
    if (policy.of_n != 0 && policy.of_n != n_replicas)
      throw InputError(policy.label() + " does not match n_replicas = " + std::to_string(n_replicas));
  }
}

RwdModel build(const RwdParams& params) {
  params.validate();
  const int n = params.n_replicas;
  const int k = params.threshold();

  RwdModel model{params, {}, {}};
  gspn::PetriNet& net = model.net;
  RoleMap& r = model.roles;

  r.ap1 = net.add_place("Ap1", 1);
  r.apk = net.add_place("ApK", 0);
  r.ap2 = net.add_place("Ap2", 0);
  r.rst = net.add_place("Rst", 0);
  r.wd1 = net.add_place("Wd1", n);
  r.wd2 = net.add_place("Wd2", 0);
  r.wd3 = net.add_place("Wd3", 0);

  r.activity = net.add_timed("activity", params.rate_activity, ServerSemantics::Single);
  net.add_input(r.ap1, r.activity);
  net.add_output(r.activity, r.apk);

  // A kick re-arms every armed and every expired replica, but only while
  // fewer than k have expired. The inhibitors pin the exact token counts.
  for (int e = 0; e < k; ++e) {
    for (int a = 0; a <= n - e; ++a) {
      const auto t = net.add_immediate("ok_a" + std::to_string(a) + "_e" + std::to_string(e));
      net.add_input(r.apk, t);
      if (a > 0) net.add_input(r.wd1, t, a);
      if (e > 0) net.add_input(r.wd2, t, e);
      net.add_inhibitor(r.wd1, t, a + 1);
      net.add_inhibitor(r.wd2, t, e + 1);
      net.add_output(t, r.ap1);
      if (a + e > 0) net.add_output(t, r.wd1, a + e);
      r.ok.push_back(t);
    }
  }

  r.timeout = net.add_timed("timeout", params.rate_timeout, params.timeout_server);
  net.add_input(r.wd1, r.timeout);
  net.add_inhibitor(r.rst, r.timeout);
  net.add_output(r.timeout, r.wd2);

  r.delayed = net.add_immediate("delayed");
  net.add_input(r.wd2, r.delayed, k);
  net.add_input(r.ap1, r.delayed);
  net.add_output(r.delayed, r.rst);
  net.add_output(r.delayed, r.wd1, k);

  r.faulty = net.add_immediate("faulty");
  net.add_input(r.wd2, r.faulty, k);
  net.add_input(r.ap2, r.faulty);
  net.add_output(r.faulty, r.rst);
  net.add_output(r.faulty, r.wd1, k);

  r.ap_fault = net.add_timed("ap_fault", params.rate_fault, ServerSemantics::Single);
  net.add_input(r.ap1, r.ap_fault);
  net.add_output(r.ap_fault, r.ap2);

  r.w_fault = net.add_timed("w_fault", params.rate_fault, ServerSemantics::Infinite);
  net.add_input(r.wd1, r.w_fault);
  net.add_inhibitor(r.rst, r.w_fault);
  net.add_output(r.w_fault, r.wd3);

  r.drain_expired = net.add_immediate("drain_expired");
  net.add_input(r.rst, r.drain_expired);
  net.add_input(r.wd2, r.drain_expired);
  net.add_output(r.drain_expired, r.rst);
  net.add_output(r.drain_expired, r.wd1);

  r.drain_faulty = net.add_immediate("drain_faulty");
  net.add_input(r.rst, r.drain_faulty);
  net.add_input(r.wd3, r.drain_faulty);
  net.add_output(r.drain_faulty, r.rst);
  net.add_output(r.drain_faulty, r.wd1);

  // Halted application with no armed replica left: nobody will ever vote.
  r.reboot = net.add_timed("reboot", params.rate_reboot, ServerSemantics::Single);
  net.add_input(r.ap2, r.reboot);
  net.add_inhibitor(r.wd1, r.reboot);
  net.add_output(r.reboot, r.rst);

  r.cycle = net.add_timed("cycle", params.rate_cycle, ServerSemantics::Single);
  net.add_input(r.rst, r.cycle);
  net.add_output(r.cycle, r.ap1);

  return model;
}

std::string render(const RwdModel& model) {
  const RwdParams& p = model.params;
  std::string out;
  out += "redundant watchdog, policy " + p.policy.label(p.n_replicas) + ", " + std::to_string(p.n_replicas) +
         " replicas, alarm threshold " + std::to_string(p.threshold()) + "\n\n";
  out +=
      "places\n"
      "  Ap1  application working\n"
      "  ApK  kick pending (I'm alive about to be sent)\n"
      "  Ap2  application halted\n"
      "  Rst  alarm raised, system resetting\n"
      "  Wd1  armed watchdog replicas\n"
      "  Wd2  expired replicas\n"
      "  Wd3  faulty replicas\n\n";
  out +=
      "transitions\n"
      "  activity       timed, one unit of useful work, Ap1 -> ApK\n"
      "  ok_a<i>_e<j>   immediate, kick when Wd1 = i and Wd2 = j < threshold; re-arms i + j replicas\n"
      "  timeout        timed per armed replica, Wd1 -> Wd2\n"
      "  delayed        immediate, threshold expiries while working: false alarm\n"
      "  faulty         immediate, threshold expiries while halted: detected fault\n"
      "  ap_fault       timed, Ap1 -> Ap2\n"
      "  w_fault        timed per armed replica, Wd1 -> Wd3\n"
      "  drain_expired  immediate during reset, Wd2 -> Wd1\n"
      "  drain_faulty   immediate during reset, Wd3 -> Wd1 (repair only here)\n"
      "  reboot         timed, halted application with no armed replica\n"
      "  cycle          timed, Rst -> Ap1, everything back to the initial marking\n\n";
  out += "net\n" + gspn::write_net(model.net);
  return out;
}

}  // namespace rwd::models

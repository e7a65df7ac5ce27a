#pragma once

#include <string>
#include <vector>

#include "rwd/gspn/net.hpp"
#include "rwd/policy.hpp"

namespace rwd::models {

struct RwdParams {
  int n_replicas = 3;
  double rate_activity = 2.0;
  double rate_fault = 0.1;  // both ap_fault and w_fault
  double rate_cycle = 1.0;
  double rate_reboot = 1.0;
  double rate_timeout = 1.0;
  VotingPolicy policy = VotingPolicy::any();
  gspn::ServerSemantics timeout_server = gspn::ServerSemantics::Infinite;

  void validate() const;  // throws InputError
  int threshold() const { return policy.threshold(n_replicas); }
};

// Handles into the built net.
struct RoleMap {
  gspn::PlaceId ap1, apk, ap2, rst, wd1, wd2, wd3;
  gspn::TransitionId activity, timeout, delayed, faulty, ap_fault, w_fault;
  gspn::TransitionId drain_expired, drain_faulty, reboot, cycle;
  std::vector<gspn::TransitionId> ok;  // ok_a<armed>_e<expired>
};

struct RwdModel {
  RwdParams params;
  gspn::PetriNet net;
  RoleMap roles;
};

RwdModel build(const RwdParams& params);

// Readable description of places, transitions and the modelling choices.
std::string render(const RwdModel& model);

}  // namespace rwd::models

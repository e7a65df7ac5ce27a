#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rwd/ariel/config.hpp"
#include "rwd/ariel/rcode.hpp"
#include "rwd/policy.hpp"

namespace rwd::ariel {

struct AlarmRecipe {
  std::int64_t logical = 0;            // logical grouping the watchdog replicas
  std::vector<std::int64_t> replicas;  // its members, in order
  std::int64_t expired_phase = 1;
  std::int64_t alarm_message = 1;
  std::int64_t alarm_task = 0;
};

enum class KOfNForm {
  Count,       // COUNT (LOGICAL L, e) >= k
  Expanded,    // disjunction over every k-subset of conjunctions
};

// Recovery clause implementing the voting policy, as Ariel source:
//   IF [ <vote> ] THEN SEND alarm TASK a  REMOVE PHASE LOGICAL L FROM ERRORLIST FI
std::string policy_clause(const VotingPolicy& policy, const AlarmRecipe& recipe,
                          KOfNForm form = KOfNForm::Count);

// Compiles the policy clause against the declarations of `deployment`.
RCode policy_rcode(const VotingPolicy& policy, const AlarmRecipe& recipe, const DeploymentConfig& deployment,
                   KOfNForm form = KOfNForm::Count);

}  // namespace rwd::ariel

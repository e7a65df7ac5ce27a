#include "rwd/ariel/policy.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include "rwd/ariel/compiler.hpp"
#include "rwd/ariel/parser.hpp"
#include "rwd/error.hpp"

namespace rwd {

int VotingPolicy::threshold(int n_replicas) const {
  switch (kind) {
    case Kind::Or: return 1;
    case Kind::And: return n_replicas;
    case Kind::KOutOfN: return k;
  }
  return 1;
}

std::string VotingPolicy::label(int n_replicas) const {
  switch (kind) {
    case Kind::Or: return "OR";
    case Kind::And: return "AND";
    case Kind::KOutOfN: {
      const int n = of_n ? of_n : n_replicas;
      return n ? std::to_string(k) + "oo" + std::to_string(n) : "KOO" + std::to_string(k);
    }
  }
  return "?";
}

VotingPolicy parse_policy(std::string_view text) {
  std::string up;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (up == "OR") return VotingPolicy::any();
  if (up == "AND") return VotingPolicy::all();
  auto oo = up.find("OO");
  if (oo != std::string::npos && oo > 0) {
    int k = 0, n = 0;
    auto r1 = std::from_chars(up.data(), up.data() + oo, k);
    auto r2 = std::from_chars(up.data() + oo + 2, up.data() + up.size(), n);
    if (r1.ec == std::errc{} && r1.ptr == up.data() + oo && r2.ec == std::errc{} &&
        r2.ptr == up.data() + up.size() && k >= 1 && n >= k)
      return VotingPolicy::k_out_of_n(k, n);
  }
  throw InputError("unknown voting policy '" + std::string(text) + "' (expected OR, AND or koon, e.g. 2oo3)");
}

std::vector<VotingPolicy> parse_policy_list(std::string_view text) {
  std::vector<VotingPolicy> out;
  while (!text.empty()) {
    auto comma = text.find(',');
    out.push_back(parse_policy(text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return out;
}

}  // namespace rwd

namespace rwd::ariel {
namespace {

std::string phase_atom(std::int64_t task, std::int64_t phase) {
  return "PHASE (TASK " + std::to_string(task) + ") == " + std::to_string(phase);
}

std::string conjunction_of(const std::vector<std::int64_t>& tasks, std::int64_t phase) {
  std::string out;
  for (std::size_t i = 0; i < tasks.size(); ++i) out += (i ? " AND " : "") + phase_atom(tasks[i], phase);
  return out;
}

}  // namespace

std::string policy_clause(const VotingPolicy& policy, const AlarmRecipe& recipe, KOfNForm form) {
  const int n = static_cast<int>(recipe.replicas.size());
  if (n == 0) throw InputError("voting policy needs at least one watchdog replica");
  const int k = policy.threshold(n);
  if (k < 1 || k > n) throw InputError("voting threshold " + std::to_string(k) + " out of range for " + std::to_string(n) + " replicas");
  if (policy.kind == VotingPolicy::Kind::KOutOfN && policy.of_n && policy.of_n != n)
    throw InputError("policy " + policy.label() + " does not match " + std::to_string(n) + " replicas");

  std::string vote;
  if (policy.kind == VotingPolicy::Kind::And) {
    vote = conjunction_of(recipe.replicas, recipe.expired_phase);
  } else if (policy.kind == VotingPolicy::Kind::Or) {
    for (int i = 0; i < n; ++i) vote += (i ? " OR " : "") + phase_atom(recipe.replicas[i], recipe.expired_phase);
  } else if (form == KOfNForm::Count) {
    vote = "COUNT (LOGICAL " + std::to_string(recipe.logical) + ", " + std::to_string(recipe.expired_phase) +
           ") >= " + std::to_string(k);
  } else {
    // Enumerate k-subsets in lexicographic order of member positions.
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + k, true);
    bool first = true;
    do {
      std::vector<std::int64_t> subset;
      for (int i = 0; i < n; ++i)
        if (pick[i]) subset.push_back(recipe.replicas[i]);
      vote += (first ? "(" : " OR (") + conjunction_of(subset, recipe.expired_phase) + ")";
      first = false;
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }

  std::ostringstream os;
  os << "IF [ " << vote << " ]\nTHEN\n  SEND " << recipe.alarm_message << " TASK " << recipe.alarm_task
     << "\n  REMOVE PHASE LOGICAL " << recipe.logical << " FROM ERRORLIST\nFI\n";
  return os.str();
}

RCode policy_rcode(const VotingPolicy& policy, const AlarmRecipe& recipe, const DeploymentConfig& deployment,
                   KOfNForm form) {
  const std::string source = to_ariel_source(deployment) + policy_clause(policy, recipe, form);
  return compile_recovery(parse_source(source, Definitions{}));
}

}  // namespace rwd::ariel

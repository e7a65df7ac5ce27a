#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rwd {

// How expiry notifications of redundant watchdogs are combined into an alarm.
struct VotingPolicy {
  enum class Kind { Or, And, KOutOfN };

  Kind kind = Kind::Or;
  int k = 1;        // KOutOfN only
  int of_n = 0;     // KOutOfN only; 0 when written without a replica count

  static VotingPolicy any() { return {Kind::Or, 1, 0}; }
  static VotingPolicy all() { return {Kind::And, 0, 0}; }
  static VotingPolicy k_out_of_n(int k, int n = 0) { return {Kind::KOutOfN, k, n}; }

  // Number of expired replicas that raises the alarm.
  int threshold(int n_replicas) const;

  // "OR", "AND", "2oo3" (or "KOO2" when of_n is unknown).
  std::string label(int n_replicas = 0) const;

  bool operator==(const VotingPolicy&) const = default;
};

// Accepts OR, AND, koon ("2oo3") case-insensitively. Throws InputError.
VotingPolicy parse_policy(std::string_view text);

// Comma-separated list of policies.
std::vector<VotingPolicy> parse_policy_list(std::string_view text);

}  // namespace rwd

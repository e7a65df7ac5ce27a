#pragma once

#include <string>
#include <vector>

#include "rwd/gspn/net.hpp"

namespace rwd::gspn {

struct PInvariant {
  std::vector<long long> coefficients;  // one per place

  std::vector<PlaceId> support() const;
  long long weighted_sum(const Marking& m) const;
  bool operator==(const PInvariant&) const = default;
};

// Minimal-support semi-positive P-invariants (Farkas), each with gcd 1.
std::vector<PInvariant> p_invariants(const PetriNet& net);

// "1*Wd1 + 1*Wd2 + 1*Wd3 = 3" against the initial marking.
std::string format_invariant(const PetriNet& net, const PInvariant& inv);

}  // namespace rwd::gspn

#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "rwd/gspn/reachability.hpp"

namespace rwd::gspn {

// CTMC over the tangible states of a reachability graph.
struct TangibleChain {
  struct Rate {
    std::size_t to;
    double rate;
  };
  struct Flow {
    TransitionId transition;
    double rate;  // expected firings per unit time while in this state
  };

  std::vector<std::size_t> states;   // graph state index per tangible state
  std::vector<double> initial;       // initial distribution
  std::vector<std::vector<Rate>> rates;  // off-diagonal generator entries, sorted by `to`
  std::vector<double> exit_rate;     // -Q[i][i]
  std::vector<double> self_rate;     // timed mass that returns to the same state
  std::vector<std::vector<Flow>> flows;  // timed and immediate, sorted by transition
  std::size_t transition_count = 0;

  std::size_t size() const { return states.size(); }
  std::vector<std::vector<double>> dense_generator() const;
};

// Throws AnalysisError::VanishingLoop when vanishing states form a cycle.
TangibleChain eliminate_vanishing(const ReachabilityGraph& graph, const PetriNet& net);

}  // namespace rwd::gspn

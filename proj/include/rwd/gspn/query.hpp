#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>

#include "rwd/gspn/reachability.hpp"

namespace rwd::gspn {

// Predicate over a marking and the transitions that may fire in it.
using StatePredicate = std::function<bool(const Marking&, std::span<const TransitionId>)>;

enum class StateFilter { All, Tangible, Vanishing };

struct QueryResult {
  bool holds = false;
  std::optional<std::size_t> state;  // witness for exists, counterexample for always
};

QueryResult exists(const ReachabilityGraph& g, const PetriNet& net, const StatePredicate& pred,
                   StateFilter filter = StateFilter::All);
QueryResult always(const ReachabilityGraph& g, const PetriNet& net, const StatePredicate& pred,
                   StateFilter filter = StateFilter::All);

QueryResult always_place_zero(const ReachabilityGraph& g, const PetriNet& net, PlaceId place,
                              StateFilter filter = StateFilter::All);
// Some state enables one of `transitions` while `place` holds at least `k` tokens.
QueryResult exists_enabled_with(const ReachabilityGraph& g, const PetriNet& net,
                                std::span<const TransitionId> transitions, PlaceId place, int k);

// Explores from every state satisfying `start`, following edges only into
// states that satisfy `stay`, and returns the first visited state satisfying
// `target`.
std::optional<std::size_t> reachable_while(const ReachabilityGraph& g, const PetriNet& net,
                                           const StatePredicate& start, const StatePredicate& stay,
                                           const StatePredicate& target);

}  // namespace rwd::gspn

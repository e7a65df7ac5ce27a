#include "rwd/gspn/query.hpp"

#include <algorithm>
#include <deque>
#include <vector>

namespace rwd::gspn {

namespace {

bool admitted(const ReachabilityGraph& g, std::size_t s, StateFilter f) {
  switch (f) {
    case StateFilter::All: return true;
    case StateFilter::Tangible: return g.tangible(s);
    case StateFilter::Vanishing: return !g.tangible(s);
  }
  return true;
}

bool eval(const ReachabilityGraph& g, const PetriNet& net, const StatePredicate& pred, std::size_t s) {
  const auto fire = enabled(net, g.states[s]);
  return pred(g.states[s], fire);
}

}  // namespace

QueryResult exists(const ReachabilityGraph& g, const PetriNet& net, const StatePredicate& pred, StateFilter filter) {
  for (std::size_t s = 0; s < g.size(); ++s)
    if (admitted(g, s, filter) && eval(g, net, pred, s)) return {true, s};
  return {false, std::nullopt};
}

QueryResult always(const ReachabilityGraph& g, const PetriNet& net, const StatePredicate& pred, StateFilter filter) {
  for (std::size_t s = 0; s < g.size(); ++s)
    if (admitted(g, s, filter) && !eval(g, net, pred, s)) return {false, s};
  return {true, std::nullopt};
}

QueryResult always_place_zero(const ReachabilityGraph& g, const PetriNet& net, PlaceId place, StateFilter filter) {
  return always(g, net, [place](const Marking& m, std::span<const TransitionId>) { return m[place] == 0; }, filter);
}

QueryResult exists_enabled_with(const ReachabilityGraph& g, const PetriNet& net,
                                std::span<const TransitionId> transitions, PlaceId place, int k) {
  std::vector<TransitionId> wanted(transitions.begin(), transitions.end());
  return exists(g, net, [&](const Marking& m, std::span<const TransitionId> fire) {
    if (m[place] < k) return false;
    return std::any_of(fire.begin(), fire.end(), [&](TransitionId t) {
      return std::find(wanted.begin(), wanted.end(), t) != wanted.end();
    });
  });
}

std::optional<std::size_t> reachable_while(const ReachabilityGraph& g, const PetriNet& net,
                                           const StatePredicate& start, const StatePredicate& stay,
                                           const StatePredicate& target) {
  std::vector<char> seen(g.size(), 0);
  std::deque<std::size_t> queue;
  for (std::size_t s = 0; s < g.size(); ++s) {
    if (!eval(g, net, start, s)) continue;
    seen[s] = 1;
    queue.push_back(s);
  }
  while (!queue.empty()) {
    const std::size_t s = queue.front();
    queue.pop_front();
    if (eval(g, net, target, s)) return s;
    for (const Edge& e : g.out(s)) {
      if (seen[e.to] || !eval(g, net, stay, e.to)) continue;
      seen[e.to] = 1;
      queue.push_back(e.to);
    }
  }
  return std::nullopt;
}

}  // namespace rwd::gspn

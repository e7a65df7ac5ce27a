#include "rwd/gspn/reachability.hpp"

#include <algorithm>
#include <unordered_map>

namespace rwd::gspn {

const char* kind_name(AnalysisError::Kind kind) {
  switch (kind) {
    case AnalysisError::Kind::StateSpaceExceeded: return "StateSpaceExceeded";
    case AnalysisError::Kind::VanishingLoop: return "VanishingLoop";
    case AnalysisError::Kind::NotErgodic: return "NotErgodic";
    case AnalysisError::Kind::SolverFailure: return "SolverFailure";
  }
  return "?";
}

namespace {

struct MarkingHash {
  std::size_t operator()(const Marking& m) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (int v : m) {
      h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

}  // namespace

std::size_t ReachabilityGraph::tangible_count() const {
  return static_cast<std::size_t>(std::count(classes.begin(), classes.end(), StateClass::Tangible));
}

ReachabilityGraph reachability(const PetriNet& net, std::size_t cap) {
  if (cap < 1) throw InputError("state cap must be at least 1");
  ReachabilityGraph g;
  std::unordered_map<Marking, std::size_t, MarkingHash> index;

  auto visit = [&](Marking m) -> std::size_t {
    auto [it, inserted] = index.try_emplace(m, g.states.size());
    if (inserted) {
      if (g.states.size() >= cap)
        throw AnalysisError(AnalysisError::Kind::StateSpaceExceeded,
                            "reachability set exceeds " + std::to_string(cap) + " states");
      g.states.push_back(std::move(m));
    }
    return it->second;
  };

  g.initial = visit(net.initial_marking());
  for (std::size_t s = 0; s < g.states.size(); ++s) {
    g.out_offset.push_back(g.edges.size());
    const auto fire = enabled(net, g.states[s]);
    const bool vanishing = !fire.empty() && net.transitions()[fire.front()].is_immediate();
    g.classes.push_back(vanishing ? StateClass::Vanishing : StateClass::Tangible);
    for (TransitionId t : fire) {
      const std::size_t to = visit(net.fire(t, g.states[s]));
      g.edges.push_back({s, t, to});
    }
  }
  g.out_offset.push_back(g.edges.size());
  return g;
}

}  // namespace rwd::gspn

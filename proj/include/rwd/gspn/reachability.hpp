#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rwd/gspn/analysis_error.hpp"
#include "rwd/gspn/net.hpp"

namespace rwd::gspn {

enum class StateClass { Tangible, Vanishing };

struct Edge {
  std::size_t from;
  TransitionId transition;
  std::size_t to;
};

struct ReachabilityGraph {
  std::vector<Marking> states;  // BFS discovery order
  std::vector<StateClass> classes;
  std::vector<Edge> edges;       // grouped by source, sources ascending
  std::vector<std::size_t> out_offset;  // edges of s: [out_offset[s], out_offset[s+1])
  std::size_t initial = 0;

  std::size_t size() const { return states.size(); }
  std::span<const Edge> out(std::size_t s) const {
    return std::span<const Edge>(edges).subspan(out_offset[s], out_offset[s + 1] - out_offset[s]);
  }
  bool tangible(std::size_t s) const { return classes[s] == StateClass::Tangible; }
  std::size_t tangible_count() const;
};

inline constexpr std::size_t kDefaultStateCap = 100000;

ReachabilityGraph reachability(const PetriNet& net, std::size_t cap = kDefaultStateCap);

}  // namespace rwd::gspn

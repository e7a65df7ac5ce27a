#pragma once

#include <span>
#include <string>
#include <string_view>

#include "rwd/gspn/chain.hpp"
#include "rwd/gspn/net.hpp"

namespace rwd::gspn {

// Net text format:
//
//   places:       <name> <initial> ;
//   transitions:  <name> timed <rate> [infinite|single] ;
//                 <name> immediate [<weight> [<priority>]] ;
//   arcs:         <from> <to> [<multiplicity>] [normal|inhibitor] ;
//
// Whitespace is free, '#' starts a comment. Errors are NetError with "line:col: ".
PetriNet parse_net(std::string_view text);
std::string write_net(const PetriNet& net);

// Shortest round-trip decimal form.
std::string format_number(double v);

// "state_index,probability" keyed by reachability-graph state index.
std::string solution_csv(const TangibleChain& chain, std::span<const double> pi);
// "transition,throughput"
std::string throughput_csv(const PetriNet& net, std::span<const double> thr);

}  // namespace rwd::gspn

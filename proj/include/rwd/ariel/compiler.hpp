#pragma once

#include <functional>
#include <optional>

#include "rwd/ariel/ast.hpp"
#include "rwd/ariel/rcode.hpp"

namespace rwd::ariel {

// Translates every IF..FI clause, in source order, into
//   <guard> JUMP_IF_FALSE end <actions> end: END_GUARD
RCode compile_recovery(const ArielProgram& program);

// Phase currently recorded for an entity, or nullopt when unset.
using PhaseLookup = std::function<std::optional<std::int64_t>(Entity)>;

// Direct evaluation of a guard tree. `program` supplies logical membership.
bool evaluate_guard(const GuardExpr& guard, const ArielProgram& program, const PhaseLookup& phase_of);

}  // namespace rwd::ariel

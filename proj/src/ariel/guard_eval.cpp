#include "rwd/ariel/compiler.hpp"

namespace rwd::ariel {

bool evaluate_guard(const GuardExpr& g, const ArielProgram& program, const PhaseLookup& phase_of) {
  switch (g.kind) {
    case GuardExpr::Kind::PhaseEquals: {
      auto p = phase_of(resolve(g.entity));
      return p && *p == g.phase.value;
    }
    case GuardExpr::Kind::CountPhase: {
      const LogicalDecl* l = program.find_logical(g.entity.id.value);
      std::int64_t n = 0;
      if (l) {
        for (const auto& m : l->members) {
          auto p = phase_of(Entity{EntityKind::Task, m.value});
          if (p && *p == g.phase.value) ++n;
        }
      }
      return n >= g.threshold.value;
    }
    case GuardExpr::Kind::Not:
      return !evaluate_guard(g.children.front(), program, phase_of);
    case GuardExpr::Kind::And:
      for (const auto& c : g.children)
        if (!evaluate_guard(c, program, phase_of)) return false;
      return true;
    case GuardExpr::Kind::Or:
      for (const auto& c : g.children)
        if (evaluate_guard(c, program, phase_of)) return true;
      return false;
  }
  return false;
}

}  // namespace rwd::ariel

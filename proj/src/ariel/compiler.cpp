#include "rwd/ariel/compiler.hpp"

namespace rwd::ariel {
namespace {

void emit_guard(const GuardExpr& g, std::vector<Instruction>& out) {
  switch (g.kind) {
    case GuardExpr::Kind::PhaseEquals:
      out.push_back({Opcode::PushPhase, {static_cast<std::int64_t>(g.entity.kind), g.entity.id.value, 0}});
      out.push_back({Opcode::PushConst, {g.phase.value, 0, 0}});
      out.push_back({Opcode::CmpEq, {}});
      break;
    case GuardExpr::Kind::CountPhase:
      out.push_back({Opcode::CountGe, {g.entity.id.value, g.phase.value, g.threshold.value}});
      break;
    case GuardExpr::Kind::Not:
      emit_guard(g.children.front(), out);
      out.push_back({Opcode::Not, {}});
      break;
    case GuardExpr::Kind::And:
    case GuardExpr::Kind::Or: {
      const Opcode op = g.kind == GuardExpr::Kind::And ? Opcode::And : Opcode::Or;
      emit_guard(g.children.front(), out);
      for (std::size_t i = 1; i < g.children.size(); ++i) {
        emit_guard(g.children[i], out);
        out.push_back({op, {}});
      }
      break;
    }
  }
}

}  // namespace

RCode compile_recovery(const ArielProgram& program) {
  RCode rc;
  for (const auto& clause : program.clauses) {
    emit_guard(clause.guard, rc.code);
    const std::size_t jump = rc.code.size();
    rc.code.push_back({Opcode::JumpIfFalse, {}});
    for (const auto& a : clause.actions) {
      if (a.kind == Action::Kind::Send)
        rc.code.push_back({Opcode::ActSend, {a.message.value, a.target_task.value, 0}});
      else
        rc.code.push_back({Opcode::ActRemove, {static_cast<std::int64_t>(a.entity.kind), a.entity.id.value, 0}});
    }
    rc.code[jump].operands[0] = static_cast<std::int64_t>(rc.code.size());
    rc.code.push_back({Opcode::EndGuard, {}});
  }
  return rc;
}

}  // namespace rwd::ariel

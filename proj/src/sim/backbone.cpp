#include "rwd/sim/backbone.hpp"

#include <stdexcept>

namespace rwd::sim {

void BackboneDB::notify(Entity entity, std::int64_t phase) {
  phases_[entity] = phase;
  errorlist_.insert(entity);
}

void BackboneDB::remove(Entity entity, const ariel::DeploymentConfig& deployment) {
  phases_.erase(entity);
  errorlist_.erase(entity);
  if (entity.kind != EntityKind::Logical) return;
  if (const auto* l = deployment.find_logical(entity.id)) {
    for (auto m : l->members) {
      phases_.erase(Entity{EntityKind::Task, m});
      errorlist_.erase(Entity{EntityKind::Task, m});
    }
  }
}

std::optional<std::int64_t> BackboneDB::phase(Entity entity) const {
  auto it = phases_.find(entity);
  if (it == phases_.end()) return std::nullopt;
  return it->second;
}

std::vector<ExecutedAction> run_recovery(const ariel::RCode& rcode, BackboneDB& db,
                                         const ariel::DeploymentConfig& deployment) {
  using ariel::Opcode;
  std::vector<ExecutedAction> done;
  std::vector<std::int64_t> stack;
  std::size_t clause = 0;

  auto pop = [&stack]() {
    if (stack.empty()) throw std::logic_error("r-code stack underflow");
    auto v = stack.back();
    stack.pop_back();
    return v;
  };

  for (std::size_t pc = 0; pc < rcode.code.size(); ++pc) {
    const auto& ins = rcode.code[pc];
    const auto& op = ins.operands;
    switch (ins.op) {
      case Opcode::PushPhase:
        stack.push_back(db.phase(Entity{static_cast<EntityKind>(op[0]), op[1]}).value_or(kNoPhase));
        break;
      case Opcode::PushConst:
        stack.push_back(op[0]);
        break;
      case Opcode::CmpEq: {
        auto b = pop(), a = pop();
        stack.push_back(a == b);
        break;
      }
      case Opcode::And: {
        auto b = pop(), a = pop();
        stack.push_back(a && b);
        break;
      }
      case Opcode::Or: {
        auto b = pop(), a = pop();
        stack.push_back(a || b);
        break;
      }
      case Opcode::Not:
        stack.push_back(!pop());
        break;
      case Opcode::CountGe: {
        std::int64_t n = 0;
        if (const auto* l = deployment.find_logical(op[0])) {
          for (auto m : l->members)
            if (db.phase(Entity{EntityKind::Task, m}) == op[1]) ++n;
        }
        stack.push_back(n >= op[2]);
        break;
      }
      case Opcode::JumpIfFalse:
        if (!pop()) pc = static_cast<std::size_t>(op[0]) - 1;  // lands on END_GUARD
        break;
      case Opcode::ActSend:
        done.push_back({ExecutedAction::Kind::Send, clause, op[0], op[1], {}});
        break;
      case Opcode::ActRemove: {
        Entity e{static_cast<EntityKind>(op[0]), op[1]};
        db.remove(e, deployment);
        done.push_back({ExecutedAction::Kind::Remove, clause, 0, 0, e});
        break;
      }
      case Opcode::EndGuard:
        ++clause;
        stack.clear();
        break;
    }
  }
  return done;
}

}  // namespace rwd::sim

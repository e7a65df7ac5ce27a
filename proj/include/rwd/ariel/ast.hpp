#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rwd::ariel {

// A resolved integer constant. `macro` keeps the brace-name it was written
// with (`{W1}`) so the program can be printed back in its original form.
struct Value {
  std::int64_t value = 0;
  std::optional<std::string> macro;

  bool operator==(const Value&) const = default;
};

enum class EntityKind : int { Task = 0, Logical = 1 };

struct EntityRef {
  EntityKind kind = EntityKind::Task;
  Value id;

  bool operator==(const EntityRef&) const = default;
};

// Resolved entity identity, as stored by the Backbone.
struct Entity {
  EntityKind kind = EntityKind::Task;
  std::int64_t id = 0;

  auto operator<=>(const Entity&) const = default;
};

inline Entity resolve(const EntityRef& ref) { return Entity{ref.kind, ref.id.value}; }

struct TaskDecl {
  Value task_id;
  std::optional<std::string> name;
  Value node;
  Value local_taskid;

  bool operator==(const TaskDecl&) const = default;
};

enum class OnError { WarnBackbone };

struct WatchdogDecl {
  Value watchdog_task;
  std::vector<Value> watched;
  Value heartbeat_period_ms;
  OnError on_error = OnError::WarnBackbone;

  bool operator==(const WatchdogDecl&) const = default;
};

struct LogicalDecl {
  Value logical_id;
  std::vector<Value> members;

  bool operator==(const LogicalDecl&) const = default;
};

struct GuardExpr {
  enum class Kind { PhaseEquals, CountPhase, And, Or, Not };

  Kind kind = Kind::PhaseEquals;
  EntityRef entity;  // PhaseEquals: task or logical; CountPhase: logical
  Value phase;       // PhaseEquals, CountPhase
  Value threshold;   // CountPhase
  std::vector<GuardExpr> children;  // And/Or: >= 2, Not: 1

  static GuardExpr phase_equals(EntityRef entity, Value phase);
  static GuardExpr count_phase(EntityRef logical, Value phase, Value threshold);
  static GuardExpr conjunction(std::vector<GuardExpr> children);
  static GuardExpr disjunction(std::vector<GuardExpr> children);
  static GuardExpr negation(GuardExpr child);

  bool operator==(const GuardExpr&) const = default;
};

struct Action {
  enum class Kind { Send, RemovePhase };

  Kind kind = Kind::Send;
  Value message;      // Send
  Value target_task;  // Send
  EntityRef entity;   // RemovePhase

  static Action send(Value message, Value target_task);
  static Action remove_phase(EntityRef entity);

  bool operator==(const Action&) const = default;
};

struct Clause {
  GuardExpr guard;
  std::vector<Action> actions;

  bool operator==(const Clause&) const = default;
};

struct ArielProgram {
  std::vector<std::string> includes;
  std::vector<TaskDecl> tasks;
  std::vector<WatchdogDecl> watchdogs;
  std::vector<LogicalDecl> logicals;
  std::vector<Clause> clauses;

  const TaskDecl* find_task(std::int64_t id) const;
  const LogicalDecl* find_logical(std::int64_t id) const;

  bool operator==(const ArielProgram&) const = default;
};

}  // namespace rwd::ariel

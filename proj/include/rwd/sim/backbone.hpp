#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "rwd/ariel/ast.hpp"
#include "rwd/ariel/config.hpp"
#include "rwd/ariel/rcode.hpp"

namespace rwd::sim {

using ariel::Entity;
using ariel::EntityKind;

// Value pushed by PUSH_PHASE for an entity with no recorded phase.
inline constexpr std::int64_t kNoPhase = -1;

// System-wide entity-state database kept by the Backbone task.
class BackboneDB {
 public:
  // Records an error notification: phase stored, entity enters the error list.
  void notify(Entity entity, std::int64_t phase);

  // REMOVE PHASE: clears the entity, or every member of a logical plus the
  // logical itself.
  void remove(Entity entity, const ariel::DeploymentConfig& deployment);

  std::optional<std::int64_t> phase(Entity entity) const;
  bool in_errorlist(Entity entity) const { return errorlist_.count(entity) > 0; }

  const std::map<Entity, std::int64_t>& phases() const { return phases_; }
  const std::set<Entity>& errorlist() const { return errorlist_; }

 private:
  std::map<Entity, std::int64_t> phases_;
  std::set<Entity> errorlist_;
};

struct ExecutedAction {
  enum class Kind { Send, Remove };

  Kind kind = Kind::Send;
  std::size_t clause = 0;  // index of the guarded clause that fired
  std::int64_t message = 0;
  std::int64_t target_task = 0;
  Entity entity;

  bool operator==(const ExecutedAction&) const = default;
};

// Runs every clause of `rcode` once, in order, against `db`. REMOVE actions
// take effect immediately, so later clauses observe them.
std::vector<ExecutedAction> run_recovery(const ariel::RCode& rcode, BackboneDB& db,
                                         const ariel::DeploymentConfig& deployment);

}  // namespace rwd::sim

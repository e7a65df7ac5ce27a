#include "rwd/ariel/parser.hpp"

#include <map>
#include <set>
#include <utility>

#include "rwd/ariel/lexer.hpp"

namespace rwd::ariel {

GuardExpr GuardExpr::phase_equals(EntityRef entity, Value phase) {
  GuardExpr g;
  g.kind = Kind::PhaseEquals;
  g.entity = std::move(entity);
  g.phase = std::move(phase);
  return g;
}

GuardExpr GuardExpr::count_phase(EntityRef logical, Value phase, Value threshold) {
  GuardExpr g;
  g.kind = Kind::CountPhase;
  g.entity = std::move(logical);
  g.phase = std::move(phase);
  g.threshold = std::move(threshold);
  return g;
}

GuardExpr GuardExpr::conjunction(std::vector<GuardExpr> children) {
  GuardExpr g;
  g.kind = Kind::And;
  g.children = std::move(children);
  return g;
}

GuardExpr GuardExpr::disjunction(std::vector<GuardExpr> children) {
  GuardExpr g;
  g.kind = Kind::Or;
  g.children = std::move(children);
  return g;
}

GuardExpr GuardExpr::negation(GuardExpr child) {
  GuardExpr g;
  g.kind = Kind::Not;
  g.children.push_back(std::move(child));
  return g;
}

Action Action::send(Value message, Value target_task) {
  Action a;
  a.kind = Kind::Send;
  a.message = std::move(message);
  a.target_task = std::move(target_task);
  return a;
}

Action Action::remove_phase(EntityRef entity) {
  Action a;
  a.kind = Kind::RemovePhase;
  a.entity = std::move(entity);
  return a;
}

const TaskDecl* ArielProgram::find_task(std::int64_t id) const {
  for (const auto& t : tasks)
    if (t.task_id.value == id) return &t;
  return nullptr;
}

const LogicalDecl* ArielProgram::find_logical(std::int64_t id) const {
  for (const auto& l : logicals)
    if (l.logical_id.value == id) return &l;
  return nullptr;
}

namespace {

struct Reference {
  Entity entity;
  SourcePos pos;
};

class Parser {
 public:
  Parser(std::span<const Token> tokens, const Definitions& defs) : toks_(tokens), defs_(defs) {}

  ArielProgram run() {
    while (!at_end()) item();
    validate();
    return std::move(prog_);
  }

 private:
  bool at_end() const { return i_ >= toks_.size(); }

  const Token& peek() const { return toks_[i_]; }

  bool check(TokenKind kind) const { return !at_end() && peek().kind == kind; }

  SourcePos here() const {
    if (!at_end()) return peek().pos;
    if (toks_.empty()) return SourcePos{};
    SourcePos p = toks_.back().pos;
    p.column += static_cast<int>(toks_.back().text.size());
    return p;
  }

  [[noreturn]] void fail(SourcePos at, const std::string& msg) const { throw CompileError(at, msg); }

  const Token& expect(TokenKind kind, std::string_view context) {
    if (!check(kind)) {
      std::string found = at_end() ? std::string("end of input") : "'" + peek().text + "'";
      fail(here(), "expected " + std::string(token_kind_name(kind)) + " " + std::string(context) +
                       ", found " + found);
    }
    return toks_[i_++];
  }

  bool accept(TokenKind kind) {
    if (!check(kind)) return false;
    ++i_;
    return true;
  }

  Value value(std::string_view context) {
    if (check(TokenKind::Integer)) {
      const Token& t = toks_[i_++];
      return Value{t.value, std::nullopt};
    }
    if (check(TokenKind::Macro)) {
      const Token& t = toks_[i_++];
      auto it = defs_.find(t.text);
      if (it == defs_.end()) fail(t.pos, "unresolved macro '" + t.text + "'");
      if (it->second < 0)
        fail(t.pos, "macro '" + t.text + "' resolves to negative value " + std::to_string(it->second));
      return Value{it->second, t.text};
    }
    std::string found = at_end() ? std::string("end of input") : "'" + peek().text + "'";
    fail(here(), "expected macro or integer " + std::string(context) + ", found " + found);
  }

  void item() {
    switch (peek().kind) {
      case TokenKind::KwInclude: include(); break;
      case TokenKind::KwTask: task(); break;
      case TokenKind::KwWatchdog: watchdog(); break;
      case TokenKind::KwLogical: logical(); break;
      case TokenKind::KwIf: clause(); break;
      default:
        fail(peek().pos, "expected INCLUDE, TASK, WATCHDOG, LOGICAL or IF, found '" + peek().text + "'");
    }
  }

  void include() {
    expect(TokenKind::KwInclude, "");
    prog_.includes.push_back(expect(TokenKind::String, "after INCLUDE").text);
  }

  void task() {
    const SourcePos at = expect(TokenKind::KwTask, "").pos;
    TaskDecl decl;
    decl.task_id = value("after TASK");
    if (accept(TokenKind::Assign)) decl.name = expect(TokenKind::String, "for task name").text;
    expect(TokenKind::KwIs, "in task declaration");
    expect(TokenKind::KwNode, "in task declaration");
    decl.node = value("after NODE");
    expect(TokenKind::Comma, "before TASKID");
    expect(TokenKind::KwTaskid, "in task declaration");
    decl.local_taskid = value("after TASKID");

    if (!task_ids_.insert(decl.task_id.value).second)
      fail(at, "duplicate declaration of task " + std::to_string(decl.task_id.value));
    if (!placements_.insert({decl.node.value, decl.local_taskid.value}).second)
      fail(at, "duplicate task id " + std::to_string(decl.local_taskid.value) + " on node " +
                   std::to_string(decl.node.value));
    prog_.tasks.push_back(std::move(decl));
  }

  void watchdog() {
    const SourcePos at = expect(TokenKind::KwWatchdog, "").pos;
    WatchdogDecl decl;
    const SourcePos wd_pos = here();
    decl.watchdog_task = value("after WATCHDOG");
    refs_.push_back({Entity{EntityKind::Task, decl.watchdog_task.value}, wd_pos});
    expect(TokenKind::KwWatches, "in watchdog declaration");
    do {
      accept(TokenKind::KwTask);
      const SourcePos p = here();
      decl.watched.push_back(value("in WATCHES list"));
      refs_.push_back({Entity{EntityKind::Task, decl.watched.back().value}, p});
    } while (accept(TokenKind::Comma));
    expect(TokenKind::KwHeartbeats, "in watchdog declaration");
    expect(TokenKind::KwEvery, "after HEARTBEATS");
    const SourcePos period_pos = here();
    decl.heartbeat_period_ms = value("after EVERY");
    if (decl.heartbeat_period_ms.value <= 0) fail(period_pos, "heartbeat period must be positive");
    expect(TokenKind::KwMs, "after heartbeat period");
    expect(TokenKind::KwOn, "in watchdog declaration");
    expect(TokenKind::KwError, "after ON");
    expect(TokenKind::KwWarn, "after ON ERROR");
    expect(TokenKind::KwBackbone, "after WARN");
    decl.on_error = OnError::WarnBackbone;
    expect(TokenKind::KwEnd, "to close watchdog declaration");
    expect(TokenKind::KwWatchdog, "after END");

    if (!watchdog_ids_.insert(decl.watchdog_task.value).second)
      fail(at, "duplicate declaration of watchdog " + std::to_string(decl.watchdog_task.value));
    prog_.watchdogs.push_back(std::move(decl));
  }

  void logical() {
    const SourcePos at = expect(TokenKind::KwLogical, "").pos;
    LogicalDecl decl;
    decl.logical_id = value("after LOGICAL");
    expect(TokenKind::KwIs, "in logical declaration");
    std::set<std::int64_t> seen;
    do {
      expect(TokenKind::KwTask, "in logical member list");
      const SourcePos p = here();
      decl.members.push_back(value("after TASK"));
      if (!seen.insert(decl.members.back().value).second)
        fail(p, "task " + std::to_string(decl.members.back().value) + " listed twice in logical");
      refs_.push_back({Entity{EntityKind::Task, decl.members.back().value}, p});
    } while (accept(TokenKind::Comma));
    expect(TokenKind::KwEnd, "to close logical declaration");
    expect(TokenKind::KwLogical, "after END");

    if (!logical_ids_.insert(decl.logical_id.value).second)
      fail(at, "duplicate declaration of logical " + std::to_string(decl.logical_id.value));
    prog_.logicals.push_back(std::move(decl));
  }

  void clause() {
    expect(TokenKind::KwIf, "");
    Clause c;
    expect(TokenKind::LBracket, "to open guard");
    c.guard = guard();
    expect(TokenKind::RBracket, "to close guard");
    expect(TokenKind::KwThen, "after guard");
    while (!check(TokenKind::KwFi)) {
      if (at_end()) fail(here(), "expected FI to close IF clause, found end of input");
      c.actions.push_back(action());
    }
    expect(TokenKind::KwFi, "");
    prog_.clauses.push_back(std::move(c));
  }

  EntityRef entity() {
    EntityRef ref;
    const SourcePos p = here();
    if (accept(TokenKind::KwTask)) {
      ref.kind = EntityKind::Task;
    } else if (accept(TokenKind::KwLogical)) {
      ref.kind = EntityKind::Logical;
    } else {
      fail(p, "expected TASK or LOGICAL");
    }
    const SourcePos id_pos = here();
    ref.id = value("for entity");
    refs_.push_back({resolve(ref), id_pos});
    return ref;
  }

  GuardExpr guard() {
    std::vector<GuardExpr> terms;
    terms.push_back(conjunction());
    while (accept(TokenKind::KwOr)) terms.push_back(conjunction());
    if (terms.size() == 1) return std::move(terms.front());
    return GuardExpr::disjunction(std::move(terms));
  }

  GuardExpr conjunction() {
    std::vector<GuardExpr> factors;
    factors.push_back(unary());
    while (accept(TokenKind::KwAnd)) factors.push_back(unary());
    if (factors.size() == 1) return std::move(factors.front());
    return GuardExpr::conjunction(std::move(factors));
  }

  GuardExpr unary() {
    if (accept(TokenKind::KwNot)) return GuardExpr::negation(unary());
    if (accept(TokenKind::LParen)) {
      GuardExpr inner = guard();
      expect(TokenKind::RParen, "to close parenthesised guard");
      return inner;
    }
    if (accept(TokenKind::KwPhase)) {
      expect(TokenKind::LParen, "after PHASE");
      EntityRef e = entity();
      expect(TokenKind::RParen, "after PHASE entity");
      expect(TokenKind::EqualEqual, "in PHASE comparison");
      Value phase = value("after '=='");
      return GuardExpr::phase_equals(std::move(e), std::move(phase));
    }
    if (accept(TokenKind::KwCount)) {
      expect(TokenKind::LParen, "after COUNT");
      expect(TokenKind::KwLogical, "in COUNT");
      EntityRef l{EntityKind::Logical, {}};
      const SourcePos id_pos = here();
      l.id = value("after LOGICAL");
      refs_.push_back({resolve(l), id_pos});
      expect(TokenKind::Comma, "in COUNT");
      Value phase = value("for COUNT phase");
      expect(TokenKind::RParen, "to close COUNT");
      expect(TokenKind::GreaterEqual, "after COUNT(...)");
      Value k = value("for COUNT threshold");
      return GuardExpr::count_phase(std::move(l), std::move(phase), std::move(k));
    }
    std::string found = at_end() ? std::string("end of input") : "'" + peek().text + "'";
    fail(here(), "expected PHASE, COUNT, NOT or '(' in guard, found " + found);
  }

  Action action() {
    if (accept(TokenKind::KwSend)) {
      Value msg = value("after SEND");
      expect(TokenKind::KwTask, "in SEND action");
      Value target = value("after TASK");
      return Action::send(std::move(msg), std::move(target));
    }
    if (accept(TokenKind::KwRemove)) {
      expect(TokenKind::KwPhase, "after REMOVE");
      EntityRef e = entity();
      expect(TokenKind::KwFrom, "in REMOVE action");
      expect(TokenKind::KwErrorlist, "after FROM");
      return Action::remove_phase(std::move(e));
    }
    std::string found = "'" + peek().text + "'";
    fail(here(), "expected SEND, REMOVE or FI, found " + found);
  }

  void validate() const {
    for (const auto& r : refs_) {
      const bool known = r.entity.kind == EntityKind::Task ? task_ids_.count(r.entity.id) > 0
                                                           : logical_ids_.count(r.entity.id) > 0;
      if (!known) {
        const char* what = r.entity.kind == EntityKind::Task ? "task " : "logical ";
        fail(r.pos, std::string("reference to undeclared ") + what + std::to_string(r.entity.id));
      }
    }
  }

  std::span<const Token> toks_;
  const Definitions& defs_;
  std::size_t i_ = 0;
  ArielProgram prog_;
  std::set<std::int64_t> task_ids_, watchdog_ids_, logical_ids_;
  std::set<std::pair<std::int64_t, std::int64_t>> placements_;
  std::vector<Reference> refs_;
};

}  // namespace

ArielProgram parse(std::span<const Token> tokens, const Definitions& definitions) {
  return Parser(tokens, definitions).run();
}

ArielProgram parse_source(std::string_view source, const Definitions& definitions) {
  const auto tokens = tokenize(source);
  return parse(tokens, definitions);
}

}  // namespace rwd::ariel

#include <sstream>

#include "rwd/ariel/parser.hpp"

namespace rwd::ariel {
namespace {

std::string value_text(const Value& v) {
  return v.macro ? "{" + *v.macro + "}" : std::to_string(v.value);
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string entity_text(const EntityRef& e) {
  return (e.kind == EntityKind::Task ? "TASK " : "LOGICAL ") + value_text(e.id);
}

bool is_connective(const GuardExpr& g) {
  return g.kind == GuardExpr::Kind::And || g.kind == GuardExpr::Kind::Or;
}

void print_guard(std::ostream& os, const GuardExpr& g) {
  switch (g.kind) {
    case GuardExpr::Kind::PhaseEquals:
      os << "PHASE (" << entity_text(g.entity) << ") == " << value_text(g.phase);
      break;
    case GuardExpr::Kind::CountPhase:
      os << "COUNT (" << entity_text(g.entity) << ", " << value_text(g.phase)
         << ") >= " << value_text(g.threshold);
      break;
    case GuardExpr::Kind::Not:
      os << "NOT ";
      if (is_connective(g.children.front())) {
        os << "(";
        print_guard(os, g.children.front());
        os << ")";
      } else {
        print_guard(os, g.children.front());
      }
      break;
    case GuardExpr::Kind::And:
    case GuardExpr::Kind::Or: {
      const char* op = g.kind == GuardExpr::Kind::And ? " AND " : " OR ";
      for (std::size_t i = 0; i < g.children.size(); ++i) {
        if (i) os << op;
        const bool paren = is_connective(g.children[i]);
        if (paren) os << "(";
        print_guard(os, g.children[i]);
        if (paren) os << ")";
      }
      break;
    }
  }
}

}  // namespace

std::string to_source(const ArielProgram& program) {
  std::ostringstream os;
  for (const auto& inc : program.includes) os << "INCLUDE " << quoted(inc) << "\n";
  for (const auto& t : program.tasks) {
    os << "TASK " << value_text(t.task_id);
    if (t.name) os << " = " << quoted(*t.name);
    os << " IS NODE " << value_text(t.node) << ", TASKID " << value_text(t.local_taskid) << "\n";
  }
  for (const auto& w : program.watchdogs) {
    os << "WATCHDOG " << value_text(w.watchdog_task) << " WATCHES ";
    for (std::size_t i = 0; i < w.watched.size(); ++i) os << (i ? ", " : "") << value_text(w.watched[i]);
    os << "\n  HEARTBEATS EVERY " << value_text(w.heartbeat_period_ms) << " MS\n"
       << "  ON ERROR WARN BACKBONE\nEND WATCHDOG\n";
  }
  for (const auto& l : program.logicals) {
    os << "LOGICAL " << value_text(l.logical_id) << " IS ";
    for (std::size_t i = 0; i < l.members.size(); ++i)
      os << (i ? ", " : "") << "TASK " << value_text(l.members[i]);
    os << "\nEND LOGICAL\n";
  }
  for (const auto& c : program.clauses) {
    os << "IF [ ";
    print_guard(os, c.guard);
    os << " ]\nTHEN\n";
    for (const auto& a : c.actions) {
      if (a.kind == Action::Kind::Send)
        os << "  SEND " << value_text(a.message) << " TASK " << value_text(a.target_task) << "\n";
      else
        os << "  REMOVE PHASE " << entity_text(a.entity) << " FROM ERRORLIST\n";
    }
    os << "FI\n";
  }
  return os.str();
}

}  // namespace rwd::ariel

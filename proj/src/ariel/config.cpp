#include "rwd/ariel/config.hpp"

#include <charconv>
#include <set>
#include <sstream>

#include "rwd/error.hpp"

namespace rwd::ariel {

const TaskPlacement* DeploymentConfig::find_task(std::int64_t id) const {
  for (const auto& t : tasks)
    if (t.task_id == id) return &t;
  return nullptr;
}

const WatchdogBinding* DeploymentConfig::find_watchdog(std::int64_t id) const {
  for (const auto& w : watchdogs)
    if (w.watchdog_task == id) return &w;
  return nullptr;
}

const LogicalMembership* DeploymentConfig::find_logical(std::int64_t id) const {
  for (const auto& l : logicals)
    if (l.logical_id == id) return &l;
  return nullptr;
}

DeploymentConfig emit_config(const ArielProgram& program) {
  DeploymentConfig cfg;
  for (const auto& t : program.tasks)
    cfg.tasks.push_back({t.task_id.value, t.name.value_or(""), t.node.value, t.local_taskid.value});
  for (const auto& w : program.watchdogs) {
    WatchdogBinding b;
    b.watchdog_task = w.watchdog_task.value;
    for (const auto& v : w.watched) b.watched.push_back(v.value);
    b.period_ms = w.heartbeat_period_ms.value;
    b.on_error = w.on_error;
    cfg.watchdogs.push_back(std::move(b));
  }
  for (const auto& l : program.logicals) {
    LogicalMembership m;
    m.logical_id = l.logical_id.value;
    for (const auto& v : l.members) m.members.push_back(v.value);
    cfg.logicals.push_back(std::move(m));
  }
  return cfg;
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out + "\"";
}

std::string join(const std::vector<std::int64_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + std::to_string(v[i]);
  return out;
}

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

class ConfigReader {
 public:
  explicit ConfigReader(std::string_view text) : text_(text) {}

  DeploymentConfig run() {
    while (next_line()) {
      if (line_.empty() || line_.front() == '#') continue;
      if (line_.front() == '[') {
        section();
        continue;
      }
      if (kind_.empty()) fail("key outside of a section");
      auto eq = line_.find('=');
      if (eq == std::string_view::npos) fail("expected key = value");
      assign(trim(line_.substr(0, eq)), trim(line_.substr(eq + 1)));
    }
    finish_section();
    check();
    return std::move(cfg_);
  }

 private:
  bool next_line() {
    if (text_.empty()) return false;
    ++lineno_;
    auto nl = text_.find('\n');
    line_ = trim(text_.substr(0, nl));
    text_ = nl == std::string_view::npos ? std::string_view{} : text_.substr(nl + 1);
    return true;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError("deployment line " + std::to_string(lineno_) + ": " + msg);
  }

  std::int64_t integer(std::string_view s) const {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
      fail("invalid integer '" + std::string(s) + "'");
    return v;
  }

  std::vector<std::int64_t> list(std::string_view s) const {
    std::vector<std::int64_t> out;
    while (!s.empty()) {
      auto comma = s.find(',');
      out.push_back(integer(trim(s.substr(0, comma))));
      if (comma == std::string_view::npos) break;
      s = s.substr(comma + 1);
    }
    return out;
  }

  std::string string(std::string_view s) const {
    if (s.size() < 2 || s.front() != '"' || s.back() != '"') fail("expected quoted string");
    std::string out;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
      if (s[i] == '\\' && i + 2 < s.size()) ++i;
      out.push_back(s[i]);
    }
    return out;
  }

  void section() {
    finish_section();
    if (line_.back() != ']') fail("unterminated section header");
    std::istringstream is(std::string(line_.substr(1, line_.size() - 2)));
    std::string id;
    if (!(is >> kind_ >> id)) fail("section header needs a kind and an id");
    if (kind_ != "task" && kind_ != "watchdog" && kind_ != "logical") fail("unknown section kind '" + kind_ + "'");
    id_ = integer(id);
    keys_.clear();
    task_ = TaskPlacement{id_, "", 0, 0};
    wd_ = WatchdogBinding{id_, {}, 0, OnError::WarnBackbone};
    logical_ = LogicalMembership{id_, {}};
  }

  void assign(std::string_view key, std::string_view value) {
    if (!keys_.insert(std::string(key)).second) fail("duplicate key '" + std::string(key) + "'");
    if (kind_ == "task") {
      if (key == "name") task_.name = string(value);
      else if (key == "node") task_.node = integer(value);
      else if (key == "local_taskid") task_.local_taskid = integer(value);
      else fail("unknown task key '" + std::string(key) + "'");
    } else if (kind_ == "watchdog") {
      if (key == "watches") wd_.watched = list(value);
      else if (key == "period_ms") wd_.period_ms = integer(value);
      else if (key == "on_error") {
        if (value != "WARN_BACKBONE") fail("unsupported on_error action '" + std::string(value) + "'");
      } else fail("unknown watchdog key '" + std::string(key) + "'");
    } else {
      if (key == "members") logical_.members = list(value);
      else fail("unknown logical key '" + std::string(key) + "'");
    }
  }

  void require(std::initializer_list<const char*> keys) const {
    for (const char* k : keys)
      if (!keys_.count(k)) fail("section [" + kind_ + " " + std::to_string(id_) + "] lacks '" + k + "'");
  }

  void finish_section() {
    if (kind_.empty()) return;
    if (kind_ == "task") {
      require({"node", "local_taskid"});
      cfg_.tasks.push_back(task_);
    } else if (kind_ == "watchdog") {
      require({"watches", "period_ms"});
      if (wd_.period_ms <= 0) fail("watchdog period must be positive");
      cfg_.watchdogs.push_back(wd_);
    } else {
      require({"members"});
      cfg_.logicals.push_back(logical_);
    }
    kind_.clear();
  }

  void check() const {
    std::set<std::int64_t> tasks;
    for (const auto& t : cfg_.tasks)
      if (!tasks.insert(t.task_id).second)
        throw InputError("deployment: duplicate task " + std::to_string(t.task_id));
    auto need = [&](std::int64_t id, const std::string& where) {
      if (!tasks.count(id)) throw InputError("deployment: " + where + " references undeclared task " + std::to_string(id));
    };
    std::set<std::int64_t> wds;
    for (const auto& w : cfg_.watchdogs) {
      if (!wds.insert(w.watchdog_task).second)
        throw InputError("deployment: duplicate watchdog " + std::to_string(w.watchdog_task));
      need(w.watchdog_task, "watchdog " + std::to_string(w.watchdog_task));
      for (auto c : w.watched) need(c, "watchdog " + std::to_string(w.watchdog_task));
    }
    std::set<std::int64_t> logicals;
    for (const auto& l : cfg_.logicals) {
      if (!logicals.insert(l.logical_id).second)
        throw InputError("deployment: duplicate logical " + std::to_string(l.logical_id));
      if (l.members.empty()) throw InputError("deployment: logical " + std::to_string(l.logical_id) + " is empty");
      for (auto m : l.members) need(m, "logical " + std::to_string(l.logical_id));
    }
  }

  std::string_view text_;
  std::string_view line_;
  int lineno_ = 0;
  DeploymentConfig cfg_;
  std::string kind_;
  std::int64_t id_ = 0;
  std::set<std::string> keys_;
  TaskPlacement task_;
  WatchdogBinding wd_;
  LogicalMembership logical_;
};

}  // namespace

std::string to_text(const DeploymentConfig& config) {
  std::ostringstream os;
  bool first = true;
  auto header = [&](const char* kind, std::int64_t id) {
    if (!first) os << '\n';
    first = false;
    os << '[' << kind << ' ' << id << "]\n";
  };
  for (const auto& t : config.tasks) {
    header("task", t.task_id);
    os << "name = " << quote(t.name) << "\nnode = " << t.node << "\nlocal_taskid = " << t.local_taskid << '\n';
  }
  for (const auto& w : config.watchdogs) {
    header("watchdog", w.watchdog_task);
    os << "watches = " << join(w.watched) << "\nperiod_ms = " << w.period_ms << "\non_error = WARN_BACKBONE\n";
  }
  for (const auto& l : config.logicals) {
    header("logical", l.logical_id);
    os << "members = " << join(l.members) << '\n';
  }
  return os.str();
}

DeploymentConfig parse_config(std::string_view text) { return ConfigReader(text).run(); }

std::string to_ariel_source(const DeploymentConfig& config) {
  std::ostringstream os;
  for (const auto& t : config.tasks) {
    os << "TASK " << t.task_id;
    if (!t.name.empty()) os << " = " << quote(t.name);
    os << " IS NODE " << t.node << ", TASKID " << t.local_taskid << '\n';
  }
  for (const auto& w : config.watchdogs) {
    os << "WATCHDOG " << w.watchdog_task << " WATCHES " << join(w.watched) << " HEARTBEATS EVERY " << w.period_ms
       << " MS ON ERROR WARN BACKBONE END WATCHDOG\n";
  }
  for (const auto& l : config.logicals) {
    os << "LOGICAL " << l.logical_id << " IS ";
    for (std::size_t i = 0; i < l.members.size(); ++i) os << (i ? ", " : "") << "TASK " << l.members[i];
    os << " END LOGICAL\n";
  }
  return os.str();
}

}  // namespace rwd::ariel

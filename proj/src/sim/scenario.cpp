#include "rwd/sim/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rwd/error.hpp"
#include "rwd/io.hpp"

namespace rwd {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << contents)) throw InputError("cannot write '" + path + "'");
}

}  // namespace rwd

namespace rwd::sim {
namespace {

[[noreturn]] void invalid(const std::string& msg) { throw InputError("scenario: " + msg); }

}  // namespace

void validate(const SimScenario& s) {
  const auto& d = s.deployment;
  if (!(s.timeout_ms > 0)) invalid("timeout_ms must be positive");
  if (!(s.horizon_ms > 0)) invalid("horizon_ms must be positive");
  if (!(s.heartbeat_period_ms > 0)) invalid("heartbeat_period_ms must be positive");
  if (!(s.delay.mean_ms >= 0)) invalid("delay mean must be non-negative");
  if (!(s.reboot_delay_ms >= 0)) invalid("reboot_delay_ms must be non-negative");
  if (!d.find_task(s.backbone_task)) invalid("backbone task " + std::to_string(s.backbone_task) + " is not deployed");
  if (s.heartbeat_logical && !d.find_logical(*s.heartbeat_logical))
    invalid("heartbeat logical " + std::to_string(*s.heartbeat_logical) + " is not deployed");

  std::set<std::int64_t> nodes;
  for (const auto& t : d.tasks) nodes.insert(t.node);

  for (const auto& f : s.faults) {
    if (!(f.time_ms >= 0 && f.time_ms <= s.horizon_ms))
      invalid("fault time " + std::to_string(f.time_ms) + " outside [0, horizon]");
    if (f.kind == FaultInjection::Kind::NodeReset) {
      if (!nodes.count(f.target)) invalid("node reset targets unknown node " + std::to_string(f.target));
    } else if (!d.find_task(f.target)) {
      invalid("fault targets undeployed task " + std::to_string(f.target));
    }
    if (!(f.duration_ms > 0)) invalid("fault duration must be positive");
    if (!(f.extra_ms >= 0)) invalid("extra heartbeat delay must be non-negative");
  }

  ariel::verify(s.rcode);
  using ariel::Opcode;
  auto need = [&](std::int64_t kind, std::int64_t id) {
    const bool ok = kind == 0 ? d.find_task(id) != nullptr : d.find_logical(id) != nullptr;
    if (!ok) invalid(std::string("r-code references undeployed ") + (kind == 0 ? "task " : "logical ") + std::to_string(id));
  };
  for (const auto& ins : s.rcode.code) {
    if (ins.op == Opcode::PushPhase || ins.op == Opcode::ActRemove) need(ins.operands[0], ins.operands[1]);
    if (ins.op == Opcode::CountGe) need(1, ins.operands[0]);
  }
}

ariel::AlarmRecipe alarm_recipe(const SimScenario& s) {
  const ariel::LogicalMembership* l = nullptr;
  if (s.heartbeat_logical) l = s.deployment.find_logical(*s.heartbeat_logical);
  else if (s.deployment.logicals.size() == 1) l = &s.deployment.logicals.front();
  if (!l) invalid("cannot tell which logical groups the watchdog replicas (set heartbeat_logical)");
  ariel::AlarmRecipe r;
  r.logical = l->logical_id;
  r.replicas = l->members;
  r.expired_phase = s.expired_phase;
  r.alarm_message = s.alarm_message;
  r.alarm_task = s.alarm_task;
  return r;
}

SimScenario with_policy(SimScenario scenario, const VotingPolicy& policy) {
  const auto recipe = alarm_recipe(scenario);
  scenario.rcode = ariel::policy_rcode(policy, recipe, scenario.deployment);
  scenario.label = policy.label(static_cast<int>(recipe.replicas.size()));
  return scenario;
}

SimScenario load_scenario(std::string_view json_text, const std::string& base_dir) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    invalid(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) invalid("top level must be an object");

  static const std::set<std::string> known = {
      "deployment", "rcode", "policy", "backbone", "heartbeat_logical", "heartbeat_period_ms", "timeout_ms",
      "delay", "faults", "horizon_ms", "seed", "expired_phase", "counter_persistent", "reboot_delay_ms",
      "alarm_message", "alarm_task", "label"};
  for (const auto& [key, _] : doc.items())
    if (!known.count(key)) invalid("unknown key '" + key + "'");

  auto resolve_path = [&](const std::string& p) {
    std::filesystem::path path(p);
    return (path.is_relative() ? std::filesystem::path(base_dir) / path : path).string();
  };

  SimScenario s;
  try {
    if (!doc.contains("deployment")) invalid("missing 'deployment'");
    s.deployment = ariel::parse_config(read_file(resolve_path(doc.at("deployment").get<std::string>())));
    s.backbone_task = doc.at("backbone").get<std::int64_t>();
    if (doc.contains("heartbeat_logical")) s.heartbeat_logical = doc["heartbeat_logical"].get<std::int64_t>();

    if (doc.contains("heartbeat_period_ms")) {
      s.heartbeat_period_ms = doc["heartbeat_period_ms"].get<double>();
    } else if (!s.deployment.watchdogs.empty()) {
      std::int64_t p = s.deployment.watchdogs.front().period_ms;
      for (const auto& w : s.deployment.watchdogs) p = std::min(p, w.period_ms);
      s.heartbeat_period_ms = static_cast<double>(p);
    }
    s.timeout_ms = doc.value("timeout_ms", 2.0 * s.heartbeat_period_ms);
    s.horizon_ms = doc.at("horizon_ms").get<double>();
    s.rng_seed = doc.value("seed", std::uint64_t{1});
    s.expired_phase = doc.value("expired_phase", std::int64_t{1});
    s.counter_persistent = doc.value("counter_persistent", true);
    s.reboot_delay_ms = doc.value("reboot_delay_ms", 0.0);
    s.alarm_message = doc.value("alarm_message", std::int64_t{1});
    s.alarm_task = doc.value("alarm_task", std::int64_t{0});

    if (doc.contains("delay")) {
      const auto& d = doc["delay"];
      const std::string model = d.value("model", std::string("constant"));
      if (model == "constant") s.delay.kind = DelayModel::Kind::Constant;
      else if (model == "exponential") s.delay.kind = DelayModel::Kind::Exponential;
      else invalid("unknown delay model '" + model + "'");
      s.delay.mean_ms = d.value("mean_ms", 0.0);
    }

    for (const auto& f : doc.value("faults", json::array())) {
      FaultInjection fi;
      fi.time_ms = f.at("time_ms").get<double>();
      fi.target = f.at("target").get<std::int64_t>();
      const std::string kind = f.at("kind").get<std::string>();
      if (kind == "crash") fi.kind = FaultInjection::Kind::Crash;
      else if (kind == "hang") fi.kind = FaultInjection::Kind::Hang;
      else if (kind == "delay_heartbeats") fi.kind = FaultInjection::Kind::DelayHeartbeats;
      else if (kind == "node_reset") fi.kind = FaultInjection::Kind::NodeReset;
      else invalid("unknown fault kind '" + kind + "'");
      fi.extra_ms = f.value("extra_ms", 0.0);
      if (f.contains("duration_ms")) fi.duration_ms = f["duration_ms"].get<double>();
      s.faults.push_back(fi);
    }

    if (doc.contains("rcode") == doc.contains("policy")) invalid("give exactly one of 'rcode' or 'policy'");
    if (doc.contains("rcode")) {
      s.rcode = ariel::parse_rcode(read_file(resolve_path(doc["rcode"].get<std::string>())));
      s.label = doc.value("label", std::string("custom"));
    } else {
      s = with_policy(std::move(s), parse_policy(doc["policy"].get<std::string>()));
      if (doc.contains("label")) s.label = doc["label"].get<std::string>();
    }
  } catch (const json::exception& e) {
    invalid(std::string("bad field: ") + e.what());
  }
  validate(s);
  return s;
}

}  // namespace rwd::sim

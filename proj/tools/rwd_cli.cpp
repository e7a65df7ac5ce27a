// rwd: command-line front end over the C API in rwd/rwd.h.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "rwd/rwd.h"

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kUsage = 1, kInput = 2, kAnalysis = 3 };

struct Failure {
  int code;
  std::string message;
};

// Owns a string returned by the library.
struct Text {
  char* p = nullptr;
  ~Text() { rwd_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

[[noreturn]] void fail_status(rwd_status st, const std::string& where) {
  std::string msg = rwd_last_error();
  if (!where.empty()) msg = where + ": " + msg;
  throw Failure{st == RWD_ERR_INTERNAL ? 4 : static_cast<int>(st), msg};
}

void check(rwd_status st, const std::string& where = "") {
  if (st != RWD_OK) fail_status(st, where);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kInput, path + ": cannot open file"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Failure{kInput, path + ": cannot write file"};
}

// "-" or empty means stdout.
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") std::cout << text;
  else spill(path, text);
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ",") + s;
  return out;
}

struct SolveFlags {
  double tolerance = 1e-10;
  std::size_t state_cap = 100000;

  void add(CLI::App* app) {
    app->add_option("--tolerance", tolerance, "Steady-state residual bound")->check(CLI::PositiveNumber);
    app->add_option("--state-cap", state_cap, "Maximum number of reachable states")->check(CLI::PositiveNumber);
  }
  rwd_solve_options get() const { return {tolerance, state_cap}; }
};

struct ModelFlags {
  int replicas = 3;
  double activity = 2.0, fault = 0.1, cycle = 1.0, reboot = 1.0;
  bool single_server = false;

  void add(CLI::App* app) {
    app->add_option("--replicas", replicas, "Watchdog replicas")->check(CLI::PositiveNumber);
    app->add_option("--rate-activity", activity, "Rate of activity")->check(CLI::PositiveNumber);
    app->add_option("--rate-fault", fault, "Rate of ap_fault and w_fault")->check(CLI::PositiveNumber);
    app->add_option("--rate-cycle", cycle, "Rate of cycle")->check(CLI::PositiveNumber);
    app->add_option("--rate-reboot", reboot, "Rate of reboot")->check(CLI::PositiveNumber);
    app->add_flag("--single-server", single_server, "Single-server timeout and w_fault");
  }
  rwd_params get() const {
    rwd_params p;
    rwd_params_default(&p);
    p.n_replicas = replicas;
    p.rate_activity = activity;
    p.rate_fault = fault;
    p.rate_cycle = cycle;
    p.rate_reboot = reboot;
    p.single_server_timeout = single_server ? 1 : 0;
    return p;
  }
};

rwd_net* load_net(const std::string& path) {
  const std::string text = slurp(path);
  rwd_net* net = nullptr;
  check(rwd_net_parse(text.c_str(), &net), path);
  return net;
}

struct NetHandle {
  rwd_net* p;
  ~NetHandle() { rwd_net_free(p); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Redundant watchdog toolkit: Ariel compiler, fault-injection simulator, GSPN analysis"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", std::string(rwd_version()));

  // compile
  std::string c_src, c_defs, c_out = ".";
  auto* compile = app.add_subcommand("compile", "Compile an Ariel program into r-codes and a deployment config");
  compile->add_option("source", c_src, "Ariel source file")->required();
  compile->add_option("--defs", c_defs, "NAME=VALUE definitions file");
  compile->add_option("--out-dir", c_out, "Directory for <stem>.rcode and <stem>.cfg");

  // simulate
  std::string s_path, s_out, s_trace, s_policy;
  std::uint64_t s_seed = 0;
  std::size_t s_reps = 1;
  auto* simulate = app.add_subcommand("simulate", "Run a fault-injection scenario and report metrics CSV");
  simulate->add_option("scenario", s_path, "Scenario JSON file")->required();
  auto* seed_opt = simulate->add_option("--seed", s_seed, "Seed of the first run (default: scenario seed)");
  simulate->add_option("--replications", s_reps, "Runs with consecutive seeds")->check(CLI::PositiveNumber);
  simulate->add_option("--policy", s_policy, "Replace the r-code with a voting policy: OR, AND, KooN");
  simulate->add_option("--out", s_out, "Metrics CSV (default stdout)");
  simulate->add_option("--trace", s_trace, "Event trace of the first run");

  // gspn-solve
  std::string g_net, g_states, g_thr;
  SolveFlags g_solve;
  auto* solve = app.add_subcommand("gspn-solve", "Steady-state probabilities and throughputs of a net");
  solve->add_option("net", g_net, "Net file")->required();
  solve->add_option("--states", g_states, "state_index,probability CSV (default stdout)");
  solve->add_option("--throughputs", g_thr, "transition,throughput CSV (default stdout)");
  g_solve.add(solve);

  // gspn-invariants
  std::string i_net, i_out;
  auto* invariants = app.add_subcommand("gspn-invariants", "Minimal P-invariants of a net");
  invariants->add_option("net", i_net, "Net file")->required();
  invariants->add_option("--out", i_out, "Output file (default stdout)");

  // gspn-query
  std::string q_net, q_zero, q_place;
  std::vector<std::string> q_enabled;
  int q_k = 1;
  bool q_tangible = false;
  std::size_t q_cap = 100000;
  auto* query = app.add_subcommand("gspn-query", "Reachability queries over the state space");
  query->add_option("net", q_net, "Net file")->required();
  auto* zero_opt = query->add_option("--always-zero", q_zero, "Place that must be empty in every state");
  query->add_flag("--tangible", q_tangible, "Restrict --always-zero to tangible states");
  auto* enabled_opt = query->add_option("--exists-enabled", q_enabled, "Transitions, any of which may be enabled")
                          ->delimiter(',');
  query->add_option("--place", q_place, "Place for --exists-enabled");
  query->add_option("--at-least", q_k, "Token bound for --place")->check(CLI::NonNegativeNumber);
  query->add_option("--state-cap", q_cap, "Maximum number of reachable states")->check(CLI::PositiveNumber);
  zero_opt->excludes(enabled_opt);

  // rwd-sweep
  std::vector<std::string> w_policies{"AND", "OR"};
  std::vector<std::string> w_rates{"0.5", "1.0", "2.0"};
  std::string w_out, w_plot, w_nets;
  ModelFlags w_model;
  SolveFlags w_solve;
  auto* sweep = app.add_subcommand("rwd-sweep", "Throughputs of the watchdog models over timeout rates");
  sweep->add_option("--policies", w_policies, "Voting policies")->delimiter(',');
  sweep->add_option("--rates", w_rates, "Timeout rates")->delimiter(',');
  sweep->add_option("--out", w_out, "CSV output (default stdout)");
  sweep->add_option("--gnuplot", w_plot, "Also write a gnuplot data file");
  sweep->add_option("--emit-nets", w_nets, "Write every built net into this directory");
  w_model.add(sweep);
  w_solve.add(sweep);

  // rwd-validate
  std::vector<std::string> v_policies{"AND", "OR"};
  double v_rate = 1.0, v_horizon = 5000, v_warmup = 0, v_z = 3.0;
  std::size_t v_reps = 50;
  std::uint64_t v_seed = 1;
  std::string v_out;
  ModelFlags v_model;
  auto* validate = app.add_subcommand("rwd-validate", "Analytic against Monte Carlo throughputs");
  validate->add_option("--policies", v_policies, "Voting policies")->delimiter(',');
  validate->add_option("--rate", v_rate, "Timeout rate")->check(CLI::PositiveNumber);
  validate->add_option("--replications", v_reps, "Simulation replications")->check(CLI::PositiveNumber);
  validate->add_option("--horizon", v_horizon, "Simulated time per replication")->check(CLI::PositiveNumber);
  validate->add_option("--warmup", v_warmup, "Initial time excluded from counts")->check(CLI::NonNegativeNumber);
  validate->add_option("--seed", v_seed, "Random seed");
  validate->add_option("--z", v_z, "Agreement band in standard errors")->check(CLI::PositiveNumber);
  validate->add_option("--out", v_out, "CSV output (default stdout)");
  v_model.add(validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*compile) {
      const std::string source = slurp(c_src);
      std::string defs;
      if (!c_defs.empty()) {
        defs = slurp(c_defs);
        check(rwd_definitions_check(defs.c_str(), nullptr), c_defs);
      }
      rwd_program* prog = nullptr;
      check(rwd_program_compile(source.c_str(), c_defs.empty() ? nullptr : defs.c_str(), &prog), c_src);
      Text rcode, config;
      std::size_t tasks = 0, wds = 0, logicals = 0, clauses = 0;
      rwd_status st = rwd_program_rcode(prog, &rcode.p);
      if (st == RWD_OK) st = rwd_program_config(prog, &config.p);
      if (st == RWD_OK) st = rwd_program_summary(prog, &tasks, &wds, &logicals, &clauses);
      rwd_program_free(prog);
      check(st);
      const std::string stem = fs::path(c_src).stem().string();
      std::error_code ec;
      fs::create_directories(c_out, ec);
      spill((fs::path(c_out) / (stem + ".rcode")).string(), rcode.str());
      spill((fs::path(c_out) / (stem + ".cfg")).string(), config.str());
      std::printf("tasks %zu, watchdogs %zu, logicals %zu, clauses %zu\n", tasks, wds, logicals, clauses);
    } else if (*simulate) {
      const std::string json = slurp(s_path);
      rwd_sim_options opt;
      rwd_sim_options_default(&opt);
      if (seed_opt->count()) {
        opt.override_seed = 1;
        opt.seed = s_seed;
      }
      opt.replications = s_reps;
      if (!s_policy.empty()) opt.policy = s_policy.c_str();
      const std::string base = fs::path(s_path).parent_path().string();
      Text csv, trace;
      check(rwd_simulate(json.c_str(), base.empty() ? "." : base.c_str(), &opt, &csv.p,
                         s_trace.empty() ? nullptr : &trace.p),
            s_path);
      emit(s_out, csv.str());
      if (!s_trace.empty()) spill(s_trace, trace.str());
    } else if (*solve) {
      NetHandle net{load_net(g_net)};
      const rwd_solve_options o = g_solve.get();
      Text states, thr;
      check(rwd_net_solve(net.p, &o, &states.p, &thr.p), g_net);
      if (g_states.empty() && g_thr.empty()) {
        std::cout << states.str() << "\n" << thr.str();
      } else {
        emit(g_states, states.str());
        emit(g_thr, thr.str());
      }
    } else if (*invariants) {
      NetHandle net{load_net(i_net)};
      Text out;
      check(rwd_net_invariants(net.p, &out.p), i_net);
      emit(i_out, out.str());
    } else if (*query) {
      NetHandle net{load_net(q_net)};
      rwd_query_result r{};
      Text marking;
      if (zero_opt->count()) {
        check(rwd_net_query_always_zero(net.p, q_zero.c_str(), q_tangible ? 1 : 0, q_cap, &r, &marking.p), q_net);
        if (r.holds) std::printf("always %s = 0: true\n", q_zero.c_str());
        else std::printf("always %s = 0: false, counterexample state %zu: %s\n", q_zero.c_str(), r.state, marking.p);
      } else if (enabled_opt->count()) {
        if (q_place.empty()) throw Failure{kUsage, "--exists-enabled needs --place"};
        const std::string ts = join(q_enabled);
        check(rwd_net_query_exists_enabled(net.p, ts.c_str(), q_place.c_str(), q_k, q_cap, &r, &marking.p), q_net);
        if (r.holds)
          std::printf("exists {%s} enabled with %s >= %d: true, witness state %zu: %s\n", ts.c_str(),
                      q_place.c_str(), q_k, r.state, marking.p);
        else std::printf("exists {%s} enabled with %s >= %d: false\n", ts.c_str(), q_place.c_str(), q_k);
      } else {
        throw Failure{kUsage, "gspn-query needs --always-zero or --exists-enabled"};
      }
    } else if (*sweep) {
      const rwd_params p = w_model.get();
      const rwd_solve_options o = w_solve.get();
      const std::string pols = join(w_policies), rates = join(w_rates);
      if (!w_nets.empty()) {
        std::error_code ec;
        fs::create_directories(w_nets, ec);
        for (const auto& pol : w_policies) {
          for (const auto& rate : w_rates) {
            rwd_params q = p;
            q.policy = pol.c_str();
            char* end = nullptr;
            q.rate_timeout = std::strtod(rate.c_str(), &end);
            if (rate.empty() || *end) throw Failure{kInput, "invalid rate '" + rate + "'"};
            rwd_net* built = nullptr;
            Text rendering;
            check(rwd_model_build(&q, &built, &rendering.p));
            NetHandle h{built};
            Text net_text;
            check(rwd_net_write(built, &net_text.p));
            const std::string stem = pol + "_" + rate;
            spill((fs::path(w_nets) / (stem + ".net")).string(), net_text.str());
            spill((fs::path(w_nets) / (stem + ".txt")).string(), rendering.str());
          }
        }
      }
      Text csv, plot;
      const rwd_status st = rwd_sweep(&p, pols.c_str(), rates.c_str(), &o, &csv.p, w_plot.empty() ? nullptr : &plot.p);
      if (st != RWD_OK && st != RWD_ERR_ANALYSIS) fail_status(st, "");
      const std::string failure = st == RWD_OK ? "" : rwd_last_error();
      emit(w_out, csv.str());
      if (!w_plot.empty()) spill(w_plot, plot.str());
      if (st == RWD_ERR_ANALYSIS) throw Failure{kAnalysis, failure};
    } else if (*validate) {
      rwd_params p = v_model.get();
      p.rate_timeout = v_rate;
      rwd_mc_options o;
      rwd_mc_options_default(&o);
      o.horizon = v_horizon;
      o.warmup = v_warmup;
      o.replications = v_reps;
      o.seed = v_seed;
      o.z = v_z;
      const std::string pols = join(v_policies);
      Text report;
      int ok = 0;
      check(rwd_validate(&p, pols.c_str(), &o, &report.p, &ok));
      emit(v_out, report.str());
      if (!ok) throw Failure{kAnalysis, "some throughputs fall outside the agreement band"};
    }
  } catch (const Failure& f) {
    std::fprintf(stderr, "rwd: error: %s\n", f.message.c_str());
    return f.code;
  }
  return kOk;
}

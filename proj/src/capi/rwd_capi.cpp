#include "rwd/rwd.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "rwd/ariel/compiler.hpp"
#include "rwd/ariel/config.hpp"
#include "rwd/ariel/definitions.hpp"
#include "rwd/ariel/parser.hpp"
#include "rwd/gspn/invariants.hpp"
#include "rwd/gspn/net_io.hpp"
#include "rwd/gspn/query.hpp"
#include "rwd/gspn/solver.hpp"
#include "rwd/models/monte_carlo.hpp"
#include "rwd/models/sweep.hpp"
#include "rwd/policy.hpp"
#include "rwd/sim/measure.hpp"
#include "rwd/sim/simulator.hpp"

struct rwd_program {
  rwd::ariel::ArielProgram program;
  rwd::ariel::RCode rcode;
};

struct rwd_net {
  rwd::gspn::PetriNet net;
};

namespace {

thread_local std::string g_last_error;

struct UsageError : rwd::Error {
  explicit UsageError(const std::string& what) : rwd::Error(rwd::ErrorClass::Usage, what) {}
};

template <class F>
rwd_status guard(F&& f) {
  try {
    g_last_error.clear();
    return f();
  } catch (const rwd::Error& e) {
    g_last_error = e.what();
    return static_cast<rwd_status>(static_cast<int>(e.error_class()));
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown error";
  }
  return RWD_ERR_INTERNAL;
}

void require(const void* p, const char* what) {
  if (!p) throw UsageError(std::string(what) + " must not be NULL");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void put(char** out, const std::string& s) {
  if (out) *out = dup(s);
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ' && c != '\t') {
      cur += c;
    }
  }
  if (!cur.empty() || !out.empty()) out.push_back(cur);
  return out;
}

std::vector<double> parse_rates(const char* text) {
  std::vector<double> out;
  for (const auto& item : split(text)) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || *end != '\0') throw rwd::InputError("invalid rate '" + item + "'");
    if (!(v > 0)) throw rwd::InputError("rate must be positive, got '" + item + "'");
    out.push_back(v);
  }
  return out;
}

rwd::gspn::SolverOptions solver_options(const rwd_solve_options* o) {
  rwd::gspn::SolverOptions s;
  if (o) s.tolerance = o->tolerance;
  return s;
}

std::size_t state_cap(const rwd_solve_options* o) { return o ? o->state_cap : rwd::gspn::kDefaultStateCap; }

rwd::models::RwdParams to_params(const rwd_params* p) {
  rwd::models::RwdParams out;
  if (!p) return out;
  out.n_replicas = p->n_replicas;
  out.rate_activity = p->rate_activity;
  out.rate_fault = p->rate_fault;
  out.rate_cycle = p->rate_cycle;
  out.rate_reboot = p->rate_reboot;
  out.rate_timeout = p->rate_timeout;
  if (p->policy) out.policy = rwd::parse_policy(p->policy);
  out.timeout_server = p->single_server_timeout ? rwd::gspn::ServerSemantics::Single
                                                : rwd::gspn::ServerSemantics::Infinite;
  return out;
}

void put_query(const rwd::gspn::ReachabilityGraph& g, const rwd::gspn::PetriNet& net,
               const rwd::gspn::QueryResult& q, rwd_query_result* result, char** marking) {
  result->holds = q.holds ? 1 : 0;
  result->has_state = q.state ? 1 : 0;
  result->state = q.state.value_or(0);
  if (marking) *marking = q.state ? dup(net.describe(g.states[*q.state])) : nullptr;
}

}  // namespace

extern "C" {

const char* rwd_version(void) { return "1.0.0"; }

const char* rwd_last_error(void) { return g_last_error.c_str(); }

void rwd_string_free(char* s) { std::free(s); }

rwd_status rwd_definitions_check(const char* definitions, size_t* count) {
  return guard([&] {
    require(definitions, "definitions");
    const auto defs = rwd::ariel::parse_definitions(definitions);
    if (count) *count = defs.size();
    return RWD_OK;
  });
}

rwd_status rwd_program_compile(const char* source, const char* definitions, rwd_program** out) {
  return guard([&] {
    require(source, "source");
    require(out, "out");
    const auto defs = definitions ? rwd::ariel::parse_definitions(definitions) : rwd::ariel::Definitions{};
    auto p = std::make_unique<rwd_program>();
    p->program = rwd::ariel::parse_source(source, defs);
    p->rcode = rwd::ariel::compile_recovery(p->program);
    *out = p.release();
    return RWD_OK;
  });
}

void rwd_program_free(rwd_program* program) { delete program; }

rwd_status rwd_program_rcode(const rwd_program* program, char** out) {
  return guard([&] {
    require(program, "program");
    require(out, "out");
    *out = dup(rwd::ariel::to_text(program->rcode));
    return RWD_OK;
  });
}

rwd_status rwd_program_config(const rwd_program* program, char** out) {
  return guard([&] {
    require(program, "program");
    require(out, "out");
    *out = dup(rwd::ariel::to_text(rwd::ariel::emit_config(program->program)));
    return RWD_OK;
  });
}

rwd_status rwd_program_summary(const rwd_program* program, size_t* tasks, size_t* watchdogs, size_t* logicals,
                               size_t* clauses) {
  return guard([&] {
    require(program, "program");
    const auto& p = program->program;
    if (tasks) *tasks = p.tasks.size();
    if (watchdogs) *watchdogs = p.watchdogs.size();
    if (logicals) *logicals = p.logicals.size();
    if (clauses) *clauses = p.clauses.size();
    return RWD_OK;
  });
}

void rwd_sim_options_default(rwd_sim_options* options) {
  if (!options) return;
  options->override_seed = 0;
  options->seed = 1;
  options->replications = 1;
  options->policy = nullptr;
}

rwd_status rwd_simulate(const char* scenario_json, const char* base_dir, const rwd_sim_options* options,
                        char** metrics_csv, char** trace) {
  return guard([&] {
    require(scenario_json, "scenario_json");
    require(metrics_csv, "metrics_csv");
    rwd_sim_options opt;
    rwd_sim_options_default(&opt);
    if (options) opt = *options;
    auto scenario = rwd::sim::load_scenario(scenario_json, base_dir ? base_dir : ".");
    if (opt.policy) scenario = rwd::sim::with_policy(std::move(scenario), rwd::parse_policy(opt.policy));
    const std::uint64_t first = opt.override_seed ? opt.seed : scenario.rng_seed;
    const std::size_t runs = opt.replications ? opt.replications : 1;
    std::string csv = rwd::sim::metrics_csv_header();
    std::string first_trace;
    for (std::size_t i = 0; i < runs; ++i) {
      scenario.rng_seed = first + i;
      auto result = rwd::sim::run(scenario);
      csv += rwd::sim::metrics_csv_row(scenario.label, scenario.rng_seed, result.metrics);
      if (i == 0) first_trace = std::move(result.trace);
    }
    *metrics_csv = dup(csv);
    put(trace, first_trace);
    return RWD_OK;
  });
}

void rwd_solve_options_default(rwd_solve_options* options) {
  if (!options) return;
  options->tolerance = rwd::gspn::SolverOptions{}.tolerance;
  options->state_cap = rwd::gspn::kDefaultStateCap;
}

rwd_status rwd_net_parse(const char* text, rwd_net** out) {
  return guard([&] {
    require(text, "text");
    require(out, "out");
    auto n = std::make_unique<rwd_net>();
    n->net = rwd::gspn::parse_net(text);
    *out = n.release();
    return RWD_OK;
  });
}

void rwd_net_free(rwd_net* net) { delete net; }

rwd_status rwd_net_write(const rwd_net* net, char** out) {
  return guard([&] {
    require(net, "net");
    require(out, "out");
    *out = dup(rwd::gspn::write_net(net->net));
    return RWD_OK;
  });
}

rwd_status rwd_net_counts(const rwd_net* net, size_t* places, size_t* transitions) {
  return guard([&] {
    require(net, "net");
    if (places) *places = net->net.place_count();
    if (transitions) *transitions = net->net.transition_count();
    return RWD_OK;
  });
}

rwd_status rwd_net_solve(const rwd_net* net, const rwd_solve_options* options, char** states_csv,
                         char** throughput_csv) {
  return guard([&] {
    require(net, "net");
    const auto g = rwd::gspn::reachability(net->net, state_cap(options));
    const auto chain = rwd::gspn::eliminate_vanishing(g, net->net);
    const auto pi = rwd::gspn::steady_state(chain, solver_options(options));
    const auto thr = rwd::gspn::throughputs(chain, pi);
    const std::string a = rwd::gspn::solution_csv(chain, pi);
    const std::string b = rwd::gspn::throughput_csv(net->net, thr);
    char* sa = states_csv ? dup(a) : nullptr;
    char* sb = nullptr;
    try {
      sb = throughput_csv ? dup(b) : nullptr;
    } catch (...) {
      std::free(sa);
      throw;
    }
    if (states_csv) *states_csv = sa;
    if (throughput_csv) *throughput_csv = sb;
    return RWD_OK;
  });
}

rwd_status rwd_net_invariants(const rwd_net* net, char** out) {
  return guard([&] {
    require(net, "net");
    require(out, "out");
    std::string text;
    for (const auto& inv : rwd::gspn::p_invariants(net->net)) text += rwd::gspn::format_invariant(net->net, inv) + "\n";
    *out = dup(text);
    return RWD_OK;
  });
}

rwd_status rwd_net_query_always_zero(const rwd_net* net, const char* place, int tangible_only, size_t cap,
                                     rwd_query_result* result, char** marking) {
  return guard([&] {
    require(net, "net");
    require(place, "place");
    require(result, "result");
    const auto p = net->net.place(place);
    const auto g = rwd::gspn::reachability(net->net, cap);
    const auto q = rwd::gspn::always_place_zero(
        g, net->net, p, tangible_only ? rwd::gspn::StateFilter::Tangible : rwd::gspn::StateFilter::All);
    put_query(g, net->net, q, result, marking);
    return RWD_OK;
  });
}

rwd_status rwd_net_query_exists_enabled(const rwd_net* net, const char* transitions, const char* place, int k,
                                        size_t cap, rwd_query_result* result, char** marking) {
  return guard([&] {
    require(net, "net");
    require(transitions, "transitions");
    require(place, "place");
    require(result, "result");
    std::vector<rwd::gspn::TransitionId> ts;
    for (const auto& name : split(transitions)) ts.push_back(net->net.transition(name));
    if (ts.empty()) throw rwd::InputError("no transitions given");
    const auto p = net->net.place(place);
    const auto g = rwd::gspn::reachability(net->net, cap);
    const auto q = rwd::gspn::exists_enabled_with(g, net->net, ts, p, k);
    put_query(g, net->net, q, result, marking);
    return RWD_OK;
  });
}

void rwd_params_default(rwd_params* params) {
  if (!params) return;
  const rwd::models::RwdParams d;
  params->n_replicas = d.n_replicas;
  params->rate_activity = d.rate_activity;
  params->rate_fault = d.rate_fault;
  params->rate_cycle = d.rate_cycle;
  params->rate_reboot = d.rate_reboot;
  params->rate_timeout = d.rate_timeout;
  params->policy = "OR";
  params->single_server_timeout = 0;
}

rwd_status rwd_model_build(const rwd_params* params, rwd_net** out, char** rendering) {
  return guard([&] {
    require(out, "out");
    auto model = rwd::models::build(to_params(params));
    std::string text = rendering ? rwd::models::render(model) : std::string();
    auto n = std::make_unique<rwd_net>();
    n->net = std::move(model.net);
    put(rendering, text);
    *out = n.release();
    return RWD_OK;
  });
}

rwd_status rwd_sweep(const rwd_params* params, const char* policies, const char* rates,
                     const rwd_solve_options* options, char** csv, char** gnuplot) {
  return guard([&] {
    require(policies, "policies");
    require(rates, "rates");
    require(csv, "csv");
    const auto tmpl = to_params(params);
    const auto pols = rwd::parse_policy_list(policies);
    const auto rs = parse_rates(rates);
    const auto rows = rwd::models::sweep(tmpl, pols, rs, solver_options(options), state_cap(options));
    std::string failure;
    for (const auto& r : rows)
      if (r.failed && failure.empty())
        failure = r.policy.label(r.n_replicas) + " at rate " + rwd::gspn::format_number(r.timeout_rate) + ": " + r.error;
    const std::string plot = gnuplot ? rwd::models::sweep_gnuplot(rows) : std::string();
    *csv = dup(rwd::models::sweep_csv(rows));
    put(gnuplot, plot);
    if (!failure.empty()) {
      g_last_error = failure;
      return RWD_ERR_ANALYSIS;
    }
    return RWD_OK;
  });
}

void rwd_mc_options_default(rwd_mc_options* options) {
  if (!options) return;
  const rwd::models::McOptions d;
  options->horizon = d.horizon;
  options->warmup = d.warmup;
  options->replications = d.replications;
  options->seed = d.seed;
  options->z = 3.0;
}

rwd_status rwd_validate(const rwd_params* params, const char* policies, const rwd_mc_options* options,
                        char** report_csv, int* all_within) {
  return guard([&] {
    require(policies, "policies");
    require(report_csv, "report_csv");
    rwd_mc_options o;
    rwd_mc_options_default(&o);
    if (options) o = *options;
    rwd::models::McOptions mc{o.horizon, o.warmup, o.replications, o.seed};
    auto tmpl = to_params(params);
    std::string text;
    bool ok = true;
    bool header = true;
    for (const auto& policy : rwd::parse_policy_list(policies)) {
      tmpl.policy = policy;
      const auto rows = rwd::models::validate(tmpl, mc, o.z);
      for (const auto& r : rows) ok = ok && r.within;
      text += rwd::models::validation_csv(policy.label(tmpl.n_replicas), rows, header);
      header = false;
    }
    *report_csv = dup(text);
    if (all_within) *all_within = ok ? 1 : 0;
    return RWD_OK;
  });
}

}  // extern "C"

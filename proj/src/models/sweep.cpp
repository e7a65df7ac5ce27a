#include "rwd/models/sweep.hpp"

#include "rwd/gspn/net_io.hpp"

namespace rwd::models {

using gspn::format_number;

RwdSolution solve(const RwdModel& model, const gspn::SolverOptions& options, std::size_t state_cap) {
  RwdSolution s;
  s.graph = gspn::reachability(model.net, state_cap);
  s.chain = gspn::eliminate_vanishing(s.graph, model.net);
  s.pi = gspn::steady_state(s.chain, options);
  s.throughput = gspn::throughputs(s.chain, s.pi);
  return s;
}

std::vector<SweepRow> sweep(const RwdParams& tmpl, std::span<const VotingPolicy> policies,
                            std::span<const double> timeout_rates, const gspn::SolverOptions& options,
                            std::size_t state_cap) {
  std::vector<SweepRow> rows;
  for (const VotingPolicy& policy : policies) {
    for (double rate : timeout_rates) {
      SweepRow row;
      row.policy = policy;
      row.n_replicas = tmpl.n_replicas;
      row.timeout_rate = rate;
      try {
        RwdParams p = tmpl;
        p.policy = policy;
        p.rate_timeout = rate;
        const RwdModel model = build(p);
        const RwdSolution sol = solve(model, options, state_cap);
        const auto& r = model.roles;
        const auto& thr = sol.throughput;
        row.activity = thr[r.activity];
        for (auto t : r.ok) row.ok += thr[t];
        row.timeout = thr[r.timeout];
        row.delayed = thr[r.delayed];
        row.faulty = thr[r.faulty];
        row.cycle = thr[r.cycle];
      } catch (const Error& e) {
        row.failed = true;
        row.error = e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string sweep_csv(std::span<const SweepRow> rows) {
  std::string out = "policy,timeout_rate,thr_activity,thr_ok,thr_timeout,thr_delayed,thr_faulty,thr_cycle\n";
  for (const SweepRow& r : rows) {
    out += csv_field(r.policy.label(r.n_replicas)) + "," + format_number(r.timeout_rate);
    if (r.failed) {
      for (int i = 0; i < 6; ++i) out += ",failed";
    } else {
      for (double v : {r.activity, r.ok, r.timeout, r.delayed, r.faulty, r.cycle}) out += "," + format_number(v);
    }
    out += "\n";
  }
  return out;
}

std::string sweep_gnuplot(std::span<const SweepRow> rows) {
  std::string out;
  std::string current;
  for (const SweepRow& r : rows) {
    const std::string label = r.policy.label(r.n_replicas);
    if (label != current) {
      if (!current.empty()) out += "\n\n";
      out += "# policy " + label + "\n# timeout_rate activity ok timeout delayed faulty cycle\n";
      current = label;
    }
    if (r.failed) {
      out += "# " + format_number(r.timeout_rate) + " failed: " + r.error + "\n";
      continue;
    }
    out += format_number(r.timeout_rate);
    for (double v : {r.activity, r.ok, r.timeout, r.delayed, r.faulty, r.cycle}) out += " " + format_number(v);
    out += "\n";
  }
  return out;
}

}  // namespace rwd::models

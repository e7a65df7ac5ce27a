#include "rwd/models/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rwd/gspn/analysis_error.hpp"
#include "rwd/gspn/net_io.hpp"
#include "rwd/models/sweep.hpp"

namespace rwd::models {

namespace {

double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Index chosen with probability proportional to weights[i].
std::size_t pick(const std::vector<double>& weights, double total, std::mt19937_64& rng) {
  double u = uniform(rng) * total;
  for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  return weights.size() - 1;
}

std::vector<double> replicate(const gspn::PetriNet& net, const McOptions& opt, std::mt19937_64& rng) {
  constexpr std::size_t kImmediateLimit = 1000000;
  std::vector<double> counts(net.transition_count(), 0.0);
  gspn::Marking m = net.initial_marking();
  double now = 0;
  std::size_t immediate_run = 0;
  std::vector<double> weights;
  while (true) {
    const auto fire = gspn::enabled(net, m);
    if (fire.empty()) break;  // dead marking
    weights.clear();
    double total = 0;
    const bool immediate = net.transitions()[fire.front()].is_immediate();
    for (auto t : fire) {
      const double w = immediate ? net.transitions()[t].immediate().weight : net.effective_rate(t, m);
      weights.push_back(w);
      total += w;
    }
    if (immediate) {
      if (++immediate_run > kImmediateLimit)
        throw gspn::AnalysisError(gspn::AnalysisError::Kind::VanishingLoop, "immediate transitions fire forever");
    } else {
      immediate_run = 0;
      now += -std::log1p(-uniform(rng)) / total;
      if (now > opt.horizon) break;
    }
    const auto t = fire[pick(weights, total, rng)];
    if (now >= opt.warmup) counts[t] += 1;
    m = net.fire(t, m);
  }
  for (double& c : counts) c /= opt.horizon - opt.warmup;
  return counts;
}

}  // namespace

McEstimate monte_carlo(const gspn::PetriNet& net, const McOptions& opt) {
  if (!(opt.horizon > 0) || opt.replications < 1) throw InputError("horizon and replications must be positive");
  if (!(opt.warmup >= 0) || !(opt.warmup < opt.horizon)) throw InputError("warmup must lie in [0, horizon)");
  std::mt19937_64 rng(opt.seed);
  const std::size_t nt = net.transition_count();
  std::vector<double> sum(nt, 0.0), sum_sq(nt, 0.0);
  for (std::size_t r = 0; r < opt.replications; ++r) {
    const auto x = replicate(net, opt, rng);
    for (std::size_t t = 0; t < nt; ++t) {
      sum[t] += x[t];
      sum_sq[t] += x[t] * x[t];
    }
  }
  McEstimate est;
  est.replications = opt.replications;
  const double n = static_cast<double>(opt.replications);
  for (std::size_t t = 0; t < nt; ++t) {
    const double mean = sum[t] / n;
    double se = 0;
    if (opt.replications > 1) {
      const double var = std::max(0.0, (sum_sq[t] - n * mean * mean) / (n - 1));
      se = std::sqrt(var / n);
    }
    est.mean.push_back(mean);
    est.std_error.push_back(se);
  }
  return est;
}

McEstimate monte_carlo(const RwdParams& params, const McOptions& opt) { return monte_carlo(build(params).net, opt); }

std::vector<ValidationRow> validate(const RwdParams& params, const McOptions& mc, double z,
                                    const gspn::SolverOptions& solver) {
  const RwdModel model = build(params);
  const RwdSolution sol = solve(model, solver);
  const McEstimate est = monte_carlo(model.net, mc);
  std::vector<ValidationRow> rows;
  for (std::size_t t = 0; t < model.net.transition_count(); ++t) {
    ValidationRow r;
    r.transition = model.net.transitions()[t].name;
    r.analytic = sol.throughput[t];
    r.estimate = est.mean[t];
    r.std_error = est.std_error[t];
    r.within = std::abs(r.estimate - r.analytic) <= z * r.std_error;
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string validation_csv(const std::string& policy, const std::vector<ValidationRow>& rows, bool header) {
  std::string out = header ? "policy,transition,analytic,estimate,std_error,within\n" : "";
  for (const auto& r : rows) {
    out += policy + "," + r.transition + "," + gspn::format_number(r.analytic) + "," +
           gspn::format_number(r.estimate) + "," + gspn::format_number(r.std_error) + "," +
           (r.within ? "yes" : "no") + "\n";
  }
  return out;
}

}  // namespace rwd::models

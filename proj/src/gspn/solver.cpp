#include "rwd/gspn/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace rwd::gspn {

namespace {

std::vector<char> sweep_from_zero(const std::vector<std::vector<std::size_t>>& adj) {
  std::vector<char> seen(adj.size(), 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    const std::size_t s = stack.back();
    stack.pop_back();
    for (std::size_t t : adj[s]) {
      if (seen[t]) continue;
      seen[t] = 1;
      stack.push_back(t);
    }
  }
  return seen;
}

std::vector<double> solve_direct(const TangibleChain& chain) {
  const std::size_t n = chain.size();
  // A = Q^T with the last equation replaced by sum(pi) = 1.
  std::vector<double> a(n * n, 0.0), b(n, 0.0);
  auto at = [&](std::size_t r, std::size_t c) -> double& { return a[r * n + c]; };
  for (std::size_t i = 0; i < n; ++i) {
    at(i, i) = -chain.exit_rate[i];
    for (const auto& r : chain.rates[i]) at(r.to, i) += r.rate;
  }
  for (std::size_t c = 0; c < n; ++c) at(n - 1, c) = 1.0;
  b[n - 1] = 1.0;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t r = k + 1; r < n; ++r)
      if (std::abs(at(r, k)) > std::abs(at(pivot, k))) pivot = r;
    if (at(pivot, k) == 0.0)
      throw AnalysisError(AnalysisError::Kind::SolverFailure, "singular steady-state system");
    if (pivot != k) {
      for (std::size_t c = k; c < n; ++c) std::swap(at(k, c), at(pivot, c));
      std::swap(b[k], b[pivot]);
    }
    const double inv = 1.0 / at(k, k);
    for (std::size_t r = k + 1; r < n; ++r) {
      const double f = at(r, k) * inv;
      if (f == 0.0) continue;
      for (std::size_t c = k; c < n; ++c) at(r, c) -= f * at(k, c);
      b[r] -= f * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    for (std::size_t c = k + 1; c < n; ++c) s -= at(k, c) * x[c];
    x[k] = s / at(k, k);
  }
  return x;
}

std::vector<double> solve_gauss_seidel(const TangibleChain& chain, const SolverOptions& opt) {
  const std::size_t n = chain.size();
  std::vector<std::vector<TangibleChain::Rate>> incoming(n);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& r : chain.rates[i]) incoming[r.to].push_back({i, r.rate});

  std::vector<double> pi(n, 1.0 / static_cast<double>(n));
  for (std::size_t sweep = 1; sweep <= opt.max_sweeps; ++sweep) {
    for (std::size_t j = 0; j < n; ++j) {
      double in = 0;
      for (const auto& r : incoming[j]) in += pi[r.to] * r.rate;
      pi[j] = in / chain.exit_rate[j];
    }
    const double total = std::accumulate(pi.begin(), pi.end(), 0.0);
    for (double& p : pi) p /= total;
    if (sweep % 10 == 0 && residual(chain, pi) <= opt.tolerance) return pi;
  }
  throw AnalysisError(AnalysisError::Kind::SolverFailure,
                      "Gauss-Seidel did not converge in " + std::to_string(opt.max_sweeps) + " sweeps");
}

}  // namespace

bool is_irreducible(const TangibleChain& chain) {
  const std::size_t n = chain.size();
  std::vector<std::vector<std::size_t>> fwd(n), bwd(n);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& r : chain.rates[i]) {
      if (r.rate <= 0) continue;
      fwd[i].push_back(r.to);
      bwd[r.to].push_back(i);
    }
  const auto a = sweep_from_zero(fwd);
  const auto b = sweep_from_zero(bwd);
  return std::all_of(a.begin(), a.end(), [](char c) { return c; }) &&
         std::all_of(b.begin(), b.end(), [](char c) { return c; });
}

double residual(const TangibleChain& chain, std::span<const double> pi) {
  std::vector<double> r(chain.size(), 0.0);
  for (std::size_t i = 0; i < chain.size(); ++i) {
    r[i] -= pi[i] * chain.exit_rate[i];
    for (const auto& e : chain.rates[i]) r[e.to] += pi[i] * e.rate;
  }
  double worst = 0;
  for (double v : r) worst = std::max(worst, std::abs(v));
  return worst;
}

std::vector<double> steady_state(const TangibleChain& chain, const SolverOptions& opt) {
  if (!(opt.tolerance > 0)) throw InputError("solver tolerance must be positive");
  const std::size_t n = chain.size();
  if (n == 1) return {1.0};
  if (!is_irreducible(chain))
    throw AnalysisError(AnalysisError::Kind::NotErgodic,
                        "tangible chain is reducible (" + std::to_string(n) + " states)");

  std::vector<double> pi = n <= opt.direct_limit ? solve_direct(chain) : solve_gauss_seidel(chain, opt);
  for (double& p : pi) {
    if (p < 0) {
      if (p < -opt.tolerance)
        throw AnalysisError(AnalysisError::Kind::SolverFailure, "negative steady-state probability");
      p = 0;
    }
  }
  const double total = std::accumulate(pi.begin(), pi.end(), 0.0);
  for (double& p : pi) p /= total;
  const double res = residual(chain, pi);
  if (!(res <= opt.tolerance)) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "residual %.3g exceeds tolerance %.3g", res, opt.tolerance);
    throw AnalysisError(AnalysisError::Kind::SolverFailure, buf);
  }
  return pi;
}

std::vector<double> throughputs(const TangibleChain& chain, std::span<const double> pi) {
  std::vector<double> thr(chain.transition_count, 0.0);
  for (std::size_t i = 0; i < chain.size(); ++i)
    for (const auto& f : chain.flows[i]) thr[f.transition] += pi[i] * f.rate;
  return thr;
}

}  // namespace rwd::gspn

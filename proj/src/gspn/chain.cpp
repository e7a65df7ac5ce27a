#include "rwd/gspn/chain.hpp"

#include <limits>
#include <map>

namespace rwd::gspn {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Where a vanishing state ends up: tangible targets with probabilities, and
// the expected number of firings of each immediate transition on the way.
struct Resolution {
  std::map<std::size_t, double> targets;  // tangible index -> probability
  std::map<TransitionId, double> firings;
};

class Eliminator {
 public:
  Eliminator(const ReachabilityGraph& g, const PetriNet& net, const std::vector<std::size_t>& tangible_index)
      : g_(g), net_(net), tangible_index_(tangible_index), memo_(g.size()), state_(g.size(), 0) {}

  const Resolution& resolve(std::size_t s) {
    if (state_[s] == 2) return memo_[s];
    if (state_[s] == 1)
      throw AnalysisError(AnalysisError::Kind::VanishingLoop,
                          "vanishing loop through marking " + net_.describe(g_.states[s]));
    state_[s] = 1;
    Resolution r;
    double total = 0;
    for (const Edge& e : g_.out(s)) total += net_.transitions()[e.transition].immediate().weight;
    for (const Edge& e : g_.out(s)) {
      const double p = net_.transitions()[e.transition].immediate().weight / total;
      r.firings[e.transition] += p;
      if (g_.tangible(e.to)) {
        r.targets[tangible_index_[e.to]] += p;
        continue;
      }
      const Resolution& next = resolve(e.to);
      for (const auto& [t, q] : next.targets) r.targets[t] += p * q;
      for (const auto& [t, f] : next.firings) r.firings[t] += p * f;
    }
    memo_[s] = std::move(r);
    state_[s] = 2;
    return memo_[s];
  }

 private:
  const ReachabilityGraph& g_;
  const PetriNet& net_;
  const std::vector<std::size_t>& tangible_index_;
  std::vector<Resolution> memo_;
  std::vector<int> state_;  // 0 new, 1 on stack, 2 done
};

}  // namespace

std::vector<std::vector<double>> TangibleChain::dense_generator() const {
  const std::size_t n = size();
  std::vector<std::vector<double>> q(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (const Rate& r : rates[i]) q[i][r.to] += r.rate;
    q[i][i] = -exit_rate[i];
  }
  return q;
}

TangibleChain eliminate_vanishing(const ReachabilityGraph& g, const PetriNet& net) {
  TangibleChain chain;
  chain.transition_count = net.transition_count();
  std::vector<std::size_t> tangible_index(g.size(), kNone);
  for (std::size_t s = 0; s < g.size(); ++s) {
    if (!g.tangible(s)) continue;
    tangible_index[s] = chain.states.size();
    chain.states.push_back(s);
  }
  if (chain.states.empty())
    throw AnalysisError(AnalysisError::Kind::VanishingLoop, "net has no tangible marking");

  Eliminator elim(g, net, tangible_index);
  const std::size_t n = chain.size();
  chain.initial.assign(n, 0.0);
  if (g.tangible(g.initial)) {
    chain.initial[tangible_index[g.initial]] = 1.0;
  } else {
    for (const auto& [t, p] : elim.resolve(g.initial).targets) chain.initial[t] += p;
  }

  chain.rates.resize(n);
  chain.exit_rate.assign(n, 0.0);
  chain.self_rate.assign(n, 0.0);
  chain.flows.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t s = chain.states[i];
    std::map<std::size_t, double> row;
    std::map<TransitionId, double> flow;
    for (const Edge& e : g.out(s)) {
      const double rate = net.effective_rate(e.transition, g.states[s]);
      flow[e.transition] += rate;
      if (g.tangible(e.to)) {
        row[tangible_index[e.to]] += rate;
        continue;
      }
      const Resolution& r = elim.resolve(e.to);
      for (const auto& [t, p] : r.targets) row[t] += rate * p;
      for (const auto& [t, f] : r.firings) flow[t] += rate * f;
    }
    for (const auto& [to, rate] : row) {
      if (to == i) {
        chain.self_rate[i] += rate;
      } else {
        chain.rates[i].push_back({to, rate});
        chain.exit_rate[i] += rate;
      }
    }
    for (const auto& [t, f] : flow) chain.flows[i].push_back({t, f});
  }
  return chain;
}

}  // namespace rwd::gspn

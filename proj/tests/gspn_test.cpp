#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracle.hpp"
#include "rwd/gspn/chain.hpp"
#include "rwd/gspn/invariants.hpp"
#include "rwd/gspn/net_io.hpp"
#include "rwd/gspn/query.hpp"
#include "rwd/gspn/solver.hpp"
#include "rwd/io.hpp"
#include "rwd/models/rwd_model.hpp"

using namespace rwd::gspn;

namespace {

PetriNet two_state(double lambda, double mu) {
  PetriNet n;
  auto p1 = n.add_place("P1", 1);
  auto p2 = n.add_place("P2", 0);
  auto t1 = n.add_timed("t1", lambda);
  auto t2 = n.add_timed("t2", mu);
  n.add_input(p1, t1);
  n.add_output(t1, p2);
  n.add_input(p2, t2);
  n.add_output(t2, p1);
  return n;
}

// s --lambda--> v --{a:1, b:3}--> x | y, and back to s at rate 1.
PetriNet weighted_choice(double lambda) {
  PetriNet n;
  auto s = n.add_place("S", 1);
  auto v = n.add_place("V", 0);
  auto x = n.add_place("X", 0);
  auto y = n.add_place("Y", 0);
  auto go = n.add_timed("go", lambda);
  auto a = n.add_immediate("a", 1.0);
  auto b = n.add_immediate("b", 3.0);
  auto bx = n.add_timed("bx", 1.0);
  auto by = n.add_timed("by", 1.0);
  n.add_input(s, go);
  n.add_output(go, v);
  n.add_input(v, a);
  n.add_output(a, x);
  n.add_input(v, b);
  n.add_output(b, y);
  n.add_input(x, bx);
  n.add_output(bx, s);
  n.add_input(y, by);
  n.add_output(by, s);
  return n;
}

struct Solved {
  ReachabilityGraph g;
  TangibleChain chain;
  std::vector<double> pi, thr;
};

Solved solve_all(const PetriNet& net) {
  Solved s;
  s.g = reachability(net);
  s.chain = eliminate_vanishing(s.g, net);
  s.pi = steady_state(s.chain);
  s.thr = throughputs(s.chain, s.pi);
  return s;
}

}  // namespace

TEST_CASE("net construction rejects malformed elements") {
  PetriNet n;
  auto p = n.add_place("P", 0);
  CHECK_THROWS_AS(n.add_place("P", 1), NetError);
  CHECK_THROWS_AS(n.add_place("Q", -1), NetError);
  CHECK_THROWS_AS(n.add_timed("t", 0.0), NetError);
  CHECK_THROWS_AS(n.add_timed("t", -1.0), NetError);
  CHECK_THROWS_AS(n.add_immediate("i", 0.0), NetError);
  CHECK_THROWS_AS(n.add_immediate("i", 1.0, 0), NetError);
  auto t = n.add_timed("t", 1.0);
  CHECK_THROWS_AS(n.add_input(p, t, 0), NetError);
  CHECK_THROWS_AS(n.add_input(p + 5, t), NetError);
  CHECK_THROWS_AS(n.add_output(t + 5, p), NetError);
  CHECK_THROWS_AS(n.add_timed("t", 2.0), NetError);
}

TEST_CASE("enabled: single timed transition") {
  PetriNet n;
  auto p1 = n.add_place("P1", 1);
  auto p2 = n.add_place("P2", 0);
  auto t = n.add_timed("t", 1.0);
  n.add_input(p1, t);
  n.add_output(t, p2);
  CHECK(enabled(n, {1, 0}) == std::vector<TransitionId>{t});
  CHECK(enabled(n, {0, 1}).empty());
}

TEST_CASE("enabled: arc multiplicity and inhibitors") {
  auto model = rwd::models::build({.policy = rwd::VotingPolicy::all()});
  const auto& net = model.net;
  const auto& r = model.roles;
  Marking m(net.place_count(), 0);
  m[r.ap1] = 1;
  m[r.wd2] = 2;
  m[r.wd1] = 1;
  CHECK_FALSE(net.has_concession(r.delayed, m));
  m[r.wd2] = 3;
  m[r.wd1] = 0;
  CHECK(net.has_concession(r.delayed, m));

  PetriNet h;
  auto p = h.add_place("P", 1);
  auto q = h.add_place("Q", 0);
  auto t = h.add_timed("t", 1.0);
  h.add_input(p, t);
  h.add_inhibitor(q, t, 2);
  CHECK(h.has_concession(t, {1, 1}));
  CHECK_FALSE(h.has_concession(t, {1, 2}));
}

TEST_CASE("enabled: immediates preempt timed, highest priority wins") {
  PetriNet n;
  auto p = n.add_place("P", 1);
  auto t = n.add_timed("t", 1.0);
  auto lo = n.add_immediate("lo", 1.0, 1);
  n.add_input(p, t);
  n.add_input(p, lo);
  CHECK(enabled(n, {1}) == std::vector<TransitionId>{lo});
  auto hi = n.add_immediate("hi", 1.0, 2);
  n.add_input(p, hi);
  CHECK(enabled(n, {1}) == std::vector<TransitionId>{hi});
}

TEST_CASE("effective rate follows server semantics") {
  PetriNet n;
  auto p = n.add_place("P", 3);
  auto inf = n.add_timed("inf", 0.5, ServerSemantics::Infinite);
  auto one = n.add_timed("one", 0.5, ServerSemantics::Single);
  n.add_input(p, inf);
  n.add_input(p, one);
  CHECK(n.effective_rate(inf, {3}) == doctest::Approx(1.5));
  CHECK(n.effective_rate(one, {3}) == doctest::Approx(0.5));
  CHECK(n.effective_rate(inf, {0}) == 0.0);
}

TEST_CASE("reachability: two-place cycle") {
  const auto g = reachability(two_state(2, 1));
  REQUIRE(g.size() == 2);
  CHECK(g.tangible(0));
  CHECK(g.tangible(1));
  CHECK(g.states[0] == Marking{1, 0});
  CHECK(g.states[1] == Marking{0, 1});
  for (const auto& e : g.edges) {
    CHECK(e.to == (e.from + 1) % 2);
  }
}

TEST_CASE("reachability: unbounded net hits the cap") {
  const auto net = parse_net(rwd::read_file(std::string(RWD_DATA_DIR) + "/nets/source.net"));
  try {
    reachability(net, 100);
    FAIL("expected StateSpaceExceeded");
  } catch (const AnalysisError& e) {
    CHECK(e.kind() == AnalysisError::Kind::StateSpaceExceeded);
    CHECK(e.error_class() == rwd::ErrorClass::Analysis);
  }
  CHECK_THROWS_AS(reachability(net, 0), rwd::InputError);
}

TEST_CASE("reachability: edges are consistent with firing") {
  auto model = rwd::models::build({.policy = rwd::VotingPolicy::all()});
  const auto g = reachability(model.net);
  for (const auto& e : g.edges) {
    const auto fire = enabled(model.net, g.states[e.from]);
    CHECK(std::find(fire.begin(), fire.end(), e.transition) != fire.end());
    CHECK(g.states[e.to] == model.net.fire(e.transition, g.states[e.from]));
  }
}

TEST_CASE("elimination: no vanishing states gives the plain generator") {
  const auto net = two_state(2, 1);
  const auto g = reachability(net);
  const auto c = eliminate_vanishing(g, net);
  const auto q = c.dense_generator();
  CHECK(q[0][1] == doctest::Approx(2));
  CHECK(q[0][0] == doctest::Approx(-2));
  CHECK(q[1][0] == doctest::Approx(1));
  CHECK(q[1][1] == doctest::Approx(-1));
}

TEST_CASE("elimination: weights split the incoming rate") {
  const double lambda = 2.0;
  const auto net = weighted_choice(lambda);
  const auto g = reachability(net);
  const auto c = eliminate_vanishing(g, net);
  REQUIRE(c.size() == 3);
  const auto q = c.dense_generator();
  // tangible order follows BFS: S, then X, Y
  CHECK(g.states[c.states[0]] == Marking{1, 0, 0, 0});
  CHECK(q[0][1] == doctest::Approx(lambda / 4));
  CHECK(q[0][2] == doctest::Approx(3 * lambda / 4));
}

TEST_CASE("elimination: vanishing loop is rejected") {
  PetriNet n;
  auto a = n.add_place("A", 1);
  auto b = n.add_place("B", 0);
  auto c = n.add_place("C", 0);
  auto ab = n.add_immediate("ab");
  auto ba = n.add_immediate("ba");
  auto go = n.add_timed("go", 1.0);
  n.add_input(a, ab);
  n.add_output(ab, b);
  n.add_input(b, ba);
  n.add_output(ba, a);
  n.add_input(c, go);
  n.add_output(go, c);
  const auto g = reachability(n);
  try {
    eliminate_vanishing(g, n);
    FAIL("expected VanishingLoop");
  } catch (const AnalysisError& e) {
    CHECK(e.kind() == AnalysisError::Kind::VanishingLoop);
  }
}

TEST_CASE("elimination: vanishing initial marking yields an initial distribution") {
  PetriNet n;
  auto s = n.add_place("S", 1);
  auto x = n.add_place("X", 0);
  auto y = n.add_place("Y", 0);
  auto a = n.add_immediate("a", 1.0);
  auto b = n.add_immediate("b", 1.0);
  auto xy = n.add_timed("xy", 1.0);
  auto yx = n.add_timed("yx", 1.0);
  n.add_input(s, a);
  n.add_output(a, x);
  n.add_input(s, b);
  n.add_output(b, y);
  n.add_input(x, xy);
  n.add_output(xy, y);
  n.add_input(y, yx);
  n.add_output(yx, x);
  const auto g = reachability(n);
  const auto c = eliminate_vanishing(g, n);
  REQUIRE(c.size() == 2);
  CHECK(c.initial[0] == doctest::Approx(0.5));
  CHECK(c.initial[1] == doctest::Approx(0.5));
}

TEST_CASE("elimination: row mass equals timed mass") {
  auto model = rwd::models::build({.policy = rwd::VotingPolicy::all()});
  const auto g = reachability(model.net);
  const auto c = eliminate_vanishing(g, model.net);
  for (std::size_t i = 0; i < c.size(); ++i) {
    double timed = 0;
    for (const auto& e : g.out(c.states[i])) timed += model.net.effective_rate(e.transition, g.states[c.states[i]]);
    CHECK(c.exit_rate[i] + c.self_rate[i] == doctest::Approx(timed).epsilon(1e-12));
  }
}

TEST_CASE("steady state: two-state cycle") {
  const auto s = solve_all(two_state(2, 1));
  CHECK(std::abs(s.pi[0] - 1.0 / 3) < 1e-12);
  CHECK(std::abs(s.pi[1] - 2.0 / 3) < 1e-12);
  CHECK(std::abs(s.thr[0] - 2.0 / 3) < 1e-12);
  CHECK(std::abs(s.thr[1] - 2.0 / 3) < 1e-12);
}

TEST_CASE("steady state: three-state birth-death chain is uniform") {
  PetriNet n;
  auto p = n.add_place("P", 0);
  auto up = n.add_timed("up", 1.0, ServerSemantics::Single);
  auto down = n.add_timed("down", 1.0, ServerSemantics::Single);
  n.add_inhibitor(p, up, 2);
  n.add_output(up, p);
  n.add_input(p, down);
  const auto s = solve_all(n);
  REQUIRE(s.pi.size() == 3);
  for (double v : s.pi) CHECK(std::abs(v - 1.0 / 3) < 1e-12);
}

TEST_CASE("steady state: reducible chain is rejected") {
  PetriNet n;
  auto a = n.add_place("A", 1);
  auto b = n.add_place("B", 0);
  auto t = n.add_timed("t", 1.0);
  n.add_input(a, t);
  n.add_output(t, b);
  auto loop = n.add_timed("loop", 1.0);
  n.add_input(b, loop);
  n.add_output(loop, b);
  const auto g = reachability(n);
  const auto c = eliminate_vanishing(g, n);
  try {
    steady_state(c);
    FAIL("expected NotErgodic");
  } catch (const AnalysisError& e) {
    CHECK(e.kind() == AnalysisError::Kind::NotErgodic);
  }
}

TEST_CASE("steady state: iteration budget exhausted is a solver failure") {
  const auto m = rwd::models::build({.policy = rwd::VotingPolicy::all()});
  const auto c = eliminate_vanishing(reachability(m.net), m.net);
  SolverOptions o;
  o.direct_limit = 0;
  o.max_sweeps = 10;
  o.tolerance = 1e-15;
  try {
    steady_state(c, o);
    FAIL("expected SolverFailure");
  } catch (const AnalysisError& e) {
    CHECK(e.kind() == AnalysisError::Kind::SolverFailure);
  }
  o.tolerance = 0;
  CHECK_THROWS_AS(steady_state(c, o), rwd::InputError);
}

TEST_CASE("steady state: Gauss-Seidel agrees with direct elimination") {
  const auto m = rwd::models::build({.policy = rwd::VotingPolicy::all()});
  const auto c = eliminate_vanishing(reachability(m.net), m.net);
  const auto direct = steady_state(c);
  SolverOptions o;
  o.direct_limit = 0;
  o.tolerance = 1e-13;
  const auto gs = steady_state(c, o);
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(std::abs(direct[i] - gs[i]) < 1e-10);
}

TEST_CASE("steady state: RWD-AND matches the brute-force oracle") {
  rwd::models::RwdParams p;
  p.policy = rwd::VotingPolicy::all();
  p.rate_timeout = 1.0;
  const auto model = rwd::models::build(p);
  const auto s = solve_all(model.net);
  const auto ref = oracle::solve(model.net);
  std::vector<Marking> markings;
  for (auto st : s.chain.states) markings.push_back(s.g.states[st]);
  const auto mine = oracle::by_marking(markings, s.pi);
  REQUIRE(mine.size() == ref.tangible.size());
  for (std::size_t i = 0; i < ref.tangible.size(); ++i)
    CHECK(std::abs(mine.at(ref.tangible[i]) - static_cast<double>(ref.pi[i])) < 1e-9);
  for (std::size_t t = 0; t < model.net.transition_count(); ++t)
    CHECK(std::abs(s.thr[t] - static_cast<double>(ref.throughput[t])) < 1e-9);
}

TEST_CASE("throughputs: immediate transitions get their share") {
  const auto s = solve_all(weighted_choice(2.0));
  // pi(S) = 1/3 from the balance 2 pi_S = pi_X + pi_Y, pi_X : pi_Y = 1 : 3
  CHECK(s.thr[0] == doctest::Approx(2.0 / 3));
  CHECK(s.thr[1] == doctest::Approx(1.0 / 6));
  CHECK(s.thr[2] == doctest::Approx(0.5));
}

TEST_CASE("throughputs: activity is higher under AND than under OR") {
  rwd::models::RwdParams p;
  p.policy = rwd::VotingPolicy::all();
  const auto and_model = rwd::models::build(p);
  p.policy = rwd::VotingPolicy::any();
  const auto or_model = rwd::models::build(p);
  const auto a = solve_all(and_model.net);
  const auto o = solve_all(or_model.net);
  CHECK(a.thr[and_model.roles.activity] > o.thr[or_model.roles.activity]);
}

TEST_CASE("p-invariants: cycle net") {
  const auto inv = p_invariants(two_state(1, 1));
  REQUIRE(inv.size() == 1);
  CHECK(inv[0].coefficients == std::vector<long long>{1, 1});
}

TEST_CASE("p-invariants: source output place is never covered") {
  PetriNet n;
  auto a = n.add_place("A", 1);
  auto b = n.add_place("B", 0);
  auto sink = n.add_place("Sink", 0);
  auto ab = n.add_timed("ab", 1);
  auto ba = n.add_timed("ba", 1);
  auto src = n.add_timed("src", 1);
  n.add_input(a, ab);
  n.add_output(ab, b);
  n.add_input(b, ba);
  n.add_output(ba, a);
  n.add_output(src, sink);
  const auto inv = p_invariants(n);
  REQUIRE_FALSE(inv.empty());
  for (const auto& y : inv) CHECK(y.coefficients[sink] == 0);
}

TEST_CASE("p-invariants: weights and gcd normalisation") {
  // Two tokens of A make one of B.
  PetriNet n;
  auto a = n.add_place("A", 4);
  auto b = n.add_place("B", 0);
  auto join = n.add_timed("join", 1);
  auto split = n.add_timed("split", 1);
  n.add_input(a, join, 2);
  n.add_output(join, b);
  n.add_input(b, split);
  n.add_output(split, a, 2);
  const auto inv = p_invariants(n);
  REQUIRE(inv.size() == 1);
  CHECK(inv[0].coefficients == std::vector<long long>{1, 2});
  CHECK(format_invariant(n, inv[0]) == "1*A + 2*B = 4");
}

TEST_CASE("p-invariants: inhibitor arcs do not count") {
  PetriNet n = two_state(1, 1);
  auto q = n.add_place("Q", 0);
  n.add_inhibitor(q, 0);
  const auto inv = p_invariants(n);
  bool has_q_alone = false;
  for (const auto& y : inv)
    if (y.support() == std::vector<PlaceId>{q}) has_q_alone = true;
  CHECK(has_q_alone);
}

TEST_CASE("p-invariants: RWD-AND has the watchdog conservation law") {
  rwd::models::RwdParams p;
  p.policy = rwd::VotingPolicy::all();
  const auto m = rwd::models::build(p);
  bool found = false;
  for (const auto& y : p_invariants(m.net)) {
    if (y.support() == std::vector<PlaceId>{m.roles.wd1, m.roles.wd2, m.roles.wd3}) {
      found = true;
      CHECK(y.weighted_sum(m.net.initial_marking()) == 3);
      CHECK(format_invariant(m.net, y) == "1*Wd1 + 1*Wd2 + 1*Wd3 = 3");
    }
  }
  CHECK(found);
}

TEST_CASE("queries on the OR model") {
  const auto m = rwd::models::build({});
  const auto g = reachability(m.net);
  const auto zero = always_place_zero(g, m.net, m.roles.wd2, StateFilter::Tangible);
  CHECK(zero.holds);
  CHECK_FALSE(zero.state.has_value());
  const std::vector<TransitionId> df{m.roles.delayed, m.roles.faulty};
  const auto w = exists_enabled_with(g, m.net, df, m.roles.wd3, 2);
  REQUIRE(w.holds);
  REQUIRE(w.state.has_value());
  CHECK(g.states[*w.state][m.roles.wd3] >= 2);
  const auto none = exists(g, m.net, [](const Marking&, std::span<const TransitionId>) { return false; });
  CHECK_FALSE(none.holds);
  CHECK_FALSE(none.state.has_value());
  // Wd2 is marked in vanishing states, so the unrestricted query fails with a counterexample.
  const auto all = always_place_zero(g, m.net, m.roles.wd2);
  CHECK_FALSE(all.holds);
  REQUIRE(all.state.has_value());
  CHECK(g.states[*all.state][m.roles.wd2] > 0);
}

TEST_CASE("net text format round-trips") {
  const auto m = rwd::models::build({.policy = rwd::VotingPolicy::all()});
  const std::string text = write_net(m.net);
  const auto back = parse_net(text);
  CHECK(write_net(back) == text);
  CHECK(back.place_count() == m.net.place_count());
  CHECK(back.transition_count() == m.net.transition_count());
}

TEST_CASE("net text format: syntax") {
  const auto n = parse_net(
      "# comment\nplaces: A 1; B 0;\ntransitions:\n  t timed 2.5 single; i immediate 2 3; j immediate;\n"
      "arcs: A t; t B 2 normal; B i; B j 1 inhibitor;\n");
  REQUIRE(n.place_count() == 2);
  REQUIRE(n.transition_count() == 3);
  CHECK(n.transitions()[0].timed().rate == 2.5);
  CHECK(n.transitions()[0].timed().server == ServerSemantics::Single);
  CHECK(n.transitions()[1].immediate().weight == 2.0);
  CHECK(n.transitions()[1].immediate().priority == 3);
  CHECK(n.transitions()[2].immediate().weight == 1.0);
  CHECK(n.arcs()[1].multiplicity == 2);
  CHECK(n.arcs()[3].kind == ArcKind::Inhibitor);
}

TEST_CASE("net text format: errors carry positions") {
  auto message = [](const std::string& text) {
    try {
      parse_net(text);
    } catch (const NetError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("places: A x;") == "1:11: expected an integer, got 'x'");
  CHECK(message("places: A 1;\narcs: A nowhere;") == "2:9: unknown node 'nowhere'");
  CHECK(message("A 1;") == "1:1: statement outside a section");
  CHECK(message("places: A 1") == "1:11: missing ';'");
  CHECK(message("places: A 1; A 2;") == "1:14: duplicate place 'A'");
  CHECK(message("transitions: t timed 0;") == "1:14: transition 't' needs a positive rate");
  CHECK(message("stuff: A 1;") == "1:1: unknown section 'stuff'");
  CHECK(message("places: A 1; transitions: t timed 1; arcs: t A 1 inhibitor;") ==
        "1:44: inhibitor arcs go from a place to a transition");
}

TEST_CASE("CSV output") {
  const auto net = two_state(2, 1);
  const auto s = solve_all(net);
  CHECK(solution_csv(s.chain, s.pi) == "state_index,probability\n0,0.3333333333333333\n1,0.6666666666666666\n");
  CHECK(throughput_csv(net, s.thr) == "transition,throughput\nt1,0.6666666666666666\nt2,0.6666666666666666\n");
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(2) == "2");
}

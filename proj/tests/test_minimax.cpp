#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "lifemax/closed_form.hpp"
#include "lifemax/minimax.hpp"

using namespace lifemax;

namespace {

// Route every sensor's traffic through one random lower-id hop; ids fall
// strictly, so all data reaches the collector at 0.
LinkSchedule<double> random_routing(std::mt19937& rng, int n, const VectorXd& q, double c0) {
  std::map<int, double> volume;
  std::map<Link, double> flow;
  for (int i = n; i >= 1; --i) {
    const double out = q(i - 1) + volume[i];
    std::uniform_int_distribution<int> hop(0, i - 1);
    const int h = hop(rng);
    flow[{i, h}] += out;
    volume[h] += out;
  }
  LinkSchedule<double> s;
  s.rate = c0;
  for (const auto& [link, v] : flow) s.times[link] = v / c0;
  return s;
}

// Greedy endpoint-disjoint slotting of a link set, in shuffled order.
std::vector<Slot> random_slots(std::mt19937& rng, const std::map<Link, double>& data) {
  std::vector<std::pair<Link, double>> items(data.begin(), data.end());
  std::shuffle(items.begin(), items.end(), rng);
  std::vector<Slot> slots;
  std::vector<std::set<int>> busy;
  for (const auto& [link, bits] : items) {
    std::size_t s = 0;
    for (; s < slots.size(); ++s)
      if (!busy[s].count(link.first) && !busy[s].count(link.second)) break;
    if (s == slots.size()) {
      slots.emplace_back();
      busy.emplace_back();
    }
    slots[s].push_back({link.first, link.second, bits});
    busy[s].insert(link.first);
    busy[s].insert(link.second);
  }
  return slots;
}

}  // namespace

TEST_CASE("m2m optimum matches the closed form") {
  auto g = GainSpec::power_law(2.0);
  for (int n = 2; n <= 5; ++n) {
    Network net = build_line_network(n, true);
    VectorXd q = VectorXd::Ones(n);
    auto model = m2m_lp(net, g, q, 1.0, 1.0);
    auto sol = solve_minimax(model.problem);

    auto cf = solve_m2m_line(n, g, q, 1.0);
    auto rep = node_energies_m2m(cf, net, g, 1.0);
    CHECK(sol.value == doctest::Approx(rep.max_energy).epsilon(1e-9));

    // the recovered schedule spends exactly the optimal energy
    auto lp_rep = node_energies_m2m(schedule_from(model, sol), net, g, 1.0);
    CHECK(lp_rep.max_energy == doctest::Approx(sol.value).epsilon(1e-9));
  }

  VectorXd l(2), a(2);
  l << 0.5, 0.5;
  a << 2.0, 3.0;
  GainSpec mix(l, a);
  Network net = build_line_network(4, true);
  VectorXd q = VectorXd::Ones(4);
  auto sol = solve_minimax(m2m_lp(net, mix, q, 1.0, 1.0).problem);
  auto rep = node_energies_m2m(solve_m2m_line(4, mix, q, 1.0), net, mix, 1.0);
  CHECK(sol.value == doctest::Approx(rep.max_energy).epsilon(1e-9));
}

TEST_CASE("m2m exact optimum") {
  auto g = GainSpec::power_law(2.0);
  Network net = build_line_network(3, true);
  auto pg = pairwise_inverse_gains_exact(net, g);
  VectorX<Rational> q(3);
  q << Rational(1), Rational(1), Rational(1);
  auto model = m2m_lp<Rational>(pg, net.collectors(), q, Rational(1), Rational(1));
  auto sol = solve_minimax(model.problem);
  CHECK(sol.value == Rational(23) / 9);
}

TEST_CASE("broadcast optimum matches the closed form") {
  auto g = GainSpec::power_law(2.0);
  for (int n : {3, 4}) {
    Network net = build_line_network(n, false);
    for (int k = 2; k < n; ++k) {
      auto trees = enumerate_spanning_trees(net, k);
      auto model = broadcast_lp(net, g, trees, k, 1.0, 1.0, 1.0);
      auto sol = solve_minimax(model.problem);

      auto cf = solve_broadcast_line(n, g, k, 1.0, 1.0);
      auto rep = node_energies_broadcast(cf, net, g, 1.0);
      CHECK(sol.value == doctest::Approx(rep.max_energy).epsilon(1e-9));

      auto lp_rep = node_energies_broadcast(plan_from(model, sol), net, g, 1.0);
      CHECK(lp_rep.max_energy == doctest::Approx(sol.value).epsilon(1e-9));
    }
  }

  // a boundary source floods along the chain and the LP agrees
  Network net = build_line_network(4, false);
  auto trees = enumerate_spanning_trees(net, 1);
  auto sol = solve_minimax(broadcast_lp(net, g, trees, 1, 1.0, 1.0, 1.0).problem);
  auto rep = node_energies_broadcast(solve_broadcast_line(4, g, 1, 1.0, 1.0), net, g, 1.0);
  CHECK(sol.value == doctest::Approx(rep.max_energy).epsilon(1e-9));
}

TEST_CASE("degenerate boundary broadcast stays certified") {
  // 125 trees, steep gains and duplicated delivery rows walk the solver
  // through long degenerate pivot chains; the optimum is the chain at
  // max energy 1 and must come out certified, not as a solver failure.
  auto g = GainSpec::power_law(4.0);
  Network net = build_line_network(5, false);
  auto trees = enumerate_spanning_trees(net, 5);
  REQUIRE(trees.size() == 125);
  auto sol = solve_minimax(broadcast_lp(net, g, trees, 5, 1.0, 1.0, 1.0).problem);
  CHECK(sol.value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("line tree family carries the unrestricted optimum") {
  auto g = GainSpec::power_law(2.0);
  for (int n : {4, 5}) {
    Network net = build_line_network(n, false);
    for (int k = 2; k < n; ++k) {
      auto all = solve_minimax(
          broadcast_lp(net, g, enumerate_spanning_trees(net, k), k, 1.0, 1.0, 1.0).problem);
      auto family = solve_minimax(
          broadcast_lp(net, g, line_broadcast_trees(n, k), k, 1.0, 1.0, 1.0).problem);
      CHECK(family.value == doctest::Approx(all.value).epsilon(1e-9));
    }
  }
}

TEST_CASE("random routings cannot beat the optimum") {
  auto g = GainSpec::power_law(2.0);
  const int n = 4;
  Network net = build_line_network(n, true);
  VectorXd q = VectorXd::Ones(n);
  const double opt = solve_minimax(m2m_lp(net, g, q, 1.0, 1.0).problem).value;
  std::mt19937 rng(23);
  for (int it = 0; it < 100; ++it) {
    auto s = random_routing(rng, n, q, 1.0);
    auto rep = node_energies_m2m(s, net, g, 1.0);
    CHECK(rep.max_energy >= opt - 1e-9);
  }
}

TEST_CASE("random tree mixtures cannot beat the optimum") {
  auto g = GainSpec::power_law(2.0);
  Network net = build_line_network(4, false);
  auto trees = enumerate_spanning_trees(net, 2);
  const double opt = solve_minimax(broadcast_lp(net, g, trees, 2, 1.0, 1.0, 1.0).problem).value;
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int it = 0; it < 100; ++it) {
    BroadcastPlan<double> plan;
    plan.source = 2;
    plan.trees = trees;
    plan.rate = 1.0;
    plan.weights.resize(static_cast<Eigen::Index>(trees.size()));
    for (Eigen::Index r = 0; r < plan.weights.size(); ++r) plan.weights(r) = u(rng);
    plan.weights /= plan.weights.sum();  // delivers exactly one unit per node
    auto rep = node_energies_broadcast(plan, net, g, 1.0);
    CHECK(rep.max_energy >= opt - 1e-9);
  }
}

TEST_CASE("interference never lowers the required energy") {
  auto g = GainSpec::power_law(2.0);
  ChannelParams p;  // P0 = N0 = 1, base 2: the shared peak rate is 1
  std::mt19937 rng(31);
  for (int n : {3, 4}) {
    Network net = build_line_network(n, true);
    VectorXd q = VectorXd::Ones(n);
    const double opt = solve_minimax(m2m_lp(net, g, q, max_rate(p), p.p0).problem).value;
    for (int it = 0; it < 25; ++it) {
      auto s = random_routing(rng, n, q, 1.0);
      std::map<Link, double> bits;
      for (const auto& [link, t] : s.times) bits[link] = t;  // c0 = 1
      auto ev = evaluate_concurrent_schedule(net, g, p, random_slots(rng, bits));
      CHECK(ev.energies.max_energy >= opt - 1e-9);
    }
  }
}

TEST_CASE("fixed power converges to the volume form") {
  auto g = GainSpec::power_law(2.0);
  std::vector<double> gaps;
  for (double s : {std::sqrt(2.0), std::sqrt(10.0), 10.0}) {
    Network line = build_line_network(3, true);
    auto rs = rescale_distances(line, g, s);
    ChannelParams p;
    p.log_base = LogBase::natural;
    VectorXd q = VectorXd::Ones(3);
    auto gk = solve_minimax(m2m_lp_gupta_kumar(rs.network, g, p, q).problem);
    auto vol = solve_minimax(m2m_lp(rs.network, g, q, 1.0, p.n0).problem);
    gaps.push_back(std::abs(gk.value - vol.value) / vol.value);
  }
  CHECK(gaps[0] > gaps[1]);
  CHECK(gaps[1] > gaps[2]);
  CHECK(gaps[1] < 0.05);  // within 5% once (P0/N0) * gain falls to 0.1
}

TEST_CASE("lp construction validation") {
  auto g = GainSpec::power_law(2.0);
  Network net = build_line_network(2, true);
  auto pg = pairwise_inverse_gains(net, g);
  VectorXd q = VectorXd::Ones(2);

  CHECK_THROWS_AS(m2m_lp(pg, {0, 1, 2}, q, 1.0, 1.0), DomainError);  // no sensors
  VectorXd q1 = VectorXd::Ones(1);
  CHECK_THROWS_AS(m2m_lp(pg, {0}, q1, 1.0, 1.0), DomainError);
  VectorXd qneg(2);
  qneg << 1.0, -1.0;
  CHECK_THROWS_AS(m2m_lp(pg, {0}, qneg, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(m2m_lp(pg, {0}, q, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(m2m_lp(pg, {9}, q, 1.0, 1.0), DomainError);

  Network bare = build_line_network(3, false);
  auto trees = enumerate_spanning_trees(bare, 2);
  CHECK_THROWS_AS(broadcast_lp(bare, g, {}, 2, 1.0, 1.0, 1.0), InfeasibleError);
  CHECK_THROWS_AS(broadcast_lp(bare, g, trees, 9, 1.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(broadcast_lp(bare, g, trees, 1, 1.0, 1.0, 1.0), DomainError);  // wrong root
  auto dup = std::vector<OrientedTree>{trees[0], trees[0]};
  CHECK_THROWS_AS(broadcast_lp(bare, g, dup, 2, 1.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(broadcast_lp(bare, g, trees, 2, -1.0, 1.0, 1.0), DomainError);
}

TEST_CASE("missing collector makes the flow infeasible") {
  auto g = GainSpec::power_law(2.0);
  Network bare = build_line_network(2, false);
  auto pg = pairwise_inverse_gains(bare, g);
  VectorXd q = VectorXd::Ones(2);
  auto model = m2m_lp<double>(pg, {}, q, 1.0, 1.0);
  CHECK_THROWS_AS(solve_minimax(model.problem), InfeasibleError);
}

TEST_CASE("minimax problem validation") {
  MinimaxProblem<double> p;
  p.eq.setZero(1, 2);
  p.eq_rhs.setZero(1);
  p.load.setZero(1, 3);  // wrong variable count
  p.load_ids = {1};
  CHECK_THROWS_AS(solve_minimax(p), DomainError);
  p.load.setZero(2, 2);
  CHECK_THROWS_AS(solve_minimax(p), DomainError);  // load_ids mismatch
  p.load_ids = {1, 2};
  p.var_names = {"only-one"};
  CHECK_THROWS_AS(solve_minimax(p), DomainError);
}

TEST_CASE("concurrent schedule evaluation") {
  auto g = GainSpec::power_law(2.0);
  Network net = build_line_network(4, false);
  ChannelParams p;

  auto empty = evaluate_concurrent_schedule(net, g, p, {});
  CHECK(empty.total_time == 0.0);
  CHECK(empty.energies.max_energy == 0.0);

  // a lone link runs at the peak rate
  auto one = evaluate_concurrent_schedule(net, g, p, {{{1, 2, 3.0}}});
  CHECK(one.total_time == doctest::Approx(3.0 / max_rate(p)));
  CHECK(one.energies.energy_of(1) == doctest::Approx(3.0 / max_rate(p)));

  // two concurrent links interfere and stretch the slot
  auto two = evaluate_concurrent_schedule(net, g, p, {{{1, 2, 1.0}, {3, 4, 1.0}}});
  CHECK(two.slot_times[0] > 1.0 / max_rate(p));

  CHECK_THROWS_AS(evaluate_concurrent_schedule(net, g, p, {{{1, 2, 1.0}, {2, 3, 1.0}}}),
                  DomainError);
  CHECK_THROWS_AS(evaluate_concurrent_schedule(net, g, p, {{{1, 1, 1.0}}}), DomainError);
  CHECK_THROWS_AS(evaluate_concurrent_schedule(net, g, p, {{{1, 9, 1.0}}}), DomainError);
  CHECK_THROWS_AS(evaluate_concurrent_schedule(net, g, p, {{{1, 2, -1.0}}}), DomainError);
}

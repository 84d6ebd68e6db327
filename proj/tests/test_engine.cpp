#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "cagvrp/engine.hpp"
#include "cagvrp/errors.hpp"
#include "cagvrp/oracle.hpp"
#include "doctest.h"
#include "points.hpp"

using namespace cagvrp;

namespace {

Node keyed(double key, int depth) {
  Node n;
  n.key = key;
  n.depth = depth;
  return n;
}

Instance square_center(double alpha) {
  return euclidean_instance({{0, 0}, {20, 0}, {20, 20}, {0, 20}, {10, 10}}, 0, alpha, 30, "square");
}

// Cheapest Hamiltonian cycle over all targets by plain permutation search.
double all_stops_tour(const Instance& inst) {
  std::vector<int> perm(inst.size() - 1);
  std::iota(perm.begin(), perm.end(), 1);
  double best = INFINITY;
  do {
    double c = inst.gv_cost(0, perm.front()) + inst.gv_cost(perm.back(), 0);
    for (size_t k = 0; k + 1 < perm.size(); ++k) c += inst.gv_cost(perm[k], perm[k + 1]);
    best = std::min(best, c);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

int count_prefix(const std::string& log, const std::string& prefix) {
  std::istringstream in(log);
  std::string line;
  int k = 0;
  while (std::getline(in, line))
    if (line.rfind(prefix, 0) == 0) ++k;
  return k;
}

}  // namespace

TEST_CASE("node queue picks the smallest key") {
  NodeQueue q;
  q.push(keyed(10, 0));
  q.push(keyed(7, 0));
  q.push(keyed(12, 0));
  CHECK(q.min_key() == 7);
  CHECK(q.pop().key == 7);
  CHECK(q.pop().key == 10);
}

TEST_CASE("node queue breaks ties by depth, then insertion order") {
  NodeQueue q;
  q.push(keyed(7, 2));
  q.push(keyed(7, 1));
  CHECK(q.pop().depth == 1);
  NodeQueue r;
  Node a = keyed(3, 1), b = keyed(3, 1);
  a.overrides.push_back({0, 0, 0});
  r.push(a);
  r.push(b);
  CHECK(r.pop().overrides.size() == 1);
}

TEST_CASE("node queue: single node and empty list") {
  NodeQueue q;
  q.push(keyed(5, 0));
  CHECK(q.pop().key == 5);
  CHECK(q.empty());
  CHECK_THROWS_AS(q.pop(), std::out_of_range);
}

TEST_CASE("branching prefers y over x") {
  const VariableSpace vs(4);
  std::vector<double> p(vs.size(), 0.0);
  p[vs.y(2, 3)] = 0.5;
  p[vs.x(1, 2)] = 0.3;
  CHECK(choose_branching_variable(vs, p) == vs.y(2, 3));
  const auto [down, up] = branch(keyed(4.0, 0), vs, p, 42.0);
  REQUIRE(down.overrides.size() == 1);
  CHECK(down.overrides[0].var == vs.y(2, 3));
  CHECK(down.overrides[0].upper == 0.0);
  CHECK(up.overrides[0].lower == 1.0);
  CHECK(down.key == 42.0);
  CHECK(up.key == 42.0);
  CHECK(up.depth == 1);
}

TEST_CASE("branching picks the most fractional variable") {
  const VariableSpace vs(4);
  std::vector<double> p(vs.size(), 0.0);
  p[vs.z(0, 1, 2)] = 0.4;
  p[vs.z(1, 1, 2)] = 0.45;
  CHECK(choose_branching_variable(vs, p) == vs.z(1, 1, 2));
  p[vs.z(3, 1, 2)] = 0.55;  // same distance from 1/2, higher index
  CHECK(choose_branching_variable(vs, p) == vs.z(1, 1, 2));
}

TEST_CASE("branching on an integral point is a contract violation") {
  const VariableSpace vs(3);
  const std::vector<double> p(vs.size(), 1.0);
  CHECK(choose_branching_variable(vs, p) == -1);
  CHECK_THROWS_AS(branch(keyed(0, 0), vs, p, 0.0), ContractViolation);
}

TEST_CASE("triangle: all three targets are stops") {
  const auto r = solve(euclidean_instance({{0, 0}, {10, 0}, {0, 10}}, 0, 0.3, 200));
  REQUIRE(r.status == SolveStatus::kOptimal);
  REQUIRE(r.solution);
  CHECK(r.solution->objective == doctest::Approx(20 + std::sqrt(200.0)));
  CHECK(r.solution->subtours.empty());
}

TEST_CASE("square plus center beats the five-stop tour with a UAV flight") {
  const Instance inst = square_center(0.1);
  const auto r = solve(inst);
  REQUIRE(r.status == SolveStatus::kOptimal);
  REQUIRE(r.solution);
  CHECK_FALSE(r.solution->subtours.empty());
  CHECK(r.solution->objective < all_stops_tour(inst));
  const auto oracle = brute_force(inst);
  CHECK(r.solution->objective == doctest::Approx(oracle.objective).epsilon(1e-9));
  CHECK(validate(inst, *r.solution).empty());
  // With cheap flights the center becomes the hub: tour 0-4-1, flight 4-3-2.
  CHECK(r.solution->objective == doctest::Approx(20 + 2 * std::sqrt(200.0) + 0.1 * (20 + 2 * std::sqrt(200.0))));
  CHECK(r.solution->assignment == std::vector<int>{0, 1, 4, 4, 4});
}

TEST_CASE("raising alpha eventually makes every target a stop") {
  bool switched = false;
  for (double alpha = 0.1; alpha <= 3.0; alpha += 0.1) {
    const Instance inst = square_center(alpha);
    const auto r = solve(inst);
    REQUIRE(r.solution);
    CHECK(r.solution->objective == doctest::Approx(brute_force(inst).objective).epsilon(1e-9));
    const bool all_stops = r.solution->subtours.empty();
    if (switched) CHECK(all_stops);
    switched = switched || all_stops;
  }
  CHECK(switched);
}

TEST_CASE("process_node prunes on the bound without separating") {
  const Instance inst = generate_random(6, 2, 0.2, 50);
  BranchAndCut bc(inst, SolveParams{});
  bc.set_incumbent_value(1.0);  // far below any tour
  CHECK(bc.process_node(Node{}) == NodeOutcome::kPrunedBound);
  CHECK(bc.stats().sec_cuts() == 0);
  CHECK(bc.pool().empty());
  CHECK(bc.open().empty());
}

TEST_CASE("process_node turns the disjoint-cycle point into lazy cuts") {
  const Instance inst = test_points::ten_targets();
  const VariableSpace vs(10);
  const auto p = test_points::fig3_point();
  Node node;
  for (int v = 0; v < vs.z_begin(); ++v) node.overrides.push_back({v, p[v], p[v]});
  BranchAndCut bc(inst, SolveParams{});
  const auto out = bc.process_node(node);
  CHECK(out == NodeOutcome::kPrunedInfeasible);
  CHECK(std::isinf(bc.incumbent_value()));
  CHECK(bc.stats().sec_x_cuts > 0);
  CHECK(bc.stats().sec_w_cuts > 0);
}

TEST_CASE("a fractional node without further cuts branches") {
  const Instance inst = generate_random(5, 3, 0.1, 50);
  BranchAndCut bc(inst, SolveParams{});
  REQUIRE(bc.process_node(Node{}) == NodeOutcome::kBranched);
  CHECK(bc.open().size() == 2);
}

TEST_CASE("child bounds never drop below the parent key") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Instance inst = generate_random(7, seed, 0.3, 50);
    SolveParams params;
    params.shelve_after = 2;  // exercise shelving on the way
    BranchAndCut bc(inst, params);
    NodeQueue& open = bc.open();
    open.push(Node{});
    int processed = 0;
    while (!open.empty() && processed < 200) {
      const Node node = open.pop();
      const auto out = bc.process_node(node);
      ++processed;
      if (out == NodeOutcome::kPrunedInfeasible || node.depth == 0) continue;
      CHECK(bc.last_lp_objective() >= node.key - 1e-7);
    }
  }
}

TEST_CASE("engine matches the oracle on a few random instances") {
  for (int n = 4; n <= 7; ++n)
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const Instance inst = generate_random(n, 100 + seed, 0.2, 50);
      const auto r = solve(inst);
      REQUIRE(r.status == SolveStatus::kOptimal);
      CHECK(r.solution->objective == doctest::Approx(brute_force(inst).objective).epsilon(1e-9));
      CHECK(validate(inst, *r.solution).empty());
      CHECK(r.lower_bound >= r.solution->objective - 1e-6 * std::max(1.0, r.solution->objective));
      CHECK(r.gap <= 1e-9);
    }
}

TEST_CASE("aggressive shelving still proves optimality") {
  const Instance inst = generate_random(7, 4, 0.3, 50);
  SolveParams params;
  params.shelve_after = 1;
  params.shelve_slack = 0.0;
  const auto r = solve(inst, params);
  REQUIRE(r.status == SolveStatus::kOptimal);
  CHECK(r.solution->objective == doctest::Approx(brute_force(inst).objective).epsilon(1e-9));
  CHECK(r.stats.cuts_shelved > 0);
}

TEST_CASE("statistics match the cut log and repeat exactly") {
  const Instance inst = generate_random(8, 5, 0.3, 50);
  std::ostringstream log_a, log_b;
  SolveParams pa, pb;
  pa.cut_log = &log_a;
  pb.cut_log = &log_b;
  const auto a = solve(inst, pa);
  const auto b = solve(inst, pb);
  const std::string text = log_a.str();
  CHECK(count_prefix(text, "node ") == a.stats.nodes_explored);
  CHECK(count_prefix(text, "cut sec-x") + count_prefix(text, "cut sec-w") == a.stats.sec_cuts());
  CHECK(count_prefix(text, "cut two-matching") == a.stats.two_matching_cuts);
  CHECK(statistics_block(a.stats, false) == statistics_block(b.stats, false));
  CHECK(log_a.str() == log_b.str());
  CHECK(a.solution->gv_tour == b.solution->gv_tour);
  CHECK(a.solution->subtours == b.solution->subtours);
}

TEST_CASE("statistics block lists the table columns") {
  SolveStatistics s;
  s.sec_x_cuts = 3;
  s.sec_w_cuts = 4;
  s.nodes_explored = 9;
  s.status = "optimal";
  const auto block = statistics_block(s, false);
  CHECK(block.find("sec_cuts: 7\n") != std::string::npos);
  CHECK(block.find("nodes: 9\n") != std::string::npos);
  CHECK(block.find("wall_seconds") == std::string::npos);
  CHECK(statistics_block(s, true).find("wall_seconds") != std::string::npos);
}

TEST_CASE("warm start keeps the optimum") {
  const Instance inst = generate_random(7, 9, 0.2, 50);
  const auto oracle = brute_force(inst);
  SolveParams params;
  params.warm_start = oracle.solution;
  const auto r = solve(inst, params);
  REQUIRE(r.status == SolveStatus::kOptimal);
  CHECK(r.solution->objective == doctest::Approx(oracle.objective).epsilon(1e-9));
  CHECK(r.stats.nodes_explored <= solve(inst).stats.nodes_explored);

  Solution broken = oracle.solution;
  broken.gv_tour.pop_back();
  params.warm_start = broken;
  CHECK_THROWS_AS(solve(inst, params), std::invalid_argument);
}

TEST_CASE("limits stop the search and report a gap") {
  const Instance inst = generate_random(9, 1, 0.3, 50);
  SolveParams params;
  params.time_limit = 1e-9;
  const auto r = solve(inst, params);
  CHECK(r.status == SolveStatus::kTimeLimit);
  CHECK_FALSE(r.solution);
  CHECK(std::isinf(r.gap));

  params.time_limit = 100;
  params.node_limit = 1;
  const auto s = solve(inst, params);
  CHECK(s.stats.nodes_explored <= 1);
  if (s.status == SolveStatus::kNodeLimit && s.solution) {
    CHECK(s.gap >= 0.0);
    CHECK(s.lower_bound <= s.solution->objective + 1e-9);
  }
}

TEST_CASE("penalty mode agrees with hard fixing when a feasible tour is cheap") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const Instance inst = generate_random(6, seed, 0.2, 40);
    SolveParams params;
    params.penalty_mode = true;
    const auto soft = solve(inst, params);
    const auto hard = solve(inst);
    REQUIRE(soft.status == SolveStatus::kOptimal);
    CHECK(soft.solution->objective == doctest::Approx(hard.solution->objective).epsilon(1e-9));
    CHECK(soft.solution->penalty_total == 0.0);
  }
}

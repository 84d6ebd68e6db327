#include <cmath>
#include <set>

#include "cagvrp/oracle.hpp"
#include "doctest.h"

using namespace cagvrp;

TEST_CASE("oracle on the triangle") {
  const auto r = brute_force(euclidean_instance({{0, 0}, {10, 0}, {0, 10}}, 0, 0.3, 200));
  REQUIRE(r.feasible);
  CHECK(r.objective == doctest::Approx(34.1421356));
  CHECK(r.structures == 1);
}

TEST_CASE("an isolated target becomes a stop") {
  const Instance inst = euclidean_instance({{0, 0}, {5, 0}, {0, 5}, {80, 80}}, 0, 0.1, 10);
  const auto r = brute_force(inst);
  REQUIRE(r.feasible);
  CHECK(r.solution.assignment[3] == 3);
  CHECK(validate(inst, r.solution).empty());
}

TEST_CASE("two-stop tours are reported but not returned") {
  // Serving (0,10) by air from the depot and driving to (100,0) and back is
  // cheaper than the triangle, but needs a doubled edge.
  const auto r = brute_force(euclidean_instance({{0, 0}, {100, 0}, {0, 10}}, 0, 0.1, 50));
  REQUIRE(r.feasible);
  CHECK(r.objective == doctest::Approx(110.0 + std::sqrt(10100.0)));
  CHECK(r.two_stop_objective == doctest::Approx(202.0));
  CHECK(r.two_stop_binds());
  CHECK(r.structures == 1);

  // At alpha 0.9 the doubled edge plus a flight costs 38 > 20 + sqrt(200).
  const auto tri = brute_force(euclidean_instance({{0, 0}, {10, 0}, {0, 10}}, 0, 0.9, 200));
  CHECK(tri.two_stop_objective == doctest::Approx(38.0));
  CHECK_FALSE(tri.two_stop_binds());
}

TEST_CASE("oracle refuses large instances") {
  CHECK_THROWS_AS(brute_force(generate_random(11, 1, 0.1, 50)), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_feasible(generate_random(7, 1, 0.1, 50), 10), std::invalid_argument);
}

TEST_CASE("enumeration counts") {
  const auto three = enumerate_feasible(euclidean_instance({{0, 0}, {10, 0}, {0, 10}}, 0, 0.3, 200), 100);
  CHECK(three.size() == 1);

  const Instance spread = euclidean_instance({{0, 0}, {50, 0}, {50, 50}, {0, 50}}, 0, 0.3, 1);
  const auto four = enumerate_feasible(spread, 100);
  CHECK(four.size() == 3);
  std::set<std::vector<int>> tours;
  for (const auto& s : four) {
    CHECK(s.subtours.empty());
    tours.insert(s.gv_tour);
  }
  CHECK(tours.size() == 3);

  CHECK(enumerate_feasible(generate_random(5, 2, 0.1, 50), 1).size() == 1);
}

TEST_CASE("enumerated solutions are feasible, distinct, and never beat the oracle") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Instance inst = generate_random(5, seed, 0.3, 50);
    const auto best = brute_force(inst);
    REQUIRE(best.feasible);
    CHECK(validate(inst, best.solution).empty());
    std::set<std::pair<std::vector<int>, std::map<int, std::vector<int>>>> seen;
    double lowest = INFINITY;
    enumerate_feasible(inst, 1'000'000, [&](const Solution& s) {
      CHECK(validate(inst, s).empty());
      CHECK(seen.insert({s.gv_tour, s.subtours}).second);
      CHECK(s.objective >= best.objective - 1e-9);
      lowest = std::min(lowest, s.objective);
      return true;
    });
    CHECK(lowest == doctest::Approx(best.objective).epsilon(1e-12));
  }
}

TEST_CASE("visitor can stop the enumeration") {
  int calls = 0;
  const auto produced = enumerate_feasible(generate_random(5, 1, 0.3, 80), 1000, [&](const Solution&) {
    return ++calls < 4;
  });
  CHECK(produced == 4);
  CHECK(calls == 4);
}

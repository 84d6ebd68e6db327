#include <cmath>
#include <set>

#include "cagvrp/errors.hpp"
#include "cagvrp/model.hpp"
#include "cagvrp/oracle.hpp"
#include "doctest.h"
#include "points.hpp"

using namespace cagvrp;
using test_points::PointBuilder;

namespace {

bool has_kind(const std::vector<Violation>& report, const std::string& kind) {
  for (const auto& v : report)
    if (v.kind == kind) return true;
  return false;
}

Instance triangle(double alpha = 0.3, double radius = 200) {
  return euclidean_instance({{0, 0}, {10, 0}, {0, 10}}, 0, alpha, radius, "triangle");
}

}  // namespace

TEST_CASE("variable space layout") {
  for (int n : {3, 4, 7}) {
    const VariableSpace vs(n);
    CHECK(vs.size() == n * (n - 1) / 2 + 2 * n * n + n * n * n);
    std::set<int> seen;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i < j) {
          CHECK(vs.x(i, j) == vs.x(j, i));
          seen.insert(vs.x(i, j));
        }
        seen.insert(vs.w(i, j));
        seen.insert(vs.y(i, j));
        for (int k = 0; k < n; ++k) seen.insert(vs.z(i, j, k));
      }
    CHECK(static_cast<int>(seen.size()) == vs.size());
    CHECK(*seen.begin() == 0);
    CHECK(*seen.rbegin() == vs.size() - 1);
    for (int idx = 0; idx < vs.size(); ++idx) {
      const auto d = vs.decode(idx);
      switch (d.cls) {
        case VarClass::kX: CHECK(vs.x(d.i, d.j) == idx); break;
        case VarClass::kW: CHECK(vs.w(d.i, d.j) == idx); break;
        case VarClass::kY: CHECK(vs.y(d.i, d.j) == idx); break;
        case VarClass::kZ: CHECK(vs.z(d.i, d.j, d.k) == idx); break;
      }
    }
  }
}

TEST_CASE("n = 3 model sizes") {
  const MilpModel m = build_model(triangle());
  CHECK(m.space.size() == 48);
  const int core = m.count_rows(RowTag::kDegreeX) + m.count_rows(RowTag::kOutDegreeW) +
                   m.count_rows(RowTag::kInDegreeW) + m.count_rows(RowTag::kLinkWZ) +
                   m.count_rows(RowTag::kZLeYik) + m.count_rows(RowTag::kZLeYjk) +
                   m.count_rows(RowTag::kZGe);
  CHECK(m.count_rows(RowTag::kDegreeX) == 3);
  CHECK(m.count_rows(RowTag::kOutDegreeW) + m.count_rows(RowTag::kInDegreeW) == 6);
  CHECK(m.count_rows(RowTag::kLinkWZ) == 9);
  CHECK(m.count_rows(RowTag::kZLeYik) + m.count_rows(RowTag::kZLeYjk) + m.count_rows(RowTag::kZGe) == 81);
  CHECK(core == 99);
  CHECK(m.count_rows(RowTag::kAssign) == 3);
  CHECK(static_cast<int>(m.rows.size()) == core + 3);
  for (const auto& r : m.rows) CHECK(r.well_formed());
}

TEST_CASE("comm-infeasible pairs fix y to zero") {
  const Instance inst = euclidean_instance({{0, 0}, {10, 0}, {0, 10}}, 0, 0.5, 10);
  REQUIRE_FALSE(inst.comm_ok(1, 2));
  const MilpModel m = build_model(inst);
  CHECK(m.upper[m.space.y(1, 2)] == 0.0);
  CHECK(m.upper[m.space.y(2, 1)] == 0.0);
  CHECK(m.lower[m.space.y(0, 0)] == 1.0);
  for (int j = 1; j < 3; ++j) CHECK(m.upper[m.space.y(0, j)] == 0.0);
}

TEST_CASE("self-arcs are free and bounds stay in the unit box") {
  const Instance inst = generate_random(6, 3, 0.2, 50);
  const MilpModel m = build_model(inst);
  for (int i = 0; i < 6; ++i) CHECK(m.objective[m.space.w(i, i)] == 0.0);
  for (int v = 0; v < m.space.size(); ++v) {
    CHECK(m.lower[v] >= 0.0);
    CHECK(m.upper[v] <= 1.0);
    CHECK(m.lower[v] <= m.upper[v]);
    CHECK(m.objective[v] >= 0.0);
  }
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      if (!inst.comm_ok(i, j)) CHECK(m.upper[m.space.y(i, j)] == 0.0);
}

TEST_CASE("penalty mode prices forbidden assignments instead of fixing them") {
  const Instance inst = euclidean_instance({{0, 0}, {10, 0}, {0, 10}}, 0, 0.5, 10);
  const MilpModel m = build_model(inst, ModelOptions{true});
  double sum = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) sum += inst.gv_cost(i, j);
  CHECK(penalty_coefficient(inst) == doctest::Approx(10 * sum));
  CHECK(m.upper[m.space.y(1, 2)] == 1.0);
  CHECK(m.objective[m.space.y(1, 2)] == doctest::Approx(10 * sum));
  CHECK(m.objective[m.space.y(0, 1)] == 0.0);
}

TEST_CASE("decode: all stops on a triangle") {
  const Instance inst = triangle();
  PointBuilder b(3);
  b.cycle_x({0, 1, 2});
  for (int i = 0; i < 3; ++i) b.assign(i, i);
  const Solution s = decode(inst, b.finish());
  CHECK(s.gv_tour.size() == 3);
  CHECK(s.gv_tour.front() == 0);
  CHECK(s.subtours.empty());
  CHECK(s.uav_cost_total == 0.0);
  CHECK(s.objective == doctest::Approx(20 + std::sqrt(200.0)));
}

TEST_CASE("decode: one UAV flight from stop 1") {
  const Instance inst = euclidean_instance({{0, 0}, {10, 0}, {0, 10}, {12, 3}}, 0, 0.2, 200);
  PointBuilder b(4);
  b.cycle_x({0, 1, 2}).cycle_w({1, 3});
  for (int i = 0; i < 3; ++i) b.assign(i, i);
  b.assign(3, 1);
  const Solution s = decode(inst, b.finish());
  REQUIRE(s.subtours.count(1) == 1);
  CHECK(s.subtours.at(1) == std::vector<int>{1, 3});
  CHECK(s.assignment[3] == 1);
  CHECK(s.uav_cost_total == doctest::Approx(inst.uav_cost(1, 3) + inst.uav_cost(3, 1)));
}

TEST_CASE("decode rejects the disjoint-cycle shape and fractional input") {
  const Instance inst = test_points::ten_targets();
  CHECK_THROWS_AS(decode(inst, test_points::fig3_point()), InfeasibleDecode);
  auto frac = test_points::fig2_point();
  frac[VariableSpace(10).x(0, 1)] = 0.5;
  CHECK_THROWS_AS(decode(inst, frac), ContractViolation);
}

TEST_CASE("decode checks the LP objective") {
  const Instance inst = test_points::ten_targets();
  const auto point = test_points::fig2_point();
  const Solution s = decode(inst, point);
  CHECK_NOTHROW(decode(inst, point, s.objective));
  CHECK_THROWS(decode(inst, point, s.objective + 1.0));
}

TEST_CASE("validate accepts the nested sample tour") {
  const Instance inst = test_points::ten_targets();
  Solution s = test_points::fig2_solution();
  recompute_costs(inst, s);
  CHECK(validate(inst, s).empty());
  const Solution d = decode(inst, test_points::fig2_point());
  CHECK(validate(inst, d).empty());
  CHECK(d.objective == doctest::Approx(s.objective));
}

TEST_CASE("validate reports a target outside the radius") {
  const Instance inst = euclidean_instance({{0, 0}, {30, 0}, {0, 30}, {81, 0}}, 0, 0.1, 50);
  Solution s;
  s.gv_tour = {0, 1, 2};
  s.subtours[1] = {1, 3};
  s.assignment = {0, 1, 2, 1};
  recompute_costs(inst, s);
  const auto report = validate(inst, s);
  REQUIRE(has_kind(report, "comm-radius"));
  for (const auto& v : report)
    if (v.kind == "comm-radius") CHECK(v.message.find("3") != std::string::npos);
}

TEST_CASE("validate reports a detached UAV cycle") {
  const Instance inst = test_points::ten_targets();
  Solution s = test_points::fig2_solution();
  s.subtours[1] = {6, 7};
  recompute_costs(inst, s);
  CHECK(has_kind(validate(inst, s), "detached-subtour"));
}

TEST_CASE("validate reports coverage, depot, short tours and stale costs") {
  const Instance inst = test_points::ten_targets();
  Solution s = test_points::fig2_solution();
  recompute_costs(inst, s);
  Solution dropped = s;
  dropped.subtours[4] = {4, 8};
  dropped.assignment[9] = -1;
  CHECK(has_kind(validate(inst, dropped), "coverage"));

  Solution costly = s;
  costly.objective += 1.0;
  CHECK(has_kind(validate(inst, costly), "cost"));

  Solution no_depot = s;
  no_depot.gv_tour = {1, 3, 5, 4, 2};
  no_depot.assignment[0] = 1;
  no_depot.subtours[1] = {1, 6, 7, 0};
  recompute_costs(inst, no_depot);
  CHECK(has_kind(validate(inst, no_depot), "depot"));

  const Instance tri = triangle();
  Solution two;
  two.gv_tour = {0, 1};
  two.subtours[0] = {0, 2};
  two.assignment = {0, 1, 0};
  recompute_costs(tri, two);
  CHECK(has_kind(validate(tri, two), "ground-tour"));
}

TEST_CASE("objective_of examples") {
  const Instance tri = triangle();
  Solution s;
  s.gv_tour = {0, 1, 2};
  s.assignment = {0, 1, 2};
  CHECK(objective_of(tri, s) == doctest::Approx(34.1421356));

  const Instance four = euclidean_instance({{0, 0}, {10, 0}, {0, 10}, {5, 5}}, 0, 0.1, 200);
  Solution f;
  f.gv_tour = {0, 1, 2};
  f.subtours[0] = {0, 3};
  f.assignment = {0, 1, 2, 0};
  CHECK(objective_of(four, f) - objective_of(tri, s) == doctest::Approx(0.1 * 2 * std::sqrt(50.0)));
}

TEST_CASE("encoded feasible solutions satisfy every static row and decode back") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const Instance inst = generate_random(5, seed, 0.2, 60);
    const MilpModel m = build_model(inst);
    enumerate_feasible(inst, 400, [&](const Solution& sol) {
      REQUIRE(validate(inst, sol).empty());
      const auto point = encode(inst, sol);
      for (const auto& r : m.rows) CHECK(r.violation(point) <= 1e-9);
      for (int v = 0; v < m.space.size(); ++v) {
        CHECK(point[v] >= m.lower[v]);
        CHECK(point[v] <= m.upper[v]);
      }
      const Solution back = decode(inst, point);
      CHECK(back.assignment == sol.assignment);
      CHECK(back.objective == doctest::Approx(sol.objective).epsilon(1e-12));
      CHECK(validate(inst, back).empty());
      return true;
    });
  }
}

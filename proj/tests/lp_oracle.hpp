#pragma once

// Reference checks for the simplex: brute-force vertex enumeration for small
// boxed LPs and a KKT certificate check for larger ones.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "cagvrp/lp.hpp"

namespace lp_oracle {

using cagvrp::LinearRow;
using cagvrp::LpProblem;
using cagvrp::RowSense;

inline double row_dot(const LinearRow& r, const std::vector<double>& x) {
  double s = 0;
  for (size_t k = 0; k < r.index.size(); ++k) s += r.coef[k] * x[r.index[k]];
  return s;
}

inline bool feasible(const LpProblem& p, const std::vector<double>& x, double tol) {
  for (int j = 0; j < p.num_vars; ++j)
    if (x[j] < p.lower[j] - tol || x[j] > p.upper[j] + tol) return false;
  for (const auto& r : p.rows) {
    const double a = row_dot(r, x);
    if (r.sense != RowSense::kGreaterEqual && a > r.rhs + tol) return false;
    if (r.sense != RowSense::kLessEqual && a < r.rhs - tol) return false;
  }
  return true;
}

struct VertexResult {
  bool feasible = false;
  bool unbounded = false;
  double objective = 0;
  std::vector<double> x;
};

namespace detail {

// Every vertex of a polytope with finite bounds is the unique solution of n
// linearly independent tight constraints drawn from the rows and the bounds.
inline VertexResult best_vertex(const LpProblem& p, double tol) {
  const int n = p.num_vars;
  struct Hyper {
    std::vector<double> a;
    double b;
  };
  std::vector<Hyper> planes;
  for (const auto& r : p.rows) {
    Hyper h{std::vector<double>(n, 0.0), r.rhs};
    for (size_t k = 0; k < r.index.size(); ++k) h.a[r.index[k]] = r.coef[k];
    planes.push_back(h);
  }
  for (int j = 0; j < n; ++j) {
    Hyper lo{std::vector<double>(n, 0.0), p.lower[j]};
    lo.a[j] = 1;
    planes.push_back(lo);
    Hyper hi{std::vector<double>(n, 0.0), p.upper[j]};
    hi.a[j] = 1;
    planes.push_back(hi);
  }
  VertexResult best;
  const int total = static_cast<int>(planes.size());
  std::vector<int> pick(n);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == n) {
      Eigen::MatrixXd A(n, n);
      Eigen::VectorXd b(n);
      for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) A(r, c) = planes[pick[r]].a[c];
        b[r] = planes[pick[r]].b;
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
      if (lu.rank() < n) return;
      Eigen::VectorXd v = lu.solve(b);
      std::vector<double> x(v.data(), v.data() + n);
      if (!feasible(p, x, 1e-7)) return;
      double obj = 0;
      for (int j = 0; j < n; ++j) obj += p.objective[j] * x[j];
      if (!best.feasible || obj < best.objective - tol) {
        best.feasible = true;
        best.objective = obj;
        best.x = x;
      }
      return;
    }
    for (int k = start; k <= total - (n - depth); ++k) {
      pick[depth] = k;
      rec(k + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

}  // namespace detail

// Infinite bounds are replaced by a large box; the LP is unbounded exactly
// when doubling that box still lowers the optimum.
inline VertexResult enumerate_vertices(const LpProblem& p, double tol = 1e-9) {
  auto boxed = [&](double big) {
    LpProblem q = p;
    for (int j = 0; j < q.num_vars; ++j) {
      if (!std::isfinite(q.lower[j])) q.lower[j] = -big;
      if (!std::isfinite(q.upper[j])) q.upper[j] = big;
    }
    return q;
  };
  VertexResult a = detail::best_vertex(boxed(1e4), tol);
  if (!a.feasible) return a;
  const VertexResult b = detail::best_vertex(boxed(2e4), tol);
  if (b.objective < a.objective - 1e-6 * std::max(1.0, std::abs(a.objective))) a.unbounded = true;
  return a;
}

// Primal feasibility, dual sign conditions and complementary slackness for
// the returned primal point and row duals. Reduced cost of column j is
// c_j - sum_r a_rj * pi_r.
inline bool kkt_holds(const LpProblem& p, const std::vector<double>& x, const std::vector<double>& pi,
                      double tol = 1e-6) {
  if (!feasible(p, x, 1e-7)) return false;
  std::vector<double> d(p.objective);
  for (size_t r = 0; r < p.rows.size(); ++r) {
    const auto& row = p.rows[r];
    for (size_t k = 0; k < row.index.size(); ++k) d[row.index[k]] -= row.coef[k] * pi[r];
    const double act = row_dot(row, x);
    // pi_r >= 0 may only push against a >= side, pi_r <= 0 against a <= side.
    const bool at_lower = row.sense != RowSense::kLessEqual && std::abs(act - row.rhs) <= 1e-7;
    const bool at_upper = row.sense != RowSense::kGreaterEqual && std::abs(act - row.rhs) <= 1e-7;
    if (pi[r] > tol && !at_lower) return false;
    if (pi[r] < -tol && !at_upper) return false;
  }
  for (int j = 0; j < p.num_vars; ++j) {
    const bool at_lo = std::abs(x[j] - p.lower[j]) <= 1e-7;
    const bool at_hi = std::abs(x[j] - p.upper[j]) <= 1e-7;
    if (d[j] > tol && !at_lo) return false;
    if (d[j] < -tol && !at_hi) return false;
  }
  return true;
}

// Random LP with integer data. Rows are built around a random point of the
// box (so most instances are feasible) except for a few with arbitrary
// right-hand sides; `open_fraction` of the upper bounds are infinite.
inline LpProblem random_lp(std::mt19937_64& rng, int n, int m, double density = 0.7,
                           double open_fraction = 0.0) {
  std::uniform_int_distribution<int> coef(-5, 5);
  std::uniform_int_distribution<int> small(0, 4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  LpProblem p;
  p.num_vars = n;
  std::vector<double> anchor(n);
  for (int j = 0; j < n; ++j) {
    p.objective.push_back(coef(rng));
    const double lo = -small(rng);
    const double hi = lo + 1 + small(rng);
    p.lower.push_back(lo);
    p.upper.push_back(unit(rng) < open_fraction ? cagvrp::kInf : hi);
    anchor[j] = lo + std::uniform_int_distribution<int>(0, static_cast<int>(hi - lo))(rng);
  }
  for (int r = 0; r < m; ++r) {
    std::vector<std::pair<int, double>> terms;
    for (int j = 0; j < n; ++j)
      if (unit(rng) < density) {
        const int c = coef(rng);
        if (c != 0) terms.emplace_back(j, c);
      }
    if (terms.empty()) terms.emplace_back(static_cast<int>(rng() % n), 1.0);
    double at_anchor = 0;
    for (const auto& [j, c] : terms) at_anchor += c * anchor[j];
    const double u = unit(rng);
    const RowSense sense = u < 0.45 ? RowSense::kLessEqual
                           : u < 0.9 ? RowSense::kGreaterEqual
                                     : RowSense::kEqual;
    double rhs = at_anchor;
    if (unit(rng) < 0.1) rhs = coef(rng) * 2;
    else if (sense == RowSense::kLessEqual) rhs += small(rng);
    else if (sense == RowSense::kGreaterEqual) rhs -= small(rng);
    p.rows.push_back(LinearRow::from_terms(terms, sense, rhs, cagvrp::RowTag::kOther));
  }
  return p;
}

}  // namespace lp_oracle

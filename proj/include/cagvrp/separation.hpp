#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cagvrp/lp.hpp"
#include "cagvrp/model.hpp"

namespace cagvrp {

enum class CutKind { kSecX, kSecWOut, kSecWIn, kTwoMatching };
const char* to_string(CutKind kind);

struct Cut {
  CutKind kind = CutKind::kSecX;
  // S for the sub-tour families, the handle H for 2-matching.
  std::vector<int> set;
  // The target i the SEC row is written for; -1 for 2-matching.
  int target = -1;
  std::vector<std::pair<int, int>> teeth;
  LinearRow row;
  // LHS - RHS oriented so that positive means violated at the separating point.
  double violation = 0.0;
};

struct SupportGraph {
  struct Edge {
    int u = 0;
    int v = 0;
    double weight = 0.0;
  };
  bool directed = false;
  std::vector<int> vertices;  // sorted
  std::vector<Edge> edges;
};

struct SeparationParams {
  double support_eps = 1e-6;
  double violation_tol = 1e-4;
  // Extra rows per candidate set beyond the most violated one.
  int runners_up = 3;
  // Per-target minimum cuts that include the assignment variables; these make
  // sub-tour separation exact for targets that are not (fractional) stops.
  bool per_target_cuts = true;
};

// Vertices: targets with y_ii > eps, the depot, and every endpoint of an edge
// with x_e > eps. Edges weighted by x_e.
SupportGraph build_support_undirected(const VariableSpace& vs, int depot,
                                      std::span<const double> point, double eps = 1e-6);
// Arcs i != j with w_ij > eps; vertices are their endpoints.
SupportGraph build_support_directed(const VariableSpace& vs, std::span<const double> point,
                                    double eps = 1e-6);

//   sum_{e in delta(S)} x_e >= 2 sum_{j in S} y_ij          (i in S, depot not in S)
LinearRow sec_x_row(const VariableSpace& vs, std::span<const int> set, int target);
//   sum_{[a,b] in delta+(S)} w_ab + sum_{j in S} y_ij >= 1  (i in S)
LinearRow sec_w_out_row(const VariableSpace& vs, std::span<const int> set, int target);
//   sum_{[a,b] in delta-(S)} w_ab + sum_{j in S} y_ij >= 1  (i in S)
LinearRow sec_w_in_row(const VariableSpace& vs, std::span<const int> set, int target);
//   sum_{gamma(H)} x + sum_{I} x - sum_{i in H} y_ii <= (|I| - 1) / 2
LinearRow two_matching_row(const VariableSpace& vs, std::span<const int> handle,
                           std::span<const std::pair<int, int>> teeth);

std::vector<Cut> separate_sec_x(const VariableSpace& vs, int depot, std::span<const double> point,
                                const SeparationParams& params = {});
std::vector<Cut> separate_sec_w(const VariableSpace& vs, std::span<const double> point,
                                const SeparationParams& params = {});
std::vector<Cut> separate_two_matching(const VariableSpace& vs, std::span<const double> point,
                                       const SeparationParams& params = {});

// Sub-tour rows violated by an integral point that already satisfies the
// static rows. Empty means the point is a CAGVRP solution.
std::vector<Cut> check_integral(const VariableSpace& vs, int depot, std::span<const double> point,
                                const SeparationParams& params = {});

// Hash of (sense, rhs, support, coefficients); equal rows hash equal.
std::uint64_t canonical_hash(const LinearRow& row);

// "cut sec-x |S|=3 target=4 violation=2.000000"
std::string describe(const Cut& cut);

}  // namespace cagvrp

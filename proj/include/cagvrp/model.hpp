#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cagvrp/instance.hpp"
#include "cagvrp/lp.hpp"

namespace cagvrp {

enum class VarClass { kX, kW, kY, kZ };

// Index layout of the linearized model: x_e for unordered pairs i < j, then
// w_ij and y_ij over all ordered pairs (self-arcs included), then z_ijk.
class VariableSpace {
 public:
  VariableSpace() = default;
  explicit VariableSpace(int n);

  int n() const { return n_; }
  int num_x() const { return n_ * (n_ - 1) / 2; }
  int size() const { return z_begin_ + n_ * n_ * n_; }

  int w_begin() const { return w_begin_; }
  int y_begin() const { return y_begin_; }
  int z_begin() const { return z_begin_; }

  int x(int i, int j) const;  // order of i, j is irrelevant; i != j
  int w(int i, int j) const { return w_begin_ + i * n_ + j; }
  int y(int i, int j) const { return y_begin_ + i * n_ + j; }
  int z(int i, int j, int k) const { return z_begin_ + (i * n_ + j) * n_ + k; }

  struct Decoded {
    VarClass cls;
    int i = 0, j = 0, k = 0;
  };
  Decoded decode(int index) const;
  std::string name(int index) const;

 private:
  int n_ = 0;
  int w_begin_ = 0;
  int y_begin_ = 0;
  int z_begin_ = 0;
  std::vector<int> x_row_start_;
};

struct ModelOptions {
  // Encode comm-infeasible assignments with a large objective coefficient
  // instead of fixing y_ij = 0.
  bool penalty_mode = false;
};

struct MilpModel {
  VariableSpace space;
  std::vector<double> objective;
  std::vector<LinearRow> rows;
  std::vector<double> lower;
  std::vector<double> upper;
  // (variable, value) pairs whose bounds coincide in the model.
  std::vector<std::pair<int, double>> fixed;
  double penalty = 0.0;  // f_ij for forbidden pairs in penalty mode; 0 otherwise
  bool penalty_mode = false;

  LpProblem relaxation() const;
  int count_rows(RowTag tag) const;
};

// Rows: x-degree (n), w out/in-degree (2n), w-z linking (n^2), the three z
// linearization families (n^3 each), and one assignment row per target
// (sum_j y_ij = 1). Sub-tour elimination and 2-matching rows are left to the
// separators. All variables live in [0,1]; y_ij is fixed to 0 when target i
// cannot talk to stop j, y at the depot is fixed to 1, and anything those
// fixings force to zero through the linking rows is fixed as well.
MilpModel build_model(const Instance& inst, const ModelOptions& options = {});

// Large objective coefficient used in penalty mode.
double penalty_coefficient(const Instance& inst);

struct SolveStatistics {
  long long sec_x_cuts = 0;
  long long sec_w_cuts = 0;
  long long two_matching_cuts = 0;
  long long nodes_explored = 0;
  long long lp_solves = 0;
  long long simplex_iterations = 0;
  long long max_depth = 0;
  long long cuts_shelved = 0;
  long long cuts_reactivated = 0;
  double lower_bound = 0.0;
  double gap = 0.0;
  double wall_seconds = 0.0;
  std::string status;

  long long sec_cuts() const { return sec_x_cuts + sec_w_cuts; }

  friend bool operator==(const SolveStatistics&, const SolveStatistics&) = default;
};

struct Solution {
  std::vector<int> gv_tour;                    // starts at the depot
  std::map<int, std::vector<int>> subtours;    // stop -> cycle starting at the stop
  std::vector<int> assignment;                 // target -> its stop
  double gv_cost_total = 0.0;
  double uav_cost_total = 0.0;
  double penalty_total = 0.0;
  double objective = 0.0;
  std::optional<SolveStatistics> stats;
};

inline constexpr double kIntegralityTol = 1e-6;
inline constexpr double kCostTol = 1e-6;

// Fills the cost fields from the instance matrices.
void recompute_costs(const Instance& inst, Solution& sol, bool penalty_mode = false);

double objective_of(const Instance& inst, const Solution& sol, bool penalty_mode = false);

// Full model vector (x, w, y, z) of a structurally valid solution.
std::vector<double> encode(const Instance& inst, const Solution& sol);

// Reads an integral model point back into a Solution. Throws ContractViolation
// on fractional input and InfeasibleDecode when the point is not a CAGVRP tour
// (disconnected ground edges, a UAV cycle without exactly one stop, ...). When
// `lp_objective` is given the recomputed objective must match it within 1e-6.
Solution decode(const Instance& inst, std::span<const double> point,
                std::optional<double> lp_objective = std::nullopt, bool penalty_mode = false);

struct Violation {
  std::string kind;  // coverage, depot, ground-tour, subtour, detached-subtour,
                     // comm-radius, assignment, cost
  std::string message;
};

// Every broken condition of `sol` with respect to `inst`; empty iff feasible.
std::vector<Violation> validate(const Instance& inst, const Solution& sol);

}  // namespace cagvrp

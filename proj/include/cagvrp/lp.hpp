#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cagvrp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense { kLessEqual, kEqual, kGreaterEqual };

// Where a row came from. Static model rows carry the constraint family they
// belong to; cuts carry their separator.
enum class RowTag {
  kDegreeX,
  kOutDegreeW,
  kInDegreeW,
  kAssign,
  kLinkWZ,
  kZLeYik,
  kZLeYjk,
  kZGe,
  kSecX,
  kSecWOut,
  kSecWIn,
  kTwoMatching,
  kFix,
  kOther,
};

const char* to_string(RowTag tag);
const char* to_string(RowSense sense);

// Sparse row  sum(coef[k] * x[index[k]])  (sense)  rhs.
// Indices are strictly increasing and no stored coefficient is zero; use
// from_terms() to get there from an arbitrary term list.
struct LinearRow {
  std::vector<int> index;
  std::vector<double> coef;
  RowSense sense = RowSense::kLessEqual;
  double rhs = 0.0;
  RowTag tag = RowTag::kOther;

  static LinearRow from_terms(std::vector<std::pair<int, double>> terms, RowSense sense,
                              double rhs, RowTag tag);

  double activity(std::span<const double> x) const;
  // Amount by which x violates the row; <= 0 when satisfied.
  double violation(std::span<const double> x) const;
  bool well_formed() const;

  friend bool operator==(const LinearRow&, const LinearRow&) = default;
};

// Minimize objective . x  subject to rows and lower <= x <= upper.
struct LpProblem {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<LinearRow> rows;

  // Throws std::invalid_argument when sizes, bounds or row indices are off.
  void check() const;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };
const char* to_string(LpStatus status);

struct LpResult {
  LpStatus status = LpStatus::kIterationLimit;
  std::vector<double> x;      // structural values
  std::vector<double> duals;  // one per row, sign convention: objective = duals . rhs + ...
  double objective = 0.0;
  std::int64_t iterations = 0;
};

struct SimplexOptions {
  double feasibility_tol = 1e-7;
  double pivot_tol = 1e-9;
  double optimality_tol = 1e-9;
  int refactor_interval = 100;
  // 0 means 100 * (rows + cols).
  std::int64_t iteration_cap = 0;
  // Consecutive degenerate pivots before switching to Bland's rule.
  int degenerate_trigger = 50;
};

struct BoundChange {
  int var = 0;
  double lower = 0.0;
  double upper = 0.0;
};

// Interface the branch-and-cut engine talks to. Rows are addressed by their
// position in the current row list; removing rows shifts later positions down.
class LpBackend {
 public:
  virtual ~LpBackend() = default;

  virtual void load(const LpProblem& problem) = 0;
  virtual int num_rows() const = 0;
  virtual int num_vars() const = 0;
  virtual void add_rows(std::span<const LinearRow> rows) = 0;
  // `rows` must be sorted ascending.
  virtual void remove_rows(std::span<const int> rows) = 0;
  virtual void set_bounds(int var, double lower, double upper) = 0;
  virtual LpResult solve() = 0;
  // Forget any warm-start information; the next solve starts from scratch.
  virtual void reset_basis() = 0;
};

// Bounded-variable revised primal simplex.
//
// Every row r gets a logical variable s_r with  a_r . x - s_r = 0  and
// bounds taken from the sense/rhs, so the working matrix is [A | -I]. The
// basis is factorized with a sparse LU and updated in product form between
// refactorizations. Phase 1 minimizes the sum of bound infeasibilities of the
// basic variables; phase 2 the objective. Pricing is Dantzig's rule until a run
// of degenerate pivots triggers Bland's rule, which stays on until the next
// nondegenerate pivot. A dual simplex pass is tried first on warm starts whose
// basis is still dual feasible (after cuts or bound tightening).
class SimplexSolver final : public LpBackend {
 public:
  explicit SimplexSolver(SimplexOptions options = {});
  ~SimplexSolver() override;
  SimplexSolver(SimplexSolver&&) noexcept;
  SimplexSolver& operator=(SimplexSolver&&) noexcept;

  void load(const LpProblem& problem) override;
  int num_rows() const override;
  int num_vars() const override;
  void add_rows(std::span<const LinearRow> rows) override;
  void remove_rows(std::span<const int> rows) override;
  void set_bounds(int var, double lower, double upper) override;
  LpResult solve() override;
  void reset_basis() override;

  // Whether the logical of row r is basic in the current basis.
  bool row_is_basic(int row) const;
  std::int64_t total_iterations() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Cold solve.
LpResult solve(const LpProblem& problem, const SimplexOptions& options = {});

// Solves `base`, then applies the row additions and bound changes and solves
// again from the warm basis. The outcome matches a cold solve of the modified
// problem.
LpResult resolve_with(const LpProblem& base, std::span<const LinearRow> added_rows,
                      std::span<const BoundChange> changed_bounds,
                      const SimplexOptions& options = {});

// CPLEX-style LP text, for cross-checking with external tools.
std::string to_lp_format(const LpProblem& problem);

}  // namespace cagvrp

#include "cagvrp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace cagvrp {

const char* to_string(RowTag tag) {
  switch (tag) {
    case RowTag::kDegreeX: return "degree-x";
    case RowTag::kOutDegreeW: return "out-degree-w";
    case RowTag::kInDegreeW: return "in-degree-w";
    case RowTag::kAssign: return "assign";
    case RowTag::kLinkWZ: return "link-wz";
    case RowTag::kZLeYik: return "z-le-yik";
    case RowTag::kZLeYjk: return "z-le-yjk";
    case RowTag::kZGe: return "z-ge";
    case RowTag::kSecX: return "sec-x";
    case RowTag::kSecWOut: return "sec-w-out";
    case RowTag::kSecWIn: return "sec-w-in";
    case RowTag::kTwoMatching: return "two-matching";
    case RowTag::kFix: return "fix";
    case RowTag::kOther: return "other";
  }
  return "?";
}

const char* to_string(RowSense sense) {
  switch (sense) {
    case RowSense::kLessEqual: return "<=";
    case RowSense::kEqual: return "=";
    case RowSense::kGreaterEqual: return ">=";
  }
  return "?";
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kIterationLimit: return "iteration-limit";
  }
  return "?";
}

LinearRow LinearRow::from_terms(std::vector<std::pair<int, double>> terms, RowSense sense,
                                double rhs, RowTag tag) {
  std::sort(terms.begin(), terms.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  LinearRow row;
  row.sense = sense;
  row.rhs = rhs;
  row.tag = tag;
  for (const auto& [idx, c] : terms) {
    if (!row.index.empty() && row.index.back() == idx) {
      row.coef.back() += c;
    } else {
      row.index.push_back(idx);
      row.coef.push_back(c);
    }
  }
  size_t out = 0;
  for (size_t k = 0; k < row.index.size(); ++k) {
    if (row.coef[k] == 0.0) continue;
    row.index[out] = row.index[k];
    row.coef[out] = row.coef[k];
    ++out;
  }
  row.index.resize(out);
  row.coef.resize(out);
  return row;
}

double LinearRow::activity(std::span<const double> x) const {
  double s = 0.0;
  for (size_t k = 0; k < index.size(); ++k) s += coef[k] * x[index[k]];
  return s;
}

double LinearRow::violation(std::span<const double> x) const {
  const double a = activity(x);
  switch (sense) {
    case RowSense::kLessEqual: return a - rhs;
    case RowSense::kGreaterEqual: return rhs - a;
    case RowSense::kEqual: return std::abs(a - rhs);
  }
  return 0.0;
}

bool LinearRow::well_formed() const {
  if (index.size() != coef.size()) return false;
  for (size_t k = 0; k < index.size(); ++k) {
    if (coef[k] == 0.0 || !std::isfinite(coef[k])) return false;
    if (k > 0 && index[k] <= index[k - 1]) return false;
  }
  return std::isfinite(rhs);
}

void LpProblem::check() const {
  const auto n = static_cast<size_t>(num_vars);
  if (num_vars < 0 || objective.size() != n || lower.size() != n || upper.size() != n)
    throw std::invalid_argument("LpProblem: vector sizes do not match num_vars");
  for (size_t j = 0; j < n; ++j) {
    if (!(lower[j] <= upper[j]) || lower[j] == kInf || upper[j] == -kInf)
      throw std::invalid_argument("LpProblem: bad bounds on variable " + std::to_string(j));
  }
  for (size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (!row.well_formed())
      throw std::invalid_argument("LpProblem: malformed row " + std::to_string(r));
    if (!row.index.empty() && (row.index.front() < 0 || row.index.back() >= num_vars))
      throw std::invalid_argument("LpProblem: row " + std::to_string(r) +
                                  " references a missing variable");
  }
}

// ---------------------------------------------------------------------------

namespace {

enum class VarState : std::uint8_t { kBasic, kLower, kUpper, kZero };

struct Eta {
  int pos = 0;
  double pivot = 1.0;
  std::vector<std::pair<int, double>> entries;  // off-pivot nonzeros
};

enum class PhaseOutcome { kOptimal, kInfeasible, kUnbounded, kIterationLimit, kGiveUp };

}  // namespace

struct SimplexSolver::Impl {
  using SpMat = Eigen::SparseMatrix<double>;

  SimplexOptions opt;
  int n = 0;
  int m = 0;
  std::vector<LinearRow> rows;
  std::vector<double> cost;
  std::vector<double> lo, hi, x;
  std::vector<VarState> state;
  std::vector<int> head;
  std::vector<int> pos;

  std::vector<int> col_start, col_row;
  std::vector<double> col_val;

  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
  bool factored = false;
  std::vector<Eta> etas;
  bool warm = false;
  bool xb_dirty = true;
  std::int64_t total_iters = 0;

  explicit Impl(SimplexOptions o) : opt(o) {}

  int logical(int r) const { return n + r; }
  bool is_logical(int j) const { return j >= n; }

  void rebuild_columns() {
    col_start.assign(n + 1, 0);
    for (const auto& row : rows)
      for (int idx : row.index) ++col_start[idx + 1];
    for (int j = 0; j < n; ++j) col_start[j + 1] += col_start[j];
    col_row.resize(col_start[n]);
    col_val.resize(col_start[n]);
    std::vector<int> fill(col_start.begin(), col_start.end() - 1);
    for (int r = 0; r < m; ++r) {
      const auto& row = rows[r];
      for (size_t k = 0; k < row.index.size(); ++k) {
        const int p = fill[row.index[k]]++;
        col_row[p] = r;
        col_val[p] = row.coef[k];
      }
    }
  }

  void logical_bounds(const LinearRow& row, double& l, double& u) const {
    switch (row.sense) {
      case RowSense::kLessEqual: l = -kInf; u = row.rhs; break;
      case RowSense::kGreaterEqual: l = row.rhs; u = kInf; break;
      case RowSense::kEqual: l = u = row.rhs; break;
    }
  }

  VarState resting_state(int j) const {
    if (lo[j] > -kInf) return VarState::kLower;
    if (hi[j] < kInf) return VarState::kUpper;
    return VarState::kZero;
  }

  double resting_value(int j) const {
    switch (state[j]) {
      case VarState::kLower: return lo[j];
      case VarState::kUpper: return hi[j];
      case VarState::kZero: return 0.0;
      case VarState::kBasic: return x[j];
    }
    return 0.0;
  }

  void slack_basis() {
    head.resize(m);
    pos.assign(n + m, -1);
    state.resize(n + m);
    x.resize(n + m);
    for (int j = 0; j < n; ++j) {
      state[j] = resting_state(j);
      x[j] = resting_value(j);
    }
    for (int r = 0; r < m; ++r) {
      head[r] = logical(r);
      pos[logical(r)] = r;
      state[logical(r)] = VarState::kBasic;
    }
    factored = false;
    xb_dirty = true;
  }

  // Scatter column j of [A | -I] into v (which must be zero).
  void scatter(int j, Eigen::VectorXd& v) const {
    if (is_logical(j)) {
      v[j - n] = -1.0;
      return;
    }
    for (int p = col_start[j]; p < col_start[j + 1]; ++p) v[col_row[p]] = col_val[p];
  }

  double dot_column(int j, const Eigen::VectorXd& v) const {
    if (is_logical(j)) return -v[j - n];
    double s = 0.0;
    for (int p = col_start[j]; p < col_start[j + 1]; ++p) s += col_val[p] * v[col_row[p]];
    return s;
  }

  bool refactor() {
    etas.clear();
    factored = false;
    if (m == 0) {
      factored = true;
      return true;
    }
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(m) * 2);
    for (int k = 0; k < m; ++k) {
      const int j = head[k];
      if (is_logical(j)) {
        trip.emplace_back(j - n, k, -1.0);
      } else {
        for (int p = col_start[j]; p < col_start[j + 1]; ++p)
          trip.emplace_back(col_row[p], k, col_val[p]);
      }
    }
    SpMat basis(m, m);
    basis.setFromTriplets(trip.begin(), trip.end());
    basis.makeCompressed();
    lu.analyzePattern(basis);
    lu.factorize(basis);
    if (lu.info() != Eigen::Success) return false;
    factored = true;
    xb_dirty = true;
    return true;
  }

  // Refactorize; on a singular basis fall back to the slack basis.
  void ensure_factored() {
    if (factored && static_cast<int>(etas.size()) < opt.refactor_interval) return;
    if (!refactor()) {
      slack_basis();
      refactor();
    }
  }

  void ftran(Eigen::VectorXd& v) const {
    if (m == 0) return;
    v = lu.solve(v).eval();
    for (const auto& eta : etas) {
      const double xp = v[eta.pos] / eta.pivot;
      if (xp != 0.0)
        for (const auto& [i, a] : eta.entries) v[i] -= a * xp;
      v[eta.pos] = xp;
    }
  }

  void btran(Eigen::VectorXd& v) {
    if (m == 0) return;
    for (auto it = etas.rbegin(); it != etas.rend(); ++it) {
      double s = v[it->pos];
      for (const auto& [i, a] : it->entries) s -= a * v[i];
      v[it->pos] = s / it->pivot;
    }
    v = lu.transpose().solve(v).eval();
  }

  void compute_xb() {
    for (int j = 0; j < n + m; ++j)
      if (state[j] != VarState::kBasic) x[j] = resting_value(j);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    for (int j = 0; j < n; ++j) {
      if (state[j] == VarState::kBasic || x[j] == 0.0) continue;
      for (int p = col_start[j]; p < col_start[j + 1]; ++p) rhs[col_row[p]] -= col_val[p] * x[j];
    }
    for (int r = 0; r < m; ++r)
      if (state[logical(r)] != VarState::kBasic) rhs[r] += x[logical(r)];
    ftran(rhs);
    for (int k = 0; k < m; ++k) x[head[k]] = rhs[k];
    xb_dirty = false;
  }

  double infeasibility(int j) const {
    if (x[j] < lo[j]) return lo[j] - x[j];
    if (x[j] > hi[j]) return x[j] - hi[j];
    return 0.0;
  }

  void pivot(int leave_pos, int enter, const Eigen::VectorXd& alpha, double leave_value,
             VarState leave_state) {
    const int leaving = head[leave_pos];
    x[leaving] = leave_value;
    state[leaving] = leave_state;
    pos[leaving] = -1;
    head[leave_pos] = enter;
    pos[enter] = leave_pos;
    state[enter] = VarState::kBasic;
    Eta eta;
    eta.pos = leave_pos;
    eta.pivot = alpha[leave_pos];
    for (int k = 0; k < m; ++k)
      if (k != leave_pos && alpha[k] != 0.0) eta.entries.emplace_back(k, alpha[k]);
    etas.push_back(std::move(eta));
  }

  VarState state_at(int j, double value) const {
    if (lo[j] == hi[j]) return VarState::kLower;
    return value == lo[j] ? VarState::kLower : VarState::kUpper;
  }

  double phase_cost(int j) const { return is_logical(j) ? 0.0 : cost[j]; }

  // Primal simplex from the current basis, phase 1 as needed.
  PhaseOutcome primal(std::int64_t cap, std::int64_t& iters) {
    const double ftol = opt.feasibility_tol;
    const double ptol = opt.pivot_tol;
    const double otol = opt.optimality_tol;
    int degenerate_run = 0;
    bool bland = false;
    int verify_rounds = 0;
    Eigen::VectorXd cb(m), alpha(m);

    for (;;) {
      if (iters >= cap) return PhaseOutcome::kIterationLimit;
      ensure_factored();
      if (xb_dirty) compute_xb();

      bool phase1 = false;
      for (int k = 0; k < m; ++k)
        if (infeasibility(head[k]) > ftol) {
          phase1 = true;
          break;
        }
      for (int k = 0; k < m; ++k) {
        const int j = head[k];
        if (phase1) {
          cb[k] = x[j] < lo[j] - ftol ? -1.0 : (x[j] > hi[j] + ftol ? 1.0 : 0.0);
        } else {
          cb[k] = phase_cost(j);
        }
      }
      btran(cb);

      int enter = -1;
      int dir = 0;
      double best = 0.0;
      for (int j = 0; j < n + m; ++j) {
        if (state[j] == VarState::kBasic || lo[j] == hi[j]) continue;
        const double d = (phase1 ? 0.0 : phase_cost(j)) - dot_column(j, cb);
        int dj = 0;
        if (d < -otol && state[j] != VarState::kUpper) dj = 1;
        else if (d > otol && state[j] != VarState::kLower) dj = -1;
        if (dj == 0) continue;
        if (bland) {
          enter = j;
          dir = dj;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          enter = j;
          dir = dj;
        }
      }

      if (enter < 0) {
        // Confirm on a fresh factorization before declaring a verdict.
        if (!etas.empty() && verify_rounds < 3) {
          ++verify_rounds;
          if (!refactor()) {
            slack_basis();
            refactor();
          }
          compute_xb();
          continue;
        }
        return phase1 ? PhaseOutcome::kInfeasible : PhaseOutcome::kOptimal;
      }

      alpha.setZero();
      scatter(enter, alpha);
      ftran(alpha);

      // Ratio test (Harris two-pass unless Bland is active).
      const double flip = (lo[enter] > -kInf && hi[enter] < kInf) ? hi[enter] - lo[enter] : kInf;
      auto target_of = [&](int k, double rate, double& bound, bool& relax) {
        const int j = head[k];
        relax = true;
        if (phase1 && x[j] < lo[j] - ftol) {
          if (rate <= 0) return false;
          bound = lo[j];
          relax = false;
          return true;
        }
        if (phase1 && x[j] > hi[j] + ftol) {
          if (rate >= 0) return false;
          bound = hi[j];
          relax = false;
          return true;
        }
        bound = rate > 0 ? hi[j] : lo[j];
        return std::isfinite(bound);
      };

      int leave = -1;
      double step = kInf;
      if (!bland) {
        double tmax = kInf;
        for (int k = 0; k < m; ++k) {
          if (std::abs(alpha[k]) <= ptol) continue;
          const double rate = -dir * alpha[k];
          double bound = 0.0;
          bool relax;
          if (!target_of(k, rate, bound, relax)) continue;
          const double slack = relax ? (rate > 0 ? ftol : -ftol) : 0.0;
          tmax = std::min(tmax, (bound + slack - x[head[k]]) / rate);
        }
        double best_abs = 0.0;
        for (int k = 0; k < m; ++k) {
          if (std::abs(alpha[k]) <= ptol) continue;
          const double rate = -dir * alpha[k];
          double bound = 0.0;
          bool relax;
          if (!target_of(k, rate, bound, relax)) continue;
          const double r = std::max(0.0, (bound - x[head[k]]) / rate);
          if (r <= tmax && std::abs(alpha[k]) > best_abs) {
            best_abs = std::abs(alpha[k]);
            leave = k;
            step = r;
          }
        }
      } else {
        for (int k = 0; k < m; ++k) {
          if (std::abs(alpha[k]) <= ptol) continue;
          const double rate = -dir * alpha[k];
          double bound = 0.0;
          bool relax;
          if (!target_of(k, rate, bound, relax)) continue;
          const double r = std::max(0.0, (bound - x[head[k]]) / rate);
          if (leave < 0 || r < step - 1e-12 || (r <= step + 1e-12 && head[k] < head[leave])) {
            leave = k;
            step = r;
          }
        }
      }

      ++iters;
      if (flip < kInf && flip <= step) {
        x[enter] = dir > 0 ? hi[enter] : lo[enter];
        for (int k = 0; k < m; ++k) x[head[k]] -= dir * flip * alpha[k];
        state[enter] = dir > 0 ? VarState::kUpper : VarState::kLower;
        degenerate_run = 0;
        bland = false;
        continue;
      }
      if (leave < 0) {
        if (phase1) return PhaseOutcome::kGiveUp;
        return PhaseOutcome::kUnbounded;
      }

      const int leaving = head[leave];
      const double rate = -dir * alpha[leave];
      double bound = 0.0;
      bool relax;
      target_of(leave, rate, bound, relax);
      x[enter] += dir * step;
      for (int k = 0; k < m; ++k) x[head[k]] -= dir * step * alpha[k];
      pivot(leave, enter, alpha, bound, state_at(leaving, bound));

      if (step <= 1e-12) {
        if (++degenerate_run >= opt.degenerate_trigger) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
    }
  }

  // Makes the current basis dual feasible by flipping boxed nonbasics.
  // Returns false when some unboxed nonbasic has a wrong-signed reduced cost.
  bool make_dual_feasible() {
    Eigen::VectorXd pi(m);
    for (int k = 0; k < m; ++k) pi[k] = phase_cost(head[k]);
    btran(pi);
    const double otol = opt.optimality_tol;
    bool flipped = false;
    for (int j = 0; j < n + m; ++j) {
      if (state[j] == VarState::kBasic || lo[j] == hi[j]) continue;
      const double d = phase_cost(j) - dot_column(j, pi);
      if (d < -otol && state[j] != VarState::kUpper) {
        if (hi[j] == kInf) return false;
        state[j] = VarState::kUpper;
        flipped = true;
      } else if (d > otol && state[j] != VarState::kLower) {
        if (lo[j] == -kInf) return false;
        state[j] = VarState::kLower;
        flipped = true;
      }
    }
    if (flipped) xb_dirty = true;
    return true;
  }

  PhaseOutcome dual(std::int64_t cap, std::int64_t& iters) {
    const double ftol = opt.feasibility_tol;
    const double ptol = opt.pivot_tol;
    const double otol = opt.optimality_tol;
    Eigen::VectorXd pi(m), rho(m), alpha(m);
    std::vector<double> row_alpha(n + m, 0.0);

    for (;;) {
      if (iters >= cap) return PhaseOutcome::kIterationLimit;
      ensure_factored();
      if (xb_dirty) compute_xb();

      int p = -1;
      double worst = ftol;
      for (int k = 0; k < m; ++k) {
        const double inf = infeasibility(head[k]);
        if (inf > worst) {
          worst = inf;
          p = k;
        }
      }
      if (p < 0) return PhaseOutcome::kOptimal;
      const int leaving = head[p];
      const bool going_up = x[leaving] < lo[leaving];

      for (int k = 0; k < m; ++k) pi[k] = phase_cost(head[k]);
      btran(pi);
      rho.setZero();
      rho[p] = 1.0;
      btran(rho);

      // Harris pass 1: largest dual step keeping reduced costs within tolerance.
      double tmax = kInf;
      for (int j = 0; j < n + m; ++j) {
        row_alpha[j] = 0.0;
        if (state[j] == VarState::kBasic || lo[j] == hi[j]) continue;
        const double a = dot_column(j, rho);
        if (std::abs(a) <= ptol) continue;
        // x_leaving moves by -a per unit increase of x_j.
        const bool helps_up = state[j] == VarState::kLower ? a < 0 : a > 0;
        const bool ok = state[j] == VarState::kZero || (going_up ? helps_up : !helps_up);
        if (!ok) continue;
        row_alpha[j] = a;
        const double d = std::abs(phase_cost(j) - dot_column(j, pi));
        tmax = std::min(tmax, (d + otol) / std::abs(a));
      }
      int enter = -1;
      double best_abs = 0.0;
      for (int j = 0; j < n + m; ++j) {
        const double a = row_alpha[j];
        if (a == 0.0) continue;
        const double d = std::abs(phase_cost(j) - dot_column(j, pi));
        if (d / std::abs(a) <= tmax && std::abs(a) > best_abs) {
          best_abs = std::abs(a);
          enter = j;
        }
      }
      if (enter < 0) return PhaseOutcome::kInfeasible;

      alpha.setZero();
      scatter(enter, alpha);
      ftran(alpha);
      if (std::abs(alpha[p]) <= ptol) return PhaseOutcome::kGiveUp;

      ++iters;
      const double target = going_up ? lo[leaving] : hi[leaving];
      const double delta = (x[leaving] - target) / alpha[p];
      x[enter] += delta;
      for (int k = 0; k < m; ++k) x[head[k]] -= delta * alpha[k];
      pivot(p, enter, alpha, target, state_at(leaving, target));
    }
  }

  LpResult run() {
    LpResult res;
    const std::int64_t cap =
        opt.iteration_cap > 0 ? opt.iteration_cap : 100LL * static_cast<std::int64_t>(n + m);
    std::int64_t iters = 0;
    if (!warm) slack_basis();
    ensure_factored();
    if (xb_dirty) compute_xb();

    PhaseOutcome out = PhaseOutcome::kGiveUp;
    if (warm && make_dual_feasible()) {
      const std::int64_t dual_cap = std::min<std::int64_t>(cap, iters + std::max<std::int64_t>(200, 2LL * (n + m)));
      out = dual(dual_cap, iters);
    }
    // The primal pass certifies whatever the dual pass produced (normally in
    // zero iterations) and takes over when it stalled.
    out = primal(cap, iters);
    if (out == PhaseOutcome::kGiveUp) {
      slack_basis();
      ensure_factored();
      out = primal(cap, iters);
    }
    warm = true;
    total_iters += iters;
    res.iterations = iters;

    switch (out) {
      case PhaseOutcome::kOptimal: res.status = LpStatus::kOptimal; break;
      case PhaseOutcome::kInfeasible: res.status = LpStatus::kInfeasible; break;
      case PhaseOutcome::kUnbounded: res.status = LpStatus::kUnbounded; break;
      default: res.status = LpStatus::kIterationLimit; break;
    }
    res.x.assign(x.begin(), x.begin() + n);
    if (res.status == LpStatus::kOptimal) {
      // Snap tiny bound overshoots left by the Harris tolerance.
      for (int j = 0; j < n; ++j) res.x[j] = std::clamp(res.x[j], lo[j], hi[j]);
      Eigen::VectorXd pi(m);
      for (int k = 0; k < m; ++k) pi[k] = phase_cost(head[k]);
      btran(pi);
      res.duals.assign(pi.data(), pi.data() + m);
    }
    double obj = 0.0;
    for (int j = 0; j < n; ++j) obj += cost[j] * res.x[j];
    res.objective = obj;
    return res;
  }
};

SimplexSolver::SimplexSolver(SimplexOptions options) : impl_(std::make_unique<Impl>(options)) {}
SimplexSolver::~SimplexSolver() = default;
SimplexSolver::SimplexSolver(SimplexSolver&&) noexcept = default;
SimplexSolver& SimplexSolver::operator=(SimplexSolver&&) noexcept = default;

void SimplexSolver::load(const LpProblem& problem) {
  problem.check();
  auto& s = *impl_;
  s.n = problem.num_vars;
  s.m = static_cast<int>(problem.rows.size());
  s.rows = problem.rows;
  s.cost = problem.objective;
  s.lo.assign(problem.lower.begin(), problem.lower.end());
  s.hi.assign(problem.upper.begin(), problem.upper.end());
  s.lo.resize(s.n + s.m);
  s.hi.resize(s.n + s.m);
  for (int r = 0; r < s.m; ++r) s.logical_bounds(s.rows[r], s.lo[s.n + r], s.hi[s.n + r]);
  s.rebuild_columns();
  s.warm = false;
  s.slack_basis();
}

int SimplexSolver::num_rows() const { return impl_->m; }
int SimplexSolver::num_vars() const { return impl_->n; }

void SimplexSolver::add_rows(std::span<const LinearRow> rows) {
  auto& s = *impl_;
  for (const auto& row : rows) {
    if (!row.well_formed() ||
        (!row.index.empty() && (row.index.front() < 0 || row.index.back() >= s.n)))
      throw std::invalid_argument("SimplexSolver::add_rows: malformed row");
  }
  const int old_m = s.m;
  for (const auto& row : rows) {
    s.rows.push_back(row);
    double l, u;
    s.logical_bounds(row, l, u);
    s.lo.push_back(l);
    s.hi.push_back(u);
    s.x.push_back(row.activity(std::span<const double>(s.x.data(), s.n)));
    s.state.push_back(VarState::kBasic);
    s.pos.push_back(-1);
  }
  s.m = static_cast<int>(s.rows.size());
  s.rebuild_columns();
  // New logicals enter the basis; the factorization is rebuilt lazily.
  for (int r = old_m; r < s.m; ++r) {
    s.head.push_back(s.n + r);
    s.pos[s.n + r] = r;
  }
  s.factored = false;
  s.xb_dirty = true;
}

void SimplexSolver::remove_rows(std::span<const int> rows) {
  auto& s = *impl_;
  if (rows.empty()) return;
  std::vector<char> drop(s.m, 0);
  bool all_basic = true;
  for (int r : rows) {
    if (r < 0 || r >= s.m) throw std::out_of_range("SimplexSolver::remove_rows");
    drop[r] = 1;
    if (s.state[s.n + r] != VarState::kBasic) all_basic = false;
  }
  // Old index -> new index for the logicals.
  std::vector<int> remap(s.m, -1);
  int next = 0;
  for (int r = 0; r < s.m; ++r)
    if (!drop[r]) remap[r] = next++;

  std::vector<LinearRow> kept;
  kept.reserve(next);
  std::vector<double> lo(s.lo.begin(), s.lo.begin() + s.n), hi(s.hi.begin(), s.hi.begin() + s.n),
      x(s.x.begin(), s.x.begin() + s.n);
  std::vector<VarState> st(s.state.begin(), s.state.begin() + s.n);
  for (int r = 0; r < s.m; ++r) {
    if (drop[r]) continue;
    kept.push_back(std::move(s.rows[r]));
    lo.push_back(s.lo[s.n + r]);
    hi.push_back(s.hi[s.n + r]);
    x.push_back(s.x[s.n + r]);
    st.push_back(s.state[s.n + r]);
  }
  std::vector<int> head;
  for (int k = 0; k < s.m; ++k) {
    const int j = s.head[k];
    if (j < s.n) head.push_back(j);
    else if (!drop[j - s.n]) head.push_back(s.n + remap[j - s.n]);
  }
  s.rows = std::move(kept);
  s.m = next;
  s.lo = std::move(lo);
  s.hi = std::move(hi);
  s.x = std::move(x);
  s.state = std::move(st);
  s.rebuild_columns();
  if (all_basic && static_cast<int>(head.size()) == s.m) {
    s.head = std::move(head);
    s.pos.assign(s.n + s.m, -1);
    for (int k = 0; k < s.m; ++k) s.pos[s.head[k]] = k;
    s.factored = false;
    s.xb_dirty = true;
  } else {
    s.slack_basis();
  }
}

void SimplexSolver::set_bounds(int var, double lower, double upper) {
  auto& s = *impl_;
  if (var < 0 || var >= s.n || !(lower <= upper))
    throw std::invalid_argument("SimplexSolver::set_bounds: bad variable or bounds");
  s.lo[var] = lower;
  s.hi[var] = upper;
  if (s.state.empty() || s.state[var] == VarState::kBasic) return;
  if (s.state[var] == VarState::kLower && lower == -kInf) s.state[var] = s.resting_state(var);
  if (s.state[var] == VarState::kUpper && upper == kInf) s.state[var] = s.resting_state(var);
  s.xb_dirty = true;
}

LpResult SimplexSolver::solve() { return impl_->run(); }

void SimplexSolver::reset_basis() {
  impl_->warm = false;
  impl_->slack_basis();
}

bool SimplexSolver::row_is_basic(int row) const {
  return impl_->state[impl_->n + row] == VarState::kBasic;
}

std::int64_t SimplexSolver::total_iterations() const { return impl_->total_iters; }

LpResult solve(const LpProblem& problem, const SimplexOptions& options) {
  SimplexSolver solver(options);
  solver.load(problem);
  return solver.solve();
}

LpResult resolve_with(const LpProblem& base, std::span<const LinearRow> added_rows,
                      std::span<const BoundChange> changed_bounds, const SimplexOptions& options) {
  SimplexSolver solver(options);
  solver.load(base);
  solver.solve();
  solver.add_rows(added_rows);
  for (const auto& b : changed_bounds) solver.set_bounds(b.var, b.lower, b.upper);
  return solver.solve();
}

std::string to_lp_format(const LpProblem& problem) {
  std::ostringstream out;
  out << std::setprecision(17);
  auto term = [&](double c, int j, bool first) {
    if (c < 0) out << " - " << -c;
    else out << (first ? " " : " + ") << c;
    out << " x" << j;
  };
  out << "Minimize\n obj:";
  bool first = true;
  for (int j = 0; j < problem.num_vars; ++j) {
    if (problem.objective[j] == 0.0) continue;
    term(problem.objective[j], j, first);
    first = false;
  }
  if (first) out << " 0 x0";
  out << "\nSubject To\n";
  for (size_t r = 0; r < problem.rows.size(); ++r) {
    const auto& row = problem.rows[r];
    out << " r" << r << "_" << to_string(row.tag) << ":";
    for (size_t k = 0; k < row.index.size(); ++k) term(row.coef[k], row.index[k], k == 0);
    if (row.index.empty()) out << " 0 x0";
    out << ' ' << to_string(row.sense) << ' ' << row.rhs << '\n';
  }
  out << "Bounds\n";
  for (int j = 0; j < problem.num_vars; ++j) {
    const double l = problem.lower[j], u = problem.upper[j];
    if (l == u) out << " x" << j << " = " << l << '\n';
    else {
      out << ' ';
      if (l == -kInf) out << "-inf";
      else out << l;
      out << " <= x" << j << " <= ";
      if (u == kInf) out << "+inf";
      else out << u;
      out << '\n';
    }
  }
  out << "End\n";
  return out.str();
}

}  // namespace cagvrp

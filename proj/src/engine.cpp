#include "cagvrp/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "cagvrp/errors.hpp"

namespace cagvrp {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kTimeLimit: return "time-limit";
    case SolveStatus::kNodeLimit: return "node-limit";
    case SolveStatus::kNodeFailure: return "node-failure";
  }
  return "?";
}

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

// Prune when the bound cannot beat the incumbent by more than round-off.
double cutoff_of(double incumbent) {
  if (!std::isfinite(incumbent)) return incumbent;
  return incumbent - 1e-9 * std::max(1.0, std::abs(incumbent));
}

}  // namespace

// --- open list ----------------------------------------------------------------

bool NodeQueue::Later::operator()(const Node& a, const Node& b) const {
  if (a.key != b.key) return a.key > b.key;
  if (a.depth != b.depth) return a.depth > b.depth;
  return a.seq > b.seq;
}

void NodeQueue::push(Node node) {
  node.seq = next_seq_++;
  heap_.push(std::move(node));
}

Node NodeQueue::pop() {
  if (heap_.empty()) throw std::out_of_range("NodeQueue::pop on an empty list");
  Node top = heap_.top();
  heap_.pop();
  return top;
}

double NodeQueue::min_key() const {
  return heap_.empty() ? std::numeric_limits<double>::infinity() : heap_.top().key;
}

// --- branching ----------------------------------------------------------------

int choose_branching_variable(const VariableSpace& vs, std::span<const double> point, double tol) {
  const std::pair<int, int> blocks[] = {
      {vs.y_begin(), vs.z_begin()},
      {0, vs.w_begin()},
      {vs.w_begin(), vs.y_begin()},
      {vs.z_begin(), vs.size()},
  };
  for (const auto& [begin, end] : blocks) {
    int best = -1;
    double best_dist = 1.0;
    for (int v = begin; v < end; ++v) {
      const double frac = point[v] - std::floor(point[v]);
      if (frac <= tol || frac >= 1.0 - tol) continue;
      const double dist = std::abs(frac - 0.5);
      if (dist < best_dist) {
        best_dist = dist;
        best = v;
      }
    }
    if (best >= 0) return best;
  }
  return -1;
}

std::pair<Node, Node> branch(const Node& parent, const VariableSpace& vs,
                             std::span<const double> point, double parent_objective, double tol) {
  const int var = choose_branching_variable(vs, point, tol);
  if (var < 0) throw ContractViolation("branch: point has no fractional variable");
  Node down, up;
  down.overrides = parent.overrides;
  up.overrides = parent.overrides;
  down.overrides.push_back({var, 0.0, 0.0});
  up.overrides.push_back({var, 1.0, 1.0});
  down.key = up.key = parent_objective;
  down.depth = up.depth = parent.depth + 1;
  return {std::move(down), std::move(up)};
}

// --- branch and cut -----------------------------------------------------------

struct BranchAndCut::PoolEntry {
  bool active = true;
  int idle = 0;
};

BranchAndCut::BranchAndCut(const Instance& inst, SolveParams params)
    : inst_(inst),
      params_(std::move(params)),
      incumbent_value_(std::numeric_limits<double>::infinity()) {
  sep_.violation_tol = params_.separation_tol;
  model_ = build_model(inst_, ModelOptions{params_.penalty_mode});
  lp_ = std::make_unique<SimplexSolver>(params_.lp);
  lp_->load(model_.relaxation());
  static_rows_ = lp_->num_rows();
  start_time_ = now_seconds();
}

BranchAndCut::~BranchAndCut() = default;

bool BranchAndCut::out_of_time() const {
  return now_seconds() - start_time_ > params_.time_limit;
}

void BranchAndCut::log_line(const std::string& line) {
  if (params_.cut_log) *params_.cut_log << line << '\n';
}

void BranchAndCut::apply_node_bounds(const Node& node) {
  for (const auto& b : applied_)
    lp_->set_bounds(b.var, model_.lower[b.var], model_.upper[b.var]);
  applied_.clear();
  for (const auto& b : node.overrides) {
    const double lo = std::max(model_.lower[b.var], b.lower);
    const double hi = std::min(model_.upper[b.var], b.upper);
    if (hi < lo) throw ContractViolation("branching override outside the variable box");
    lp_->set_bounds(b.var, lo, hi);
    applied_.push_back(b);
  }
}

bool BranchAndCut::add_cuts(std::vector<Cut> cuts) {
  std::vector<LinearRow> rows;
  for (auto& c : cuts) {
    const auto h = canonical_hash(c.row);
    if (std::find(hashes_.begin(), hashes_.end(), h) != hashes_.end()) continue;
    hashes_.push_back(h);
    log_line(describe(c));
    switch (c.kind) {
      case CutKind::kSecX: ++stats_.sec_x_cuts; break;
      case CutKind::kSecWOut:
      case CutKind::kSecWIn: ++stats_.sec_w_cuts; break;
      case CutKind::kTwoMatching: ++stats_.two_matching_cuts; break;
    }
    rows.push_back(c.row);
    active_.push_back(static_cast<int>(pool_.size()));
    pool_.push_back(std::move(c));
    entries_.push_back({});
  }
  if (rows.empty()) return false;
  lp_->add_rows(rows);
  return true;
}

void BranchAndCut::update_activity(const LpResult& res) {
  std::vector<int> drop_rows;
  std::vector<int> keep;
  for (size_t k = 0; k < active_.size(); ++k) {
    const int idx = active_[k];
    auto& e = entries_[idx];
    const double slack = -pool_[idx].row.violation(res.x);
    e.idle = slack > params_.shelve_slack ? e.idle + 1 : 0;
    const int lp_row = static_rows_ + static_cast<int>(k);
    if (e.idle >= params_.shelve_after && lp_->row_is_basic(lp_row)) {
      drop_rows.push_back(lp_row);
      e.active = false;
      e.idle = 0;
      ++stats_.cuts_shelved;
    } else {
      keep.push_back(idx);
    }
  }
  if (drop_rows.empty()) return;
  lp_->remove_rows(drop_rows);
  active_ = std::move(keep);
}

bool BranchAndCut::reactivate(std::span<const double> point) {
  std::vector<LinearRow> rows;
  for (size_t idx = 0; idx < pool_.size(); ++idx) {
    auto& e = entries_[idx];
    if (e.active || pool_[idx].row.violation(point) <= params_.lp.feasibility_tol * 10) continue;
    e.active = true;
    e.idle = 0;
    rows.push_back(pool_[idx].row);
    active_.push_back(static_cast<int>(idx));
    ++stats_.cuts_reactivated;
  }
  if (rows.empty()) return false;
  lp_->add_rows(rows);
  return true;
}

LpResult BranchAndCut::solve_lp() {
  for (;;) {
    LpResult res = lp_->solve();
    ++stats_.lp_solves;
    stats_.simplex_iterations += res.iterations;
    if (res.status == LpStatus::kOptimal && reactivate(res.x)) continue;
    return res;
  }
}

NodeOutcome BranchAndCut::process_node(const Node& node) {
  ++stats_.nodes_explored;
  stats_.max_depth = std::max<long long>(stats_.max_depth, node.depth);
  {
    std::ostringstream line;
    line << "node " << stats_.nodes_explored << " depth=" << node.depth;
    log_line(line.str());
  }
  apply_node_bounds(node);
  const auto& vs = model_.space;
  int rounds = 0;
  bool retried = false;
  for (;;) {
    const LpResult res = solve_lp();
    if (res.status == LpStatus::kIterationLimit || res.status == LpStatus::kUnbounded) {
      if (!retried) {
        retried = true;
        lp_->reset_basis();
        continue;
      }
      log_line(std::string("node-failure lp status=") + to_string(res.status));
      node_failed_ = true;
      return NodeOutcome::kFailed;
    }
    if (res.status == LpStatus::kInfeasible) return NodeOutcome::kPrunedInfeasible;
    last_objective_ = res.objective;
    if (res.objective >= cutoff_of(incumbent_value_)) return NodeOutcome::kPrunedBound;
    update_activity(res);

    const bool integral = choose_branching_variable(vs, res.x, params_.integrality_tol) < 0;
    if (integral) {
      auto lazy = check_integral(vs, inst_.depot, res.x, sep_);
      if (lazy.empty()) {
        Solution sol;
        try {
          sol = decode(inst_, res.x, res.objective, params_.penalty_mode);
        } catch (const std::exception& e) {
          log_line(std::string("node-failure decode: ") + e.what());
          node_failed_ = true;
          return NodeOutcome::kFailed;
        }
        if (!validate(inst_, sol).empty() && !params_.penalty_mode) {
          log_line("node-failure incumbent rejected by validator");
          node_failed_ = true;
          return NodeOutcome::kFailed;
        }
        if (sol.objective < incumbent_value_) {
          incumbent_value_ = sol.objective;
          incumbent_ = std::move(sol);
          std::ostringstream line;
          line << std::setprecision(12) << "incumbent " << incumbent_value_;
          log_line(line.str());
        }
        return NodeOutcome::kIntegral;
      }
      if (!add_cuts(std::move(lazy))) {
        log_line("node-failure integral point violates only known cuts");
        node_failed_ = true;
        return NodeOutcome::kFailed;
      }
      continue;
    }

    if (rounds < params_.max_cut_rounds) {
      auto cuts = separate_sec_x(vs, inst_.depot, res.x, sep_);
      auto w = separate_sec_w(vs, res.x, sep_);
      auto m = separate_two_matching(vs, res.x, sep_);
      for (auto* more : {&w, &m})
        cuts.insert(cuts.end(), std::make_move_iterator(more->begin()),
                    std::make_move_iterator(more->end()));
      if (add_cuts(std::move(cuts))) {
        ++rounds;
        continue;
      }
    }
    auto [down, up] = branch(node, vs, res.x, res.objective, params_.integrality_tol);
    open_.push(std::move(down));
    open_.push(std::move(up));
    return NodeOutcome::kBranched;
  }
}

SolveResult BranchAndCut::run() {
  start_time_ = now_seconds();
  SolveResult result;
  if (params_.warm_start) {
    Solution ws = *params_.warm_start;
    recompute_costs(inst_, ws, params_.penalty_mode);
    if (!validate(inst_, ws).empty())
      throw std::invalid_argument("warm start solution is not feasible for this instance");
    incumbent_value_ = ws.objective;
    incumbent_ = std::move(ws);
  }
  Node root;
  root.key = -std::numeric_limits<double>::infinity();
  open_.push(std::move(root));

  SolveStatus status = SolveStatus::kOptimal;
  double failed_bound = std::numeric_limits<double>::infinity();
  while (!open_.empty()) {
    if (out_of_time()) {
      status = SolveStatus::kTimeLimit;
      break;
    }
    if (params_.node_limit && stats_.nodes_explored >= *params_.node_limit) {
      status = SolveStatus::kNodeLimit;
      break;
    }
    Node node = open_.pop();
    if (node.key >= cutoff_of(incumbent_value_)) continue;
    const NodeOutcome out = process_node(node);
    if (out == NodeOutcome::kFailed) failed_bound = std::min(failed_bound, node.key);
  }

  const bool have = incumbent_.has_value();
  double lb = std::min(open_.min_key(), failed_bound);
  if (status == SolveStatus::kOptimal && node_failed_) status = SolveStatus::kNodeFailure;
  if (status == SolveStatus::kOptimal) {
    if (!have) status = SolveStatus::kInfeasible;
    lb = have ? incumbent_value_ : std::numeric_limits<double>::infinity();
  }
  if (have) lb = std::min(lb, incumbent_value_);

  stats_.lower_bound = lb;
  stats_.gap = have ? (incumbent_value_ - lb) / std::max(std::abs(incumbent_value_), 1e-9)
                    : std::numeric_limits<double>::infinity();
  stats_.status = to_string(status);
  stats_.wall_seconds = now_seconds() - start_time_;

  result.status = status;
  result.lower_bound = lb;
  result.gap = stats_.gap;
  result.stats = stats_;
  result.cuts = pool_;
  if (have) {
    result.solution = *incumbent_;
    result.solution->stats = stats_;
  }
  if (status == SolveStatus::kInfeasible) {
    for (int i = 0; i < inst_.size() && !result.witness; ++i) {
      bool any = false;
      for (int j = 0; j < inst_.size(); ++j) any = any || inst_.comm_ok(i, j);
      if (!any) result.witness = i;
    }
    result.message = "no feasible tour exists";
  }
  return result;
}

SolveResult solve(const Instance& inst, const SolveParams& params) {
  BranchAndCut bc(inst, params);
  return bc.run();
}

std::string statistics_block(const SolveStatistics& s, bool include_time) {
  std::ostringstream out;
  out << "status: " << s.status << '\n'
      << "sec_cuts: " << s.sec_cuts() << '\n'
      << "sec_x_cuts: " << s.sec_x_cuts << '\n'
      << "sec_w_cuts: " << s.sec_w_cuts << '\n'
      << "two_matching_cuts: " << s.two_matching_cuts << '\n'
      << "nodes: " << s.nodes_explored << '\n'
      << "lp_solves: " << s.lp_solves << '\n'
      << "simplex_iterations: " << s.simplex_iterations << '\n'
      << "max_depth: " << s.max_depth << '\n'
      << "cuts_shelved: " << s.cuts_shelved << '\n'
      << "cuts_reactivated: " << s.cuts_reactivated << '\n'
      << std::setprecision(12) << "lower_bound: " << s.lower_bound << '\n'
      << "gap: " << s.gap << '\n';
  if (include_time) out << std::setprecision(6) << "wall_seconds: " << s.wall_seconds << '\n';
  return out.str();
}

}  // namespace cagvrp

#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cagvrp/instance.hpp"
#include "cagvrp/lp.hpp"
#include "cagvrp/model.hpp"
#include "cagvrp/separation.hpp"

namespace cagvrp {

struct SolveParams {
  double time_limit = 9000.0;  // seconds
  std::optional<long long> node_limit;
  double integrality_tol = 1e-6;
  double separation_tol = 1e-4;
  int max_cut_rounds = 50;  // per node, fractional points only
  // The search is sequential; kept so a future parallel mode has to opt out
  // explicitly.
  bool deterministic = true;
  bool penalty_mode = false;
  // A validator-feasible solution used as the initial incumbent.
  std::optional<Solution> warm_start;
  // One line per node and per cut when set.
  std::ostream* cut_log = nullptr;
  // Pool cuts with slack above shelve_slack for shelve_after consecutive LP
  // solves leave the LP (they stay in the pool and come back when violated).
  int shelve_after = 20;
  double shelve_slack = 0.5;
  SimplexOptions lp;
};

enum class SolveStatus { kOptimal, kInfeasible, kTimeLimit, kNodeLimit, kNodeFailure };
const char* to_string(SolveStatus status);

// An open subproblem: bound overrides relative to the root plus the LP bound
// of its parent, which orders the open list.
struct Node {
  std::vector<BoundChange> overrides;
  double key = 0.0;
  int depth = 0;
  long long seq = 0;  // insertion order, assigned by NodeQueue
};

// Best-first open list: smallest key, then smallest depth, then insertion
// order.
class NodeQueue {
 public:
  void push(Node node);
  // Throws std::out_of_range when empty; callers check empty() first since an
  // empty list is the termination signal.
  Node pop();
  bool empty() const { return heap_.empty(); }
  size_t size() const { return heap_.size(); }
  double min_key() const;

 private:
  struct Later {
    bool operator()(const Node& a, const Node& b) const;
  };
  std::priority_queue<Node, std::vector<Node>, Later> heap_;
  long long next_seq_ = 0;
};

// Branching variable: first the y block, then x, w, z; inside a block the one
// closest to 1/2, ties to the lowest index. -1 when the point is integral.
int choose_branching_variable(const VariableSpace& vs, std::span<const double> point,
                              double tol = 1e-6);

// Children with the chosen variable fixed to 0 and to 1, both keyed by the
// parent LP objective. Throws ContractViolation on an integral point.
std::pair<Node, Node> branch(const Node& parent, const VariableSpace& vs,
                             std::span<const double> point, double parent_objective,
                             double tol = 1e-6);

struct SolveResult {
  SolveStatus status = SolveStatus::kNodeFailure;
  std::optional<Solution> solution;
  double lower_bound = 0.0;
  double gap = 0.0;
  SolveStatistics stats;
  // Every cut that entered the pool, in order.
  std::vector<Cut> cuts;
  // Set on an infeasible verdict when a specific target is to blame.
  std::optional<int> witness;
  std::string message;
};

enum class NodeOutcome { kPrunedInfeasible, kPrunedBound, kIntegral, kBranched, kFailed };

class BranchAndCut {
 public:
  BranchAndCut(const Instance& inst, SolveParams params);
  ~BranchAndCut();

  SolveResult run();

  // One pass of the cut loop on `node`; children go to the open list.
  NodeOutcome process_node(const Node& node);

  void set_incumbent_value(double value) { incumbent_value_ = value; }
  double incumbent_value() const { return incumbent_value_; }
  const NodeQueue& open() const { return open_; }
  NodeQueue& open() { return open_; }
  const SolveStatistics& stats() const { return stats_; }
  const std::vector<Cut>& pool() const { return pool_; }
  const MilpModel& model() const { return model_; }
  // Objective of the last node LP solved by process_node().
  double last_lp_objective() const { return last_objective_; }

 private:
  struct PoolEntry;
  LpResult solve_lp();
  bool add_cuts(std::vector<Cut> cuts);
  void apply_node_bounds(const Node& node);
  void update_activity(const LpResult& res);
  bool reactivate(std::span<const double> point);
  bool out_of_time() const;
  void log_line(const std::string& line);

  const Instance& inst_;
  SolveParams params_;
  SeparationParams sep_;
  MilpModel model_;
  std::unique_ptr<SimplexSolver> lp_;
  int static_rows_ = 0;
  NodeQueue open_;
  std::vector<Cut> pool_;
  std::vector<PoolEntry> entries_;
  std::vector<int> active_;  // pool index per LP row past the static block
  std::vector<std::uint64_t> hashes_;
  std::vector<BoundChange> applied_;
  double incumbent_value_;
  std::optional<Solution> incumbent_;
  double last_objective_ = 0.0;
  SolveStatistics stats_;
  double start_time_ = 0.0;
  bool node_failed_ = false;
};

SolveResult solve(const Instance& inst, const SolveParams& params = {});

// The deterministic part of the statistics (everything but wall time) as a
// text block: "sec_cuts: 12\nnodes: 3\n...".
std::string statistics_block(const SolveStatistics& stats, bool include_time);

}  // namespace cagvrp

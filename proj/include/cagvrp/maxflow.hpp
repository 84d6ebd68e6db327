#pragma once

#include <vector>

namespace cagvrp {

// Breadth-first augmenting-path max flow (Edmonds-Karp) on a dense capacity
// matrix. Support graphs here have at most a few dozen vertices.
class MaxFlow {
 public:
  explicit MaxFlow(int nodes);

  int size() const { return n_; }
  void add_arc(int from, int to, double capacity);
  void add_edge(int u, int v, double capacity);  // both directions

  // Max flow value from s to t. Capacities are kept; flows are recomputed on
  // every call.
  double solve(int s, int t);

  // After solve(): vertices reachable from s in the residual graph, i.e. the
  // source side of a minimum cut.
  const std::vector<char>& source_side() const { return reach_; }

 private:
  int n_;
  std::vector<double> cap_;
  std::vector<double> flow_;
  std::vector<char> reach_;
};

// Gusfield's variant of the Gomory-Hu construction: n-1 max-flow calls that
// together realize a minimum cut for every vertex pair. Each entry is the
// source side of the cut separating vertex s from its tree parent.
struct CutTreeEdge {
  int vertex = 0;
  int parent = 0;
  double value = 0.0;
  std::vector<char> side;  // side[v] = 1 if v is with `vertex`
};

std::vector<CutTreeEdge> gomory_hu_cuts(const std::vector<std::vector<double>>& capacity);

}  // namespace cagvrp

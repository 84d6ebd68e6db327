#include "cagvrp/maxflow.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

namespace cagvrp {

namespace {
constexpr double kResidualEps = 1e-12;
}

MaxFlow::MaxFlow(int nodes)
    : n_(nodes),
      cap_(static_cast<size_t>(nodes) * nodes, 0.0),
      flow_(static_cast<size_t>(nodes) * nodes, 0.0),
      reach_(nodes, 0) {}

void MaxFlow::add_arc(int from, int to, double capacity) {
  if (from < 0 || to < 0 || from >= n_ || to >= n_) throw std::out_of_range("MaxFlow::add_arc");
  if (from == to || capacity <= 0.0) return;
  cap_[static_cast<size_t>(from) * n_ + to] += capacity;
}

void MaxFlow::add_edge(int u, int v, double capacity) {
  add_arc(u, v, capacity);
  add_arc(v, u, capacity);
}

double MaxFlow::solve(int s, int t) {
  std::fill(flow_.begin(), flow_.end(), 0.0);
  auto residual = [&](int u, int v) {
    const size_t uv = static_cast<size_t>(u) * n_ + v;
    const size_t vu = static_cast<size_t>(v) * n_ + u;
    return cap_[uv] - flow_[uv] + flow_[vu];
  };
  double total = 0.0;
  std::vector<int> parent(n_);
  for (;;) {
    std::fill(parent.begin(), parent.end(), -1);
    parent[s] = s;
    std::queue<int> q;
    q.push(s);
    while (!q.empty() && parent[t] < 0) {
      const int u = q.front();
      q.pop();
      for (int v = 0; v < n_; ++v) {
        if (parent[v] >= 0 || residual(u, v) <= kResidualEps) continue;
        parent[v] = u;
        q.push(v);
      }
    }
    if (parent[t] < 0) break;
    double push = std::numeric_limits<double>::infinity();
    for (int v = t; v != s; v = parent[v]) push = std::min(push, residual(parent[v], v));
    for (int v = t; v != s; v = parent[v]) {
      const int u = parent[v];
      // Cancel reverse flow first.
      double& back = flow_[static_cast<size_t>(v) * n_ + u];
      const double cancel = std::min(back, push);
      back -= cancel;
      flow_[static_cast<size_t>(u) * n_ + v] += push - cancel;
    }
    total += push;
  }
  std::fill(reach_.begin(), reach_.end(), 0);
  std::queue<int> q;
  q.push(s);
  reach_[s] = 1;
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int v = 0; v < n_; ++v) {
      if (reach_[v] || residual(u, v) <= kResidualEps) continue;
      reach_[v] = 1;
      q.push(v);
    }
  }
  return total;
}

std::vector<CutTreeEdge> gomory_hu_cuts(const std::vector<std::vector<double>>& capacity) {
  const int n = static_cast<int>(capacity.size());
  MaxFlow mf(n);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (u != v) mf.add_arc(u, v, capacity[u][v]);
  std::vector<int> parent(n, 0);
  std::vector<CutTreeEdge> out;
  for (int s = 1; s < n; ++s) {
    CutTreeEdge e;
    e.vertex = s;
    e.parent = parent[s];
    e.value = mf.solve(s, parent[s]);
    e.side = mf.source_side();
    for (int t = s + 1; t < n; ++t)
      if (e.side[t] && parent[t] == parent[s]) parent[t] = s;
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace cagvrp

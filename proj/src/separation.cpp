#include "cagvrp/separation.hpp"

#include <algorithm>
#include <cstring>
#include <numeric>
#include <set>
#include <sstream>

#include "cagvrp/maxflow.hpp"

namespace cagvrp {

const char* to_string(CutKind kind) {
  switch (kind) {
    case CutKind::kSecX: return "sec-x";
    case CutKind::kSecWOut: return "sec-w-out";
    case CutKind::kSecWIn: return "sec-w-in";
    case CutKind::kTwoMatching: return "two-matching";
  }
  return "?";
}

namespace {

// Values below this are treated as absent when building flow networks.
constexpr double kTiny = 1e-12;

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int v) {
    while (parent_[v] != v) v = parent_[v] = parent_[parent_[v]];
    return v;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<int> parent_;
};

std::vector<char> mask_of(int n, std::span<const int> set) {
  std::vector<char> in(n, 0);
  for (int v : set) in[v] = 1;
  return in;
}

// Groups `vertices` into connected components of `edges`; components are
// returned sorted, in order of their smallest vertex.
std::vector<std::vector<int>> components(int n, const std::vector<int>& vertices,
                                         const std::vector<SupportGraph::Edge>& edges) {
  UnionFind uf(n);
  for (const auto& e : edges) uf.unite(e.u, e.v);
  std::vector<std::vector<int>> by_root(n);
  for (int v : vertices) by_root[uf.find(v)].push_back(v);
  std::vector<std::vector<int>> out;
  for (auto& c : by_root)
    if (!c.empty()) out.push_back(std::move(c));
  std::sort(out.begin(), out.end());
  return out;
}

Cut make_cut(CutKind kind, std::vector<int> set, int target, LinearRow row,
             std::span<const double> point) {
  Cut c;
  c.kind = kind;
  c.set = std::move(set);
  c.target = target;
  c.row = std::move(row);
  c.violation = c.row.violation(point);
  return c;
}

double sum_y_in(const VariableSpace& vs, std::span<const double> p, int i,
                std::span<const int> set) {
  double s = 0.0;
  for (int j : set) s += p[vs.y(i, j)];
  return s;
}

double cut_x(const VariableSpace& vs, std::span<const double> p, const std::vector<char>& in) {
  const int n = vs.n();
  double s = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (in[a] != in[b]) s += p[vs.x(a, b)];
  return s;
}

double arcs_out(const VariableSpace& vs, std::span<const double> p, const std::vector<char>& in,
                bool outgoing) {
  const int n = vs.n();
  double s = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b && in[a] != in[b] && (in[a] != 0) == outgoing) s += p[vs.w(a, b)];
  return s;
}

// Keeps emitted (kind, S, i) triples unique within one separation call.
class Emitter {
 public:
  explicit Emitter(std::vector<Cut>& out) : out_(out) {}
  bool fresh(CutKind kind, const std::vector<int>& set, int target) {
    return seen_.insert({static_cast<int>(kind), target, set}).second;
  }
  void push(Cut c) { out_.push_back(std::move(c)); }

 private:
  std::vector<Cut>& out_;
  std::set<std::tuple<int, int, std::vector<int>>> seen_;
};

}  // namespace

SupportGraph build_support_undirected(const VariableSpace& vs, int depot,
                                      std::span<const double> point, double eps) {
  const int n = vs.n();
  SupportGraph g;
  g.directed = false;
  std::vector<char> in(n, 0);
  in[depot] = 1;
  for (int i = 0; i < n; ++i)
    if (point[vs.y(i, i)] > eps) in[i] = 1;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const double v = point[vs.x(a, b)];
      if (v > eps) {
        g.edges.push_back({a, b, v});
        in[a] = in[b] = 1;
      }
    }
  for (int i = 0; i < n; ++i)
    if (in[i]) g.vertices.push_back(i);
  return g;
}

SupportGraph build_support_directed(const VariableSpace& vs, std::span<const double> point,
                                    double eps) {
  const int n = vs.n();
  SupportGraph g;
  g.directed = true;
  std::vector<char> in(n, 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      const double v = point[vs.w(a, b)];
      if (v > eps) {
        g.edges.push_back({a, b, v});
        in[a] = in[b] = 1;
      }
    }
  for (int i = 0; i < n; ++i)
    if (in[i]) g.vertices.push_back(i);
  return g;
}

LinearRow sec_x_row(const VariableSpace& vs, std::span<const int> set, int target) {
  const int n = vs.n();
  const auto in = mask_of(n, set);
  std::vector<std::pair<int, double>> t;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (in[a] != in[b]) t.emplace_back(vs.x(a, b), 1.0);
  for (int j : set) t.emplace_back(vs.y(target, j), -2.0);
  return LinearRow::from_terms(std::move(t), RowSense::kGreaterEqual, 0.0, RowTag::kSecX);
}

namespace {
LinearRow sec_w_row(const VariableSpace& vs, std::span<const int> set, int target, bool outgoing) {
  const int n = vs.n();
  const auto in = mask_of(n, set);
  std::vector<std::pair<int, double>> t;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b && in[a] != in[b] && (in[a] != 0) == outgoing) t.emplace_back(vs.w(a, b), 1.0);
  for (int j : set) t.emplace_back(vs.y(target, j), 1.0);
  return LinearRow::from_terms(std::move(t), RowSense::kGreaterEqual, 1.0,
                               outgoing ? RowTag::kSecWOut : RowTag::kSecWIn);
}
}  // namespace

LinearRow sec_w_out_row(const VariableSpace& vs, std::span<const int> set, int target) {
  return sec_w_row(vs, set, target, true);
}

LinearRow sec_w_in_row(const VariableSpace& vs, std::span<const int> set, int target) {
  return sec_w_row(vs, set, target, false);
}

LinearRow two_matching_row(const VariableSpace& vs, std::span<const int> handle,
                           std::span<const std::pair<int, int>> teeth) {
  std::vector<std::pair<int, double>> t;
  for (size_t a = 0; a < handle.size(); ++a)
    for (size_t b = a + 1; b < handle.size(); ++b) t.emplace_back(vs.x(handle[a], handle[b]), 1.0);
  for (const auto& [u, v] : teeth) t.emplace_back(vs.x(u, v), 1.0);
  for (int i : handle) t.emplace_back(vs.y(i, i), -1.0);
  return LinearRow::from_terms(std::move(t), RowSense::kLessEqual,
                               (static_cast<double>(teeth.size()) - 1.0) / 2.0,
                               RowTag::kTwoMatching);
}

std::vector<Cut> separate_sec_x(const VariableSpace& vs, int depot, std::span<const double> point,
                                const SeparationParams& params) {
  const int n = vs.n();
  std::vector<Cut> cuts;
  Emitter emit(cuts);

  // Rows for the best few targets of a candidate set.
  auto try_set = [&](std::vector<int> set) {
    std::sort(set.begin(), set.end());
    if (set.empty() || std::binary_search(set.begin(), set.end(), depot)) return;
    const auto in = mask_of(n, set);
    const double lhs = cut_x(vs, point, in);
    std::vector<std::pair<double, int>> score;
    for (int i : set) score.emplace_back(sum_y_in(vs, point, i, set), i);
    std::sort(score.begin(), score.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    int emitted = 0;
    for (const auto& [sy, i] : score) {
      if (emitted > params.runners_up) break;
      if (2.0 * sy - lhs <= params.violation_tol) break;
      if (!emit.fresh(CutKind::kSecX, set, i)) continue;
      emit.push(make_cut(CutKind::kSecX, set, i, sec_x_row(vs, set, i), point));
      ++emitted;
    }
  };

  const auto g = build_support_undirected(vs, depot, point, params.support_eps);
  const auto comps = components(n, g.vertices, g.edges);
  if (comps.size() > 1) {
    for (const auto& c : comps) try_set(c);
  } else if (g.vertices.size() > 2) {
    // All-pairs minimum cuts on the support graph; depot first so every cut
    // side is reported relative to it.
    std::vector<int> local = g.vertices;
    std::stable_partition(local.begin(), local.end(), [depot](int v) { return v == depot; });
    std::vector<int> where(n, -1);
    for (size_t k = 0; k < local.size(); ++k) where[local[k]] = static_cast<int>(k);
    const size_t m = local.size();
    std::vector<std::vector<double>> cap(m, std::vector<double>(m, 0.0));
    for (const auto& e : g.edges) {
      cap[where[e.u]][where[e.v]] += e.weight;
      cap[where[e.v]][where[e.u]] += e.weight;
    }
    for (const auto& te : gomory_hu_cuts(cap)) {
      std::vector<int> set;
      const bool flip = te.side[0] != 0;  // side holds the depot
      for (size_t k = 0; k < m; ++k)
        if ((te.side[k] != 0) != flip) set.push_back(local[k]);
      try_set(std::move(set));
    }
  }

  if (params.per_target_cuts) {
    // min over S with i in S, depot outside, of x(delta(S)) + 2 sum_{j not in S} y_ij.
    for (int i = 0; i < n; ++i) {
      if (i == depot) continue;
      double total = 0.0;
      for (int j = 0; j < n; ++j) total += point[vs.y(i, j)];
      if (2.0 * total <= params.violation_tol) continue;
      MaxFlow mf(n);
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
          const double v = point[vs.x(a, b)];
          if (v > kTiny) mf.add_edge(a, b, v);
        }
      for (int j = 0; j < n; ++j) {
        const double v = point[vs.y(i, j)];
        if (j != i && v > kTiny) mf.add_arc(i, j, 2.0 * v);
      }
      const double value = mf.solve(i, depot);
      if (2.0 * total - value <= params.violation_tol) continue;
      std::vector<int> set;
      for (int v = 0; v < n; ++v)
        if (mf.source_side()[v]) set.push_back(v);
      if (!emit.fresh(CutKind::kSecX, set, i)) continue;
      Cut c = make_cut(CutKind::kSecX, set, i, sec_x_row(vs, set, i), point);
      if (c.violation > params.violation_tol) emit.push(std::move(c));
    }
  }
  return cuts;
}

std::vector<Cut> separate_sec_w(const VariableSpace& vs, std::span<const double> point,
                                const SeparationParams& params) {
  const int n = vs.n();
  std::vector<Cut> cuts;
  Emitter emit(cuts);

  auto try_set = [&](std::vector<int> set) {
    std::sort(set.begin(), set.end());
    if (set.empty() || static_cast<int>(set.size()) == n) return;
    const auto in = mask_of(n, set);
    for (bool outgoing : {true, false}) {
      const double lhs = arcs_out(vs, point, in, outgoing);
      std::vector<std::pair<double, int>> score;
      for (int i : set) score.emplace_back(1.0 - sum_y_in(vs, point, i, set) - lhs, i);
      std::sort(score.begin(), score.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
      });
      const CutKind kind = outgoing ? CutKind::kSecWOut : CutKind::kSecWIn;
      int emitted = 0;
      for (const auto& [viol, i] : score) {
        if (emitted > params.runners_up || viol <= params.violation_tol) break;
        if (!emit.fresh(kind, set, i)) continue;
        emit.push(make_cut(kind, set, i, sec_w_row(vs, set, i, outgoing), point));
        ++emitted;
      }
    }
  };

  const auto g = build_support_directed(vs, point, params.support_eps);
  for (auto& c : components(n, g.vertices, g.edges)) try_set(std::move(c));

  if (params.per_target_cuts) {
    // min over S containing i of w(delta+/-(S)) + sum_{j in S} y_ij, as a cut
    // between i and an extra sink vertex.
    const int sink = n;
    for (int i = 0; i < n; ++i) {
      if (1.0 - point[vs.y(i, i)] <= params.violation_tol) continue;
      for (bool outgoing : {true, false}) {
        MaxFlow mf(n + 1);
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) {
            if (a == b) continue;
            const double v = point[vs.w(a, b)];
            if (v <= kTiny) continue;
            if (outgoing) mf.add_arc(a, b, v);
            else mf.add_arc(b, a, v);
          }
        for (int j = 0; j < n; ++j) {
          const double v = point[vs.y(i, j)];
          if (v > kTiny) mf.add_arc(j, sink, v);
        }
        const double value = mf.solve(i, sink);
        if (1.0 - value <= params.violation_tol) continue;
        std::vector<int> set;
        for (int v = 0; v < n; ++v)
          if (mf.source_side()[v]) set.push_back(v);
        const CutKind kind = outgoing ? CutKind::kSecWOut : CutKind::kSecWIn;
        if (!emit.fresh(kind, set, i)) continue;
        Cut c = make_cut(kind, set, i, sec_w_row(vs, set, i, outgoing), point);
        if (c.violation > params.violation_tol) emit.push(std::move(c));
      }
    }
  }
  return cuts;
}

std::vector<Cut> separate_two_matching(const VariableSpace& vs, std::span<const double> point,
                                       const SeparationParams& params) {
  const int n = vs.n();
  const double eps = params.support_eps;
  std::vector<SupportGraph::Edge> frac;
  std::vector<char> touched(n, 0);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const double v = point[vs.x(a, b)];
      if (v > eps && v < 1.0 - eps) {
        frac.push_back({a, b, v});
        touched[a] = touched[b] = 1;
      }
    }
  std::vector<int> verts;
  for (int v = 0; v < n; ++v)
    if (touched[v]) verts.push_back(v);

  std::vector<Cut> cuts;
  for (const auto& handle : components(n, verts, frac)) {
    const auto in = mask_of(n, handle);
    // Candidate teeth in edge-index order, i.e. lexicographic (u, v).
    std::vector<std::pair<int, int>> teeth;
    std::vector<char> used(n, 0);
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        if (in[a] == in[b] || point[vs.x(a, b)] < 1.0 - eps) continue;
        if (used[a] || used[b]) continue;
        used[a] = used[b] = 1;
        teeth.emplace_back(a, b);
      }
    if (teeth.size() < 3 || teeth.size() % 2 == 0) continue;
    LinearRow row = two_matching_row(vs, handle, teeth);
    const double viol = row.violation(point);
    if (viol <= params.violation_tol) continue;
    Cut c;
    c.kind = CutKind::kTwoMatching;
    c.set = handle;
    c.teeth = std::move(teeth);
    c.row = std::move(row);
    c.violation = viol;
    cuts.push_back(std::move(c));
  }
  return cuts;
}

std::vector<Cut> check_integral(const VariableSpace& vs, int depot, std::span<const double> point,
                                const SeparationParams& params) {
  auto cuts = separate_sec_x(vs, depot, point, params);
  auto w = separate_sec_w(vs, point, params);
  cuts.insert(cuts.end(), std::make_move_iterator(w.begin()), std::make_move_iterator(w.end()));
  return cuts;
}

std::uint64_t canonical_hash(const LinearRow& row) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const void* data, size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t k = 0; k < len; ++k) {
      h ^= p[k];
      h *= 1099511628211ULL;
    }
  };
  const int sense = static_cast<int>(row.sense);
  mix(&sense, sizeof sense);
  mix(&row.rhs, sizeof row.rhs);
  for (size_t k = 0; k < row.index.size(); ++k) {
    mix(&row.index[k], sizeof(int));
    mix(&row.coef[k], sizeof(double));
  }
  return h;
}

std::string describe(const Cut& cut) {
  std::ostringstream out;
  out << "cut " << to_string(cut.kind);
  if (cut.kind == CutKind::kTwoMatching) {
    out << " |H|=" << cut.set.size() << " |I|=" << cut.teeth.size();
  } else {
    out << " |S|=" << cut.set.size() << " target=" << cut.target;
  }
  out.setf(std::ios::fixed);
  out.precision(6);
  out << " violation=" << cut.violation;
  return out.str();
}

}  // namespace cagvrp

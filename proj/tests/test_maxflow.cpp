#include <functional>
#include <limits>
#include <random>

#include "cagvrp/maxflow.hpp"
#include "doctest.h"

using namespace cagvrp;

namespace {

using Matrix = std::vector<std::vector<double>>;

// Depth-first augmenting paths on a residual matrix; shares nothing with the
// library's breadth-first implementation.
double dfs_max_flow(Matrix cap, int s, int t) {
  const int n = static_cast<int>(cap.size());
  double total = 0;
  for (;;) {
    std::vector<char> seen(n, 0);
    std::function<double(int, double)> push = [&](int u, double f) -> double {
      if (u == t) return f;
      seen[u] = 1;
      for (int v = 0; v < n; ++v)
        if (!seen[v] && cap[u][v] > 1e-12) {
          const double got = push(v, std::min(f, cap[u][v]));
          if (got > 0) {
            cap[u][v] -= got;
            cap[v][u] += got;
            return got;
          }
        }
      return 0.0;
    };
    const double f = push(s, std::numeric_limits<double>::infinity());
    if (f <= 1e-12) return total;
    total += f;
  }
}

// Minimum over all vertex subsets containing s but not t.
double brute_min_cut(const Matrix& cap, int s, int t) {
  const int n = static_cast<int>(cap.size());
  double best = std::numeric_limits<double>::infinity();
  for (int mask = 0; mask < (1 << n); ++mask) {
    if (!(mask >> s & 1) || (mask >> t & 1)) continue;
    double c = 0;
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        if ((mask >> u & 1) && !(mask >> v & 1)) c += cap[u][v];
    best = std::min(best, c);
  }
  return best;
}

Matrix random_graph(std::mt19937_64& rng, int n, bool symmetric) {
  std::uniform_real_distribution<double> w(0.0, 1.0);
  Matrix cap(n, std::vector<double>(n, 0.0));
  for (int u = 0; u < n; ++u)
    for (int v = symmetric ? u + 1 : 0; v < n; ++v) {
      if (u == v || w(rng) < 0.5) continue;
      const double c = w(rng);
      cap[u][v] = c;
      if (symmetric) cap[v][u] = c;
    }
  return cap;
}

}  // namespace

TEST_CASE("max flow on a textbook network") {
  MaxFlow f(4);
  f.add_arc(0, 1, 3);
  f.add_arc(0, 2, 2);
  f.add_arc(1, 2, 1);
  f.add_arc(1, 3, 2);
  f.add_arc(2, 3, 3);
  CHECK(f.solve(0, 3) == doctest::Approx(5));
  CHECK(f.source_side()[0]);
  CHECK_FALSE(f.source_side()[3]);
}

TEST_CASE("max flow matches an independent augmenting-path solver and brute force") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 11);
    const Matrix cap = random_graph(rng, n, trial % 2 == 0);
    const int s = static_cast<int>(rng() % n);
    int t = static_cast<int>(rng() % n);
    if (t == s) t = (s + 1) % n;
    MaxFlow f(n);
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        if (cap[u][v] > 0) f.add_arc(u, v, cap[u][v]);
    const double value = f.solve(s, t);
    CAPTURE(trial);
    CHECK(value == doctest::Approx(dfs_max_flow(cap, s, t)).epsilon(1e-9));
    CHECK(value == doctest::Approx(brute_min_cut(cap, s, t)).epsilon(1e-9));
    // The reported side is a cut of exactly that value.
    const auto& side = f.source_side();
    double c = 0;
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        if (side[u] && !side[v]) c += cap[u][v];
    CHECK(side[s]);
    CHECK_FALSE(side[t]);
    CHECK(c == doctest::Approx(value).epsilon(1e-9));
  }
}

TEST_CASE("Gomory-Hu cuts realize every pairwise minimum cut") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 9);
    const Matrix cap = random_graph(rng, n, true);
    const auto tree = gomory_hu_cuts(cap);
    REQUIRE(static_cast<int>(tree.size()) == n - 1);
    for (const auto& e : tree) {
      double c = 0;
      for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
          if (e.side[u] && !e.side[v]) c += cap[u][v];
      CHECK(c == doctest::Approx(e.value).epsilon(1e-9));
      CHECK(e.side[e.vertex]);
      CHECK_FALSE(e.side[e.parent]);
    }
    // min cut(u, v) = smallest tree edge on the tree path between u and v.
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) {
        std::vector<int> parent(n, -1);
        std::vector<double> up(n, 0);
        for (const auto& e : tree) {
          parent[e.vertex] = e.parent;
          up[e.vertex] = e.value;
        }
        auto path_to_root = [&](int a) {
          std::vector<int> p{a};
          while (parent[p.back()] >= 0) p.push_back(parent[p.back()]);
          return p;
        };
        const auto pu = path_to_root(u), pv = path_to_root(v);
        double best = std::numeric_limits<double>::infinity();
        int lca = -1;
        for (int a : pu) {
          for (int b : pv)
            if (a == b) lca = a;
          if (lca >= 0) break;
        }
        for (int a : pu) {
          if (a == lca) break;
          best = std::min(best, up[a]);
        }
        for (int b : pv) {
          if (b == lca) break;
          best = std::min(best, up[b]);
        }
        CAPTURE(trial);
        CHECK(best == doctest::Approx(brute_min_cut(cap, u, v)).epsilon(1e-9));
      }
  }
}

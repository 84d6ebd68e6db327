#include "cagvrp/oracle.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <stdexcept>

namespace cagvrp {

namespace {

constexpr double kNone = std::numeric_limits<double>::infinity();

// Held-Karp from `start` over subsets of the other vertices, with a cost
// oracle over ordered pairs. best[mask][last]: cheapest path start -> ... ->
// last visiting exactly `mask` (bits over all n vertices, start excluded).
class HeldKarp {
 public:
  template <typename Cost>
  HeldKarp(int n, int start, Cost cost) : n_(n), start_(start) {
    const size_t full = size_t{1} << n;
    best_.assign(full * n, kNone);
    for (int v = 0; v < n; ++v)
      if (v != start) at(size_t{1} << v, v) = cost(start, v);
    for (size_t mask = 1; mask < full; ++mask) {
      if (mask & (size_t{1} << start)) continue;
      for (int last = 0; last < n; ++last) {
        if (!(mask & (size_t{1} << last))) continue;
        const double base = at(mask, last);
        if (base == kNone) continue;
        for (int next = 0; next < n; ++next) {
          if (next == start || (mask & (size_t{1} << next))) continue;
          double& slot = at(mask | (size_t{1} << next), next);
          slot = std::min(slot, base + cost(last, next));
        }
      }
    }
    close_.assign(full, kNone);
    for (size_t mask = 1; mask < full; ++mask) {
      if (mask & (size_t{1} << start)) continue;
      for (int last = 0; last < n; ++last)
        if ((mask & (size_t{1} << last)) && at(mask, last) != kNone)
          close_[mask] = std::min(close_[mask], at(mask, last) + cost(last, start));
    }
    close_[0] = 0.0;
  }

  // Cheapest cycle through start and exactly `mask`.
  double cycle(size_t mask) const { return close_[mask]; }

  // One optimal cycle, starting at `start`.
  template <typename Cost>
  std::vector<int> order(size_t mask, Cost cost) const {
    std::vector<int> rev;
    if (mask == 0) return {start_};
    int last = -1;
    for (int v = 0; v < n_; ++v)
      if ((mask & (size_t{1} << v)) && at(mask, v) != kNone &&
          at(mask, v) + cost(v, start_) == close_[mask]) {
        last = v;
        break;
      }
    while (mask) {
      rev.push_back(last);
      const size_t prev = mask & ~(size_t{1} << last);
      if (prev == 0) break;
      int from = -1;
      for (int v = 0; v < n_; ++v)
        if ((prev & (size_t{1} << v)) && at(prev, v) != kNone &&
            at(prev, v) + cost(v, last) == at(mask, last)) {
          from = v;
          break;
        }
      mask = prev;
      last = from;
    }
    rev.push_back(start_);
    std::reverse(rev.begin(), rev.end());
    return rev;
  }

 private:
  double& at(size_t mask, int v) { return best_[mask * n_ + v]; }
  double at(size_t mask, int v) const { return best_[mask * n_ + v]; }

  int n_;
  int start_;
  std::vector<double> best_;
  std::vector<double> close_;
};

}  // namespace

OracleResult brute_force(const Instance& inst) {
  validate_instance(inst);
  const int n = inst.size();
  if (n > kOracleMaxTargets)
    throw std::invalid_argument("brute_force: n = " + std::to_string(n) + " exceeds " +
                                std::to_string(kOracleMaxTargets) +
                                "; use the branch-and-cut solver for larger instances");
  const int depot = inst.depot;
  auto gv = [&](int a, int b) { return inst.gv_cost(a, b); };
  const HeldKarp ground(n, depot, gv);
  std::vector<HeldKarp> flights;
  flights.reserve(n);
  for (int s = 0; s < n; ++s) flights.emplace_back(n, s, [&](int a, int b) { return inst.uav_cost(a, b); });

  OracleResult res;
  double best = kNone;
  std::vector<int> best_assign;
  std::vector<int> assign(n, -1);
  std::vector<size_t> flown(n, 0);
  const size_t full = size_t{1} << n;
  const size_t depot_bit = size_t{1} << depot;

  for (size_t stops = 0; stops < full; ++stops) {
    if (!(stops & depot_bit) || std::popcount(stops) < 2) continue;
    const bool two_stops = std::popcount(stops) == 2;
    std::vector<int> rest;
    bool reachable = true;
    for (int v = 0; v < n; ++v) {
      if (stops & (size_t{1} << v)) continue;
      rest.push_back(v);
      bool any = false;
      for (int s = 0; s < n; ++s)
        if ((stops & (size_t{1} << s)) && inst.comm_ok(v, s)) any = true;
      reachable = reachable && any;
    }
    if (!reachable) continue;
    // A two-stop tour drives the same edge twice; it is priced but never
    // returned, only reported.
    const double tour = two_stops ? 2.0 * gv(depot, std::countr_zero(stops & ~depot_bit))
                                  : ground.cycle(stops & ~depot_bit);
    std::fill(flown.begin(), flown.end(), 0);
    // Odometer over assignments of `rest` to comm-feasible stops.
    std::function<void(size_t)> rec = [&](size_t k) {
      if (k == rest.size()) {
        double total = tour;
        for (int s = 0; s < n; ++s)
          if (flown[s]) total += flights[s].cycle(flown[s]);
        if (two_stops) {
          res.two_stop_objective = std::min(res.two_stop_objective, total);
          return;
        }
        ++res.structures;
        if (total < best) {
          best = total;
          best_assign = assign;
        }
        return;
      }
      const int v = rest[k];
      for (int s = 0; s < n; ++s) {
        if (!(stops & (size_t{1} << s)) || !inst.comm_ok(v, s)) continue;
        assign[v] = s;
        flown[s] |= size_t{1} << v;
        rec(k + 1);
        flown[s] &= ~(size_t{1} << v);
      }
      assign[v] = -1;
    };
    for (int s = 0; s < n; ++s)
      if (stops & (size_t{1} << s)) assign[s] = s;
    rec(0);
    for (int s = 0; s < n; ++s) assign[s] = -1;
  }

  if (best == kNone) return res;
  res.feasible = true;
  Solution& sol = res.solution;
  sol.assignment = best_assign;
  size_t stops = 0;
  std::vector<size_t> flights_of(n, 0);
  for (int v = 0; v < n; ++v) {
    if (best_assign[v] == v) stops |= size_t{1} << v;
    else flights_of[best_assign[v]] |= size_t{1} << v;
  }
  sol.gv_tour = ground.order(stops & ~depot_bit, gv);
  for (int s = 0; s < n; ++s)
    if (flights_of[s])
      sol.subtours[s] = flights[s].order(flights_of[s], [&](int a, int b) { return inst.uav_cost(a, b); });
  recompute_costs(inst, sol);
  res.objective = sol.objective;
  return res;
}

std::int64_t enumerate_feasible(const Instance& inst, std::int64_t limit,
                                const std::function<bool(const Solution&)>& visit) {
  validate_instance(inst);
  const int n = inst.size();
  if (n > kEnumerateMaxTargets)
    throw std::invalid_argument("enumerate_feasible: n = " + std::to_string(n) + " exceeds " +
                                std::to_string(kEnumerateMaxTargets));
  const int depot = inst.depot;
  std::int64_t produced = 0;
  bool stop_all = false;
  auto emit = [&](Solution& sol) {
    recompute_costs(inst, sol);
    ++produced;
    if (!visit(sol) || produced >= limit) stop_all = true;
  };

  for (int mask = 0; mask < (1 << n) && !stop_all; ++mask) {
    if (!(mask & (1 << depot)) || std::popcount(static_cast<unsigned>(mask)) < 3) continue;
    std::vector<int> others, rest;
    for (int v = 0; v < n; ++v) {
      if (v == depot) continue;
      if (mask & (1 << v)) others.push_back(v);
      else rest.push_back(v);
    }
    std::vector<int> assign(n, -1);
    for (int v = 0; v < n; ++v)
      if (mask & (1 << v)) assign[v] = v;

    // Per fixed assignment: all undirected ground cycles x all directed sub-tour orders.
    auto expand = [&]() {
      std::vector<int> perm = others;
      std::sort(perm.begin(), perm.end());
      do {
        if (perm.front() > perm.back()) continue;  // each reflection once
        std::vector<int> tour{depot};
        tour.insert(tour.end(), perm.begin(), perm.end());
        std::vector<std::vector<int>> groups(n);
        for (int v : rest) groups[assign[v]].push_back(v);
        std::vector<int> owners;
        for (int s = 0; s < n; ++s)
          if (!groups[s].empty()) owners.push_back(s);
        std::function<void(size_t, Solution&)> rec = [&](size_t k, Solution& sol) {
          if (stop_all) return;
          if (k == owners.size()) {
            Solution copy = sol;
            emit(copy);
            return;
          }
          const int s = owners[k];
          auto members = groups[s];
          std::sort(members.begin(), members.end());
          do {
            std::vector<int> cyc{s};
            cyc.insert(cyc.end(), members.begin(), members.end());
            sol.subtours[s] = cyc;
            rec(k + 1, sol);
            if (stop_all) return;
          } while (std::next_permutation(members.begin(), members.end()));
          sol.subtours.erase(s);
        };
        Solution sol;
        sol.gv_tour = tour;
        sol.assignment = assign;
        rec(0, sol);
        if (stop_all) return;
      } while (std::next_permutation(perm.begin(), perm.end()));
    };

    std::function<void(size_t)> assign_rest = [&](size_t k) {
      if (stop_all) return;
      if (k == rest.size()) {
        expand();
        return;
      }
      const int v = rest[k];
      for (int s = 0; s < n; ++s) {
        if (!(mask & (1 << s)) || !inst.comm_ok(v, s)) continue;
        assign[v] = s;
        assign_rest(k + 1);
        if (stop_all) return;
      }
      assign[v] = -1;
    };
    assign_rest(0);
  }
  return produced;
}

std::vector<Solution> enumerate_feasible(const Instance& inst, std::int64_t limit) {
  std::vector<Solution> out;
  enumerate_feasible(inst, limit, [&](const Solution& s) {
    out.push_back(s);
    return true;
  });
  return out;
}

}  // namespace cagvrp

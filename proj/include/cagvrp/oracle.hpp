#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "cagvrp/instance.hpp"
#include "cagvrp/model.hpp"

namespace cagvrp {

inline constexpr int kOracleMaxTargets = 10;
inline constexpr int kEnumerateMaxTargets = 6;

struct OracleResult {
  bool feasible = false;
  double objective = 0.0;
  Solution solution;
  // (stop set, assignment) structures whose cost was evaluated.
  std::int64_t structures = 0;
  // Cheapest solution whose ground tour has only the depot and one other stop
  // (driving that edge twice). Such tours are infeasible here; infinity when
  // no comm-feasible one exists.
  double two_stop_objective = std::numeric_limits<double>::infinity();
  // True when the three-stop requirement excludes something cheaper.
  bool two_stop_binds() const {
    return two_stop_objective < (feasible ? objective - 1e-9 : std::numeric_limits<double>::infinity());
  }
};

// Exhaustive search: every stop set containing the depot with at least three
// stops, every comm-feasible assignment of the remaining targets, each priced
// with an exact Held-Karp TSP for the ground tour and an exact directed TSP per
// sub-tour. Refuses n > 10 with std::invalid_argument.
OracleResult brute_force(const Instance& inst);

// Calls `visit` on every validator-feasible solution (all stop sets,
// assignments and cyclic orders; ground tours counted once per undirected
// cycle, sub-tours per direction) until `limit` solutions were produced or
// `visit` returns false. Refuses n > 6. Returns the number produced.
std::int64_t enumerate_feasible(const Instance& inst, std::int64_t limit,
                                const std::function<bool(const Solution&)>& visit);
std::vector<Solution> enumerate_feasible(const Instance& inst, std::int64_t limit);

}  // namespace cagvrp

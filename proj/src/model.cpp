#include "cagvrp/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "cagvrp/errors.hpp"

namespace cagvrp {

VariableSpace::VariableSpace(int n) : n_(n) {
  x_row_start_.assign(n, 0);
  int acc = 0;
  for (int i = 0; i < n; ++i) {
    x_row_start_[i] = acc - (i + 1);  // x(i, j) = start[i] + j for j > i
    acc += n - i - 1;
  }
  w_begin_ = acc;
  y_begin_ = w_begin_ + n * n;
  z_begin_ = y_begin_ + n * n;
}

int VariableSpace::x(int i, int j) const {
  if (i > j) std::swap(i, j);
  return x_row_start_[i] + j;
}

VariableSpace::Decoded VariableSpace::decode(int index) const {
  Decoded d{};
  if (index < w_begin_) {
    d.cls = VarClass::kX;
    int i = 0;
    while (i + 1 < n_ && x_row_start_[i + 1] + (i + 2) <= index) ++i;
    d.i = i;
    d.j = index - x_row_start_[i];
  } else if (index < y_begin_) {
    d.cls = VarClass::kW;
    d.i = (index - w_begin_) / n_;
    d.j = (index - w_begin_) % n_;
  } else if (index < z_begin_) {
    d.cls = VarClass::kY;
    d.i = (index - y_begin_) / n_;
    d.j = (index - y_begin_) % n_;
  } else {
    d.cls = VarClass::kZ;
    const int r = index - z_begin_;
    d.i = r / (n_ * n_);
    d.j = (r / n_) % n_;
    d.k = r % n_;
  }
  return d;
}

std::string VariableSpace::name(int index) const {
  const auto d = decode(index);
  std::ostringstream out;
  switch (d.cls) {
    case VarClass::kX: out << "x(" << d.i << "," << d.j << ")"; break;
    case VarClass::kW: out << "w(" << d.i << "," << d.j << ")"; break;
    case VarClass::kY: out << "y(" << d.i << "," << d.j << ")"; break;
    case VarClass::kZ: out << "z(" << d.i << "," << d.j << "," << d.k << ")"; break;
  }
  return out.str();
}

LpProblem MilpModel::relaxation() const {
  LpProblem lp;
  lp.num_vars = space.size();
  lp.objective = objective;
  lp.lower = lower;
  lp.upper = upper;
  lp.rows = rows;
  return lp;
}

int MilpModel::count_rows(RowTag tag) const {
  return static_cast<int>(
      std::count_if(rows.begin(), rows.end(), [tag](const LinearRow& r) { return r.tag == tag; }));
}

double penalty_coefficient(const Instance& inst) {
  double total = 0.0;
  for (int i = 0; i < inst.size(); ++i)
    for (int j = 0; j < inst.size(); ++j) total += inst.gv_cost(i, j);
  return 10.0 * total;
}

MilpModel build_model(const Instance& inst, const ModelOptions& options) {
  validate_instance(inst);
  const int n = inst.size();
  MilpModel model;
  model.space = VariableSpace(n);
  model.penalty_mode = options.penalty_mode;
  const auto& vs = model.space;
  const int nv = vs.size();
  model.objective.assign(nv, 0.0);
  model.lower.assign(nv, 0.0);
  model.upper.assign(nv, 1.0);

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) model.objective[vs.x(i, j)] = inst.gv_cost(i, j);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) model.objective[vs.w(i, j)] = inst.uav_cost(i, j);
  if (options.penalty_mode) {
    model.penalty = penalty_coefficient(inst);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (!inst.comm_ok(i, j)) model.objective[vs.y(i, j)] = model.penalty;
  }

  auto& rows = model.rows;
  using Terms = std::vector<std::pair<int, double>>;
  for (int i = 0; i < n; ++i) {
    Terms t;
    for (int j = 0; j < n; ++j)
      if (j != i) t.emplace_back(vs.x(i, j), 1.0);
    t.emplace_back(vs.y(i, i), -2.0);
    rows.push_back(LinearRow::from_terms(std::move(t), RowSense::kEqual, 0.0, RowTag::kDegreeX));
  }
  for (int i = 0; i < n; ++i) {
    Terms t;
    for (int j = 0; j < n; ++j) t.emplace_back(vs.w(i, j), 1.0);
    rows.push_back(
        LinearRow::from_terms(std::move(t), RowSense::kEqual, 1.0, RowTag::kOutDegreeW));
  }
  for (int j = 0; j < n; ++j) {
    Terms t;
    for (int i = 0; i < n; ++i) t.emplace_back(vs.w(i, j), 1.0);
    rows.push_back(LinearRow::from_terms(std::move(t), RowSense::kEqual, 1.0, RowTag::kInDegreeW));
  }
  for (int i = 0; i < n; ++i) {
    Terms t;
    for (int j = 0; j < n; ++j) t.emplace_back(vs.y(i, j), 1.0);
    rows.push_back(LinearRow::from_terms(std::move(t), RowSense::kEqual, 1.0, RowTag::kAssign));
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Terms t{{vs.w(i, j), 1.0}};
      for (int k = 0; k < n; ++k) t.emplace_back(vs.z(i, j, k), -1.0);
      rows.push_back(
          LinearRow::from_terms(std::move(t), RowSense::kLessEqual, 0.0, RowTag::kLinkWZ));
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const int z = vs.z(i, j, k);
        rows.push_back(LinearRow::from_terms({{z, 1.0}, {vs.y(i, k), -1.0}},
                                             RowSense::kLessEqual, 0.0, RowTag::kZLeYik));
        rows.push_back(LinearRow::from_terms({{z, 1.0}, {vs.y(j, k), -1.0}},
                                             RowSense::kLessEqual, 0.0, RowTag::kZLeYjk));
        rows.push_back(LinearRow::from_terms({{z, 1.0}, {vs.y(i, k), -1.0}, {vs.y(j, k), -1.0}},
                                             RowSense::kGreaterEqual, -1.0, RowTag::kZGe));
      }
    }
  }

  // Fixings. y_ij = 0 for comm-infeasible pairs (hard mode); the depot is a
  // stop and, through its assignment row, assigned nowhere else.
  const int depot = inst.depot;
  model.lower[vs.y(depot, depot)] = 1.0;
  for (int j = 0; j < n; ++j)
    if (j != depot) model.upper[vs.y(depot, j)] = 0.0;
  if (!options.penalty_mode) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (!inst.comm_ok(i, j)) model.upper[vs.y(i, j)] = 0.0;
  }
  // z_ijk <= y_ik, y_jk; w_ij <= sum_k z_ijk.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      bool any = false;
      for (int k = 0; k < n; ++k) {
        if (model.upper[vs.y(i, k)] == 0.0 || model.upper[vs.y(j, k)] == 0.0)
          model.upper[vs.z(i, j, k)] = 0.0;
        else
          any = true;
      }
      if (!any) model.upper[vs.w(i, j)] = 0.0;
    }
  }
  for (int v = 0; v < nv; ++v)
    if (model.lower[v] == model.upper[v]) model.fixed.emplace_back(v, model.lower[v]);
  return model;
}

// ---------------------------------------------------------------------------

void recompute_costs(const Instance& inst, Solution& sol, bool penalty_mode) {
  double gv = 0.0;
  const auto& t = sol.gv_tour;
  for (size_t k = 0; k < t.size(); ++k) gv += inst.gv_cost(t[k], t[(k + 1) % t.size()]);
  double uav = 0.0;
  for (const auto& [stop, cyc] : sol.subtours)
    for (size_t k = 0; k < cyc.size(); ++k) uav += inst.uav_cost(cyc[k], cyc[(k + 1) % cyc.size()]);
  double pen = 0.0;
  if (penalty_mode) {
    const double f = penalty_coefficient(inst);
    for (int i = 0; i < static_cast<int>(sol.assignment.size()); ++i) {
      const int s = sol.assignment[i];
      if (s >= 0 && s < inst.size() && !inst.comm_ok(i, s)) pen += f;
    }
  }
  sol.gv_cost_total = gv;
  sol.uav_cost_total = uav;
  sol.penalty_total = pen;
  sol.objective = gv + uav + pen;
}

double objective_of(const Instance& inst, const Solution& sol, bool penalty_mode) {
  Solution copy = sol;
  recompute_costs(inst, copy, penalty_mode);
  return copy.objective;
}

std::vector<double> encode(const Instance& inst, const Solution& sol) {
  const int n = inst.size();
  VariableSpace vs(n);
  std::vector<double> v(vs.size(), 0.0);
  const auto& t = sol.gv_tour;
  for (size_t k = 0; k < t.size(); ++k) v[vs.x(t[k], t[(k + 1) % t.size()])] = 1.0;
  for (int i = 0; i < n; ++i) v[vs.w(i, i)] = 1.0;
  for (const auto& [stop, cyc] : sol.subtours) {
    if (cyc.size() < 2) continue;
    for (size_t k = 0; k < cyc.size(); ++k) {
      v[vs.w(cyc[k], cyc[k])] = 0.0;
    }
    for (size_t k = 0; k < cyc.size(); ++k) v[vs.w(cyc[k], cyc[(k + 1) % cyc.size()])] = 1.0;
  }
  for (int i = 0; i < n; ++i) v[vs.y(i, sol.assignment[i])] = 1.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) v[vs.z(i, j, k)] = v[vs.y(i, k)] * v[vs.y(j, k)];
  return v;
}

Solution decode(const Instance& inst, std::span<const double> point,
                std::optional<double> lp_objective, bool penalty_mode) {
  const int n = inst.size();
  const VariableSpace vs(n);
  if (static_cast<int>(point.size()) < vs.z_begin())
    throw ContractViolation("decode: point is shorter than the x/w/y blocks");
  auto bit = [&](int idx) {
    const double v = point[idx];
    const double r = std::round(v);
    if (std::abs(v - r) > kIntegralityTol || (r != 0.0 && r != 1.0))
      throw ContractViolation("decode: " + vs.name(idx) + " = " + std::to_string(v) +
                              " is not integral");
    return r == 1.0;
  };

  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (bit(vs.x(i, j))) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }
  std::vector<int> assigned(n, -1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (bit(vs.y(i, j))) {
        if (assigned[i] >= 0)
          throw InfeasibleDecode("target " + std::to_string(i) + " assigned to two stops");
        assigned[i] = j;
      }
  std::vector<int> succ(n, -1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (bit(vs.w(i, j))) {
        if (succ[i] >= 0)
          throw InfeasibleDecode("target " + std::to_string(i) + " has two UAV successors");
        succ[i] = j;
      }

  Solution sol;
  const int depot = inst.depot;
  std::vector<char> is_stop(n, 0);
  for (int i = 0; i < n; ++i) {
    if (assigned[i] < 0) throw InfeasibleDecode("target " + std::to_string(i) + " unassigned");
    is_stop[i] = assigned[i] == i;
    const size_t want = is_stop[i] ? 2 : 0;
    if (adj[i].size() != want)
      throw InfeasibleDecode("target " + std::to_string(i) + " has ground degree " +
                             std::to_string(adj[i].size()));
  }
  if (!is_stop[depot]) throw InfeasibleDecode("depot is not on the ground tour");

  // Walk the ground tour.
  sol.gv_tour.push_back(depot);
  int prev = -1, cur = depot;
  for (;;) {
    const int next = adj[cur][0] != prev ? adj[cur][0] : adj[cur][1];
    if (next == depot) break;
    sol.gv_tour.push_back(next);
    prev = cur;
    cur = next;
    if (static_cast<int>(sol.gv_tour.size()) > n) throw InfeasibleDecode("ground walk overran");
  }
  const auto stops = std::count(is_stop.begin(), is_stop.end(), 1);
  if (static_cast<long>(sol.gv_tour.size()) != stops)
    throw InfeasibleDecode("disconnected ground vehicle edges: tour through the depot visits " +
                           std::to_string(sol.gv_tour.size()) + " of " + std::to_string(stops) +
                           " stops");

  // UAV cycles.
  std::vector<char> seen(n, 0);
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<int> cyc;
    int c = s;
    while (!seen[c]) {
      seen[c] = 1;
      cyc.push_back(c);
      c = succ[c];
      if (c < 0) throw InfeasibleDecode("UAV arcs do not form a cycle cover");
    }
    if (c != s) throw InfeasibleDecode("UAV arcs do not form a cycle cover");
    std::vector<int> cyc_stops;
    for (int v : cyc)
      if (is_stop[v]) cyc_stops.push_back(v);
    if (cyc.size() == 1) {
      if (!is_stop[s])
        throw InfeasibleDecode("target " + std::to_string(s) + " is neither a stop nor on a UAV sub-tour");
      continue;
    }
    if (cyc_stops.size() != 1)
      throw InfeasibleDecode("UAV cycle through " + std::to_string(cyc_stops.size()) +
                             " stops (stop-less or shared sub-tour)");
    const int stop = cyc_stops[0];
    auto it = std::find(cyc.begin(), cyc.end(), stop);
    std::rotate(cyc.begin(), it, cyc.end());
    for (int v : cyc)
      if (assigned[v] != stop)
        throw InfeasibleDecode("target " + std::to_string(v) + " flies with stop " +
                               std::to_string(stop) + " but is assigned to " +
                               std::to_string(assigned[v]));
    sol.subtours[stop] = std::move(cyc);
  }
  sol.assignment = assigned;
  recompute_costs(inst, sol, penalty_mode);
  if (lp_objective && std::abs(*lp_objective - sol.objective) > kCostTol * std::max(1.0, std::abs(sol.objective)))
    throw InfeasibleDecode("recomputed objective " + std::to_string(sol.objective) +
                           " differs from LP objective " + std::to_string(*lp_objective));
  return sol;
}

std::vector<Violation> validate(const Instance& inst, const Solution& sol) {
  std::vector<Violation> out;
  auto report = [&](const std::string& kind, const std::string& msg) {
    out.push_back({kind, msg});
  };
  const int n = inst.size();
  auto valid_index = [n](int v) { return v >= 0 && v < n; };
  auto s = [](int v) { return std::to_string(v); };

  std::vector<int> visits(n, 0);
  std::vector<char> is_stop(n, 0);
  const auto& tour = sol.gv_tour;
  if (tour.empty() || tour.front() != inst.depot)
    report("depot", "ground tour must start at depot " + s(inst.depot));
  if (tour.size() < 3) report("ground-tour", "ground tour needs at least 3 stops");
  for (int v : tour) {
    if (!valid_index(v)) {
      report("ground-tour", "stop index " + s(v) + " out of range");
      continue;
    }
    if (is_stop[v]) report("ground-tour", "stop " + s(v) + " visited twice");
    is_stop[v] = 1;
    ++visits[v];
  }

  for (const auto& [stop, cyc] : sol.subtours) {
    if (!valid_index(stop) || !is_stop[stop]) {
      report("detached-subtour", "sub-tour keyed by " + s(stop) + " which is not a ground stop");
      continue;
    }
    if (cyc.empty() || cyc.front() != stop) {
      report("detached-subtour", "sub-tour of stop " + s(stop) + " does not pass through it");
    }
    if (cyc.size() < 2) report("subtour", "sub-tour of stop " + s(stop) + " has no targets");
    std::set<int> in_cycle;
    for (size_t k = 0; k < cyc.size(); ++k) {
      const int v = cyc[k];
      if (!valid_index(v)) {
        report("subtour", "sub-tour of stop " + s(stop) + " has bad index " + s(v));
        continue;
      }
      if (!in_cycle.insert(v).second)
        report("subtour", "sub-tour of stop " + s(stop) + " repeats " + s(v));
      if (v == stop) continue;
      if (is_stop[v]) report("subtour", "sub-tour of stop " + s(stop) + " visits stop " + s(v));
      ++visits[v];
      if (static_cast<int>(sol.assignment.size()) == n && sol.assignment[v] != stop)
        report("assignment", "target " + s(v) + " flies from stop " + s(stop) +
                                 " but is assigned to " + s(sol.assignment[v]));
    }
  }
  for (int v = 0; v < n; ++v) {
    if (visits[v] == 0) report("coverage", "target " + s(v) + " is never visited");
    else if (visits[v] > 1) report("coverage", "target " + s(v) + " is visited " + s(visits[v]) + " times");
  }

  if (static_cast<int>(sol.assignment.size()) != n) {
    report("assignment", "assignment has " + s(static_cast<int>(sol.assignment.size())) +
                             " entries, expected " + s(n));
  } else {
    for (int v = 0; v < n; ++v) {
      const int a = sol.assignment[v];
      if (!valid_index(a)) {
        report("assignment", "target " + s(v) + " assigned to bad index " + s(a));
        continue;
      }
      if (is_stop[v] && a != v) report("assignment", "stop " + s(v) + " must be assigned to itself");
      if (!is_stop[a]) report("assignment", "target " + s(v) + " assigned to non-stop " + s(a));
      if (!inst.comm_ok(v, a))
        report("comm-radius", "target " + s(v) + " is beyond radius of its stop " + s(a));
    }
  }

  // Costs are only meaningful on well-formed indices.
  bool indices_ok = std::all_of(tour.begin(), tour.end(), valid_index);
  for (const auto& [stop, cyc] : sol.subtours)
    indices_ok = indices_ok && std::all_of(cyc.begin(), cyc.end(), valid_index);
  if (indices_ok) {
    Solution fresh = sol;
    recompute_costs(inst, fresh, sol.penalty_total != 0.0);
    auto close = [](double a, double b) { return std::abs(a - b) <= kCostTol * std::max(1.0, std::abs(b)); };
    if (!close(sol.gv_cost_total, fresh.gv_cost_total))
      report("cost", "gv_cost_total " + std::to_string(sol.gv_cost_total) + " != " +
                         std::to_string(fresh.gv_cost_total));
    if (!close(sol.uav_cost_total, fresh.uav_cost_total))
      report("cost", "uav_cost_total " + std::to_string(sol.uav_cost_total) + " != " +
                         std::to_string(fresh.uav_cost_total));
    if (!close(sol.penalty_total, fresh.penalty_total))
      report("cost", "penalty_total inconsistent with the assignment");
    if (!close(sol.objective, sol.gv_cost_total + sol.uav_cost_total + sol.penalty_total))
      report("cost", "objective differs from the sum of its parts");
  }
  return out;
}

}  // namespace cagvrp

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace cagvrp {

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

// Row-major square matrix. Small enough (n <= a few dozen) that a flat
// vector is all we need.
template <typename T>
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(int n, T fill = T{}) : n_(n), data_(static_cast<size_t>(n) * n, fill) {}

  int size() const { return n_; }
  T& operator()(int i, int j) { return data_[static_cast<size_t>(i) * n_ + j]; }
  const T& operator()(int i, int j) const { return data_[static_cast<size_t>(i) * n_ + j]; }

  friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

 private:
  int n_ = 0;
  std::vector<T> data_;
};

using CostMatrix = SquareMatrix<double>;
// std::vector<bool> has no usable reference type; store bytes.
using FlagMatrix = SquareMatrix<std::uint8_t>;

// A CAGVRP instance. Immutable once built by one of the factory functions
// below, which establish the invariants checked by validate_instance().
struct Instance {
  std::string name;
  std::vector<Point> targets;
  int depot = 0;
  double radius = 50.0;
  double alpha = 0.1;
  CostMatrix gv_cost;   // ground vehicle, symmetric
  CostMatrix uav_cost;  // UAV, by ordered pair
  FlagMatrix comm_ok;   // comm_ok(i, j): target i may be served from stop j
  // True when gv_cost/uav_cost came from an instance file rather than from
  // the coordinates.
  bool explicit_gv_cost = false;
  bool explicit_uav_cost = false;

  int size() const { return static_cast<int>(targets.size()); }

  friend bool operator==(const Instance&, const Instance&) = default;
};

inline constexpr double kDefaultRadius = 50.0;
inline constexpr double kGridSide = 100.0;

// Throws std::invalid_argument naming the first violated invariant.
void validate_instance(const Instance& inst);

double euclidean_distance(Point a, Point b);

// Communication feasibility: closed ball of the given radius.
bool within_radius(double distance, double radius);

// Builds costs and comm_ok from coordinates: gv = l_ij, uav = alpha * l_ij,
// comm_ok = l_ij <= radius.
Instance euclidean_instance(std::vector<Point> points, int depot, double alpha, double radius,
                            std::string name = "euclidean");

// Samples n points uniformly in [0,100]^2 with std::mt19937_64 seeded by
// `seed`. Each coordinate consumes one 64-bit draw, mapped to [0,1) through its
// top 53 bits; draws are taken in the order x0, y0, x1, y1, ... so instances
// are bit-identical across platforms. The depot is target 0.
Instance generate_random(int n, std::uint64_t seed, double alpha, double radius);

// JSON instance files:
//   {"name": ..., "targets": [[x, y], ...], "depot": 0, "radius": R,
//    "alpha": a, "gv_cost": [[...]], "uav_cost": [[...]]}
// The cost matrices are optional and, when present, replace the Euclidean
// ones. Parse errors carry line/column context.
Instance load_instance(const std::filesystem::path& path);
Instance parse_instance(const std::string& text);
void save_instance(const Instance& inst, const std::filesystem::path& path);
std::string dump_instance(const Instance& inst);

}  // namespace cagvrp

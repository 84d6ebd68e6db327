#pragma once

#include <filesystem>
#include <string>

#include "cagvrp/instance.hpp"
#include "cagvrp/model.hpp"

namespace cagvrp {

// Solution document: {objective, gv_cost, uav_cost, penalty, gv_tour,
// subtours: {"<stop>": [...]}, assignment, stats?}.
std::string dump_solution(const Solution& sol);
Solution parse_solution(const std::string& text);
void save_solution(const Solution& sol, const std::filesystem::path& path);
Solution load_solution(const std::filesystem::path& path);

struct PlotOptions {
  bool radius_circles = false;
  double size = 600.0;  // pixels along the longer side
};

// Standalone SVG: targets as dots, the depot as a square, the ground tour as
// one solid closed polyline and each sub-tour as a dashed closed polyline.
std::string render_svg(const Instance& inst, const Solution* sol, const PlotOptions& options = {});

}  // namespace cagvrp

#include "cagvrp/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cagvrp/errors.hpp"

namespace cagvrp {

namespace {

using ojson = nlohmann::ordered_json;

ojson stats_to_json(const SolveStatistics& s) {
  ojson j;
  j["status"] = s.status;
  j["sec_cuts"] = s.sec_cuts();
  j["sec_x_cuts"] = s.sec_x_cuts;
  j["sec_w_cuts"] = s.sec_w_cuts;
  j["two_matching_cuts"] = s.two_matching_cuts;
  j["nodes"] = s.nodes_explored;
  j["lp_solves"] = s.lp_solves;
  j["simplex_iterations"] = s.simplex_iterations;
  j["max_depth"] = s.max_depth;
  j["cuts_shelved"] = s.cuts_shelved;
  j["cuts_reactivated"] = s.cuts_reactivated;
  // JSON has no infinity; an unbounded gap or bound is written as null.
  j["lower_bound"] = std::isfinite(s.lower_bound) ? ojson(s.lower_bound) : ojson();
  j["gap"] = std::isfinite(s.gap) ? ojson(s.gap) : ojson();
  j["wall_seconds"] = s.wall_seconds;
  return j;
}

double finite_or(const nlohmann::json& j, const char* key, double fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  return j[key].get<double>();
}

SolveStatistics stats_from_json(const nlohmann::json& j) {
  SolveStatistics s;
  s.status = j.value("status", "");
  s.sec_x_cuts = j.value("sec_x_cuts", 0LL);
  s.sec_w_cuts = j.value("sec_w_cuts", 0LL);
  s.two_matching_cuts = j.value("two_matching_cuts", 0LL);
  s.nodes_explored = j.value("nodes", 0LL);
  s.lp_solves = j.value("lp_solves", 0LL);
  s.simplex_iterations = j.value("simplex_iterations", 0LL);
  s.max_depth = j.value("max_depth", 0LL);
  s.cuts_shelved = j.value("cuts_shelved", 0LL);
  s.cuts_reactivated = j.value("cuts_reactivated", 0LL);
  s.lower_bound = finite_or(j, "lower_bound", -INFINITY);
  s.gap = finite_or(j, "gap", INFINITY);
  s.wall_seconds = j.value("wall_seconds", 0.0);
  return s;
}

}  // namespace

std::string dump_solution(const Solution& sol) {
  ojson doc;
  doc["objective"] = sol.objective;
  doc["gv_cost"] = sol.gv_cost_total;
  doc["uav_cost"] = sol.uav_cost_total;
  doc["penalty"] = sol.penalty_total;
  doc["gv_tour"] = sol.gv_tour;
  ojson subs = ojson::object();
  for (const auto& [stop, cyc] : sol.subtours) subs[std::to_string(stop)] = cyc;
  doc["subtours"] = subs;
  doc["assignment"] = sol.assignment;
  if (sol.stats) doc["stats"] = stats_to_json(*sol.stats);
  return doc.dump(2) + "\n";
}

Solution parse_solution(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("solution file: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("solution file: top level must be an object");
  Solution sol;
  try {
    sol.gv_tour = doc.at("gv_tour").get<std::vector<int>>();
    sol.assignment = doc.at("assignment").get<std::vector<int>>();
    if (doc.contains("subtours"))
      for (const auto& [key, cyc] : doc["subtours"].items()) {
        std::size_t used = 0;
        const int stop = std::stoi(key, &used);
        if (used != key.size()) throw ParseError("solution file: bad sub-tour key '" + key + "'");
        sol.subtours[stop] = cyc.get<std::vector<int>>();
      }
    sol.objective = doc.value("objective", 0.0);
    sol.gv_cost_total = doc.value("gv_cost", 0.0);
    sol.uav_cost_total = doc.value("uav_cost", 0.0);
    sol.penalty_total = doc.value("penalty", 0.0);
    if (doc.contains("stats")) sol.stats = stats_from_json(doc["stats"]);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("solution file: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw ParseError("solution file: sub-tour keys must be target indices");
  }
  return sol;
}

void save_solution(const Solution& sol, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << dump_solution(sol);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Solution load_solution(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_solution(buf.str());
}

std::string render_svg(const Instance& inst, const Solution* sol, const PlotOptions& options) {
  double lo_x = INFINITY, lo_y = INFINITY, hi_x = -INFINITY, hi_y = -INFINITY;
  for (const auto& p : inst.targets) {
    lo_x = std::min(lo_x, p.x);
    lo_y = std::min(lo_y, p.y);
    hi_x = std::max(hi_x, p.x);
    hi_y = std::max(hi_y, p.y);
  }
  if (options.radius_circles) {
    lo_x -= inst.radius;
    lo_y -= inst.radius;
    hi_x += inst.radius;
    hi_y += inst.radius;
  }
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-9});
  const double margin = 20.0;
  const double scale = (options.size - 2 * margin) / span;
  const double width = (hi_x - lo_x) * scale + 2 * margin;
  const double height = (hi_y - lo_y) * scale + 2 * margin;
  auto px = [&](int v) { return margin + (inst.targets[v].x - lo_x) * scale; };
  // SVG y grows downward.
  auto py = [&](int v) { return height - margin - (inst.targets[v].y - lo_y) * scale; };

  std::ostringstream svg;
  svg.setf(std::ios::fixed);
  svg.precision(2);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  svg << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  if (options.radius_circles) {
    std::vector<int> centers;
    if (sol) {
      for (int v : sol->gv_tour) centers.push_back(v);
    } else {
      for (int v = 0; v < inst.size(); ++v) centers.push_back(v);
    }
    for (int v : centers)
      svg << "  <circle class=\"radius\" cx=\"" << px(v) << "\" cy=\"" << py(v) << "\" r=\""
          << inst.radius * scale << "\" fill=\"none\" stroke=\"#bbbbbb\" stroke-width=\"0.5\"/>\n";
  }

  auto polyline = [&](const std::vector<int>& cyc, const char* cls, const char* extra) {
    svg << "  <polyline class=\"" << cls << "\" points=\"";
    for (int v : cyc) svg << px(v) << ',' << py(v) << ' ';
    svg << px(cyc.front()) << ',' << py(cyc.front());
    svg << "\" fill=\"none\" " << extra << "/>\n";
  };
  if (sol && !sol->gv_tour.empty()) {
    polyline(sol->gv_tour, "ground-tour", "stroke=\"black\" stroke-width=\"2\"");
    for (const auto& [stop, cyc] : sol->subtours)
      if (cyc.size() > 1)
        polyline(cyc, "subtour", "stroke=\"#1f6fb4\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\"");
  }

  for (int v = 0; v < inst.size(); ++v) {
    if (v == inst.depot) {
      svg << "  <rect class=\"depot\" x=\"" << px(v) - 6 << "\" y=\"" << py(v) - 6
          << "\" width=\"12\" height=\"12\" fill=\"#c0392b\"/>\n";
    } else {
      const bool stop = sol && v < static_cast<int>(sol->assignment.size()) && sol->assignment[v] == v;
      svg << "  <circle class=\"target\" cx=\"" << px(v) << "\" cy=\"" << py(v) << "\" r=\"4\" fill=\""
          << (stop ? "black" : "#1f6fb4") << "\"/>\n";
    }
    svg << "  <text x=\"" << px(v) + 6 << "\" y=\"" << py(v) - 6
        << "\" font-size=\"10\" font-family=\"sans-serif\">" << v << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace cagvrp

#include "cagvrp/instance.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "cagvrp/errors.hpp"

namespace cagvrp {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("invalid instance: " + what);
}

double unit_draw(std::mt19937_64& rng) {
  // Top 53 bits -> [0, 1).
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

CostMatrix matrix_from_json(const nlohmann::json& j, int n, const char* field) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    throw std::invalid_argument(std::string("invalid instance: ") + field + " must be an " +
                                std::to_string(n) + "x" + std::to_string(n) + " array");
  CostMatrix m(n);
  for (int i = 0; i < n; ++i) {
    const auto& row = j[i];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw std::invalid_argument(std::string("invalid instance: ") + field + " row " +
                                  std::to_string(i) + " must have " + std::to_string(n) +
                                  " entries");
    for (int k = 0; k < n; ++k) {
      if (!row[k].is_number())
        throw std::invalid_argument(std::string("invalid instance: ") + field + " entry (" +
                                    std::to_string(i) + "," + std::to_string(k) +
                                    ") is not a number");
      m(i, k) = row[k].get<double>();
    }
  }
  return m;
}

nlohmann::json matrix_to_json(const CostMatrix& m) {
  auto out = nlohmann::json::array();
  for (int i = 0; i < m.size(); ++i) {
    auto row = nlohmann::json::array();
    for (int k = 0; k < m.size(); ++k) row.push_back(m(i, k));
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

double euclidean_distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

bool within_radius(double distance, double radius) { return distance <= radius; }

void validate_instance(const Instance& inst) {
  const int n = inst.size();
  require(n >= 3, "targets: n >= 3 required (got " + std::to_string(n) + ")");
  for (int i = 0; i < n; ++i)
    require(std::isfinite(inst.targets[i].x) && std::isfinite(inst.targets[i].y),
            "targets: coordinate of target " + std::to_string(i) + " is not finite");
  require(inst.depot >= 0 && inst.depot < n, "depot: index out of range");
  require(std::isfinite(inst.radius) && inst.radius > 0, "radius: must be positive and finite");
  require(std::isfinite(inst.alpha) && inst.alpha > 0, "alpha: must be positive and finite");
  require(inst.gv_cost.size() == n, "gv_cost: dimension mismatch");
  require(inst.uav_cost.size() == n, "uav_cost: dimension mismatch");
  require(inst.comm_ok.size() == n, "comm_ok: dimension mismatch");
  for (int i = 0; i < n; ++i) {
    require(inst.gv_cost(i, i) == 0.0, "gv_cost: nonzero diagonal at " + std::to_string(i));
    require(inst.uav_cost(i, i) == 0.0, "uav_cost: nonzero diagonal at " + std::to_string(i));
    require(inst.comm_ok(i, i) != 0, "comm_ok: diagonal must be true");
    for (int j = 0; j < n; ++j) {
      const std::string at = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
      require(std::isfinite(inst.gv_cost(i, j)) && inst.gv_cost(i, j) >= 0,
              "gv_cost: negative or non-finite entry at " + at);
      require(inst.gv_cost(i, j) == inst.gv_cost(j, i), "gv_cost: not symmetric at " + at);
      require(std::isfinite(inst.uav_cost(i, j)) && inst.uav_cost(i, j) >= 0,
              "uav_cost: negative or non-finite entry at " + at);
    }
  }
}

Instance euclidean_instance(std::vector<Point> points, int depot, double alpha, double radius,
                            std::string name) {
  const int n = static_cast<int>(points.size());
  require(n >= 3, "targets: n >= 3 required (got " + std::to_string(n) + ")");
  for (int i = 0; i < n; ++i)
    require(std::isfinite(points[i].x) && std::isfinite(points[i].y),
            "targets: coordinate of target " + std::to_string(i) + " is not finite");

  Instance inst;
  inst.name = std::move(name);
  inst.targets = std::move(points);
  inst.depot = depot;
  inst.alpha = alpha;
  inst.radius = radius;
  inst.gv_cost = CostMatrix(n, 0.0);
  inst.uav_cost = CostMatrix(n, 0.0);
  inst.comm_ok = FlagMatrix(n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double l = i == j ? 0.0 : euclidean_distance(inst.targets[i], inst.targets[j]);
      inst.gv_cost(i, j) = l;
      inst.uav_cost(i, j) = alpha * l;
      inst.comm_ok(i, j) = within_radius(l, radius) ? 1 : 0;
    }
  }
  validate_instance(inst);
  return inst;
}

Instance generate_random(int n, std::uint64_t seed, double alpha, double radius) {
  if (n < 3) throw std::invalid_argument("generate_random: n >= 3 required");
  if (!(alpha > 0)) throw std::invalid_argument("generate_random: alpha must be positive");
  if (!(radius > 0)) throw std::invalid_argument("generate_random: radius must be positive");
  std::mt19937_64 rng(seed);
  std::vector<Point> pts(n);
  for (auto& p : pts) {
    p.x = kGridSide * unit_draw(rng);
    p.y = kGridSide * unit_draw(rng);
  }
  std::ostringstream name;
  name << "rand-n" << n << "-s" << seed;
  return euclidean_instance(std::move(pts), 0, alpha, radius, name.str());
}

Instance parse_instance(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("instance file: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("instance file: top level must be an object");
  try {
    if (!doc.contains("targets")) throw std::invalid_argument("invalid instance: targets missing");
    std::vector<Point> pts;
    for (const auto& p : doc.at("targets")) {
      if (!p.is_array() || p.size() != 2)
        throw std::invalid_argument("invalid instance: targets entries must be [x, y]");
      pts.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    const int depot = doc.value("depot", 0);
    const double radius = doc.value("radius", kDefaultRadius);
    const double alpha = doc.value("alpha", 0.1);
    const std::string name = doc.value("name", std::string("instance"));
    Instance inst = euclidean_instance(std::move(pts), depot, alpha, radius, name);
    const int n = inst.size();
    if (doc.contains("gv_cost")) {
      inst.gv_cost = matrix_from_json(doc["gv_cost"], n, "gv_cost");
      inst.explicit_gv_cost = true;
    }
    if (doc.contains("uav_cost")) {
      inst.uav_cost = matrix_from_json(doc["uav_cost"], n, "uav_cost");
      inst.explicit_uav_cost = true;
    }
    validate_instance(inst);
    return inst;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("instance file: ") + e.what());
  }
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

std::string dump_instance(const Instance& inst) {
  nlohmann::ordered_json doc;
  doc["name"] = inst.name;
  auto pts = nlohmann::json::array();
  for (const auto& p : inst.targets) pts.push_back({p.x, p.y});
  doc["targets"] = pts;
  doc["depot"] = inst.depot;
  doc["radius"] = inst.radius;
  doc["alpha"] = inst.alpha;
  if (inst.explicit_gv_cost) doc["gv_cost"] = matrix_to_json(inst.gv_cost);
  if (inst.explicit_uav_cost) doc["uav_cost"] = matrix_to_json(inst.uav_cost);
  return doc.dump(2) + "\n";
}

void save_instance(const Instance& inst, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write instance file " + path.string());
  out << dump_instance(inst);
}

}  // namespace cagvrp

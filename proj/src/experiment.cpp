#include "cagvrp/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "cagvrp/engine.hpp"
#include "cagvrp/instance.hpp"
#include "cagvrp/io.hpp"

namespace cagvrp {

namespace fs = std::filesystem;

void check_spec(const ExperimentSpec& spec) {
  if (spec.sizes.empty()) throw std::invalid_argument("experiment: no target counts given");
  if (spec.alphas.empty()) throw std::invalid_argument("experiment: no alpha values given");
  if (spec.seeds.empty()) throw std::invalid_argument("experiment: empty seed range");
  for (int n : spec.sizes)
    if (n < 3) throw std::invalid_argument("experiment: n must be >= 3");
  for (double a : spec.alphas)
    if (!(a > 0)) throw std::invalid_argument("experiment: alpha must be positive");
  if (!(spec.radius > 0)) throw std::invalid_argument("experiment: radius must be positive");
  if (!(spec.time_limit > 0)) throw std::invalid_argument("experiment: time limit must be positive");
  if (spec.out_dir.empty()) throw std::invalid_argument("experiment: output directory required");
}

std::vector<std::uint64_t> parse_seed_range(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (s.empty() || used != s.size() || s[0] == '-')
      throw std::invalid_argument("bad seed '" + s + "' in '" + text + "'");
    return static_cast<std::uint64_t>(v);
  };
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    const auto dash = part.find('-');
    if (dash == std::string::npos) {
      seeds.push_back(number(part));
      continue;
    }
    const auto lo = number(part.substr(0, dash));
    const auto hi = number(part.substr(dash + 1));
    if (hi < lo) throw std::invalid_argument("empty seed range '" + part + "'");
    for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
  }
  if (seeds.empty()) throw std::invalid_argument("empty seed range");
  return seeds;
}

std::string run_record_name(int n, double alpha, std::uint64_t seed) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "n%d-a%.2f-s%llu", n, alpha, static_cast<unsigned long long>(seed));
  return buf;
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
  // Write then rename so an interrupted run never leaves a truncated file.
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
  }
  fs::rename(tmp, path);
}

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return nlohmann::json::parse(in);
}

}  // namespace

std::vector<CellSummary> summarize_runs(const fs::path& runs_dir) {
  struct Acc {
    CellSummary cell;
    double cost = 0, gv = 0, uav = 0, cuts = 0, nodes = 0, secs = 0;
  };
  std::map<std::pair<int, double>, Acc> cells;
  if (!fs::exists(runs_dir)) return {};
  std::vector<fs::path> records;
  for (const auto& entry : fs::directory_iterator(runs_dir))
    if (entry.path().extension() == ".json" && entry.path().stem().extension() == ".run")
      records.push_back(entry.path());
  std::sort(records.begin(), records.end());
  for (const auto& path : records) {
    const auto rec = read_json(path);
    const int n = rec.at("n").get<int>();
    const double alpha = rec.at("alpha").get<double>();
    auto& acc = cells[{n, alpha}];
    acc.cell.n = n;
    acc.cell.alpha = alpha;
    ++acc.cell.runs;
    acc.secs += rec.at("wall_seconds").get<double>();
    if (rec.at("status").get<std::string>() != "optimal") continue;
    const Solution sol = load_solution(runs_dir / rec.at("solution_file").get<std::string>());
    ++acc.cell.solved;
    acc.cost += sol.objective;
    acc.gv += sol.gv_cost_total;
    acc.uav += sol.uav_cost_total;
    if (sol.stats) {
      acc.cuts += static_cast<double>(sol.stats->sec_cuts());
      acc.nodes += static_cast<double>(sol.stats->nodes_explored);
    }
  }
  std::vector<CellSummary> out;
  for (auto& [key, acc] : cells) {
    CellSummary c = acc.cell;
    if (c.solved > 0) {
      c.avg_cost = acc.cost / c.solved;
      c.avg_gv_cost = acc.gv / c.solved;
      c.avg_uav_cost = acc.uav / c.solved;
      c.avg_sec_cuts = acc.cuts / c.solved;
      c.avg_nodes = acc.nodes / c.solved;
    }
    c.avg_seconds = acc.secs / c.runs;
    out.push_back(c);
  }
  return out;
}

std::string format_table(const std::vector<CellSummary>& cells) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%4s %6s %5s %7s %11s %11s %11s %10s %10s %10s\n", "n", "alpha", "runs",
                "solved", "avg_cost", "avg_gv", "avg_uav", "sec_cuts", "nodes", "seconds");
  out += line;
  for (const auto& c : cells) {
    std::snprintf(line, sizeof line, "%4d %6.2f %5d %7d %11.2f %11.2f %11.2f %10.1f %10.1f %10.2f\n", c.n,
                  c.alpha, c.runs, c.solved, c.avg_cost, c.avg_gv_cost, c.avg_uav_cost, c.avg_sec_cuts,
                  c.avg_nodes, c.avg_seconds);
    out += line;
  }
  return out;
}

std::string summary_json(const std::vector<CellSummary>& cells) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : cells) {
    nlohmann::ordered_json j;
    j["n"] = c.n;
    j["alpha"] = c.alpha;
    j["runs"] = c.runs;
    j["solved"] = c.solved;
    j["avg_cost"] = c.avg_cost;
    j["avg_gv_cost"] = c.avg_gv_cost;
    j["avg_uav_cost"] = c.avg_uav_cost;
    j["avg_sec_cuts"] = c.avg_sec_cuts;
    j["avg_nodes"] = c.avg_nodes;
    j["avg_seconds"] = c.avg_seconds;
    arr.push_back(j);
  }
  return arr.dump(2) + "\n";
}

std::vector<CellSummary> run_experiment(const ExperimentSpec& spec,
                                        const std::function<void(const std::string&)>& progress) {
  check_spec(spec);
  const fs::path runs = spec.out_dir / "runs";
  fs::create_directories(runs);
  auto refresh = [&] {
    const auto cells = summarize_runs(runs);
    write_text(spec.out_dir / "summary.txt", format_table(cells));
    write_text(spec.out_dir / "summary.json", summary_json(cells));
    return cells;
  };
  for (int n : spec.sizes)
    for (double alpha : spec.alphas)
      for (auto seed : spec.seeds) {
        const std::string name = run_record_name(n, alpha, seed);
        const fs::path record = runs / (name + ".run.json");
        if (spec.resume && fs::exists(record)) {
          if (progress) progress(name + " kept");
          continue;
        }
        const Instance inst = generate_random(n, seed, alpha, spec.radius);
        save_instance(inst, runs / (name + ".instance.json"));
        SolveParams params;
        params.time_limit = spec.time_limit;
        const SolveResult res = solve(inst, params);
        nlohmann::ordered_json rec;
        rec["n"] = n;
        rec["alpha"] = alpha;
        rec["seed"] = seed;
        rec["radius"] = spec.radius;
        rec["status"] = to_string(res.status);
        rec["wall_seconds"] = res.stats.wall_seconds;
        rec["instance_file"] = name + ".instance.json";
        if (res.solution) {
          save_solution(*res.solution, runs / (name + ".solution.json"));
          rec["solution_file"] = name + ".solution.json";
        }
        write_text(record, rec.dump(2) + "\n");
        refresh();
        if (progress) {
          char buf[160];
          std::snprintf(buf, sizeof buf, "%s %s objective=%.6f nodes=%lld seconds=%.2f", name.c_str(),
                        to_string(res.status), res.solution ? res.solution->objective : NAN,
                        res.stats.nodes_explored, res.stats.wall_seconds);
          progress(buf);
        }
      }
  return refresh();
}

}  // namespace cagvrp

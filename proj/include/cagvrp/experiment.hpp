#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace cagvrp {

struct ExperimentSpec {
  std::vector<int> sizes;
  std::vector<double> alphas;
  std::vector<std::uint64_t> seeds;
  double radius = 50.0;
  double time_limit = 9000.0;
  std::filesystem::path out_dir;
  // Keep run records already present in out_dir instead of solving again.
  bool resume = true;
};

// Throws std::invalid_argument naming the offending field.
void check_spec(const ExperimentSpec& spec);

// "0-4" or "1,3,7"; an empty range such as "5-4" is an error.
std::vector<std::uint64_t> parse_seed_range(const std::string& text);

struct CellSummary {
  int n = 0;
  double alpha = 0.0;
  int runs = 0;
  int solved = 0;  // proven optimal
  double avg_cost = 0.0;
  double avg_gv_cost = 0.0;
  double avg_uav_cost = 0.0;
  double avg_sec_cuts = 0.0;
  double avg_nodes = 0.0;
  double avg_seconds = 0.0;
};

// File name of the run record for one (n, alpha, seed) cell entry.
std::string run_record_name(int n, double alpha, std::uint64_t seed);

// Solves every cell, writing runs/<record>.json (plus the instance and
// solution files) after each run and refreshing summary.txt/summary.json.
// `progress` receives one line per finished run.
std::vector<CellSummary> run_experiment(const ExperimentSpec& spec,
                                        const std::function<void(const std::string&)>& progress = {});

// Recomputes the per-cell table from the run records in `runs_dir`.
// Costs, cuts and nodes average over the optimally solved runs; time over all.
std::vector<CellSummary> summarize_runs(const std::filesystem::path& runs_dir);

std::string format_table(const std::vector<CellSummary>& cells);
std::string summary_json(const std::vector<CellSummary>& cells);

}  // namespace cagvrp

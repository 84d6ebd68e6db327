#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "cagvrp/engine.hpp"
#include "cagvrp/errors.hpp"
#include "cagvrp/experiment.hpp"
#include "cagvrp/instance.hpp"
#include "cagvrp/io.hpp"
#include "cagvrp/oracle.hpp"

namespace {

using namespace cagvrp;

enum Exit { kOk = 0, kFailure = 1, kTimeout = 2, kInfeasible = 3, kNoSolution = 4 };

struct Globals {
  bool quiet = false;
  std::uint64_t seed = 0;
  std::string out;
};

void write_or_print(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

void print_solution_summary(const Solution& sol) {
  std::printf("objective: %.6f\ngv_cost: %.6f\nuav_cost: %.6f\n", sol.objective, sol.gv_cost_total,
              sol.uav_cost_total);
  std::printf("gv_tour:");
  for (int v : sol.gv_tour) std::printf(" %d", v);
  std::printf("\n");
  for (const auto& [stop, cyc] : sol.subtours) {
    std::printf("subtour %d:", stop);
    for (int v : cyc) std::printf(" %d", v);
    std::printf("\n");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact solver for the cooperative air-ground vehicle routing problem"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_flag("--quiet,-q", g.quiet, "Only report errors");
  app.add_option("--seed", g.seed, "Random seed (generate)");
  app.add_option("--out,-o", g.out, "Output file or directory");

  // generate
  auto* gen = app.add_subcommand("generate", "Write a random instance on the 100x100 grid");
  int gen_n = 10;
  double gen_alpha = 0.1, gen_radius = 50.0;
  gen->add_option("--n", gen_n, "Number of targets")->required();
  gen->add_option("--seed", g.seed, "Random seed");
  gen->add_option("--alpha", gen_alpha, "UAV cost scale")->capture_default_str();
  gen->add_option("--radius", gen_radius, "Communication radius")->capture_default_str();
  gen->add_option("--out,-o", g.out, "Instance file (default: stdout)");

  // solve
  auto* sol_cmd = app.add_subcommand("solve", "Solve an instance with branch-and-cut");
  std::string instance_path, warm_path, log_path;
  double time_limit = 9000.0;
  long long node_limit = 0;
  bool penalty_mode = false;
  sol_cmd->add_option("--instance,-i", instance_path, "Instance file")->required()->check(CLI::ExistingFile);
  sol_cmd->add_option("--time-limit", time_limit, "Seconds")->capture_default_str()->check(CLI::PositiveNumber);
  sol_cmd->add_option("--node-limit", node_limit, "Stop after this many nodes (0: none)");
  sol_cmd->add_option("--out,-o", g.out, "Solution file");
  sol_cmd->add_option("--log-cuts", log_path, "Write one line per node and per cut ('-' for stderr)");
  sol_cmd->add_flag("--penalty-mode", penalty_mode, "Penalize comm-infeasible assignments instead of forbidding them");
  sol_cmd->add_option("--warm-start", warm_path, "Feasible solution used as the initial incumbent")
      ->check(CLI::ExistingFile);

  // validate
  auto* val = app.add_subcommand("validate", "Check a solution against an instance");
  std::string solution_path;
  val->add_option("--instance,-i", instance_path, "Instance file")->required()->check(CLI::ExistingFile);
  val->add_option("--solution,-s", solution_path, "Solution file")->required()->check(CLI::ExistingFile);

  // oracle
  auto* orc = app.add_subcommand("oracle", "Solve a small instance (n <= 10) by exhaustive search");
  orc->add_option("--instance,-i", instance_path, "Instance file")->required()->check(CLI::ExistingFile);
  orc->add_option("--out,-o", g.out, "Solution file");

  // plot
  auto* plot = app.add_subcommand("plot", "Render an instance and optional solution as SVG");
  bool circles = false;
  plot->add_option("--instance,-i", instance_path, "Instance file")->required()->check(CLI::ExistingFile);
  plot->add_option("--solution,-s", solution_path, "Solution file")->check(CLI::ExistingFile);
  plot->add_option("--out,-o", g.out, "SVG file (default: stdout)");
  plot->add_flag("--radius-circles", circles, "Draw the communication radius around every stop");

  // experiment
  auto* exp = app.add_subcommand("experiment", "Batch runs over (n, alpha, seed) with a summary table");
  ExperimentSpec spec;
  std::string seeds = "0-4";
  bool fresh = false;
  exp->add_option("--n", spec.sizes, "Target counts")->required()->delimiter(',');
  exp->add_option("--alpha", spec.alphas, "Alpha values")->delimiter(',')->default_str("0.1,0.2,0.3");
  exp->add_option("--seeds", seeds, "Seed range, e.g. 0-4 or 1,5,9")->capture_default_str();
  exp->add_option("--radius", spec.radius, "Communication radius")->capture_default_str();
  exp->add_option("--time-limit", spec.time_limit, "Seconds per run")->capture_default_str();
  exp->add_option("--out,-o", g.out, "Output directory")->required();
  exp->add_flag("--fresh", fresh, "Re-solve runs that already have a record");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const Instance inst = generate_random(gen_n, g.seed, gen_alpha, gen_radius);
      write_or_print(g.out, dump_instance(inst));
      if (!g.quiet && !g.out.empty()) std::fprintf(stderr, "wrote %s\n", g.out.c_str());
      return kOk;
    }

    if (*sol_cmd) {
      const Instance inst = load_instance(instance_path);
      SolveParams params;
      params.time_limit = time_limit;
      if (node_limit > 0) params.node_limit = node_limit;
      params.penalty_mode = penalty_mode;
      if (!warm_path.empty()) params.warm_start = load_solution(warm_path);
      std::unique_ptr<std::ofstream> log_file;
      if (log_path == "-") {
        params.cut_log = &std::cerr;
      } else if (!log_path.empty()) {
        log_file = std::make_unique<std::ofstream>(log_path);
        if (!*log_file) throw std::runtime_error("cannot write " + log_path);
        params.cut_log = log_file.get();
      }
      const SolveResult res = solve(inst, params);
      if (res.solution && !g.out.empty()) save_solution(*res.solution, g.out);
      if (!g.quiet) {
        if (res.solution) print_solution_summary(*res.solution);
        std::cout << statistics_block(res.stats, true);
      }
      switch (res.status) {
        case SolveStatus::kOptimal: return kOk;
        case SolveStatus::kInfeasible:
          std::fprintf(stderr, "infeasible: %s", res.message.c_str());
          if (res.witness) std::fprintf(stderr, " (target %d cannot reach any stop)", *res.witness);
          std::fprintf(stderr, "\n");
          return kInfeasible;
        case SolveStatus::kTimeLimit:
        case SolveStatus::kNodeLimit:
          return res.solution ? kTimeout : kNoSolution;
        case SolveStatus::kNodeFailure: return kFailure;
      }
      return kFailure;
    }

    if (*val) {
      const Instance inst = load_instance(instance_path);
      const Solution sol = load_solution(solution_path);
      const auto report = validate(inst, sol);
      for (const auto& v : report) std::printf("%s: %s\n", v.kind.c_str(), v.message.c_str());
      if (report.empty() && !g.quiet) std::printf("ok\n");
      return report.empty() ? kOk : kFailure;
    }

    if (*orc) {
      const Instance inst = load_instance(instance_path);
      const OracleResult res = brute_force(inst);
      if (res.two_stop_binds())
        std::fprintf(stderr, "note: a two-stop ground tour would cost %.6f; tours need at least three stops\n",
                     res.two_stop_objective);
      if (!res.feasible) {
        std::fprintf(stderr, "infeasible: no stop set reaches every target\n");
        return kInfeasible;
      }
      if (!g.out.empty()) save_solution(res.solution, g.out);
      if (!g.quiet) {
        print_solution_summary(res.solution);
        std::printf("structures: %lld\n", static_cast<long long>(res.structures));
      }
      return kOk;
    }

    if (*plot) {
      const Instance inst = load_instance(instance_path);
      std::optional<Solution> sol;
      if (!solution_path.empty()) sol = load_solution(solution_path);
      PlotOptions opt;
      opt.radius_circles = circles;
      write_or_print(g.out, render_svg(inst, sol ? &*sol : nullptr, opt));
      return kOk;
    }

    if (*exp) {
      if (spec.alphas.empty()) spec.alphas = {0.1, 0.2, 0.3};
      spec.seeds = parse_seed_range(seeds);
      spec.out_dir = g.out;
      spec.resume = !fresh;
      const auto cells = run_experiment(spec, [&](const std::string& line) {
        if (!g.quiet) std::fprintf(stderr, "%s\n", line.c_str());
      });
      if (!g.quiet) std::cout << format_table(cells);
      return kOk;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kFailure;
  }
  return kFailure;
}

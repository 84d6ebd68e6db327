#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "cagvrp/engine.hpp"
#include "cagvrp/errors.hpp"
#include "cagvrp/instance.hpp"
#include "cagvrp/io.hpp"
#include "cagvrp/model.hpp"
#include "cagvrp/oracle.hpp"

namespace py = pybind11;
using namespace cagvrp;

namespace {

std::vector<std::vector<double>> to_rows(const CostMatrix& m) {
  std::vector<std::vector<double>> out(m.size(), std::vector<double>(m.size()));
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) out[i][j] = m(i, j);
  return out;
}

py::dict stats_dict(const SolveStatistics& s) {
  py::dict d;
  d["status"] = s.status;
  d["sec_x_cuts"] = s.sec_x_cuts;
  d["sec_w_cuts"] = s.sec_w_cuts;
  d["two_matching_cuts"] = s.two_matching_cuts;
  d["nodes"] = s.nodes_explored;
  d["lp_solves"] = s.lp_solves;
  d["simplex_iterations"] = s.simplex_iterations;
  d["max_depth"] = s.max_depth;
  d["cuts_shelved"] = s.cuts_shelved;
  d["cuts_reactivated"] = s.cuts_reactivated;
  d["lower_bound"] = s.lower_bound;
  d["gap"] = s.gap;
  d["wall_seconds"] = s.wall_seconds;
  return d;
}

}  // namespace

PYBIND11_MODULE(_cagvrp, m) {
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<Instance>(m, "Instance")
      .def_readonly("name", &Instance::name)
      .def_readonly("depot", &Instance::depot)
      .def_readonly("radius", &Instance::radius)
      .def_readonly("alpha", &Instance::alpha)
      .def_property_readonly("n", &Instance::size)
      .def_property_readonly("targets",
                             [](const Instance& i) {
                               std::vector<std::pair<double, double>> out;
                               for (const auto& p : i.targets) out.emplace_back(p.x, p.y);
                               return out;
                             })
      .def_property_readonly("gv_cost", [](const Instance& i) { return to_rows(i.gv_cost); })
      .def_property_readonly("uav_cost", [](const Instance& i) { return to_rows(i.uav_cost); })
      .def("comm_ok", [](const Instance& i, int a, int b) { return i.comm_ok(a, b) != 0; })
      .def("to_json", &dump_instance)
      .def("__repr__", [](const Instance& i) {
        return "<Instance " + i.name + " n=" + std::to_string(i.size()) + ">";
      });

  py::class_<Solution>(m, "Solution")
      .def_readonly("gv_tour", &Solution::gv_tour)
      .def_readonly("subtours", &Solution::subtours)
      .def_readonly("assignment", &Solution::assignment)
      .def_readonly("gv_cost", &Solution::gv_cost_total)
      .def_readonly("uav_cost", &Solution::uav_cost_total)
      .def_readonly("penalty", &Solution::penalty_total)
      .def_readonly("objective", &Solution::objective)
      .def("to_json", &dump_solution);

  m.def("generate_random", &generate_random, py::arg("n"), py::arg("seed"), py::arg("alpha") = 0.1,
        py::arg("radius") = kDefaultRadius);
  m.def(
      "euclidean_instance",
      [](const std::vector<std::pair<double, double>>& pts, int depot, double alpha, double radius,
         std::string name) {
        std::vector<Point> points;
        for (const auto& [x, y] : pts) points.push_back({x, y});
        return euclidean_instance(std::move(points), depot, alpha, radius, std::move(name));
      },
      py::arg("points"), py::arg("depot") = 0, py::arg("alpha") = 0.1, py::arg("radius") = kDefaultRadius,
      py::arg("name") = "euclidean");
  m.def("load_instance", &load_instance, py::arg("path"));
  m.def("parse_instance", &parse_instance, py::arg("text"));
  m.def("save_instance", &save_instance, py::arg("instance"), py::arg("path"));
  m.def("parse_solution", &parse_solution, py::arg("text"));
  m.def("load_solution", &load_solution, py::arg("path"));

  m.def(
      "validate",
      [](const Instance& inst, const Solution& sol) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& v : validate(inst, sol)) out.emplace_back(v.kind, v.message);
        return out;
      },
      py::arg("instance"), py::arg("solution"));

  m.def(
      "brute_force",
      [](const Instance& inst) -> std::optional<Solution> {
        OracleResult res;
        {
          py::gil_scoped_release release;
          res = brute_force(inst);
        }
        if (!res.feasible) return std::nullopt;
        return res.solution;
      },
      py::arg("instance"));

  m.def(
      "solve",
      [](const Instance& inst, double time_limit, std::optional<long long> node_limit, bool penalty_mode,
         std::optional<Solution> warm_start) {
        SolveParams params;
        params.time_limit = time_limit;
        params.node_limit = node_limit;
        params.penalty_mode = penalty_mode;
        params.warm_start = std::move(warm_start);
        SolveResult res;
        {
          py::gil_scoped_release release;
          res = solve(inst, params);
        }
        py::dict out;
        out["status"] = std::string(to_string(res.status));
        out["solution"] = res.solution ? py::cast(*res.solution) : py::none();
        out["lower_bound"] = res.lower_bound;
        out["gap"] = res.gap;
        out["stats"] = stats_dict(res.stats);
        out["message"] = res.message;
        return out;
      },
      py::arg("instance"), py::kw_only(), py::arg("time_limit") = 9000.0, py::arg("node_limit") = py::none(),
      py::arg("penalty_mode") = false, py::arg("warm_start") = py::none());

  m.def(
      "render_svg",
      [](const Instance& inst, const std::optional<Solution>& sol, bool radius_circles) {
        PlotOptions opts;
        opts.radius_circles = radius_circles;
        return render_svg(inst, sol ? &*sol : nullptr, opts);
      },
      py::arg("instance"), py::arg("solution") = py::none(), py::arg("radius_circles") = false);
}

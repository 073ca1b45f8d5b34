#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "loopgerbe/centext.hpp"
#include "loopgerbe/gerbe.hpp"
#include "loopgerbe/runner.hpp"

namespace py = pybind11;
using namespace loopgerbe;

namespace {

using Dense = Eigen::MatrixXcd;

const SpecialUnitary& group_of(const std::string& name) {
  if (name == "su2") return SpecialUnitary::su2();
  if (name == "su3") return SpecialUnitary::su3();
  throw UsageError("group must be su2 or su3");
}

AlgebraElement to_algebra(const Dense& m) {
  if (algebra_defect(m) > 1e-10) throw DomainError("matrix is not in su(n)");
  return AlgebraElement(Matrix(m));
}

GroupElement to_group(const Dense& m) {
  if (group_defect(m) > 1e-10) throw DomainError("matrix is not in SU(n)");
  return GroupElement(Matrix(m));
}

LoopVector to_loop_vector(const std::vector<Dense>& samples) {
  const ThetaGrid grid = ThetaGrid::periodic(static_cast<int>(samples.size()));
  std::vector<AlgebraElement> values;
  for (const auto& m : samples) values.push_back(to_algebra(m));
  return LoopVector(grid, values);
}

LoopPoint to_loop(const std::vector<Dense>& samples) {
  const ThetaGrid grid = ThetaGrid::periodic(static_cast<int>(samples.size()));
  std::vector<GroupElement> values;
  for (const auto& m : samples) values.push_back(to_group(m));
  return LoopPoint(grid, values);
}

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  if (!text.empty()) {
    try {
      apply_json(c, nlohmann::json::parse(text));
    } catch (const nlohmann::json::parse_error& e) {
      throw UsageError(std::string("config: ") + e.what());
    }
  }
  c.validate();
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Loop-group central extensions, lifting bundle gerbes and calorons";
  m.attr("REPORT_VERSION") = kReportVersion;

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<UsageError>(m, "UsageError", base.ptr());
  py::register_exception<ConventionError>(m, "ConventionError", base.ptr());

  m.def("basis", [](const std::string& group) {
    std::vector<Dense> out;
    for (const auto& e : group_of(group).basis()) out.push_back(e.m);
    return out;
  }, py::arg("group") = "su2");
  m.def("exp", [](const Dense& x, double t) -> Dense { return exp_alg(to_algebra(x), t).m; }, py::arg("x"),
        py::arg("t") = 1.0);
  m.def("inner", [](const Dense& x, const Dense& y) { return inner(to_algebra(x), to_algebra(y)); });
  m.def("bracket", [](const Dense& x, const Dense& y) -> Dense { return bracket(to_algebra(x), to_algebra(y)).m; });
  m.def("adjoint", [](const Dense& g, const Dense& x) -> Dense { return adjoint(to_group(g), to_algebra(x)).m; });

  m.def("omega3", [](const Dense& k, const Dense& u, const Dense& v, const Dense& w) {
    return omega3(to_group(k), to_algebra(u), to_algebra(v), to_algebra(w));
  }, "omega3 at k on left-trivialised tangents.");
  m.def("omega3_volume", &omega3_volume, py::arg("n") = 24);

  m.def("eval_R", [](const std::vector<Dense>& x, const std::vector<Dense>& y) {
    const LoopVector lx = to_loop_vector(x), ly = to_loop_vector(y);
    return eval_R(LoopPoint::identity(lx.grid(), lx.n()), lx, ly);
  }, "R on two loop vectors sampled on a uniform periodic grid.");
  m.def("eval_alpha", [](const std::vector<Dense>& h, const std::vector<Dense>& xg) {
    const LoopPoint lh = to_loop(h);
    return eval_alpha(LoopPoint::identity(lh.grid(), lh.n()), lh, to_loop_vector(xg), LoopVector::zero(lh.grid(), lh.n()));
  }, "alpha(g, h)(Xg, Xh); independent of g and Xh.");
  m.def("gomi_cocycle_Z", [](const std::vector<Dense>& g, const std::vector<Dense>& x) {
    return gomi_cocycle_Z(to_loop(g), to_loop_vector(x));
  });

  m.def("splitmix64", &splitmix64);
  m.def("list_checks", [] {
    std::vector<py::dict> out;
    for (const auto& c : list_checks())
      out.push_back(py::dict(py::arg("name") = c.name, py::arg("tag") = c.tag, py::arg("suite") = c.suite,
                             py::arg("tol") = c.tol));
    return out;
  });
  m.def("equation_registry", [] { return equation_registry(); });
  m.def("run_check", [](const std::string& name, const std::string& config) {
    const RunConfig c = parse_config(config);
    py::gil_scoped_release release;
    return run_check(name, c);
  }, py::arg("name"), py::arg("config") = "");
  m.def("run", [](const std::string& config) {
    const RunConfig c = parse_config(config);
    Report r;
    {
      py::gil_scoped_release release;
      r = run(c);
    }
    return to_json(r).dump();
  }, py::arg("config") = "", "Runs the configured suites and returns the JSON report text.");
}

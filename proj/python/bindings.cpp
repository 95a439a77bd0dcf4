#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cbdrs/acceptance.hpp"
#include "cbdrs/cloud.hpp"
#include "cbdrs/config.hpp"
#include "cbdrs/drs.hpp"
#include "cbdrs/switch_optim.hpp"

namespace py = pybind11;
using namespace cbdrs;

namespace {

using Point = std::pair<double, double>;

Point to_py(Vec2 v) { return {v.x, v.y}; }
Vec2 from_py(const Point& p) { return {p.first, p.second}; }

std::vector<Point> to_py(const std::vector<Vec2>& pts) {
  std::vector<Point> out;
  out.reserve(pts.size());
  for (Vec2 p : pts) out.push_back(to_py(p));
  return out;
}

py::dict snapshot_dict(const CloudSnapshot& snap) {
  std::vector<Point> xi;
  std::vector<Point> xd;
  std::vector<bool> active;
  for (const PairState& p : snap.pairs) {
    xi.push_back(to_py(p.xi));
    xd.push_back(to_py(p.xd));
    active.push_back(p.active);
  }
  py::dict d;
  d["t"] = snap.t;
  d["xi"] = xi;
  d["xd"] = xd;
  d["active"] = active;
  d["captured_count"] = snap.captured_count;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Constant-bearing dependent reachable sets (C++ core)";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<BudgetError>(m, "BudgetError", PyExc_RuntimeError);

  py::class_<Scenario>(m, "Scenario")
      .def(py::init<double, double, double, double>(), py::arg("a"), py::arg("v_i"), py::arg("v_d"),
           py::arg("capture_eps") = -1.0)
      .def_property_readonly("a", &Scenario::a)
      .def_property_readonly("v_i", &Scenario::v_i)
      .def_property_readonly("v_d", &Scenario::v_d)
      .def_property_readonly("capture_eps", &Scenario::capture_eps)
      .def_property_readonly("min_horizontal_speed", &Scenario::min_horizontal_speed)
      .def("__repr__", [](const Scenario& s) {
        std::ostringstream os;
        os << "Scenario(a=" << s.a() << ", v_i=" << s.v_i() << ", v_d=" << s.v_d() << ")";
        return os.str();
      });

  py::class_<Thresholds>(m, "Thresholds")
      .def_readonly("t1", &Thresholds::t1)
      .def_readonly("t2", &Thresholds::t2)
      .def_readonly("tc", &Thresholds::tc);

  py::class_<DrsRegion>(m, "DrsRegion")
      .def_readonly("t", &DrsRegion::t)
      .def_property_readonly("regime", [](const DrsRegion& r) { return std::string(to_string(r.regime)); })
      .def_property_readonly("radius", [](const DrsRegion& r) { return r.disk.radius; })
      .def_readonly("chord_x", &DrsRegion::chord_x)
      .def_property_readonly("degenerate", &DrsRegion::degenerate);

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_static("defaults_for", &SimConfig::defaults_for)
      .def_readwrite("dt", &SimConfig::dt)
      .def_readwrite("branching", &SimConfig::branching)
      .def_readwrite("dedupe_resolution", &SimConfig::dedupe_resolution)
      .def_readwrite("max_pairs", &SimConfig::max_pairs)
      .def_readwrite("horizon", &SimConfig::horizon)
      .def_readwrite("threads", &SimConfig::threads);

  py::class_<ContainmentReport>(m, "ContainmentReport")
      .def_readonly("t", &ContainmentReport::t)
      .def_readonly("active", &ContainmentReport::active)
      .def_readonly("violations", &ContainmentReport::violations)
      .def_readonly("max_violation_depth", &ContainmentReport::max_violation_depth)
      .def_readonly("coverage_fraction", &ContainmentReport::coverage_fraction);

  py::class_<ExtremaResult>(m, "ExtremaResult")
      .def_readonly("max_value", &ExtremaResult::max_value)
      .def_readonly("min_value", &ExtremaResult::min_value)
      .def_property_readonly("max_points", [](const ExtremaResult& r) { return to_py(r.max_points); })
      .def_property_readonly("min_points", [](const ExtremaResult& r) { return to_py(r.min_points); })
      .def_readonly("degenerate", &ExtremaResult::degenerate);

  py::class_<HypothesisReport>(m, "HypothesisReport")
      .def_readonly("max_at_extreme_x", &HypothesisReport::max_at_extreme_x)
      .def_readonly("min_at_extreme_y", &HypothesisReport::min_at_extreme_y)
      .def_readonly("angular_gap", &HypothesisReport::angular_gap);

  py::class_<OracleEnvelope>(m, "OracleEnvelope")
      .def_readonly("min_found", &OracleEnvelope::min_found)
      .def_readonly("max_found", &OracleEnvelope::max_found)
      .def_readonly("trials", &OracleEnvelope::trials)
      .def_readonly("retries", &OracleEnvelope::retries);

  m.def("thresholds", &thresholds);
  m.def("constant_bearing_heading",
        [](double psi, const Scenario& s) { return constant_bearing_heading(Heading(psi), s).rad(); });
  m.def("dependent_velocity", [](double psi, const Scenario& s) { return to_py(dependent_velocity(Heading(psi), s)); });
  m.def("closing_speed", [](double psi, const Scenario& s) { return closing_speed(Heading(psi), s); });
  m.def("apollonius_circle", [](const Scenario& s) {
    const Circle c = apollonius_circle(s);
    return std::make_pair(to_py(c.center), c.radius);
  });

  m.def("region_at", &region_at, py::arg("t"), py::arg("scenario"), py::arg("use_hypothesis") = true);
  m.def("contains", [](const DrsRegion& r, const Point& p, const Scenario& s) { return contains(r, from_py(p), s); });
  m.def("characteristic_points", [](double t, const Scenario& s) {
    const CharacteristicPoints cp = characteristic_points(t, s);
    py::dict d;
    d["p1"] = to_py(cp.p1);
    d["p2"] = to_py(cp.p2);
    d["q1"] = cp.q1 ? py::cast(to_py(*cp.q1)) : py::none();
    d["q2"] = cp.q2 ? py::cast(to_py(*cp.q2)) : py::none();
    return d;
  });
  m.def("boundary_polyline", [](const DrsRegion& r, int n) { return to_py(boundary_polyline(r, n)); },
        py::arg("region"), py::arg("n") = 128);
  m.def("region_area", &region_area);
  m.def("apollonius_collinearity_gap", &apollonius_collinearity_gap);

  m.def(
      "propagate",
      [](const Scenario& s, const SimConfig& cfg, bool use_hypothesis, double cell_size) {
        py::list out;
        propagate_each(s, cfg, [&](const CloudSnapshot& snap) {
          py::dict d = snapshot_dict(snap);
          if (snap.active_count() > 0) {
            d["containment"] = containment_report(snap, s, use_hypothesis, cell_size > 0 ? cell_size
                                                                                         : cfg.dedupe_resolution);
          } else {
            d["containment"] = py::none();
          }
          out.append(d);
        });
        return out;
      },
      py::arg("scenario"), py::arg("config"), py::arg("use_hypothesis") = true, py::arg("cell_size") = 0.0,
      "Runs the point-cloud simulation; one dict per snapshot.");

  m.def(
      "grid_search_extrema",
      [](const Point& start, const Point& target, double t, const Scenario& s, int n) {
        return grid_search_extrema(from_py(start), from_py(target), t, s, n);
      },
      py::arg("start"), py::arg("target"), py::arg("t"), py::arg("scenario"), py::arg("n") = 360);
  m.def(
      "hypothesis_extrema_check",
      [](const Point& start, const Point& target, double t, const Scenario& s, int n) {
        return hypothesis_extrema_check(from_py(start), from_py(target), t, s, n);
      },
      py::arg("start"), py::arg("target"), py::arg("t"), py::arg("scenario"), py::arg("n") = 360);
  m.def(
      "multiswitch_oracle",
      [](const Point& start, const Point& target, double t, const Scenario& s, int legs, std::size_t trials,
         std::uint64_t seed, int threads) {
        py::gil_scoped_release release;
        return multiswitch_oracle(from_py(start), from_py(target), t, s, legs, trials, seed, threads);
      },
      py::arg("start"), py::arg("target"), py::arg("t"), py::arg("scenario"), py::arg("legs") = 3,
      py::arg("trials") = 10000, py::arg("seed") = 1, py::arg("threads") = 1);

  m.def("default_config_text", &default_config_text);
  m.def(
      "parse_config",
      [](const std::string& text) {
        const RunConfig cfg = parse_config(text);
        return std::make_pair(cfg.scenario(), cfg.sim());
      },
      "Parses a config document; returns (Scenario, SimConfig).");
  m.def(
      "run_acceptance",
      [](const std::string& config_text) {
        const RunConfig cfg = parse_config(config_text.empty() ? default_config_text() : config_text);
        AcceptanceReport report;
        {
          py::gil_scoped_release release;
          report = run_acceptance(cfg);
        }
        py::list rows;
        for (const CriterionResult& c : report.criteria) {
          py::dict d;
          d["id"] = c.id;
          d["name"] = c.name;
          d["passed"] = c.passed;
          d["detail"] = c.detail;
          rows.append(d);
        }
        return rows;
      },
      py::arg("config_text") = "");
}

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "facegaudin/cli.hpp"

namespace py = pybind11;
using namespace facegaudin;

namespace {

py::dict record_dict(const CheckRecord& r) {
  py::dict d;
  d["check"] = r.name;
  d["digest"] = r.digest;
  d["residual"] = r.residual ? py::cast(*r.residual) : py::none();
  d["tolerance"] = r.tolerance;
  d["pass"] = r.pass;
  d["detail"] = r.detail;
  d["data"] = r.data;
  d["wall_seconds"] = r.wall_seconds;
  return d;
}

// operator coefficients keyed by the multi-index of the derivative they multiply
py::dict coefficients(const OperatorJet& op) {
  py::dict out;
  for (int i = 0; i < op.symbols().size(); ++i) {
    const MultiIndex& beta = op.symbols().at(i);
    out[py::tuple(py::cast(beta))] = Matrix(op[i].value());
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Face-type elliptic Gaudin model";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  m.def("theta11", [](cplx z, cplx tau) { return theta11_value(z, ModularData(tau)); }, py::arg("z"), py::arg("tau"));
  m.def("zeta11", [](cplx z, cplx tau) { return zeta11_value(z, ModularData(tau)); }, py::arg("z"), py::arg("tau"));
  m.def("w", [](cplx c, cplx z, cplx tau) { return w_value(c, z, ModularData(tau)); }, py::arg("c"), py::arg("z"),
        py::arg("tau"));

  py::class_<ExperimentConfig>(m, "Config")
      .def_static("load", &load_config, py::arg("path"))
      .def_static("parse", &parse_config, py::arg("text"))
      .def_readwrite("seed", &ExperimentConfig::seed)
      .def_readonly("rank", &ExperimentConfig::rank)
      .def_property_readonly("tau", [](const ExperimentConfig& c) { return c.tau; })
      .def_property_readonly("sites", [](const ExperimentConfig& c) {
        std::vector<cplx> zs;
        for (const SiteSpec& s : c.sites) zs.push_back(s.z);
        return zs;
      })
      .def("echo", &echo_config)
      .def("digest", &instance_digest);

  m.def(
      "run",
      [](const std::string& command, const ExperimentConfig& cfg, bool negative_control) {
        RunOptions opts;
        opts.negative_control = negative_control;
        const Report r = run(parse_command(command), cfg, opts);
        py::dict out;
        py::list records;
        for (const CheckRecord& rec : r.records) records.append(record_dict(rec));
        out["command"] = r.command;
        out["digest"] = r.digest;
        out["pass"] = r.pass();
        out["records"] = records;
        std::vector<cplx> us, vals;
        for (const SweepRow& s : r.sweep) {
          us.push_back(s.u);
          vals.push_back(s.tau_psi);
        }
        out["sweep_u"] = us;
        out["sweep_tau_psi"] = vals;
        out["jsonl"] = emit_jsonl(r);
        out["text"] = emit_text(r);
        out["csv"] = emit_csv(r);
        return out;
      },
      py::arg("command"), py::arg("config"), py::arg("negative_control") = false);

  m.def(
      "transfer_matrix",
      [](const ExperimentConfig& cfg, cplx u, const Vector& xi) {
        return coefficients(build_transfer(build_problem(cfg), u).at(xi, 0));
      },
      py::arg("config"), py::arg("u"), py::arg("xi"),
      "Coefficients of tau(u) at H = sum xi_r h_r, keyed by derivative multi-index, on V*(0).");

  m.def(
      "solve_bethe",
      [](const ExperimentConfig& cfg) {
        const BetheConfig b = build_bethe(cfg);
        std::vector<Vector> seeds = cfg.bethe.seeds;
        if (seeds.empty()) seeds = halton_seeds(b, cfg.bethe.seed_count, cfg.sampling.guard);
        NewtonOptions opts;
        opts.tolerance = cfg.tolerances.newton;
        py::list out;
        for (const BetheSolution& s : solve_bethe(b, seeds, opts).solutions) {
          py::dict d;
          d["t"] = s.t;
          d["seed"] = s.seed;
          d["residual"] = s.residual_norm;
          d["iterations"] = s.iterations;
          out.append(d);
        }
        return out;
      },
      py::arg("config"));

  m.def(
      "eigenvalue",
      [](const ExperimentConfig& cfg, const Vector& t, cplx u) { return eigenvalue_tau_psi(build_bethe(cfg), t, u); },
      py::arg("config"), py::arg("t"), py::arg("u"));

  m.def(
      "bethe_vector",
      [](const ExperimentConfig& cfg, const Vector& t, const Vector& xi) {
        return Matrix(BetheVector(build_bethe(cfg), t).on_zero_weight(xi, 0).value());
      },
      py::arg("config"), py::arg("t"), py::arg("xi"), "Components of Psi(H) on the zero-weight basis of V*.");

  m.def(
      "eigen_residual",
      [](const ExperimentConfig& cfg, const Vector& t, const std::vector<cplx>& us, const std::vector<Vector>& hs) {
        return verify_eigenvector(build_bethe(cfg), t, us, hs).residual;
      },
      py::arg("config"), py::arg("t"), py::arg("us"), py::arg("hs"));
}

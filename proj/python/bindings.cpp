#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "liftdual/analysis.hpp"
#include "liftdual/commands.hpp"
#include "liftdual/oracles.hpp"
#include "liftdual/project.hpp"
#include "liftdual/solver.hpp"

namespace py = pybind11;
using namespace liftdual;

namespace {

RunConfig config_from(const std::string& text, const std::vector<std::string>& overrides) {
    RawConfig raw = parse_config(text);
    for (const auto& kv : overrides)
        for (auto& [k, v] : parse_config(kv).values) raw.values[k] = v;
    raw.text.clear();
    for (auto& [k, v] : raw.values) raw.text += k + " = " + v + "\n";
    return build_run_config(raw);
}

// (columns, nt) array; outside columns are NaN
py::array_t<double> field_array(const ScalarField& v, const GridSpec& g, const DomainMask& mask) {
    py::array_t<double> a({g.ncols(), g.nt});
    auto r = a.mutable_unchecked<2>();
    for (int c = 0; c < g.ncols(); ++c)
        for (int k = 0; k < g.nt; ++k) r(c, k) = mask.inside[c] ? v.values[std::size_t(c) * g.nt + k] : std::nan("");
    return a;
}

py::dict solve(const std::string& text, const std::vector<std::string>& overrides) {
    RunConfig rc = config_from(text, overrides);
    const ProblemSpec& p = rc.problem;
    IterState st;
    RunReport rep;
    {
        py::gil_scoped_release release;
        std::tie(st, rep) = run(p, rc.solver);
    }
    Solver solver(p, rc.solver);
    FluxField flux = solver.flux(st.sigma);
    Profile u = extract_level(st.v, rc.solver.level, p.grid, p.mask);
    py::dict d;
    d["primal"] = primal_energy(u, p);
    d["dual"] = dual_objective(flux, p);
    d["certified_dual"] = certified_dual(flux, p);
    d["iters"] = rep.iters_used;
    d["converged"] = rep.converged;
    d["mid_measure"] = mid_measure(st.v, p.grid, p.mask);
    d["observed_gap_constant"] = rep.observed_gap_constant;
    d["gap_history"] = rep.gap_history;
    d["v"] = field_array(st.v, p.grid, p.mask);
    d["u"] = py::array_t<double>(py::ssize_t(u.u.size()), u.u.data());
    return d;
}

// runs a command with captured output; returns (exit code, stdout, stderr)
template <class F>
py::tuple captured(F&& f) {
    std::ostringstream out, err;
    int code;
    {
        py::gil_scoped_release release;
        code = f(CommandIo{out, err});
    }
    return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Lifted dual solver for non-convex calibration problems";

    py::register_exception<Error>(m, "LiftdualError");

    m.def("solve", &solve, py::arg("config"), py::arg("overrides") = std::vector<std::string>{},
          "Solve the problem described by config text; returns a dict with energies, history and fields.");

    m.def(
        "solve_to_dir",
        [](const std::string& text, const std::vector<std::string>& overrides) {
            RunConfig rc = config_from(text, overrides);
            return captured([&](CommandIo io) { return cmd_solve(rc, io); });
        },
        py::arg("config"), py::arg("overrides") = std::vector<std::string>{});
    m.def(
        "sweep_lambda",
        [](const std::string& text, std::optional<double> lo, std::optional<double> hi, std::optional<double> tol,
           const std::vector<std::string>& overrides) {
            RunConfig rc = config_from(text, overrides);
            return captured([&](CommandIo io) { return cmd_sweep_lambda(rc, lo, hi, tol, io); });
        },
        py::arg("config"), py::arg("lo") = py::none(), py::arg("hi") = py::none(), py::arg("tol") = py::none(),
        py::arg("overrides") = std::vector<std::string>{});
    m.def(
        "verify", [](const std::string& dir) { return captured([&](CommandIo io) { return cmd_verify(dir, io); }); },
        py::arg("run_dir"));
    m.def(
        "export",
        [](const std::string& dir, const std::string& format) {
            return captured([&](CommandIo io) { return cmd_export(dir, format, io); });
        },
        py::arg("run_dir"), py::arg("format") = "all");
    m.def(
        "oracle_run",
        [](const std::string& text, const std::string& kind, const std::vector<std::string>& overrides) {
            RunConfig rc = config_from(text, overrides);
            return captured([&](CommandIo io) { return cmd_oracle(rc, kind, io); });
        },
        py::arg("config"), py::arg("kind"), py::arg("overrides") = std::vector<std::string>{});

    m.def(
        "oracle_1d_value",
        [](double a, double lam) {
            auto v = oracle_1d_value(a, lam);
            return py::make_tuple(v.value, to_string(v.regime));
        },
        py::arg("a"), py::arg("lam"));
    m.def("value_function", &value_function, py::arg("lam"), py::arg("x"), py::arg("t"));
    m.def("critical_lambda_disc", &critical_lambda_disc, py::arg("R"));
    m.def(
        "project_epigraph",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> q, double a, double c) {
            if (q.ndim() != 1 || q.size() < 2) throw py::value_error("q must be a 1D array with at least 2 entries");
            py::array_t<double> out(q.size());
            project_epigraph(std::span<const double>(q.data(), q.size()), a, c,
                             std::span<double>(out.mutable_data(), out.size()));
            return out;
        },
        py::arg("q"), py::arg("a"), py::arg("c"),
        "Euclidean projection onto {p : p_t >= a |p_x|^2 + c}; the last entry is the t component.");

    m.attr("EXIT_OK") = int(kExitOk);
    m.attr("EXIT_USAGE") = int(kExitUsage);
    m.attr("EXIT_NUMERIC") = int(kExitNumeric);
    m.attr("EXIT_NOT_CONVERGED") = int(kExitNotConverged);
    m.attr("EXIT_BRACKET") = int(kExitBracket);
    m.attr("EXIT_MISSING") = int(kExitMissing);
    m.attr("EXIT_NOT_CALIBRATED") = int(kExitNotCalibrated);
}

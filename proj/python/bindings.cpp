// Copyright 2026 The fqcp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "cli.hpp"
#include "fqcp/analysis.hpp"
#include "fqcp/code422.hpp"
#include "fqcp/density.hpp"
#include "fqcp/dephased.hpp"
#include "fqcp/errors.hpp"
#include "fqcp/fault.hpp"
#include "fqcp/gadget.hpp"

namespace py = pybind11;
using namespace fqcp;

namespace {

py::object to_python(const nlohmann::json &j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

py::dict series_dict(const ObservableSeries &s) {
    py::dict d;
    d["sites"] = py::make_tuple(s.sites.lo, s.sites.hi);
    d["origin"] = s.origin;
    d["shots"] = s.shots;
    d["n_right"] = s.n_right;
    d["se_right"] = s.se_right;
    d["density"] = s.density;
    return d;
}

CircuitSpec circuit(double theta, double p, int t_max, int origin) {
    return build_circuit({theta, p, t_max, origin});
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Floquet quantum contact process simulators and [[4,2,2]] gadget tools";
    m.attr("DEFAULT_THETA") = kDefaultTheta;

    py::register_exception<Error>(m, "FqcpError", PyExc_RuntimeError);

    m.def("circuit_json",
          [](double theta, double p, int t_max, int origin) { return to_python(circuit(theta, p, t_max, origin).to_json()); },
          py::arg("theta") = kDefaultTheta, py::arg("p") = 0.2, py::arg("t_max"), py::arg("origin") = 0,
          "Gate/reset schedule of the model as a dict.");

    m.def(
        "dephased_ensemble",
        [](double theta, double p, int t_max, std::uint64_t shots, std::uint64_t seed, int threads, int origin) {
            dephased::EnsembleOptions opt;
            opt.threads = threads;
            ObservableSeries s;
            {
                py::gil_scoped_release release;
                s = dephased::run_ensemble(circuit(theta, p, t_max, origin), theta, p, shots, seed, opt);
            }
            return series_dict(s);
        },
        py::arg("theta") = kDefaultTheta, py::arg("p"), py::arg("t_max"), py::arg("shots"), py::arg("seed") = 1,
        py::arg("threads") = 1, py::arg("origin") = 0, "Monte Carlo ensemble of the fully dephased model.");

    m.def(
        "exact_enumeration",
        [](double theta, double p, int t_max, int origin) {
            return series_dict(dephased::exact_enumeration(circuit(theta, p, t_max, origin), theta, p));
        },
        py::arg("theta") = kDefaultTheta, py::arg("p"), py::arg("t_max"), py::arg("origin") = 0,
        "Exact averages of the dephased model by enumerating all branches (small t).");

    m.def(
        "dm_simulate",
        [](double theta, double p, int t_max, int origin, int live_cap) {
            dm::SimOptions opt;
            opt.live_cap = live_cap;
            ObservableSeries s;
            {
                py::gil_scoped_release release;
                s = dm::simulate({theta, p, t_max, origin}, opt);
            }
            return series_dict(s);
        },
        py::arg("theta") = kDefaultTheta, py::arg("p"), py::arg("t_max"), py::arg("origin") = 0,
        py::arg("live_cap") = 13, "Exact density-matrix profiles with qubit reuse.");

    m.def(
        "effective_exponent",
        [](const std::map<int, double> &series, int dt) { return analysis::effective_exponent(series, dt).values; },
        py::arg("series"), py::arg("dt"), "delta(t) = log(O(t+dt)/O(t)) / log((t+dt)/t).");

    m.def(
        "crossing_estimate",
        [](const std::map<double, std::map<int, double>> &series, int dt, const std::vector<int> &times) {
            std::map<double, analysis::EffExpSeries> curves;
            for (const auto &[p, s] : series) {
                curves[p] = analysis::effective_exponent(s, dt, p);
            }
            return to_python(analysis::crossing_estimate(curves, times).to_json());
        },
        py::arg("series"), py::arg("dt"), py::arg("times"),
        "Crossing of effective-exponent curves; series maps p -> {t: O(t)}.");

    m.def(
        "bootstrap_se",
        [](const std::vector<double> &samples, std::optional<std::vector<double>> weights, int resamples,
           std::uint64_t seed) {
            if (weights) {
                return analysis::bootstrap_se(samples, *weights, analysis::weighted_mean, resamples, seed);
            }
            return analysis::bootstrap_se(samples, analysis::mean, resamples, seed);
        },
        py::arg("samples"), py::arg("weights") = std::nullopt, py::arg("resamples") = 200, py::arg("seed") = 1,
        "Bootstrap standard error of the (weighted) mean.");

    m.def(
        "syndrome",
        [](const std::string &pauli) {
            auto s = code422::syndrome(PauliString::parse(pauli));
            return py::make_tuple(s.s_x, s.s_z);
        },
        py::arg("pauli"), "(S_X, S_Z) syndrome bits of a single-block Pauli such as 'XIII'.");

    m.def(
        "classify_pauli",
        [](const std::string &pauli) { return code422::to_string(code422::classify_pauli(PauliString::parse(pauli)).kind); },
        py::arg("pauli"));

    m.def(
        "ft_check",
        [](const std::string &kind, std::optional<double> theta, int control, bool crosstalk) {
            auto g = code422::build_gadget(code422::parse_gadget_kind(kind), theta, control);
            code422::FtOptions opt;
            opt.measurement_crosstalk = crosstalk;
            return to_python(code422::ft_check(g, opt).to_json(g));
        },
        py::arg("kind"), py::arg("theta") = std::nullopt, py::arg("control") = 2, py::arg("crosstalk") = false,
        "Single-fault enumeration report of a gadget.");

    m.def("count_double_z_logical", &code422::count_double_z_logical, py::arg("deformed"),
          py::arg("qubit_mask") = 0b1100u);
    m.def("dfs_phase", &code422::dfs_phase, py::arg("a"), py::arg("b"), py::arg("theta"), py::arg("relabeled") = false);

    m.def(
        "cli",
        [](std::vector<std::string> args) {
            args.insert(args.begin(), "fqcp");
            std::vector<const char *> argv;
            for (const auto &a : args) {
                argv.push_back(a.c_str());
            }
            py::gil_scoped_release release;
            return cli::main(static_cast<int>(argv.size()), argv.data());
        },
        py::arg("args"), "Runs the fqcp command line with the given arguments; returns the exit status.");
}

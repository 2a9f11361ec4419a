// Copyright 2026 The dnull Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Python bindings (module dnull._core).
 */
#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dnull/gaussian.hpp"
#include "dnull/harness.hpp"
#include "dnull/information.hpp"
#include "dnull/measurement_design.hpp"

namespace py = pybind11;
using namespace dnull;

namespace {

py::dict holevo_dict(const HolevoSolution &sol) {
    py::dict d;
    d["value"] = sol.value;
    d["B"] = sol.B;
    d["T"] = sol.T;
    d["ancilla"] = sol.uses_ancilla();
    d["Bprime"] = sol.Bprime ? py::cast(*sol.Bprime) : py::none();
    d["covariance"] = sol.covariance();
    d["restart_values"] = sol.restart_values;
    return d;
}

std::string run_experiment_json(const std::string &config_json) {
    const ExperimentConfig config = config_from_json(nlohmann::json::parse(config_json));
    RiskReport report;
    {
        py::gil_scoped_release release;
        report = run_experiment(config);
    }
    return emit_json(report);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Displaced-null measurement estimation for pure-state models";
    m.attr("__version__") = DNULL_VERSION;

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
    py::register_exception<IdentifiabilityError>(m, "IdentifiabilityError", PyExc_ArithmeticError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::class_<PureStateModel>(m, "PureStateModel")
        .def_property_readonly("name", &PureStateModel::name)
        .def_property_readonly("dim", &PureStateModel::dim)
        .def_property_readonly("param_dim", &PureStateModel::param_dim)
        .def_property_readonly("domain", [](const PureStateModel &self) {
            return py::make_tuple(self.domain().lower, self.domain().upper);
        })
        .def("state", [](const PureStateModel &self, const RVec &theta) {
            return CVec(self.state(theta).amplitudes());
        }, py::arg("theta"))
        .def("derivatives", &PureStateModel::derivatives, py::arg("theta"))
        .def("__repr__", [](const PureStateModel &self) {
            return "<PureStateModel " + self.name() + ">";
        });

    m.def("qubit_rotation_model", &qubit_rotation_model);
    m.def("local_qudit_model", &local_qudit_model, py::arg("d"));
    m.def("phased_qutrit_model", &phased_qutrit_model, py::arg("alpha") = 0.7,
          py::arg("beta") = -1.1);
    m.def("make_model", &make_model, py::arg("name"));
    m.def("registered_models", &registered_models);

    m.def("qfi", [](const PureStateModel &model, const RVec &theta) {
        return qfi_pure(model, theta);
    }, py::arg("model"), py::arg("theta"));
    m.def("cfi", [](const CMat &basis, const PureStateModel &model, const RVec &theta) {
        return cfi(ProjectiveBasis(basis), model, theta);
    }, py::arg("basis"), py::arg("model"), py::arg("theta"));
    m.def("compatibility", [](const PureStateModel &model, const RVec &theta) {
        const auto c = compatibility(model, theta);
        return py::make_tuple(c.matrix, c.compatible);
    }, py::arg("model"), py::arg("theta"));

    m.def("rotated_qubit_basis", [](double tau) { return CMat(rotated_qubit_basis(tau).matrix()); },
          py::arg("tau"));
    m.def("null_basis", [](const PureStateModel &model, const RVec &theta) {
        return CMat(null_basis(model, theta).matrix());
    }, py::arg("model"), py::arg("theta"));
    m.def("measurement_probs", [](const CMat &basis, const CVec &state) {
        return measurement_probs(ProjectiveBasis(basis), StateVector(state));
    }, py::arg("basis"), py::arg("state"));
    m.def("sample_counts", [](const RVec &probs, std::int64_t n, std::uint64_t seed) {
        return sample_counts(probs, n, seed).counts();
    }, py::arg("probs"), py::arg("n"), py::arg("seed"));

    m.def("holevo_bound", [](const CMat &c, const RMat &w, int restarts, std::uint64_t seed) {
        HolevoOptions opts;
        opts.restarts = restarts;
        opts.seed = seed;
        return holevo_dict(holevo_bound_gaussian(GaussianShiftModel(c, w), opts));
    }, py::arg("C"), py::arg("W"), py::arg("restarts") = 20, py::arg("seed") = 0x5EEDULL);
    m.def("holevo_bound_model", [](const PureStateModel &model, const RVec &theta, const RMat &w) {
        return holevo_dict(holevo_bound_gaussian(
            GaussianShiftModel::from_linearized(linearize_at(model, theta), w)));
    }, py::arg("model"), py::arg("theta"), py::arg("W"));

    m.def("displacement", [](double epsilon, std::int64_t n) {
        const DisplacementSchedule s(epsilon, n);
        py::dict d;
        d["n_tilde"] = s.n_tilde();
        d["delta"] = s.delta();
        d["Delta"] = s.Delta();
        d["radius"] = s.radius();
        return d;
    }, py::arg("epsilon"), py::arg("n"));
    m.def("preliminary_qubit_mle", [](const std::vector<std::int64_t> &counts, std::int64_t n_tilde) {
        return preliminary_qubit_mle(OutcomeCounts(counts), n_tilde);
    }, py::arg("counts"), py::arg("n_tilde"));
    m.def("estimate_displaced_qubit", [](double theta_tilde, const std::vector<std::int64_t> &counts,
                                         double epsilon, std::int64_t n) {
        return estimate_displaced_qubit(theta_tilde, OutcomeCounts(counts),
                                        DisplacementSchedule(epsilon, n))
            .theta_hat(0);
    }, py::arg("theta_tilde"), py::arg("counts"), py::arg("epsilon"), py::arg("n"));
    m.def("estimate_naive_null", [](double theta_tilde, const std::vector<std::int64_t> &counts,
                                    double epsilon, std::int64_t n, const std::string &rule,
                                    std::optional<std::pair<std::int64_t, std::int64_t>> prelim) {
        std::optional<PosteriorContext> ctx;
        if (prelim) {
            ctx = PosteriorContext{prelim->first, prelim->second};
        }
        return estimate_naive_null(theta_tilde, OutcomeCounts(counts),
                                   DisplacementSchedule(epsilon, n), parse_sign_rule(rule), ctx)
            .theta_hat(0);
    }, py::arg("theta_tilde"), py::arg("counts"), py::arg("epsilon"), py::arg("n"),
       py::arg("sign_rule") = "plus", py::arg("preliminary") = py::none());

    py::class_<PosteriorDensity>(m, "PosteriorDensity")
        .def(py::init<std::int64_t, std::int64_t>(), py::arg("k"), py::arg("n_tilde"))
        .def("__call__", &PosteriorDensity::operator(), py::arg("theta"))
        .def("log_density", &PosteriorDensity::log_density, py::arg("theta"))
        .def_property_readonly("mode", &PosteriorDensity::mode)
        .def("total_mass", &PosteriorDensity::total_mass)
        .def("two_sided_mass", &PosteriorDensity::two_sided_mass, py::arg("center"),
             py::arg("tau"));

    m.def("posterior_density", &posterior_density, py::arg("k"), py::arg("n_tilde"),
          py::arg("theta"));
    m.def("posterior_two_sided_mass", [](std::int64_t k, std::int64_t n_tilde, double tau) {
        const PosteriorDensity post(k, n_tilde);
        return post.two_sided_mass(post.mode(), tau);
    }, py::arg("k"), py::arg("n_tilde"), py::arg("tau"));

    m.def("run_experiment_json", &run_experiment_json, py::arg("config_json"),
          "Run an experiment from a JSON configuration; returns the report as JSON text.");
}

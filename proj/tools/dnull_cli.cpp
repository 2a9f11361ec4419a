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
 * Command-line front end: simulate, fisher and holevo subcommands.
 *
 * Exit codes: 0 success, 2 invalid configuration or dimensions, 3 numerical
 * or identifiability failure, 1 anything else.
 */
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dnull/gaussian.hpp"
#include "dnull/harness.hpp"
#include "dnull/information.hpp"
#include "dnull/measurement_design.hpp"

using namespace dnull;
using nlohmann::json;

namespace {

json matrix_json(const RMat &m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(m(i, j));
        }
        rows.push_back(row);
    }
    return rows;
}

RVec parse_vector(const std::string &text, Eigen::Index expected, const char *what) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception &e) {
        throw ConfigError(std::string(what) + ": " + e.what());
    }
    RVec v;
    if (j.is_number()) {
        v = RVec::Constant(1, j.get<double>());
    } else if (j.is_array()) {
        v.resize(static_cast<Eigen::Index>(j.size()));
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (!j[i].is_number()) {
                throw ConfigError(std::string(what) + ": entries must be numbers");
            }
            v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
        }
    } else {
        throw ConfigError(std::string(what) + ": expected a number or an array");
    }
    if (v.size() != expected) {
        throw DimensionError(std::string(what) + ": expected " + std::to_string(expected) +
                             " entries");
    }
    return v;
}

RMat parse_matrix(const std::string &text, Eigen::Index m) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception &e) {
        throw ConfigError(std::string("weight: ") + e.what());
    }
    if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != m) {
        throw DimensionError("weight: expected an " + std::to_string(m) + "x" + std::to_string(m) +
                             " array");
    }
    RMat w(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto &row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != m) {
            throw DimensionError("weight: rows must have " + std::to_string(m) + " entries");
        }
        for (Eigen::Index k = 0; k < m; ++k) {
            w(i, k) = row[static_cast<std::size_t>(k)].get<double>();
        }
    }
    return w;
}

int run_simulate(const std::string &config_path, std::optional<std::int64_t> n,
                 std::optional<std::int64_t> trials, std::optional<std::uint64_t> seed,
                 const std::string &out, const std::string &format) {
    std::ifstream in(config_path);
    if (!in) {
        throw ConfigError("simulate: cannot open config '" + config_path + "'");
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception &e) {
        throw ConfigError(std::string("simulate: ") + e.what());
    }
    ExperimentConfig c = config_from_json(j);
    if (n) {
        c.n_grid = {*n};
    }
    if (trials) {
        c.trials = *trials;
    }
    if (seed) {
        c.seed = *seed;
    }
    if (!out.empty()) {
        c.output = out;
    }
    if (!format.empty()) {
        c.format = format;
    }
    c.validate();
    const RiskReport report = run_experiment(c);
    if (c.output.empty()) {
        std::cout << (c.format == "json" ? emit_json(report) : emit_csv(report));
    } else {
        emit(report, c.format, c.output);
    }
    return 0;
}

int run_fisher(const std::string &model_name, const std::string &theta_text,
               const std::string &basis_name, double delta) {
    const PureStateModel model = make_model(model_name);
    const RVec theta = parse_vector(theta_text, model.param_dim(), "theta");
    ProjectiveBasis basis;
    if (basis_name == "canonical") {
        basis = ProjectiveBasis(CMat(CMat::Identity(model.dim(), model.dim())));
    } else if (basis_name == "null") {
        basis = null_basis(model, theta);
    } else if (basis_name == "displaced") {
        const auto lin = linearize_at(model, theta);
        if (compatibility(model, theta).compatible) {
            basis = qcrb_basis(lin, RVec::Ones(model.dim() - 1), delta);
        } else {
            basis = displaced_bases_bures(lin.frame, delta).first;
        }
    } else {
        throw ConfigError("fisher: basis must be canonical, null or displaced");
    }
    const FisherReport r = fisher_report(basis, model, theta);
    json out;
    out["model"] = model.name();
    out["basis"] = basis_name;
    out["qfi"] = matrix_json(r.qfi);
    out["cfi"] = matrix_json(r.cfi);
    out["compat"] = matrix_json(r.compat);
    out["compatible"] = r.compatible;
    out["achievable"] = r.achievable;
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_holevo(const std::string &model_name, const std::string &weight_text,
               const std::string &theta_text, int restarts) {
    const PureStateModel model = make_model(model_name);
    const RVec theta = theta_text.empty() ? model.domain().center()
                                          : parse_vector(theta_text, model.param_dim(), "theta");
    const RMat w = weight_text.empty() ? RMat::Identity(model.param_dim(), model.param_dim())
                                       : parse_matrix(weight_text, model.param_dim());
    HolevoOptions opts;
    opts.restarts = restarts;
    const auto sol = holevo_bound_gaussian(
        GaussianShiftModel::from_linearized(linearize_at(model, theta), w), opts);
    json out;
    out["model"] = model.name();
    out["value"] = sol.value;
    out["B"] = matrix_json(sol.B);
    out["T"] = matrix_json(sol.T);
    out["ancilla"] = sol.uses_ancilla();
    if (sol.Bprime) {
        out["Bprime"] = matrix_json(*sol.Bprime);
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"dnull: displaced-null measurement estimation toolkit"};
    app.require_subcommand(1);

    auto *sim = app.add_subcommand("simulate", "Run a Monte Carlo risk experiment");
    std::string config_path;
    std::optional<std::int64_t> n;
    std::optional<std::int64_t> trials;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string format;
    sim->add_option("--config", config_path, "Experiment configuration (JSON)")->required();
    sim->add_option("--n", n, "Override the sample-size grid with a single n");
    sim->add_option("--trials", trials, "Override the number of trials");
    sim->add_option("--seed", seed, "Override the master seed");
    sim->add_option("--out", out, "Output path (default: stdout)");
    sim->add_option("--format", format, "csv or json");

    auto *fisher = app.add_subcommand("fisher", "Print QFI, CFI and compatibility as JSON");
    std::string model_name;
    std::string theta_text;
    std::string basis_name = "canonical";
    double delta = 0.05;
    fisher->add_option("--model", model_name, "Model name")->required();
    fisher->add_option("--theta", theta_text, "Parameter (number or JSON array)")->required();
    fisher->add_option("--basis", basis_name, "canonical, null or displaced");
    fisher->add_option("--delta", delta, "Displacement angle for --basis displaced");

    auto *holevo = app.add_subcommand("holevo", "Holevo bound of the limit Gaussian model");
    std::string weight_text;
    std::string holevo_theta;
    int restarts = 20;
    holevo->add_option("--model", model_name, "Model name")->required();
    holevo->add_option("--weight", weight_text, "Weight matrix as JSON (default identity)");
    holevo->add_option("--theta", holevo_theta, "Base point (default: domain centre)");
    holevo->add_option("--restarts", restarts, "Optimiser restarts");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*sim) {
            return run_simulate(config_path, n, trials, seed, out, format);
        }
        if (*fisher) {
            return run_fisher(model_name, theta_text, basis_name, delta);
        }
        return run_holevo(model_name, weight_text, holevo_theta, restarts);
    } catch (const ConfigError &e) {
        std::cerr << "dnull: " << e.what() << "\n";
        return 2;
    } catch (const DimensionError &e) {
        std::cerr << "dnull: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError &e) {
        std::cerr << "dnull: " << e.what() << "\n";
        return 3;
    } catch (const IdentifiabilityError &e) {
        std::cerr << "dnull: " << e.what() << "\n";
        return 3;
    } catch (const std::exception &e) {
        std::cerr << "dnull: " << e.what() << "\n";
        return 1;
    }
}

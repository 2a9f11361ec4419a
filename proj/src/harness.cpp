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

#include "dnull/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <boost/random/uniform_real_distribution.hpp>

#include "dnull/stats.hpp"

namespace dnull {

namespace {

bool is_qubit_strategy(Strategy s) {
    return s == Strategy::displaced_qubit || s == Strategy::naive_null;
}

RVec json_to_vector(const nlohmann::json &j, const char *key) {
    if (j.is_number()) {
        return RVec::Constant(1, j.get<double>());
    }
    if (!j.is_array()) {
        throw ConfigError(std::string("config: '") + key + "' must be a number or an array");
    }
    RVec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    }
    return v;
}

RMat json_to_matrix(const nlohmann::json &j) {
    if (!j.is_array() || j.empty() || !j[0].is_array()) {
        throw ConfigError("config: 'weight' must be a non-empty array of rows");
    }
    RMat m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(j[0].size()));
    for (std::size_t r = 0; r < j.size(); ++r) {
        if (j[r].size() != j[0].size()) {
            throw ConfigError("config: ragged 'weight' matrix");
        }
        for (std::size_t c = 0; c < j[r].size(); ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
        }
    }
    return m;
}

std::string fmt17(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string json_number(double x) { return std::isfinite(x) ? fmt17(x) : "null"; }

double json_double(const nlohmann::json &j) {
    return j.is_null() ? std::nan("") : j.get<double>();
}

RMat cholesky_lower(const RMat &cov) {
    Eigen::LLT<RMat> llt(cov);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("limit covariance is not positive definite");
    }
    return llt.matrixL();
}

} // namespace

void ExperimentConfig::validate() const {
    if (trials < 1) {
        throw ConfigError("config: trials must be at least 1");
    }
    if (!(epsilon > 0.0 && epsilon < 0.1)) {
        throw ConfigError("config: epsilon must lie in (0, 1/10)");
    }
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        if (n_grid[i] < 2) {
            throw ConfigError("config: sample sizes must be at least 2");
        }
        if (i > 0 && n_grid[i] <= n_grid[i - 1]) {
            throw ConfigError("config: n_grid must be strictly increasing");
        }
    }
    if (format != "csv" && format != "json") {
        throw ConfigError("config: format must be csv or json");
    }
    if (holevo_restarts < 1) {
        throw ConfigError("config: holevo_restarts must be positive");
    }
}

ExperimentConfig config_from_json(const nlohmann::json &j) {
    if (!j.is_object()) {
        throw ConfigError("config: top level must be an object");
    }
    static const std::set<std::string> known{
        "model", "strategy", "epsilon", "n_grid", "trials", "true_parameter", "seed",
        "output", "format", "g", "weight", "sign_rule", "threads", "holevo_restarts"};
    for (const auto &[key, value] : j.items()) {
        if (known.count(key) == 0) {
            throw ConfigError("config: unknown key '" + key + "'");
        }
    }
    ExperimentConfig c;
    try {
        if (j.contains("model")) c.model = j["model"].get<std::string>();
        if (j.contains("strategy")) c.strategy = parse_strategy(j["strategy"].get<std::string>());
        if (j.contains("epsilon")) c.epsilon = j["epsilon"].get<double>();
        if (j.contains("n_grid")) c.n_grid = j["n_grid"].get<std::vector<std::int64_t>>();
        if (j.contains("trials")) c.trials = j["trials"].get<std::int64_t>();
        if (j.contains("true_parameter")) {
            const auto &t = j["true_parameter"];
            if (t.is_string()) {
                if (t.get<std::string>() != "prior") {
                    throw ConfigError("config: true_parameter must be numeric or \"prior\"");
                }
            } else {
                c.true_parameter = json_to_vector(t, "true_parameter");
            }
        }
        if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("output")) c.output = j["output"].get<std::string>();
        if (j.contains("format")) c.format = j["format"].get<std::string>();
        if (j.contains("g")) c.g = json_to_vector(j["g"], "g");
        if (j.contains("weight")) c.weight = json_to_matrix(j["weight"]);
        if (j.contains("sign_rule")) c.sign_rule = parse_sign_rule(j["sign_rule"].get<std::string>());
        if (j.contains("threads")) c.threads = j["threads"].get<unsigned>();
        if (j.contains("holevo_restarts")) c.holevo_restarts = j["holevo_restarts"].get<int>();
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

nlohmann::json config_to_json(const ExperimentConfig &c) {
    nlohmann::json j;
    j["model"] = c.model;
    j["strategy"] = to_string(c.strategy);
    j["epsilon"] = c.epsilon;
    j["n_grid"] = c.n_grid;
    j["trials"] = c.trials;
    if (c.true_parameter) {
        j["true_parameter"] = std::vector<double>(c.true_parameter->begin(), c.true_parameter->end());
    } else {
        j["true_parameter"] = "prior";
    }
    j["seed"] = c.seed;
    if (!c.output.empty()) j["output"] = c.output;
    j["format"] = c.format;
    if (c.g) j["g"] = std::vector<double>(c.g->begin(), c.g->end());
    if (c.weight) {
        nlohmann::json rows = nlohmann::json::array();
        for (Eigen::Index r = 0; r < c.weight->rows(); ++r) {
            std::vector<double> row(static_cast<std::size_t>(c.weight->cols()));
            for (Eigen::Index k = 0; k < c.weight->cols(); ++k) {
                row[static_cast<std::size_t>(k)] = (*c.weight)(r, k);
            }
            rows.push_back(row);
        }
        j["weight"] = rows;
    }
    j["sign_rule"] = to_string(c.sign_rule);
    j["threads"] = c.threads;
    j["holevo_restarts"] = c.holevo_restarts;
    return j;
}

Experiment::Experiment(ExperimentConfig config)
    : config_(std::move(config)), model_(make_model(config_.model)) {
    config_.validate();
    const Eigen::Index d = model_.dim();
    const Eigen::Index m = model_.param_dim();
    if (config_.true_parameter) {
        if (config_.true_parameter->size() != m) {
            throw ConfigError("config: true_parameter has the wrong length");
        }
        if (!model_.domain().contains(*config_.true_parameter)) {
            throw ConfigError("config: true_parameter lies outside the model domain");
        }
    }
    switch (config_.strategy) {
    case Strategy::displaced_qubit:
    case Strategy::naive_null:
        if (model_.name() != "qubit_rotation") {
            throw ConfigError("config: strategy " + to_string(config_.strategy) +
                              " needs the qubit_rotation model");
        }
        break;
    case Strategy::bures:
        if (m != 2 * (d - 1)) {
            throw ConfigError("config: bures strategy needs a full-state model (m = 2(d-1))");
        }
        break;
    case Strategy::qcrb:
        if (!compatibility(model_, model_.domain().center()).compatible) {
            throw ConfigError("config: qcrb strategy needs a model with real derivative Gram matrix");
        }
        break;
    case Strategy::general_holevo:
    case Strategy::matsumoto:
        break;
    }
    weight_ = config_.weight ? *config_.weight : RMat::Identity(m, m);
    if (weight_.rows() != m || weight_.cols() != m) {
        throw ConfigError("config: weight must be m x m");
    }
    g_ = config_.g ? *config_.g : RVec::Ones(d - 1);
    if (config_.strategy == Strategy::qcrb && g_.size() != d - 1) {
        throw ConfigError("config: g must have d-1 entries");
    }
    if (!is_qubit_strategy(config_.strategy)) {
        design_ = preliminary_design(model_);
    }
}

std::string Experiment::loss_name() const {
    switch (config_.strategy) {
    case Strategy::displaced_qubit:
    case Strategy::naive_null: return "squared_error";
    case Strategy::bures: return "squared_bures";
    default: return "weighted_quadratic";
    }
}

RVec Experiment::draw_parameter(Engine &engine) const {
    if (config_.true_parameter) {
        return *config_.true_parameter;
    }
    const Box &box = model_.domain();
    RVec theta(box.size());
    for (Eigen::Index j = 0; j < box.size(); ++j) {
        boost::random::uniform_real_distribution<double> u(box.lower(j), box.upper(j));
        theta(j) = u(engine);
    }
    return theta;
}

double Experiment::weighted_loss(const RVec &err) const { return err.dot(weight_ * err); }

TrialResult Experiment::run_trial(std::int64_t n, std::int64_t trial) const {
    Engine engine(derive_seed(config_.seed, static_cast<std::uint64_t>(n),
                              static_cast<std::uint64_t>(trial)));
    const DisplacementSchedule schedule(config_.epsilon, n);
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    TrialResult out;
    out.theta = draw_parameter(engine);
    const CVec psi = model_.amplitudes(out.theta);

    if (is_qubit_strategy(config_.strategy)) {
        const std::int64_t nt = schedule.n_tilde();
        const OutcomeCounts pre = sample_counts(probabilities(sigma_x_basis().matrix(), psi), nt, engine);
        const double tt = preliminary_qubit_mle(pre, nt);
        EstimateRecord rec;
        if (config_.strategy == Strategy::displaced_qubit) {
            const ProjectiveBasis basis = displaced_basis_qubit(tt, schedule);
            rec = estimate_displaced_qubit(tt, sample_counts(probabilities(basis.matrix(), psi), n, engine),
                                           schedule);
        } else {
            const ProjectiveBasis basis = rotated_qubit_basis(tt);
            rec = estimate_naive_null(tt, sample_counts(probabilities(basis.matrix(), psi), n, engine),
                                      schedule, config_.sign_rule, PosteriorContext{pre[1], nt});
        }
        out.theta_tilde = rec.theta_tilde;
        out.theta_hat = rec.theta_hat;
        out.local_error = sqrt_n * (out.theta_hat - out.theta);
        out.standardized_error = 2.0 * out.local_error; // F = 4
        out.loss = (out.theta_hat - out.theta).squaredNorm();
        out.in_confidence = (out.theta - out.theta_tilde).norm() <= schedule.radius();
        return out;
    }

    out.theta_tilde = preliminary_generic(model_, psi, schedule.n_tilde(), engine, &design_);
    out.in_confidence = (out.theta - out.theta_tilde).norm() <= schedule.radius();
    const LinearizedModel lin = linearize_at(model_, out.theta_tilde);

    switch (config_.strategy) {
    case Strategy::bures: {
        const auto bases = displaced_bases_bures(lin.frame, schedule);
        const std::int64_t half = n / 2;
        const OutcomeCounts cy = sample_counts(probabilities(bases.first.matrix(), psi), half, engine);
        const OutcomeCounts cx =
            sample_counts(probabilities(bases.second.matrix(), psi), n - half, engine);
        const EstimateRecord rec = estimate_bures(lin.frame, out.theta_tilde, cy, cx, schedule);
        out.theta_hat = rec.theta_hat;
        const RVec u_true = sqrt_n * chart_coordinates(lin.frame, psi);
        out.local_error = rec.u_hat - u_true;
        out.standardized_error = std::sqrt(2.0) * out.local_error; // covariance 1/2
        out.loss = bures_distance_sq(StateVector::normalized(*rec.state), StateVector(psi, 1e-10));
        return out;
    }
    case Strategy::qcrb: {
        const ProjectiveBasis basis = qcrb_basis(lin, g_, schedule);
        const OutcomeCounts c = sample_counts(probabilities(basis.matrix(), psi), n, engine);
        const EstimateRecord rec = estimate_qcrb(out.theta_tilde, c, lin, g_, schedule);
        out.theta_hat = rec.theta_hat;
        out.local_error = sqrt_n * (out.theta_hat - out.theta);
        const RMat f = qfi_pure(model_, out.theta);
        out.standardized_error =
            cholesky_lower(f.inverse()).triangularView<Eigen::Lower>().solve(out.local_error);
        out.loss = weighted_loss(out.theta_hat - out.theta);
        return out;
    }
    case Strategy::general_holevo:
    case Strategy::matsumoto: {
        HolevoOptions opts;
        opts.restarts = config_.holevo_restarts;
        const HolevoSolution hs =
            holevo_bound_gaussian(GaussianShiftModel::from_linearized(lin, weight_), opts);
        const CVec state = with_ancilla(psi);
        EstimateRecord rec;
        if (config_.strategy == Strategy::general_holevo) {
            const ProjectiveBasis basis = displaced_basis_general(lin, hs, schedule);
            rec = estimate_general(out.theta_tilde,
                                   sample_counts(probabilities(basis.matrix(), state), n, engine),
                                   hs, schedule);
        } else {
            const MatsumotoDesign md = matsumoto_basis(lin, hs, schedule);
            const OutcomeCounts c = sample_counts(probabilities(md.basis.matrix(), state), n, engine);
            rec = estimate_matsumoto(out.theta_tilde, c, md, schedule);
            out.reference_hat = estimate_general(out.theta_tilde, c, hs, schedule).theta_hat;
        }
        out.theta_hat = rec.theta_hat;
        out.local_error = sqrt_n * (out.theta_hat - out.theta);
        out.standardized_error = cholesky_lower(hs.covariance())
                                     .triangularView<Eigen::Lower>()
                                     .solve(out.local_error);
        out.loss = weighted_loss(out.theta_hat - out.theta);
        return out;
    }
    default: break;
    }
    throw ConfigError("run_trial: unsupported strategy");
}

std::vector<TrialResult> Experiment::run_trials(std::int64_t n) const {
    std::vector<TrialResult> results(static_cast<std::size_t>(config_.trials));
    unsigned threads = config_.threads == 0 ? std::thread::hardware_concurrency() : config_.threads;
    threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(config_.trials)));
    if (threads == 1) {
        for (std::int64_t t = 0; t < config_.trials; ++t) {
            results[static_cast<std::size_t>(t)] = run_trial(n, t);
        }
        return results;
    }
    std::atomic<std::int64_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::int64_t t = next++; t < config_.trials; t = next++) {
                    results[static_cast<std::size_t>(t)] = run_trial(n, t);
                }
            } catch (...) {
                errors[w] = std::current_exception();
                next = config_.trials;
            }
        });
    }
    for (auto &th : pool) {
        th.join();
    }
    for (const auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return results;
}

RiskRow Experiment::summarize(std::int64_t n, const std::vector<TrialResult> &results) const {
    RiskRow row;
    row.n = n;
    row.trials = static_cast<std::int64_t>(results.size());
    row.loss_name = loss_name();
    std::vector<double> losses;
    losses.reserve(results.size());
    std::int64_t oob = 0;
    for (const auto &r : results) {
        losses.push_back(r.loss);
        oob += r.in_confidence ? 0 : 1;
    }
    row.risk = mean(losses);
    row.stderr_ = std::sqrt(sample_variance(losses) / static_cast<double>(losses.size()));
    row.n_risk = static_cast<double>(n) * row.risk;
    row.oob_rate = static_cast<double>(oob) / static_cast<double>(results.size());
    row.ks_stat = 0.0;
    if (!results.empty()) {
        for (Eigen::Index j = 0; j < results.front().standardized_error.size(); ++j) {
            std::vector<double> comp;
            comp.reserve(results.size());
            for (const auto &r : results) {
                comp.push_back(r.standardized_error(j));
            }
            row.ks_stat = std::max(row.ks_stat, ks_normal(std::move(comp)).statistic);
        }
    }
    return row;
}

RiskReport Experiment::run() const {
    RiskReport report;
    for (auto n : config_.n_grid) {
        report.rows.push_back(summarize(n, run_trials(n)));
    }
    if (report.rows.size() >= 3) {
        bool positive = true;
        for (const auto &r : report.rows) {
            positive = positive && r.risk > 0.0;
        }
        if (positive) {
            report.fit = scaling_fit(report.rows);
        }
    }
    return report;
}

RiskReport run_experiment(const ExperimentConfig &config) { return Experiment(config).run(); }

ScalingFit scaling_fit(const std::vector<RiskRow> &rows) {
    if (rows.size() < 3) {
        throw ConfigError("scaling_fit: need at least three sample sizes");
    }
    std::vector<double> x;
    std::vector<double> y;
    for (const auto &r : rows) {
        if (!(r.risk > 0.0)) {
            throw NumericalError("scaling_fit: risk must be positive for a log-log fit");
        }
        x.push_back(std::log(static_cast<double>(r.n)));
        y.push_back(std::log(r.risk));
    }
    const LinearFit f = ols(x, y, 0.95);
    return {f.slope, f.intercept, f.slope_stderr, f.slope_low, f.slope_high};
}

std::string emit_csv(const RiskReport &report) {
    std::ostringstream os;
    os << "n,trials,loss_name,risk,stderr,n_risk,ks_stat,oob_rate\n";
    for (const auto &r : report.rows) {
        os << r.n << ',' << r.trials << ',' << r.loss_name << ',' << fmt17(r.risk) << ','
           << fmt17(r.stderr_) << ',' << fmt17(r.n_risk) << ',' << fmt17(r.ks_stat) << ','
           << fmt17(r.oob_rate) << '\n';
    }
    return os.str();
}

std::string emit_json(const RiskReport &report) {
    std::ostringstream os;
    os << "{\n  \"rows\": [";
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const auto &r = report.rows[i];
        os << (i == 0 ? "\n" : ",\n") << "    {\"n\": " << r.n << ", \"trials\": " << r.trials
           << ", \"loss_name\": \"" << r.loss_name << "\", \"risk\": " << json_number(r.risk)
           << ", \"stderr\": " << json_number(r.stderr_) << ", \"n_risk\": " << json_number(r.n_risk)
           << ", \"ks_stat\": " << json_number(r.ks_stat)
           << ", \"oob_rate\": " << json_number(r.oob_rate) << "}";
    }
    os << (report.rows.empty() ? "]" : "\n  ]");
    if (report.fit) {
        const auto &f = *report.fit;
        os << ",\n  \"fit\": {\"slope\": " << json_number(f.slope)
           << ", \"intercept\": " << json_number(f.intercept)
           << ", \"slope_stderr\": " << json_number(f.slope_stderr)
           << ", \"ci_low\": " << json_number(f.ci_low) << ", \"ci_high\": " << json_number(f.ci_high)
           << "}";
    } else {
        os << ",\n  \"fit\": null";
    }
    os << "\n}\n";
    return os.str();
}

RiskReport parse_report_json(const std::string &text) {
    RiskReport report;
    try {
        const auto j = nlohmann::json::parse(text);
        for (const auto &r : j.at("rows")) {
            RiskRow row;
            row.n = r.at("n").get<std::int64_t>();
            row.trials = r.at("trials").get<std::int64_t>();
            row.loss_name = r.at("loss_name").get<std::string>();
            row.risk = json_double(r.at("risk"));
            row.stderr_ = json_double(r.at("stderr"));
            row.n_risk = json_double(r.at("n_risk"));
            row.ks_stat = json_double(r.at("ks_stat"));
            row.oob_rate = json_double(r.at("oob_rate"));
            report.rows.push_back(row);
        }
        if (j.contains("fit") && !j["fit"].is_null()) {
            const auto &f = j["fit"];
            report.fit = ScalingFit{json_double(f.at("slope")), json_double(f.at("intercept")),
                                    json_double(f.at("slope_stderr")), json_double(f.at("ci_low")),
                                    json_double(f.at("ci_high"))};
        }
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("parse_report_json: ") + e.what());
    }
    return report;
}

void emit(const RiskReport &report, const std::string &format, const std::string &path) {
    std::string body;
    if (format == "csv") {
        body = emit_csv(report);
    } else if (format == "json") {
        body = emit_json(report);
    } else {
        throw ConfigError("emit: format must be csv or json");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("emit: cannot open '" + path + "' for writing");
    }
    out << body;
    if (!out) {
        throw ConfigError("emit: failed writing '" + path + "'");
    }
}

} // namespace dnull

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
 * Monte Carlo experiments over (model, strategy, n-grid) and their reports.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dnull/estimators.hpp"
#include "dnull/information.hpp"

namespace dnull {

struct ExperimentConfig {
    std::string model = "qubit_rotation";
    Strategy strategy = Strategy::displaced_qubit;
    double epsilon = 0.05;
    std::vector<std::int64_t> n_grid;
    std::int64_t trials = 1000;
    /// Fixed true parameter; absent means "draw from the uniform prior".
    std::optional<RVec> true_parameter;
    std::uint64_t seed = 1;
    std::string output;
    std::string format = "csv";
    std::optional<RVec> g;
    std::optional<RMat> weight;
    SignRule sign_rule = SignRule::posterior_mean;
    /// Worker threads; 0 means hardware concurrency.
    unsigned threads = 0;
    int holevo_restarts = 20;

    /// Throws ConfigError on broken invariants.
    void validate() const;
};

[[nodiscard]] ExperimentConfig config_from_json(const nlohmann::json &j);
[[nodiscard]] nlohmann::json config_to_json(const ExperimentConfig &c);

struct TrialResult {
    double loss = 0.0;
    RVec theta;
    RVec theta_tilde;
    RVec theta_hat;
    /// sqrt(n) times the estimation error in the strategy's natural
    /// coordinates (local chart coordinates for state estimation).
    RVec local_error;
    /// local_error whitened by the theoretical limit covariance.
    RVec standardized_error;
    bool in_confidence = true;
    /// Same-sample general estimator, reported by the matsumoto strategy.
    std::optional<RVec> reference_hat;
};

struct RiskRow {
    std::int64_t n = 0;
    std::int64_t trials = 0;
    std::string loss_name;
    double risk = 0.0;
    double stderr_ = 0.0;
    double n_risk = 0.0;
    double ks_stat = 0.0;
    double oob_rate = 0.0;

    bool operator==(const RiskRow &) const = default;
};

struct ScalingFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;

    bool operator==(const ScalingFit &) const = default;
};

struct RiskReport {
    std::vector<RiskRow> rows;
    std::optional<ScalingFit> fit;

    bool operator==(const RiskReport &) const = default;
};

/// Prepared experiment: model, cached preliminary design and per-trial
/// simulation. Trials are independent and seeded by (seed, n, trial).
class Experiment {
  public:
    explicit Experiment(ExperimentConfig config);

    [[nodiscard]] const ExperimentConfig &config() const { return config_; }
    [[nodiscard]] const PureStateModel &model() const { return model_; }
    [[nodiscard]] std::string loss_name() const;

    [[nodiscard]] TrialResult run_trial(std::int64_t n, std::int64_t trial) const;
    /// All trials for one n, stored by trial index.
    [[nodiscard]] std::vector<TrialResult> run_trials(std::int64_t n) const;
    [[nodiscard]] RiskRow summarize(std::int64_t n, const std::vector<TrialResult> &results) const;
    [[nodiscard]] RiskReport run() const;

  private:
    [[nodiscard]] RVec draw_parameter(Engine &engine) const;
    [[nodiscard]] double weighted_loss(const RVec &err) const;

    ExperimentConfig config_;
    PureStateModel model_;
    PreliminaryDesign design_;
    RMat weight_;
    RVec g_;
};

[[nodiscard]] RiskReport run_experiment(const ExperimentConfig &config);

/// Least squares of log(risk) on log(n) with a 95% interval for the slope.
[[nodiscard]] ScalingFit scaling_fit(const std::vector<RiskRow> &rows);

[[nodiscard]] std::string emit_csv(const RiskReport &report);
[[nodiscard]] std::string emit_json(const RiskReport &report);
/// Writes the report; throws ConfigError if the path cannot be written.
void emit(const RiskReport &report, const std::string &format, const std::string &path);
[[nodiscard]] RiskReport parse_report_json(const std::string &text);

} // namespace dnull

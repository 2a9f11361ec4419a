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
 * Preliminary and displaced-null estimators, naive null estimators and the
 * posterior of the qubit preliminary stage.
 */
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dnull/measurement_design.hpp"

namespace dnull {

enum class Strategy { naive_null, displaced_qubit, bures, general_holevo, qcrb, matsumoto };
enum class SignRule { plus, minus, posterior_mean };

[[nodiscard]] Strategy parse_strategy(const std::string &name);
[[nodiscard]] std::string to_string(Strategy s);
[[nodiscard]] SignRule parse_sign_rule(const std::string &name);
[[nodiscard]] std::string to_string(SignRule s);

struct TwoStageConfig {
    double epsilon = 0.05;
    Strategy strategy = Strategy::displaced_qubit;
    std::optional<RVec> g;
    std::optional<RMat> weight;
    SignRule sign_rule = SignRule::posterior_mean;
    std::uint64_t seed = 0;
};

struct EstimateRecord {
    RVec theta_tilde;
    RVec theta_hat;
    /// sqrt(n) (theta_hat - theta_tilde).
    RVec u_hat;
    std::vector<OutcomeCounts> counts;
    /// |theta - theta_tilde| <= r_n; filled by callers that know theta.
    std::optional<bool> in_confidence;
    /// Full-state estimate, for state (Bures) estimation.
    std::optional<CVec> state;
};

/// Closed-form MLE from sigma_x counts (outcome 1 = (|0> - |1>)/sqrt2),
/// clamped to [-pi/8, pi/8].
[[nodiscard]] double preliminary_qubit_mle(const OutcomeCounts &counts, std::int64_t n_tilde);

/// Fixed bases of the generic preliminary stage and their share of shots.
struct PreliminaryDesign {
    std::vector<ProjectiveBasis> bases;
    std::vector<double> shares;
};

/// Bases adapted at the domain centre: a real rotation of the adapted frame
/// sending |0> to the uniform superposition (and, for incompatible models, a
/// copy with phase i on the excited vectors).
[[nodiscard]] PreliminaryDesign preliminary_design(const PureStateModel &model);

/// Maximum likelihood over the domain: grid search, then Nelder-Mead.
/// Throws IdentifiabilityError on a flat likelihood.
[[nodiscard]] RVec preliminary_mle(const PureStateModel &model, const PreliminaryDesign &design,
                                   const std::vector<OutcomeCounts> &counts);

/// Simulates n_tilde preliminary shots on `true_state` and returns the MLE.
[[nodiscard]] RVec preliminary_generic(const PureStateModel &model, const CVec &true_state,
                                       std::int64_t n_tilde, Engine &engine,
                                       const PreliminaryDesign *design = nullptr);
[[nodiscard]] RVec preliminary_generic(const PureStateModel &model, const CVec &true_state,
                                       std::int64_t n_tilde, std::uint64_t seed);

[[nodiscard]] EstimateRecord estimate_displaced_qubit(double theta_tilde,
                                                      const OutcomeCounts &counts,
                                                      const DisplacementSchedule &schedule);

/// Counts from the two bases of displaced_bases_bures built on `frame`.
[[nodiscard]] EstimateRecord estimate_bures(const CMat &frame, const RVec &theta_tilde,
                                            const OutcomeCounts &counts_y,
                                            const OutcomeCounts &counts_x,
                                            const DisplacementSchedule &schedule);

[[nodiscard]] EstimateRecord estimate_general(const RVec &theta_tilde,
                                              const OutcomeCounts &counts,
                                              const HolevoSolution &holevo,
                                              const DisplacementSchedule &schedule);

[[nodiscard]] EstimateRecord estimate_qcrb(const RVec &theta_tilde, const OutcomeCounts &counts,
                                           const LinearizedModel &lin, const RVec &g,
                                           const DisplacementSchedule &schedule);

/// Preliminary data needed by the posterior-mean sign rule.
struct PosteriorContext {
    std::int64_t k = 0;
    std::int64_t n_tilde = 0;
};

[[nodiscard]] EstimateRecord estimate_naive_null(double theta_tilde, const OutcomeCounts &counts,
                                                 const DisplacementSchedule &schedule,
                                                 SignRule rule,
                                                 const std::optional<PosteriorContext> &posterior = {});

[[nodiscard]] EstimateRecord estimate_matsumoto(const RVec &theta_tilde,
                                                const OutcomeCounts &counts,
                                                const MatsumotoDesign &design,
                                                const DisplacementSchedule &schedule);

/// Posterior of theta on (-pi/8, pi/8) under the uniform prior after k
/// outcomes "1" in n_tilde sigma_x shots:
/// proportional to sin^{2k}(theta - pi/4) cos^{2(n_tilde - k)}(theta - pi/4).
class PosteriorDensity {
  public:
    PosteriorDensity(std::int64_t k, std::int64_t n_tilde);

    [[nodiscard]] double operator()(double theta) const;
    [[nodiscard]] double log_density(double theta) const;
    /// Unnormalised log-likelihood (no quadrature involved).
    [[nodiscard]] double log_kernel(double theta) const;
    [[nodiscard]] double mode() const { return mode_; }
    /// Integral of the density over the domain (1 up to quadrature error).
    [[nodiscard]] double total_mass() const;
    /// int_{r >= tau} min(pi(center + r), pi(center - r)) dr.
    [[nodiscard]] double two_sided_mass(double center, double tau) const;

    static constexpr double lower = -0.39269908169872414; // -pi/8
    static constexpr double upper = 0.39269908169872414;

  private:
    [[nodiscard]] double integrate(const std::function<double(double)> &f, double a,
                                   double b) const;

    std::int64_t k_;
    std::int64_t n_;
    double mode_;
    double log_max_;
    double log_norm_;
};

/// Unnormalised log-likelihood 2k log|sin x| + 2(n_tilde - k) log cos x,
/// x = theta - pi/4; -inf outside the domain.
[[nodiscard]] double posterior_log_kernel(std::int64_t k, std::int64_t n_tilde, double theta);

[[nodiscard]] double posterior_density(std::int64_t k, std::int64_t n_tilde, double theta);

} // namespace dnull

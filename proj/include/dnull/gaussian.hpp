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
 * Gaussian shift models, the Holevo bound of the limit model and a
 * coherent-state sampler.
 *
 * Quadratures are ordered R = (Q_1..Q_k, P_1..P_k) with [R_i, R_j] = i Omega_ij
 * and vacuum variance 1/2. The quadrature sum_k (a_k Q_k + b_k P_k) is
 * identified with the complex vector sum_k (a_k + i b_k)|k>.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dnull/models.hpp"

namespace dnull {

/// Coherent states |C u> on k = C.rows() modes with weight W.
class GaussianShiftModel {
  public:
    GaussianShiftModel(CMat C, RMat W);
    static GaussianShiftModel from_linearized(const LinearizedModel &lin, const RMat &W);

    [[nodiscard]] Eigen::Index modes() const { return c_.rows(); }
    [[nodiscard]] Eigen::Index param_dim() const { return c_.cols(); }
    [[nodiscard]] const CMat &C() const { return c_; }
    [[nodiscard]] const RMat &W() const { return w_; }
    [[nodiscard]] const RMat &D() const { return d_; }
    /// 2 D^T D.
    [[nodiscard]] RMat fisher() const { return 2.0 * d_.transpose() * d_; }

  private:
    CMat c_;
    RMat w_;
    RMat d_;
};

/// Symplectic form [[0, I], [-I, 0]] on k modes.
[[nodiscard]] RMat symplectic_form(Eigen::Index modes);

/// 1/2 Tr(W B B^T) + 1/2 || sqrt(W) B Omega B^T sqrt(W) ||_*.
[[nodiscard]] double holevo_objective(const RMat &B, const RMat &W);

struct HolevoOptions {
    int restarts = 20;
    int max_iterations = 4000;
    std::uint64_t seed = 0x5EEDULL;
};

struct HolevoSolution {
    double value = 0.0;
    /// m x 2k coefficients of Z on the system quadratures.
    RMat B;
    /// m x 2k coefficients on the ancilla quadratures, when needed.
    std::optional<RMat> Bprime;
    /// Lower-triangular, Z = T Q~.
    RMat T;
    /// Vectors of Q~_1..Q~_m in C^{2k}: system modes first, then ancilla.
    std::vector<CVec> quad_vectors;
    /// Vectors of Z_1..Z_m in the same layout.
    std::vector<CVec> z_vectors;
    /// Objective value reached by each restart.
    std::vector<double> restart_values;
    /// Norm of the projected subgradient at the returned point.
    double grad_norm = 0.0;

    [[nodiscard]] bool uses_ancilla() const { return Bprime.has_value(); }
    /// Limit covariance T T^T / 2 of the estimator built on this solution.
    [[nodiscard]] RMat covariance() const { return 0.5 * T * T.transpose(); }
};

/// Minimises the Holevo objective over B with B D = I.
[[nodiscard]] HolevoSolution holevo_bound_gaussian(const GaussianShiftModel &model,
                                                   const HolevoOptions &options = {});

/// Closed form Z = Sigma^-1 D^T R for models with D^T Omega D = 0.
[[nodiscard]] HolevoSolution optimal_quadratures_achievable(const GaussianShiftModel &model);

/// Completes a feasible B (B D = I) into a HolevoSolution: ancilla block,
/// Gram matrix, T and quadrature vectors.
[[nodiscard]] HolevoSolution assemble_solution(const RMat &B, const RMat &W);

struct CoherentState {
    CVec z;
};

/// Per-mode i.i.d. Poisson(|z_k - Delta_k|^2) draws (displaced counting).
[[nodiscard]] std::vector<std::vector<std::int64_t>>
sample_coherent_counts(const CoherentState &state, const RVec &delta, std::int64_t n_shots,
                       std::uint64_t seed);

/// n_shots x 2k homodyne samples, Q_k ~ N(sqrt2 Re z_k, 1/2), P_k likewise.
[[nodiscard]] RMat sample_quadratures(const CoherentState &state, std::int64_t n_shots,
                                      std::uint64_t seed);

/// u = Delta/2 - mean(N)/(2 Delta) per mode.
[[nodiscard]] RVec counting_homodyne_estimator(const std::vector<std::vector<std::int64_t>> &counts,
                                               const RVec &delta);
[[nodiscard]] RVec counting_homodyne_estimator(const std::vector<std::vector<std::int64_t>> &counts,
                                               double delta);

} // namespace dnull

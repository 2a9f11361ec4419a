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
 * Parametric pure-state models, local charts and linearised models.
 */
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dnull/quantum_core.hpp"

namespace dnull {

/// Axis-aligned parameter box (lower, upper).
struct Box {
    RVec lower;
    RVec upper;

    [[nodiscard]] Eigen::Index size() const { return lower.size(); }
    [[nodiscard]] bool contains(const RVec &theta, double slack = 0.0) const;
    [[nodiscard]] RVec center() const { return 0.5 * (lower + upper); }
    [[nodiscard]] RVec clamp(const RVec &theta) const;
};

/// Smooth family theta -> |psi_theta>.
///
/// States are returned with their first non-negligible amplitude real
/// positive. Derivatives are those of the phase-fixed state, projected onto
/// the orthogonal complement of the state (so <psi|d_j psi> = 0).
class PureStateModel {
  public:
    using StateFn = std::function<CVec(const RVec &)>;
    /// Returns the d x m matrix whose columns are d_j psi.
    using DerivativeFn = std::function<CMat(const RVec &)>;

    PureStateModel(std::string name, Eigen::Index dim, Eigen::Index param_dim, StateFn state,
                   std::optional<DerivativeFn> derivative, Box domain);

    [[nodiscard]] const std::string &name() const { return name_; }
    [[nodiscard]] Eigen::Index dim() const { return dim_; }
    [[nodiscard]] Eigen::Index param_dim() const { return m_; }
    [[nodiscard]] const Box &domain() const { return domain_; }
    [[nodiscard]] bool has_analytic_derivative() const { return derivative_.has_value(); }

    [[nodiscard]] StateVector state(const RVec &theta) const;
    /// Raw amplitudes (phase-fixed, unchecked norm) for hot loops.
    [[nodiscard]] CVec amplitudes(const RVec &theta) const;
    /// Gauge-projected derivatives, analytic when available.
    [[nodiscard]] CMat derivatives(const RVec &theta) const;
    /// Gauge-projected derivatives by 4th-order central differences.
    [[nodiscard]] CMat finite_difference_derivatives(const RVec &theta, double h = 1e-5) const;

  private:
    void check_param(const RVec &theta) const;

    std::string name_;
    Eigen::Index dim_;
    Eigen::Index m_;
    StateFn state_;
    std::optional<DerivativeFn> derivative_;
    Box domain_;
};

/// dpsi - <psi|dpsi> psi.
[[nodiscard]] CVec project_derivative_gauge(const StateVector &psi, const CVec &dpsi);

/// cos(theta)|0> + sin(theta)|1> on (-pi/8, pi/8).
[[nodiscard]] PureStateModel qubit_rotation_model();

/// exp(-i sum_k (u_1^k sigma_y^k - u_2^k sigma_x^k))|0> in C^d with
/// interleaved parameters u = (u_1^1, u_2^1, u_1^2, ...), box (-pi/8, pi/8).
[[nodiscard]] PureStateModel local_qudit_model(Eigen::Index d);

/// Three-level model with fixed relative phases,
/// (cos t1 cos t2, e^{i a} sin t1 cos t2, e^{i b} sin t2). Its derivatives
/// have a real Gram matrix, so the QCRB is attainable.
[[nodiscard]] PureStateModel phased_qutrit_model(double alpha = 0.7, double beta = -1.1);

/// State cos r|0> + sin r (w/r) with w = sum_k (u_1^k + i u_2^k)|k> in the
/// frame given by the columns of `frame`.
[[nodiscard]] CVec chart_state(const CMat &frame, const RVec &u);

/// Inverse of chart_state: coordinates of `state` (up to global phase).
/// Requires <0|state> != 0.
[[nodiscard]] RVec chart_coordinates(const CMat &frame, const CVec &state);

/// Model linearised around a base point.
struct LinearizedModel {
    RVec base_point;
    /// Orthonormal frame, column 0 is the model state at base_point.
    CMat frame;
    /// (d-1) x m, c_kj = <k|d_j psi>.
    CMat C;
    /// d x m gauge-projected derivatives at base_point.
    CMat derivatives;
    /// S_j = sum_k (c^q_kj sigma_y^k - c^p_kj sigma_x^k).
    std::vector<HermitianOp> generators;

    [[nodiscard]] Eigen::Index dim() const { return frame.rows(); }
    [[nodiscard]] Eigen::Index param_dim() const { return C.cols(); }
    /// Real 2(d-1) x m matrix: rows k are sqrt2 Re C, rows k+(d-1) sqrt2 Im C.
    [[nodiscard]] RMat D() const;
    /// exp(-i sum_j u_j S_j / sqrt(n))|0>.
    [[nodiscard]] StateVector local_state(const RVec &u, double n) const;
};

/// Builds the linearised model in a frame completed from psi_theta.
[[nodiscard]] LinearizedModel linearize_at(const PureStateModel &model, const RVec &theta);

/// Same construction for explicit (state, derivatives) and frame; the first
/// frame column must be the state.
[[nodiscard]] LinearizedModel linearize_in_frame(const CMat &frame, const CMat &derivatives,
                                                 const RVec &base_point);

/// Rank test on the real 2(d-1) x m matrix, singular values above
/// 1e-8 sigma_max.
[[nodiscard]] bool has_full_real_rank(const CMat &C);

/// Model registry: "qubit_rotation", "local_qudit:<d>", "phased_qutrit" and
/// names added with register_model.
using ModelFactory = std::function<PureStateModel()>;
void register_model(const std::string &name, ModelFactory factory);
[[nodiscard]] PureStateModel make_model(const std::string &name);
[[nodiscard]] std::vector<std::string> registered_models();

} // namespace dnull

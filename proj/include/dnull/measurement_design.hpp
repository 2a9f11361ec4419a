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
 * Null and displaced-null measurement bases.
 */
#pragma once

#include <cstdint>
#include <utility>

#include "dnull/gaussian.hpp"
#include "dnull/models.hpp"

namespace dnull {

/// Sample-size dependent constants of the two-stage schemes.
class DisplacementSchedule {
  public:
    DisplacementSchedule(double epsilon, std::int64_t n);

    [[nodiscard]] double epsilon() const { return eps_; }
    [[nodiscard]] std::int64_t n() const { return n_; }
    /// ceil(n^(1 - eps)) shots for the preliminary stage.
    [[nodiscard]] std::int64_t n_tilde() const;
    /// delta_n = n^(-1/2 + 3 eps).
    [[nodiscard]] double delta() const;
    /// Delta_n = n^(3 eps) = sqrt(n) delta_n.
    [[nodiscard]] double Delta() const;
    /// r_n = n^(-1/2 + eps).
    [[nodiscard]] double radius() const;

  private:
    double eps_;
    std::int64_t n_;
};

/// Basis {exp(-i tau sigma_y)|0>, exp(-i tau sigma_y)|1>}.
[[nodiscard]] ProjectiveBasis rotated_qubit_basis(double tau);
/// {(|0> + |1>)/sqrt2, (|0> - |1>)/sqrt2}.
[[nodiscard]] ProjectiveBasis sigma_x_basis();

/// Basis whose first vector is the model state at theta_tilde.
[[nodiscard]] ProjectiveBasis null_basis(const PureStateModel &model, const RVec &theta_tilde);

[[nodiscard]] ProjectiveBasis displaced_basis_qubit(double theta_tilde,
                                                    const DisplacementSchedule &schedule);

/// exp(-i delta sum_k sigma_y^k) frame and exp(+i delta sum_k sigma_x^k) frame.
[[nodiscard]] std::pair<ProjectiveBasis, ProjectiveBasis>
displaced_bases_bures(const CMat &frame, double delta);
[[nodiscard]] std::pair<ProjectiveBasis, ProjectiveBasis>
displaced_bases_bures(const CMat &frame, const DisplacementSchedule &schedule);

/// psi (x) |0'> in C^d (x) C^d, index s*d + a.
[[nodiscard]] CVec with_ancilla(const CVec &psi);

/// Vector of C^d (x) C^d represented by a quadrature vector of C^{2(d-1)}
/// (system modes |k>(x)|0'>, then ancilla modes |0>(x)|k'>).
[[nodiscard]] CVec embed_quadrature_vector(const CMat &frame, const CVec &q);

/// Rotation of {|0~>, |1~>, ..., completion} by exp(-i delta sum_k sigma(i k~)).
[[nodiscard]] ProjectiveBasis displaced_basis_general(const LinearizedModel &lin,
                                                      const HolevoSolution &holevo,
                                                      double delta);
[[nodiscard]] ProjectiveBasis displaced_basis_general(const LinearizedModel &lin,
                                                      const HolevoSolution &holevo,
                                                      const DisplacementSchedule &schedule);

/// Re-expresses `lin` in a frame where C is real. Tries per-row phases first;
/// otherwise uses a frame spanned by psi and the real Gram-Schmidt
/// orthonormalisation of the derivatives, which exists iff
/// Im<d_i psi|d_j psi> = 0. Throws ConfigError when neither works.
[[nodiscard]] LinearizedModel real_form(const LinearizedModel &lin);

/// exp(-i delta sum_k g_k sigma_y^k) applied to the real-form frame.
[[nodiscard]] ProjectiveBasis qcrb_basis(const LinearizedModel &lin, const RVec &g, double delta);
[[nodiscard]] ProjectiveBasis qcrb_basis(const LinearizedModel &lin, const RVec &g,
                                         const DisplacementSchedule &schedule);

struct MatsumotoDesign {
    ProjectiveBasis basis;
    /// (m+1) x m table <b_k|z_i>, k = 0..m.
    CMat bz;
    /// <b_k|psi~>, k = 0..m.
    CVec bpsi;
};

[[nodiscard]] MatsumotoDesign matsumoto_basis(const LinearizedModel &lin,
                                              const HolevoSolution &holevo, double delta);
[[nodiscard]] MatsumotoDesign matsumoto_basis(const LinearizedModel &lin,
                                              const HolevoSolution &holevo,
                                              const DisplacementSchedule &schedule);

} // namespace dnull

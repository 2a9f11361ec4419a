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
 * Small dense state vectors, Hermitian operators, orthonormal bases,
 * measurement probabilities and multinomial sampling.
 */
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "dnull/errors.hpp"
#include "dnull/rng.hpp"

namespace dnull {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

inline constexpr double kConstructionTol = 1e-12;
inline constexpr double kAlgebraTol = 1e-10;

/// Unit vector of C^d.
class StateVector {
  public:
    StateVector() = default;
    /// Throws ConfigError unless `amplitudes` has unit norm within `tol`.
    explicit StateVector(CVec amplitudes, double tol = kConstructionTol);

    /// Normalises an arbitrary non-zero vector.
    static StateVector normalized(const CVec &v);
    /// Canonical basis vector e_k of C^dim.
    static StateVector basis(Eigen::Index dim, Eigen::Index k);

    [[nodiscard]] Eigen::Index dim() const { return amp_.size(); }
    [[nodiscard]] const CVec &amplitudes() const { return amp_; }
    [[nodiscard]] cplx operator[](Eigen::Index i) const { return amp_(i); }

  private:
    CVec amp_;
};

/// Hermitian matrix; the constructor rejects non-Hermitian input.
class HermitianOp {
  public:
    HermitianOp() = default;
    explicit HermitianOp(CMat entries, double tol = kConstructionTol);

    [[nodiscard]] Eigen::Index dim() const { return m_.rows(); }
    [[nodiscard]] const CMat &matrix() const { return m_; }

  private:
    CMat m_;
};

/// Orthonormal basis of C^d stored as the columns of a unitary matrix.
class ProjectiveBasis {
  public:
    ProjectiveBasis() = default;
    explicit ProjectiveBasis(CMat columns, double tol = kAlgebraTol);
    explicit ProjectiveBasis(const std::vector<StateVector> &vectors,
                             double tol = kAlgebraTol);

    [[nodiscard]] Eigen::Index dim() const { return u_.rows(); }
    [[nodiscard]] const CMat &matrix() const { return u_; }
    [[nodiscard]] StateVector vector(Eigen::Index i) const;

  private:
    CMat u_;
};

/// Outcome counts of n repetitions of a measurement.
class OutcomeCounts {
  public:
    OutcomeCounts() = default;
    explicit OutcomeCounts(std::vector<std::int64_t> counts);
    OutcomeCounts(std::vector<std::int64_t> counts, std::int64_t total);

    [[nodiscard]] const std::vector<std::int64_t> &counts() const { return counts_; }
    [[nodiscard]] std::int64_t total() const { return total_; }
    [[nodiscard]] std::size_t size() const { return counts_.size(); }
    [[nodiscard]] std::int64_t operator[](std::size_t i) const { return counts_[i]; }
    /// Empirical frequency counts[i] / total.
    [[nodiscard]] double frequency(std::size_t i) const;

  private:
    std::vector<std::int64_t> counts_;
    std::int64_t total_ = 0;
};

[[nodiscard]] cplx inner_product(const StateVector &a, const StateVector &b);

/// 2(1 - |<a|b>|).
[[nodiscard]] double bures_distance_sq(const StateVector &a, const StateVector &b);

/// exp(-i angle g) as a unitary matrix (eigendecomposition of g).
[[nodiscard]] CMat exp_generator(const HermitianOp &g, double angle);

/// exp(-i angle g) v.
[[nodiscard]] StateVector apply_exp_generator(const HermitianOp &g, double angle,
                                              const StateVector &v);

/// p(i) = |<v_i|state>|^2.
[[nodiscard]] RVec measurement_probs(const ProjectiveBasis &basis, const StateVector &state);

/// Unchecked kernel of measurement_probs for hot loops.
[[nodiscard]] RVec probabilities(const CMat &basis, const CVec &state);

/// Multinomial(n, probs) by sequential conditional binomials.
[[nodiscard]] OutcomeCounts sample_counts(const RVec &probs, std::int64_t n, Engine &engine);
[[nodiscard]] OutcomeCounts sample_counts(const RVec &probs, std::int64_t n,
                                          std::uint64_t seed);

/// Extends orthonormal `partial` to a basis of C^dim. Inputs keep their
/// order; the rest comes from Gram-Schmidt on canonical vectors, picking the
/// largest residual first, with the first non-zero amplitude made real
/// positive.
[[nodiscard]] ProjectiveBasis complete_basis(const std::vector<StateVector> &partial,
                                             Eigen::Index dim);

/// Multiplies v by a phase making its first non-negligible amplitude real
/// positive.
[[nodiscard]] CVec fix_phase(const CVec &v);

/// Pauli-type generators in a given orthonormal frame {|0>,...,|d-1>}
/// (columns of `frame`): sigma_x^k = |k><0| + |0><k|,
/// sigma_y^k = i|k><0| - i|0><k|.
[[nodiscard]] HermitianOp sigma_x(const CMat &frame, Eigen::Index k);
[[nodiscard]] HermitianOp sigma_y(const CMat &frame, Eigen::Index k);

} // namespace dnull

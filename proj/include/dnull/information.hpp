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
 * Quantum and classical Fisher information for pure-state models, SLDs and
 * attainability checks.
 */
#pragma once

#include <vector>

#include "dnull/models.hpp"

namespace dnull {

inline constexpr double kZeroProbability = 1e-14;

/// 4 Re<d_i|d_j> - 4 Re(<psi|d_j><d_i|psi>).
[[nodiscard]] RMat qfi_pure(const PureStateModel &model, const RVec &theta);
/// Same formula from explicit state and derivatives.
[[nodiscard]] RMat qfi_pure(const CVec &psi, const CMat &derivatives);

/// L_j = 2(|d_j><psi| + |psi><d_j|) with gauge-projected derivatives.
[[nodiscard]] std::vector<HermitianOp> sld_pure(const PureStateModel &model,
                                                const RVec &theta);

/// Classical Fisher information of a projective measurement.
[[nodiscard]] RMat cfi(const ProjectiveBasis &basis, const PureStateModel &model,
                       const RVec &theta);
[[nodiscard]] RMat cfi(const CMat &basis, const CVec &psi, const CMat &derivatives);

/// Per-outcome margins of the saturation conditions for a one-parameter
/// model measured in a basis. Margins are violation magnitudes (0 = exact).
struct OutcomeCondition {
    double probability = 0.0;
    /// |Im Tr(M_i L rho)| for outcomes with p > 0.
    double imaginary_margin = 0.0;
    /// Cauchy-Schwarz gap Tr(M_i L rho L) - |Tr(M_i L rho)|^2 / p for p > 0.
    double proportionality_margin = 0.0;
    /// Tr(M_i L rho L) for outcomes with p = 0.
    double null_margin = 0.0;
    bool satisfied = true;
};

struct ConditionReport {
    std::vector<OutcomeCondition> outcomes;
    bool achievable = true;
    /// Largest margin over all outcomes and conditions.
    double max_margin = 0.0;
};

[[nodiscard]] ConditionReport qcrb_conditions(const ProjectiveBasis &basis,
                                              const PureStateModel &model, const RVec &theta,
                                              double tol = 1e-10);

struct Compatibility {
    /// Im<d_i psi|d_j psi>, antisymmetric.
    RMat matrix;
    bool compatible = true;
};

[[nodiscard]] Compatibility compatibility(const PureStateModel &model, const RVec &theta);

struct FisherReport {
    RMat qfi;
    RMat cfi;
    RMat compat;
    bool compatible = true;
    /// CFI saturates the QFI in the given basis.
    bool achievable = false;
};

[[nodiscard]] FisherReport fisher_report(const ProjectiveBasis &basis,
                                         const PureStateModel &model, const RVec &theta);

} // namespace dnull

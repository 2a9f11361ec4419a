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

#include "dnull/information.hpp"

#include <cmath>

namespace dnull {

RMat qfi_pure(const CVec &psi, const CMat &derivatives) {
    const CMat g = derivatives.adjoint() * derivatives;
    const CVec a = derivatives.adjoint() * psi; // <d_i|psi>
    RMat f = 4.0 * g.real() - 4.0 * (a * a.adjoint()).real();
    return 0.5 * (f + f.transpose());
}

RMat qfi_pure(const PureStateModel &model, const RVec &theta) {
    return qfi_pure(model.amplitudes(theta), model.derivatives(theta));
}

std::vector<HermitianOp> sld_pure(const PureStateModel &model, const RVec &theta) {
    const CVec psi = model.amplitudes(theta);
    const CMat d = model.derivatives(theta);
    std::vector<HermitianOp> out;
    for (Eigen::Index j = 0; j < d.cols(); ++j) {
        out.emplace_back(2.0 * (d.col(j) * psi.adjoint() + psi * d.col(j).adjoint()));
    }
    return out;
}

RMat cfi(const CMat &basis, const CVec &psi, const CMat &derivatives) {
    if (basis.rows() != psi.size() || derivatives.rows() != psi.size()) {
        throw DimensionError("cfi: dimension mismatch");
    }
    const CVec amp = basis.adjoint() * psi;          // <v_k|psi>
    const CMat damp = basis.adjoint() * derivatives; // <v_k|d_j psi>
    const Eigen::Index m = derivatives.cols();
    RMat out = RMat::Zero(m, m);
    for (Eigen::Index k = 0; k < amp.size(); ++k) {
        const double p = std::norm(amp(k));
        if (p <= kZeroProbability) {
            continue;
        }
        RVec dp(m);
        for (Eigen::Index j = 0; j < m; ++j) {
            dp(j) = 2.0 * (std::conj(amp(k)) * damp(k, j)).real();
        }
        out += dp * dp.transpose() / p;
    }
    return out;
}

RMat cfi(const ProjectiveBasis &basis, const PureStateModel &model, const RVec &theta) {
    if (basis.dim() != model.dim()) {
        throw DimensionError("cfi: basis and model dimensions differ");
    }
    return cfi(basis.matrix(), model.amplitudes(theta), model.derivatives(theta));
}

ConditionReport qcrb_conditions(const ProjectiveBasis &basis, const PureStateModel &model,
                                const RVec &theta, double tol) {
    if (model.param_dim() != 1) {
        throw ConfigError("qcrb_conditions: operator conditions need a one-parameter model");
    }
    if (basis.dim() != model.dim()) {
        throw DimensionError("qcrb_conditions: basis and model dimensions differ");
    }
    const CVec psi = model.amplitudes(theta);
    const CVec lpsi = 2.0 * model.derivatives(theta).col(0); // L|psi> for the gauge
    const CVec amp = basis.matrix().adjoint() * psi;
    const CVec lamp = basis.matrix().adjoint() * lpsi;
    ConditionReport report;
    for (Eigen::Index i = 0; i < amp.size(); ++i) {
        OutcomeCondition c;
        c.probability = std::norm(amp(i));
        const double lrl = std::norm(lamp(i)); // Tr(M_i L rho L)
        if (c.probability > kZeroProbability) {
            const cplx t = std::conj(amp(i)) * lamp(i); // Tr(M_i L rho)
            c.imaginary_margin = std::abs(t.imag());
            c.proportionality_margin = std::abs(lrl - std::norm(t) / c.probability);
            c.satisfied = c.imaginary_margin <= tol && c.proportionality_margin <= tol;
        } else {
            c.null_margin = lrl;
            c.satisfied = c.null_margin <= tol;
        }
        report.max_margin = std::max(
            {report.max_margin, c.imaginary_margin, c.proportionality_margin, c.null_margin});
        report.achievable = report.achievable && c.satisfied;
        report.outcomes.push_back(c);
    }
    return report;
}

Compatibility compatibility(const PureStateModel &model, const RVec &theta) {
    const CMat d = model.derivatives(theta);
    Compatibility c;
    c.matrix = (d.adjoint() * d).imag();
    c.compatible = c.matrix.size() == 0 || c.matrix.cwiseAbs().maxCoeff() < 1e-8;
    return c;
}

FisherReport fisher_report(const ProjectiveBasis &basis, const PureStateModel &model,
                           const RVec &theta) {
    FisherReport r;
    r.qfi = qfi_pure(model, theta);
    r.cfi = cfi(basis, model, theta);
    const Compatibility c = compatibility(model, theta);
    r.compat = c.matrix;
    r.compatible = c.compatible;
    const double scale = std::max(1.0, r.qfi.cwiseAbs().maxCoeff());
    r.achievable = (r.qfi - r.cfi).cwiseAbs().maxCoeff() < 1e-6 * scale;
    return r;
}

} // namespace dnull

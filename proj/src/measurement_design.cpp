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

#include "dnull/measurement_design.hpp"

#include <cmath>
#include <numbers>

namespace dnull {

DisplacementSchedule::DisplacementSchedule(double epsilon, std::int64_t n)
    : eps_(epsilon), n_(n) {
    if (!(epsilon > 0.0 && epsilon < 0.1)) {
        throw ConfigError("DisplacementSchedule: epsilon must lie in (0, 1/10)");
    }
    if (n < 1) {
        throw ConfigError("DisplacementSchedule: n must be positive");
    }
}

std::int64_t DisplacementSchedule::n_tilde() const {
    const double v = std::pow(static_cast<double>(n_), 1.0 - eps_);
    // Guard against pow returning k + 1e-12 for an exact integer power.
    const double r = std::round(v);
    return static_cast<std::int64_t>(std::abs(v - r) < 1e-9 * r ? r : std::ceil(v));
}

double DisplacementSchedule::delta() const {
    return std::pow(static_cast<double>(n_), -0.5 + 3.0 * eps_);
}

double DisplacementSchedule::Delta() const {
    return std::pow(static_cast<double>(n_), 3.0 * eps_);
}

double DisplacementSchedule::radius() const {
    return std::pow(static_cast<double>(n_), -0.5 + eps_);
}

ProjectiveBasis rotated_qubit_basis(double tau) {
    CMat u(2, 2);
    u << std::cos(tau), -std::sin(tau), std::sin(tau), std::cos(tau);
    return ProjectiveBasis(u);
}

ProjectiveBasis sigma_x_basis() {
    const double s = 1.0 / std::numbers::sqrt2;
    CMat u(2, 2);
    u << s, s, s, -s;
    return ProjectiveBasis(u);
}

ProjectiveBasis null_basis(const PureStateModel &model, const RVec &theta_tilde) {
    return complete_basis({model.state(theta_tilde)}, model.dim());
}

ProjectiveBasis displaced_basis_qubit(double theta_tilde, const DisplacementSchedule &schedule) {
    return rotated_qubit_basis(theta_tilde + schedule.delta());
}

std::pair<ProjectiveBasis, ProjectiveBasis> displaced_bases_bures(const CMat &frame,
                                                                  double delta) {
    const Eigen::Index d = frame.rows();
    if (d < 2 || frame.cols() != d) {
        throw DimensionError("displaced_bases_bures: need a square frame with d >= 2");
    }
    CMat gy = CMat::Zero(d, d);
    CMat gx = CMat::Zero(d, d);
    for (Eigen::Index k = 1; k < d; ++k) {
        gy += sigma_y(frame, k).matrix();
        gx += sigma_x(frame, k).matrix();
    }
    const CMat u1 = exp_generator(HermitianOp(gy), delta);
    const CMat u2 = exp_generator(HermitianOp(gx), -delta);
    return {ProjectiveBasis(CMat(u1 * frame)), ProjectiveBasis(CMat(u2 * frame))};
}

std::pair<ProjectiveBasis, ProjectiveBasis>
displaced_bases_bures(const CMat &frame, const DisplacementSchedule &schedule) {
    return displaced_bases_bures(frame, schedule.delta());
}

CVec with_ancilla(const CVec &psi) {
    const Eigen::Index d = psi.size();
    CVec out = CVec::Zero(d * d);
    for (Eigen::Index s = 0; s < d; ++s) {
        out(s * d) = psi(s);
    }
    return out;
}

CVec embed_quadrature_vector(const CMat &frame, const CVec &q) {
    const Eigen::Index d = frame.rows();
    const Eigen::Index k = d - 1;
    if (q.size() != 2 * k) {
        throw DimensionError("embed_quadrature_vector: expected 2(d-1) components");
    }
    CVec sys = CVec::Zero(d);
    for (Eigen::Index j = 0; j < k; ++j) {
        sys += q(j) * frame.col(j + 1);
    }
    CVec out = with_ancilla(sys);
    for (Eigen::Index j = 0; j < k; ++j) {
        // |0> (x) |(j+1)'>
        for (Eigen::Index s = 0; s < d; ++s) {
            out(s * d + j + 1) += q(k + j) * frame(s, 0);
        }
    }
    return out;
}

namespace {

struct GeneralFrame {
    CMat rotated;          // columns U(delta)|j~>, j = 0..d^2-1
    std::vector<CVec> ktilde; // |1~>..|m~>
    CVec zero;             // |0~>
};

GeneralFrame general_frame(const LinearizedModel &lin, const HolevoSolution &holevo,
                           double delta) {
    const Eigen::Index d = lin.dim();
    const Eigen::Index m = lin.param_dim();
    if (static_cast<Eigen::Index>(holevo.quad_vectors.size()) != m) {
        throw ConfigError("displaced_basis_general: solution has the wrong number of quadratures");
    }
    GeneralFrame gf;
    gf.zero = with_ancilla(lin.frame.col(0));
    std::vector<StateVector> partial{StateVector(gf.zero, kAlgebraTol)};
    for (const auto &q : holevo.quad_vectors) {
        if (q.size() != 2 * (d - 1)) {
            throw DimensionError("displaced_basis_general: quadrature vector length mismatch");
        }
        gf.ktilde.push_back(embed_quadrature_vector(lin.frame, q));
    }
    CMat span(d * d, m + 1);
    span.col(0) = gf.zero;
    for (Eigen::Index j = 0; j < m; ++j) {
        span.col(j + 1) = gf.ktilde[static_cast<std::size_t>(j)];
    }
    if ((span.adjoint() * span - CMat::Identity(m + 1, m + 1)).cwiseAbs().maxCoeff() > 1e-8) {
        throw ConfigError("displaced_basis_general: quadrature vectors are not orthonormal");
    }
    for (Eigen::Index j = 0; j < m; ++j) {
        partial.emplace_back(span.col(j + 1), 1e-8);
    }
    const ProjectiveBasis full = complete_basis(partial, d * d);
    const cplx i(0.0, 1.0);
    CMat g = CMat::Zero(d * d, d * d);
    for (const auto &kt : gf.ktilde) {
        g += -i * gf.zero * kt.adjoint() + i * kt * gf.zero.adjoint();
    }
    gf.rotated = exp_generator(HermitianOp(g, 1e-9), delta) * full.matrix();
    return gf;
}

} // namespace

ProjectiveBasis displaced_basis_general(const LinearizedModel &lin, const HolevoSolution &holevo,
                                        double delta) {
    return ProjectiveBasis(general_frame(lin, holevo, delta).rotated);
}

ProjectiveBasis displaced_basis_general(const LinearizedModel &lin, const HolevoSolution &holevo,
                                        const DisplacementSchedule &schedule) {
    return displaced_basis_general(lin, holevo, schedule.delta());
}

LinearizedModel real_form(const LinearizedModel &lin) {
    const Eigen::Index d = lin.dim();
    const double scale = std::max(1.0, lin.C.cwiseAbs().maxCoeff());
    // Per-row phase alignment.
    CMat frame = lin.frame;
    for (Eigen::Index k = 1; k < d; ++k) {
        const auto row = lin.C.row(k - 1);
        Eigen::Index jmax = 0;
        row.cwiseAbs().maxCoeff(&jmax);
        if (std::abs(row(jmax)) > 0.0) {
            frame.col(k) *= std::polar(1.0, std::arg(row(jmax)));
        }
    }
    const CMat c_aligned = frame.rightCols(d - 1).adjoint() * lin.derivatives;
    if (c_aligned.imag().cwiseAbs().maxCoeff() <= 1e-10 * scale) {
        return linearize_in_frame(frame, lin.derivatives, lin.base_point);
    }
    // Derivative-adapted frame.
    const CMat gram = lin.derivatives.adjoint() * lin.derivatives;
    if (gram.imag().cwiseAbs().maxCoeff() > 1e-8 * std::max(1.0, gram.cwiseAbs().maxCoeff())) {
        throw ConfigError("real_form: no frame with real coefficients exists "
                          "(Im<d_i psi|d_j psi> != 0)");
    }
    std::vector<StateVector> partial{StateVector(lin.frame.col(0), kAlgebraTol)};
    CMat ortho(d, 0);
    for (Eigen::Index j = 0; j < lin.derivatives.cols(); ++j) {
        CVec v = lin.derivatives.col(j);
        for (int pass = 0; pass < 2; ++pass) {
            v -= lin.frame.col(0) * lin.frame.col(0).dot(v);
            v -= ortho * (ortho.adjoint() * v);
        }
        const double nv = v.norm();
        if (nv > 1e-8 * std::max(1.0, lin.derivatives.col(j).norm())) {
            ortho.conservativeResize(d, ortho.cols() + 1);
            ortho.col(ortho.cols() - 1) = v / nv;
            partial.emplace_back(v / nv, 1e-10);
        }
    }
    const ProjectiveBasis adapted = complete_basis(partial, d);
    LinearizedModel out = linearize_in_frame(adapted.matrix(), lin.derivatives, lin.base_point);
    if (out.C.imag().cwiseAbs().maxCoeff() > 1e-8 * scale) {
        throw NumericalError("real_form: derivative-adapted frame failed to give real C");
    }
    return out;
}

ProjectiveBasis qcrb_basis(const LinearizedModel &lin, const RVec &g, double delta) {
    const Eigen::Index d = lin.dim();
    if (g.size() != d - 1) {
        throw DimensionError("qcrb_basis: g must have d-1 entries");
    }
    if ((g.array() == 0.0).any()) {
        throw ConfigError("qcrb_basis: every g_k must be non-zero");
    }
    const LinearizedModel rf = real_form(lin);
    CMat gen = CMat::Zero(d, d);
    for (Eigen::Index k = 1; k < d; ++k) {
        gen += g(k - 1) * sigma_y(rf.frame, k).matrix();
    }
    return ProjectiveBasis(CMat(exp_generator(HermitianOp(gen), delta) * rf.frame));
}

ProjectiveBasis qcrb_basis(const LinearizedModel &lin, const RVec &g,
                           const DisplacementSchedule &schedule) {
    return qcrb_basis(lin, g, schedule.delta());
}

MatsumotoDesign matsumoto_basis(const LinearizedModel &lin, const HolevoSolution &holevo,
                                double delta) {
    const GeneralFrame gf = general_frame(lin, holevo, delta);
    const Eigen::Index m = lin.param_dim();
    MatsumotoDesign out{ProjectiveBasis(gf.rotated), CMat(m + 1, m), CVec(m + 1)};
    CMat kt(gf.zero.size(), m);
    for (Eigen::Index j = 0; j < m; ++j) {
        kt.col(j) = gf.ktilde[static_cast<std::size_t>(j)];
    }
    const CMat z = kt * holevo.T.transpose().cast<cplx>(); // z_i = sum_j T_ij |j~>
    for (Eigen::Index k = 0; k <= m; ++k) {
        const CVec b = gf.rotated.col(k);
        out.bpsi(k) = b.dot(gf.zero);
        if (std::abs(out.bpsi(k)) < 1e-14) {
            throw ConfigError("matsumoto_basis: basis vector orthogonal to the reference state");
        }
        for (Eigen::Index i = 0; i < m; ++i) {
            out.bz(k, i) = b.dot(z.col(i));
        }
    }
    return out;
}

MatsumotoDesign matsumoto_basis(const LinearizedModel &lin, const HolevoSolution &holevo,
                                const DisplacementSchedule &schedule) {
    return matsumoto_basis(lin, holevo, schedule.delta());
}

} // namespace dnull

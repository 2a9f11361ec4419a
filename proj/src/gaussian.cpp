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

#include "dnull/gaussian.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>

#include "dnull/optimize.hpp"

namespace dnull {

namespace {

RMat sqrtm_spd(const RMat &w, bool inverse) {
    Eigen::SelfAdjointEigenSolver<RMat> es(w);
    return inverse ? es.operatorInverseSqrt() : es.operatorSqrt();
}

double nuclear_norm(const RMat &a) {
    return Eigen::JacobiSVD<RMat>(a).singularValues().sum();
}

RMat build_D(const CMat &c) {
    const Eigen::Index k = c.rows();
    RMat d(2 * k, c.cols());
    d.topRows(k) = std::numbers::sqrt2 * c.real();
    d.bottomRows(k) = std::numbers::sqrt2 * c.imag();
    return d;
}

/// Row i of a (B | B') pair as a vector of C^{2k} (system, then ancilla).
CVec row_vector(const RMat &b, const RMat *bp, Eigen::Index i, Eigen::Index k) {
    CVec v = CVec::Zero(2 * k);
    for (Eigen::Index j = 0; j < k; ++j) {
        v(j) = cplx(b(i, j), b(i, k + j));
        if (bp != nullptr) {
            v(k + j) = cplx((*bp)(i, j), (*bp)(i, k + j));
        }
    }
    return v;
}

} // namespace

GaussianShiftModel::GaussianShiftModel(CMat C, RMat W) : c_(std::move(C)), w_(std::move(W)) {
    const Eigen::Index m = c_.cols();
    if (c_.rows() < 1 || m < 1) {
        throw DimensionError("GaussianShiftModel: empty coefficient matrix");
    }
    if (w_.rows() != m || w_.cols() != m) {
        throw DimensionError("GaussianShiftModel: weight matrix must be m x m");
    }
    if ((w_ - w_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, w_.norm())) {
        throw ConfigError("GaussianShiftModel: weight matrix is not symmetric");
    }
    w_ = (0.5 * (w_ + w_.transpose())).eval();
    Eigen::SelfAdjointEigenSolver<RMat> es(w_);
    if (es.eigenvalues().minCoeff() <= 0.0) {
        throw ConfigError("GaussianShiftModel: weight matrix is not positive definite");
    }
    d_ = build_D(c_);
    if (!has_full_real_rank(c_)) {
        throw IdentifiabilityError("GaussianShiftModel: rank(D) < m");
    }
}

GaussianShiftModel GaussianShiftModel::from_linearized(const LinearizedModel &lin,
                                                       const RMat &W) {
    return GaussianShiftModel(lin.C, W);
}

RMat symplectic_form(Eigen::Index modes) {
    RMat o = RMat::Zero(2 * modes, 2 * modes);
    o.topRightCorner(modes, modes) = RMat::Identity(modes, modes);
    o.bottomLeftCorner(modes, modes) = -RMat::Identity(modes, modes);
    return o;
}

double holevo_objective(const RMat &B, const RMat &W) {
    const RMat sw = sqrtm_spd(W, false);
    const RMat omega = symplectic_form(B.cols() / 2);
    return 0.5 * (W * B * B.transpose()).trace() +
           0.5 * nuclear_norm(sw * B * omega * B.transpose() * sw);
}

HolevoSolution assemble_solution(const RMat &B, const RMat &W) {
    const Eigen::Index m = B.rows();
    const Eigen::Index k = B.cols() / 2;
    const RMat omega = symplectic_form(k);
    const RMat sw = sqrtm_spd(W, false);
    const RMat a = sw * B * omega * B.transpose() * sw;
    HolevoSolution sol;
    sol.B = B;
    sol.value = 0.5 * (W * B * B.transpose()).trace() + 0.5 * nuclear_norm(a);
    if (nuclear_norm(a) > 1e-10) {
        // i A is Hermitian; an eigenvector x = a + i b of eigenvalue lam > 0
        // gives orthonormal real f1 = sqrt2 b, f2 = sqrt2 a with
        // A restricted to span{f1, f2} = [[0, lam], [-lam, 0]].
        const CMat ia = cplx(0.0, 1.0) * a.cast<cplx>();
        Eigen::SelfAdjointEigenSolver<CMat> es(ia);
        const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
        RMat bp_w = RMat::Zero(m, 2 * k); // sqrt(W) B'
        Eigen::Index block = 0;
        for (Eigen::Index i = 0; i < m; ++i) {
            const double lam = es.eigenvalues()(i);
            if (lam <= 1e-12 * scale) {
                continue;
            }
            if (block >= k) {
                throw NumericalError("assemble_solution: more symplectic blocks than ancilla modes");
            }
            const CVec x = es.eigenvectors().col(i);
            const RVec f1 = std::numbers::sqrt2 * x.imag();
            const RVec f2 = std::numbers::sqrt2 * x.real();
            bp_w.col(block) += std::sqrt(lam) * f1;
            bp_w.col(k + block) -= std::sqrt(lam) * f2;
            ++block;
        }
        sol.Bprime = sqrtm_spd(W, true) * bp_w;
        const RMat check = *sol.Bprime * omega * sol.Bprime->transpose() + B * omega * B.transpose();
        if (check.cwiseAbs().maxCoeff() > 1e-8 * std::max(1.0, B.squaredNorm())) {
            throw NumericalError("assemble_solution: ancilla block does not cancel commutators");
        }
    }
    const RMat *bp = sol.Bprime ? &*sol.Bprime : nullptr;
    CMat zm(2 * k, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        zm.col(i) = row_vector(B, bp, i, k);
    }
    const RMat gram = (zm.adjoint() * zm).real();
    Eigen::LLT<RMat> llt(gram);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("assemble_solution: Gram matrix of Z is not positive definite");
    }
    sol.T = llt.matrixL();
    const CMat qm = zm * sol.T.transpose().inverse().cast<cplx>();
    if ((qm.adjoint() * qm - CMat::Identity(m, m)).cwiseAbs().maxCoeff() > 1e-8) {
        throw NumericalError("assemble_solution: quadrature vectors are not orthonormal");
    }
    for (Eigen::Index i = 0; i < m; ++i) {
        sol.z_vectors.emplace_back(zm.col(i));
        sol.quad_vectors.emplace_back(qm.col(i));
    }
    return sol;
}

HolevoSolution optimal_quadratures_achievable(const GaussianShiftModel &model) {
    const RMat &d = model.D();
    const RMat omega = symplectic_form(model.modes());
    const RMat dod = d.transpose() * omega * d;
    if (dod.cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, d.squaredNorm())) {
        throw ConfigError("optimal_quadratures_achievable: D^T Omega D != 0, model not achievable");
    }
    const RMat sigma = d.transpose() * d;
    const RMat b = sigma.ldlt().solve(d.transpose());
    HolevoSolution sol = assemble_solution(b, model.W());
    sol.restart_values = {sol.value};
    return sol;
}

HolevoSolution holevo_bound_gaussian(const GaussianShiftModel &model,
                                     const HolevoOptions &options) {
    const RMat &d = model.D();
    const RMat &w = model.W();
    const Eigen::Index m = model.param_dim();
    const Eigen::Index two_k = d.rows();
    const RMat b0 = (d.transpose() * d).ldlt().solve(d.transpose());
    const Eigen::Index free_cols = two_k - m;
    if (free_cols == 0) {
        HolevoSolution sol = assemble_solution(b0, w);
        sol.restart_values.assign(static_cast<std::size_t>(std::max(1, options.restarts)),
                                  sol.value);
        return sol;
    }
    // Orthonormal basis of ker(D^T): trailing columns of a full QR of D.
    Eigen::HouseholderQR<RMat> qr(d);
    const RMat q = qr.householderQ() * RMat::Identity(two_k, two_k);
    const RMat null = q.rightCols(free_cols);
    const RMat sw = sqrtm_spd(w, false);
    const RMat omega = symplectic_form(two_k / 2);

    auto make_b = [&](const RVec &x) {
        const Eigen::Map<const RMat> kmat(x.data(), m, free_cols);
        return RMat(b0 + kmat * null.transpose());
    };
    auto objective = [&](const RVec &x) { return holevo_objective(make_b(x), w); };
    // Gradient of 1/2 Tr(W B B^T) + 1/2 Tr phi(sqrt(W) B Omega B^T sqrt(W)), where phi acts
    // on singular values: phi'(s) = 1 gives a subgradient of the nuclear norm and
    // phi'(s) = s / sqrt(s^2 + mu^2) the gradient of its smoothing sum sqrt(s^2 + mu^2).
    auto gradient = [&](const RVec &x, double mu) {
        const RMat b = make_b(x);
        const RMat a = sw * b * omega * b.transpose() * sw;
        Eigen::JacobiSVD<RMat> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
        RVec weights = RVec::Ones(a.rows());
        if (mu > 0.0) {
            const RVec s = svd.singularValues();
            weights = s.array() / (s.array().square() + mu * mu).sqrt();
        }
        const RMat g = svd.matrixU() * weights.asDiagonal() * svd.matrixV().transpose();
        const RMat mm = sw * g * sw;
        const RMat grad_b = w * b + 0.5 * (mm.transpose() - mm) * b * omega;
        const RMat grad_k = grad_b * null;
        return RVec(Eigen::Map<const RVec>(grad_k.data(), grad_k.size()));
    };
    auto subgradient = [&](const RVec &x) { return gradient(x, 0.0); };
    auto smoothed = [&](const RVec &x, double mu) {
        const RMat b = make_b(x);
        const RMat a = sw * b * omega * b.transpose() * sw;
        const RVec s = Eigen::JacobiSVD<RMat>(a).singularValues();
        return 0.5 * (w * b * b.transpose()).trace() +
               0.5 * (s.array().square() + mu * mu).sqrt().sum();
    };

    Engine engine(options.seed);
    boost::random::normal_distribution<double> normal(0.0, 1.0);
    const double scale = std::max(1e-3, b0.norm());
    const Eigen::Index nvar = m * free_cols;
    HolevoSolution best;
    best.value = std::numeric_limits<double>::infinity();
    RVec best_x;
    std::vector<double> restart_values;
    const int restarts = std::max(1, options.restarts);
    for (int r = 0; r < restarts; ++r) {
        RVec x = RVec::Zero(nvar);
        if (r > 0) {
            for (Eigen::Index i = 0; i < nvar; ++i) {
                x(i) = scale * normal(engine);
            }
        }
        RVec xb = x;
        double fb = objective(x);
        double f_window = fb;
        for (int it = 1; it <= options.max_iterations; ++it) {
            const RVec g = subgradient(x);
            const double gn = g.norm();
            if (gn < 1e-14) {
                break;
            }
            x -= (scale / it) * g / gn;
            const double fx = objective(x);
            if (fx < fb) {
                fb = fx;
                xb = x;
            }
            if (it % 50 == 0) {
                if (f_window - fb <= 1e-10 * std::max(1e-300, std::abs(fb))) {
                    break;
                }
                f_window = fb;
            }
        }
        // Subgradient steps stall where singular values of the commutator
        // block cross. Refine with quasi-Newton steps on a smoothed nuclear
        // norm while the smoothing width shrinks, then a simplex polish on the
        // exact objective.
        const double f_scale = std::max(1e-12, std::abs(fb));
        RVec y = xb;
        for (double mu = 1e-2 * f_scale; mu > 1e-11 * f_scale; mu *= 1e-2) {
            y = bfgs_minimize([&](const RVec &v) { return smoothed(v, mu); },
                              [&](const RVec &v) { return gradient(v, mu); }, y,
                              1e-12 * f_scale, 2000)
                    .x;
            const double fy = objective(y);
            if (fy < fb) {
                fb = fy;
                xb = y;
            }
        }
        const MinimizeResult nm =
            nelder_mead(objective, xb, RVec::Constant(nvar, 1e-4 * scale), 1e-12, 4000);
        if (nm.value < fb) {
            fb = nm.value;
            xb = nm.x;
        }
        restart_values.push_back(fb);
        if (fb < best.value) {
            best.value = fb;
            best_x = xb;
        }
    }
    if (!std::isfinite(best.value)) {
        throw NumericalError("holevo_bound_gaussian: optimiser produced a non-finite value");
    }
    HolevoSolution sol = assemble_solution(make_b(best_x), w);
    sol.restart_values = std::move(restart_values);
    sol.grad_norm = subgradient(best_x).norm();
    return sol;
}

std::vector<std::vector<std::int64_t>> sample_coherent_counts(const CoherentState &state,
                                                              const RVec &delta,
                                                              std::int64_t n_shots,
                                                              std::uint64_t seed) {
    if (delta.size() != state.z.size()) {
        throw DimensionError("sample_coherent_counts: displacement length differs from modes");
    }
    if (n_shots < 0) {
        throw ConfigError("sample_coherent_counts: negative shot count");
    }
    Engine engine(seed);
    std::vector<std::vector<std::int64_t>> out(static_cast<std::size_t>(state.z.size()));
    for (Eigen::Index k = 0; k < state.z.size(); ++k) {
        const double intensity = std::norm(state.z(k) - delta(k));
        auto &col = out[static_cast<std::size_t>(k)];
        col.assign(static_cast<std::size_t>(n_shots), 0);
        if (intensity <= 0.0) {
            continue;
        }
        boost::random::poisson_distribution<std::int64_t, double> dist(intensity);
        for (auto &c : col) {
            c = dist(engine);
        }
    }
    return out;
}

RMat sample_quadratures(const CoherentState &state, std::int64_t n_shots, std::uint64_t seed) {
    const Eigen::Index k = state.z.size();
    Engine engine(seed);
    boost::random::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    RMat out(n_shots, 2 * k);
    for (std::int64_t s = 0; s < n_shots; ++s) {
        for (Eigen::Index j = 0; j < k; ++j) {
            out(s, j) = std::numbers::sqrt2 * state.z(j).real() + normal(engine);
            out(s, k + j) = std::numbers::sqrt2 * state.z(j).imag() + normal(engine);
        }
    }
    return out;
}

RVec counting_homodyne_estimator(const std::vector<std::vector<std::int64_t>> &counts,
                                 const RVec &delta) {
    if (static_cast<Eigen::Index>(counts.size()) != delta.size()) {
        throw DimensionError("counting_homodyne_estimator: one displacement per mode");
    }
    RVec u(delta.size());
    for (Eigen::Index k = 0; k < delta.size(); ++k) {
        if (delta(k) == 0.0) {
            throw ConfigError("counting_homodyne_estimator: displacement must be non-zero");
        }
        const auto &c = counts[static_cast<std::size_t>(k)];
        if (c.empty()) {
            throw ConfigError("counting_homodyne_estimator: no samples");
        }
        long double sum = 0.0L;
        for (auto v : c) {
            sum += static_cast<long double>(v);
        }
        const double mean = static_cast<double>(sum / static_cast<long double>(c.size()));
        u(k) = delta(k) / 2.0 - mean / (2.0 * delta(k));
    }
    return u;
}

RVec counting_homodyne_estimator(const std::vector<std::vector<std::int64_t>> &counts,
                                 double delta) {
    return counting_homodyne_estimator(counts,
                                       RVec::Constant(static_cast<Eigen::Index>(counts.size()), delta));
}

} // namespace dnull

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

#include "dnull/quantum_core.hpp"

#include <cmath>
#include <sstream>

#include <boost/random/binomial_distribution.hpp>

namespace dnull {

namespace {

void require_same_dim(Eigen::Index a, Eigen::Index b, const char *what) {
    if (a != b) {
        std::ostringstream os;
        os << what << ": dimension mismatch (" << a << " vs " << b << ")";
        throw DimensionError(os.str());
    }
}

} // namespace

StateVector::StateVector(CVec amplitudes, double tol) : amp_(std::move(amplitudes)) {
    if (amp_.size() == 0) {
        throw ConfigError("StateVector: empty amplitude list");
    }
    const double norm = amp_.norm();
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > tol) {
        std::ostringstream os;
        os << "StateVector: norm " << norm << " is not 1";
        throw ConfigError(os.str());
    }
}

StateVector StateVector::normalized(const CVec &v) {
    const double norm = v.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw NumericalError("StateVector::normalized: zero or non-finite vector");
    }
    return StateVector(v / norm);
}

StateVector StateVector::basis(Eigen::Index dim, Eigen::Index k) {
    if (k < 0 || k >= dim) {
        throw DimensionError("StateVector::basis: index out of range");
    }
    CVec v = CVec::Zero(dim);
    v(k) = 1.0;
    return StateVector(std::move(v));
}

HermitianOp::HermitianOp(CMat entries, double tol) : m_(std::move(entries)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0) {
        throw DimensionError("HermitianOp: matrix must be square and non-empty");
    }
    const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
    if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > tol * scale) {
        throw ConfigError("HermitianOp: matrix is not Hermitian");
    }
    // Symmetrise so downstream eigensolvers see an exactly Hermitian matrix.
    m_ = (0.5 * (m_ + m_.adjoint())).eval();
}

ProjectiveBasis::ProjectiveBasis(CMat columns, double tol) : u_(std::move(columns)) {
    if (u_.rows() != u_.cols() || u_.rows() == 0) {
        throw DimensionError("ProjectiveBasis: need exactly dim vectors of length dim");
    }
    const CMat gram = u_.adjoint() * u_;
    const auto dim = u_.rows();
    if ((gram - CMat::Identity(dim, dim)).cwiseAbs().maxCoeff() > tol) {
        throw ConfigError("ProjectiveBasis: vectors are not orthonormal");
    }
    // For square matrices orthonormal columns already imply completeness;
    // checked anyway as a guard against round-off in large constructions.
    if ((u_ * u_.adjoint() - CMat::Identity(dim, dim)).cwiseAbs().maxCoeff() > tol) {
        throw ConfigError("ProjectiveBasis: projectors do not sum to identity");
    }
}

namespace {
CMat stack_columns(const std::vector<StateVector> &vectors) {
    if (vectors.empty()) {
        throw DimensionError("ProjectiveBasis: no vectors");
    }
    const auto dim = vectors.front().dim();
    CMat u(dim, static_cast<Eigen::Index>(vectors.size()));
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        require_same_dim(vectors[i].dim(), dim, "ProjectiveBasis");
        u.col(static_cast<Eigen::Index>(i)) = vectors[i].amplitudes();
    }
    return u;
}
} // namespace

ProjectiveBasis::ProjectiveBasis(const std::vector<StateVector> &vectors, double tol)
    : ProjectiveBasis(stack_columns(vectors), tol) {}

StateVector ProjectiveBasis::vector(Eigen::Index i) const {
    return StateVector(u_.col(i), kAlgebraTol);
}

OutcomeCounts::OutcomeCounts(std::vector<std::int64_t> counts) : counts_(std::move(counts)) {
    for (auto c : counts_) {
        if (c < 0) {
            throw ConfigError("OutcomeCounts: negative count");
        }
        total_ += c;
    }
}

OutcomeCounts::OutcomeCounts(std::vector<std::int64_t> counts, std::int64_t total)
    : OutcomeCounts(std::move(counts)) {
    if (total != total_) {
        throw ConfigError("OutcomeCounts: counts do not sum to total");
    }
}

double OutcomeCounts::frequency(std::size_t i) const {
    if (total_ <= 0) {
        throw ConfigError("OutcomeCounts: frequency of an empty sample");
    }
    return static_cast<double>(counts_.at(i)) / static_cast<double>(total_);
}

cplx inner_product(const StateVector &a, const StateVector &b) {
    require_same_dim(a.dim(), b.dim(), "inner_product");
    return a.amplitudes().dot(b.amplitudes()); // Eigen conjugates the left side
}

double bures_distance_sq(const StateVector &a, const StateVector &b) {
    const double overlap = std::min(1.0, std::abs(inner_product(a, b)));
    return 2.0 * (1.0 - overlap);
}

CMat exp_generator(const HermitianOp &g, double angle) {
    Eigen::SelfAdjointEigenSolver<CMat> es(g.matrix());
    if (es.info() != Eigen::Success) {
        throw NumericalError("exp_generator: eigendecomposition failed");
    }
    const CVec phases = (es.eigenvalues() * (-angle))
                            .unaryExpr([](double x) { return std::polar(1.0, x); });
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

StateVector apply_exp_generator(const HermitianOp &g, double angle, const StateVector &v) {
    require_same_dim(g.dim(), v.dim(), "apply_exp_generator");
    const CVec out = exp_generator(g, angle) * v.amplitudes();
    return StateVector(out / out.norm(), kAlgebraTol);
}

RVec probabilities(const CMat &basis, const CVec &state) {
    return (basis.adjoint() * state).cwiseAbs2();
}

RVec measurement_probs(const ProjectiveBasis &basis, const StateVector &state) {
    require_same_dim(basis.dim(), state.dim(), "measurement_probs");
    return probabilities(basis.matrix(), state.amplitudes());
}

OutcomeCounts sample_counts(const RVec &probs, std::int64_t n, Engine &engine) {
    if (n < 0) {
        throw ConfigError("sample_counts: negative sample size");
    }
    if (probs.size() == 0) {
        throw ConfigError("sample_counts: empty probability vector");
    }
    if (probs.minCoeff() < -kAlgebraTol) {
        throw ConfigError("sample_counts: negative probability");
    }
    const double total = probs.sum();
    if (std::abs(total - 1.0) > kAlgebraTol) {
        throw ConfigError("sample_counts: probabilities do not sum to 1");
    }
    std::vector<std::int64_t> counts(static_cast<std::size_t>(probs.size()), 0);
    std::int64_t remaining = n;
    double mass_left = 1.0;
    for (Eigen::Index i = 0; i + 1 < probs.size() && remaining > 0; ++i) {
        const double p = std::max(0.0, probs(i));
        const double q = mass_left > 0.0 ? std::clamp(p / mass_left, 0.0, 1.0) : 0.0;
        std::int64_t c = 0;
        if (q >= 1.0) {
            c = remaining;
        } else if (q > 0.0) {
            boost::random::binomial_distribution<std::int64_t, double> dist(remaining, q);
            c = dist(engine);
        }
        counts[static_cast<std::size_t>(i)] = c;
        remaining -= c;
        mass_left -= p;
    }
    counts.back() += remaining;
    return OutcomeCounts(std::move(counts), n);
}

OutcomeCounts sample_counts(const RVec &probs, std::int64_t n, std::uint64_t seed) {
    Engine engine(seed);
    return sample_counts(probs, n, engine);
}

CVec fix_phase(const CVec &v) {
    const double scale = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > 1e-8 * scale) {
            return v * std::polar(1.0, -std::arg(v(i)));
        }
    }
    return v;
}

ProjectiveBasis complete_basis(const std::vector<StateVector> &partial, Eigen::Index dim) {
    const auto k = static_cast<Eigen::Index>(partial.size());
    if (k > dim) {
        throw DimensionError("complete_basis: more vectors than the dimension");
    }
    CMat u = CMat::Zero(dim, dim);
    for (Eigen::Index i = 0; i < k; ++i) {
        require_same_dim(partial[static_cast<std::size_t>(i)].dim(), dim, "complete_basis");
        u.col(i) = partial[static_cast<std::size_t>(i)].amplitudes();
    }
    if (k > 0) {
        const CMat gram = u.leftCols(k).adjoint() * u.leftCols(k);
        if ((gram - CMat::Identity(k, k)).cwiseAbs().maxCoeff() > kAlgebraTol) {
            throw ConfigError("complete_basis: input vectors are not orthonormal");
        }
    }
    std::vector<bool> used(static_cast<std::size_t>(dim), false);
    for (Eigen::Index col = k; col < dim; ++col) {
        // Residuals of every unused canonical vector against the current span.
        Eigen::Index best = -1;
        double best_norm = -1.0;
        CVec best_res;
        for (Eigen::Index e = 0; e < dim; ++e) {
            if (used[static_cast<std::size_t>(e)]) {
                continue;
            }
            CVec r = CVec::Unit(dim, e);
            for (int pass = 0; pass < 2; ++pass) { // re-orthogonalise once
                r -= u.leftCols(col) * (u.leftCols(col).adjoint() * r);
            }
            const double nr = r.norm();
            if (nr > best_norm + 1e-12) {
                best_norm = nr;
                best = e;
                best_res = r;
            }
        }
        if (best < 0 || best_norm < 1e-8) {
            throw NumericalError("complete_basis: completion lost rank");
        }
        used[static_cast<std::size_t>(best)] = true;
        u.col(col) = fix_phase(best_res / best_norm);
    }
    return ProjectiveBasis(std::move(u));
}

HermitianOp sigma_x(const CMat &frame, Eigen::Index k) {
    if (k < 1 || k >= frame.cols()) {
        throw DimensionError("sigma_x: index must be in 1..d-1");
    }
    const CVec e0 = frame.col(0);
    const CVec ek = frame.col(k);
    return HermitianOp(ek * e0.adjoint() + e0 * ek.adjoint());
}

HermitianOp sigma_y(const CMat &frame, Eigen::Index k) {
    if (k < 1 || k >= frame.cols()) {
        throw DimensionError("sigma_y: index must be in 1..d-1");
    }
    const cplx i(0.0, 1.0);
    const CVec e0 = frame.col(0);
    const CVec ek = frame.col(k);
    return HermitianOp(i * ek * e0.adjoint() - i * e0 * ek.adjoint());
}

} // namespace dnull

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

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "dnull/quantum_core.hpp"
#include "dnull/stats.hpp"

using namespace dnull;

namespace {

CMat pauli_y() {
    CMat y(2, 2);
    y << 0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0;
    return y;
}

StateVector qubit(double a, double b) {
    CVec v(2);
    v << a, b;
    return StateVector(v);
}

CMat random_unitary(Eigen::Index d, std::mt19937_64 &rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    CMat a(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            a(i, j) = cplx(n(rng), n(rng));
        }
    }
    return Eigen::HouseholderQR<CMat>(a).householderQ() * CMat::Identity(d, d);
}

} // namespace

TEST(InnerProduct, BasisVectors) {
    const auto e0 = StateVector::basis(2, 0);
    const auto e1 = StateVector::basis(2, 1);
    EXPECT_EQ(inner_product(e0, e0), cplx(1.0));
    EXPECT_EQ(inner_product(e0, e1), cplx(0.0));
}

TEST(InnerProduct, ConjugatesFirstArgument) {
    EXPECT_NEAR(inner_product(qubit(std::cos(0.3), std::sin(0.3)), StateVector::basis(2, 0)).real(),
                0.955336489125606, 1e-12);
    CVec a(2);
    a << cplx(0.0, 1.0), 0.0;
    EXPECT_NEAR(std::abs(inner_product(StateVector(a), StateVector::basis(2, 0)) - cplx(0.0, -1.0)),
                0.0, 1e-15);
}

TEST(InnerProduct, RejectsDimensionMismatch) {
    EXPECT_THROW((void)inner_product(StateVector::basis(2, 0), StateVector::basis(3, 0)),
                 DimensionError);
}

TEST(StateVector, RejectsNonUnitNorm) {
    CVec v(2);
    v << 1.0, 1.0;
    EXPECT_THROW(StateVector{v}, ConfigError);
}

TEST(BuresDistance, Examples) {
    const auto e0 = StateVector::basis(2, 0);
    EXPECT_DOUBLE_EQ(bures_distance_sq(e0, e0), 0.0);
    EXPECT_DOUBLE_EQ(bures_distance_sq(e0, StateVector::basis(2, 1)), 2.0);
    EXPECT_NEAR(bures_distance_sq(e0, qubit(std::cos(0.1), std::sin(0.1))), 0.009991669443948358,
                1e-15);
}

TEST(BuresDistance, SymmetricAndPhaseInvariant) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const CMat u = random_unitary(4, rng);
        const StateVector a(u.col(0));
        const StateVector b(CVec((u.col(0) + u.col(1)) / std::sqrt(2.0)));
        const StateVector bp(CVec(b.amplitudes() * std::polar(1.0, 0.7 * trial)));
        EXPECT_NEAR(bures_distance_sq(a, b), bures_distance_sq(b, a), 1e-12);
        EXPECT_NEAR(bures_distance_sq(a, b), bures_distance_sq(a, bp), 1e-12);
    }
}

TEST(ExpGenerator, RotationExamples) {
    const HermitianOp sy(pauli_y());
    const auto e0 = StateVector::basis(2, 0);
    EXPECT_LT((apply_exp_generator(sy, 0.0, e0).amplitudes() - e0.amplitudes()).norm(), 1e-14);
    for (double t : {0.1, -0.3, 1.2}) {
        const auto v = apply_exp_generator(sy, t, e0);
        EXPECT_NEAR(std::abs(v[0] - std::cos(t)), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(v[1] - std::sin(t)), 0.0, 1e-12);
    }
    const auto v = apply_exp_generator(sy, std::numbers::pi / 2.0, e0);
    EXPECT_NEAR(std::abs(v[0]), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(v[1] - 1.0), 0.0, 1e-12);
}

TEST(ExpGenerator, GroupLaw) {
    std::mt19937_64 rng(5);
    const CMat u = random_unitary(3, rng);
    const CMat h = u * RVec::LinSpaced(3, -1.0, 2.0).cast<cplx>().asDiagonal() * u.adjoint();
    const HermitianOp g(CMat(0.5 * (h + h.adjoint())));
    const StateVector v(u.col(1));
    const auto ab = apply_exp_generator(g, 0.4, apply_exp_generator(g, -1.1, v));
    const auto sum = apply_exp_generator(g, -0.7, v);
    EXPECT_LT((ab.amplitudes() - sum.amplitudes()).norm(), 1e-9);
    EXPECT_NEAR(ab.amplitudes().norm(), 1.0, 1e-10);
}

TEST(ExpGenerator, RejectsNonHermitian) {
    CMat m(2, 2);
    m << 0.0, 1.0, 0.0, 0.0;
    EXPECT_THROW(HermitianOp{m}, ConfigError);
}

TEST(MeasurementProbs, NullBasisIsDelta) {
    const auto s = qubit(std::cos(0.2), std::sin(0.2));
    const ProjectiveBasis b = complete_basis({s}, 2);
    const RVec p = measurement_probs(b, s);
    EXPECT_NEAR(p(0), 1.0, 1e-12);
    EXPECT_NEAR(p(1), 0.0, 1e-12);
}

TEST(MeasurementProbs, RotatedQubitBasis) {
    const double theta = 0.17;
    const double tau = -0.05;
    CMat u(2, 2);
    u << std::cos(tau), -std::sin(tau), std::sin(tau), std::cos(tau);
    const RVec p = measurement_probs(ProjectiveBasis(u), qubit(std::cos(theta), std::sin(theta)));
    EXPECT_NEAR(p(0), std::pow(std::cos(theta - tau), 2), 1e-12);
    EXPECT_NEAR(p(1), std::pow(std::sin(theta - tau), 2), 1e-12);
}

TEST(MeasurementProbs, MatchesDenseOracle) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        const CMat u = random_unitary(3, rng);
        const CMat w = random_unitary(3, rng);
        const StateVector psi(w.col(0));
        const RVec p = measurement_probs(ProjectiveBasis(u), psi);
        double total = 0.0;
        for (Eigen::Index i = 0; i < 3; ++i) {
            cplx amp = 0.0;
            for (Eigen::Index k = 0; k < 3; ++k) {
                amp += std::conj(u(k, i)) * psi[k];
            }
            EXPECT_NEAR(p(i), std::norm(amp), 1e-12);
            EXPECT_GE(p(i), 0.0);
            total += p(i);
        }
        EXPECT_NEAR(total, 1.0, 1e-10);
    }
}

TEST(SampleCounts, DegenerateAndDeterministic) {
    RVec p(2);
    p << 1.0, 0.0;
    const auto c = sample_counts(p, 100, std::uint64_t{3});
    EXPECT_EQ(c[0], 100);
    EXPECT_EQ(c[1], 0);
    RVec q(3);
    q << 0.2, 0.5, 0.3;
    EXPECT_EQ(sample_counts(q, 12345, std::uint64_t{99}).counts(),
              sample_counts(q, 12345, std::uint64_t{99}).counts());
    EXPECT_EQ(sample_counts(q, 12345, std::uint64_t{99}).total(), 12345);
}

TEST(SampleCounts, RejectsNegativeProbabilities) {
    RVec p(2);
    p << 1.1, -0.1;
    EXPECT_THROW((void)sample_counts(p, 10, std::uint64_t{1}), ConfigError);
}

TEST(SampleCounts, LawOfLargeNumbers) {
    RVec p(2);
    p << 0.5, 0.5;
    double avg = 0.0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        avg += sample_counts(p, 1000000, derive_seed(42, s)).frequency(0);
    }
    EXPECT_NEAR(avg / 100.0, 0.5, 0.002);
}

TEST(SampleCounts, FrequencyErrorScalesAsInverseSqrtN) {
    RVec p(3);
    p << 0.2, 0.3, 0.5;
    std::vector<double> logn;
    std::vector<double> logerr;
    for (std::int64_t n : {1000, 10000, 100000, 1000000}) {
        double err = 0.0;
        for (std::uint64_t s = 0; s < 50; ++s) {
            const auto c = sample_counts(p, n, derive_seed(7, static_cast<std::uint64_t>(n), s));
            double e = 0.0;
            for (std::size_t i = 0; i < 3; ++i) {
                e = std::max(e, std::abs(c.frequency(i) - p(static_cast<Eigen::Index>(i))));
            }
            err += e;
        }
        logn.push_back(std::log(static_cast<double>(n)));
        logerr.push_back(std::log(err / 50.0));
    }
    EXPECT_NEAR(ols(logn, logerr).slope, -0.5, 0.1);
}

TEST(CompleteBasis, Examples) {
    const auto b2 = complete_basis({StateVector::basis(2, 0)}, 2);
    EXPECT_NEAR(std::abs(b2.matrix()(1, 1)), 1.0, 1e-12);
    const auto b4 = complete_basis({}, 4);
    EXPECT_LT((b4.matrix() - CMat::Identity(4, 4)).norm(), 1e-14);
    CVec v = CVec::Zero(3);
    v(0) = v(1) = 1.0 / std::sqrt(2.0);
    const auto b3 = complete_basis({StateVector(v)}, 3);
    EXPECT_LT((b3.matrix().col(0) - v).norm(), 1e-15);
    EXPECT_LT((b3.matrix().adjoint() * b3.matrix() - CMat::Identity(3, 3)).norm(), 1e-10);
    EXPECT_LT((b3.matrix() * b3.matrix().adjoint() - CMat::Identity(3, 3)).norm(), 1e-10);
}

TEST(CompleteBasis, RejectsNonOrthonormalInput) {
    CVec v(2);
    v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    EXPECT_THROW((void)complete_basis({StateVector::basis(2, 0), StateVector(v)}, 2), ConfigError);
}

TEST(PauliGenerators, StandardFrame) {
    const CMat frame = CMat::Identity(2, 2);
    EXPECT_LT((sigma_y(frame, 1).matrix() - pauli_y()).norm(), 1e-15);
    CMat x(2, 2);
    x << 0.0, 1.0, 1.0, 0.0;
    EXPECT_LT((sigma_x(frame, 1).matrix() - x).norm(), 1e-15);
}

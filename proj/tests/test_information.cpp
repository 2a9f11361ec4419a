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
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "dnull/information.hpp"
#include "dnull/measurement_design.hpp"

using namespace dnull;

namespace {

PureStateModel constant_model() {
    return PureStateModel(
        "constant", 2, 1,
        [](const RVec &) {
            CVec v(2);
            v << 1.0, 0.0;
            return v;
        },
        std::nullopt, Box{RVec::Constant(1, -0.5), RVec::Constant(1, 0.5)});
}

CMat random_unitary(Eigen::Index d, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    CMat a(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            a(i, j) = cplx(g(rng), g(rng));
        }
    }
    Eigen::HouseholderQR<CMat> qr(a);
    return qr.householderQ() * CMat::Identity(d, d);
}

/// CFI from central differences of the outcome probabilities.
RMat finite_difference_cfi(const CMat &basis, const PureStateModel &model, const RVec &theta) {
    const Eigen::Index m = model.param_dim();
    const double h = 1e-5;
    const RVec p = probabilities(basis, model.amplitudes(theta));
    RMat dp(p.size(), m);
    for (Eigen::Index j = 0; j < m; ++j) {
        RVec tp = theta;
        RVec tm = theta;
        tp(j) += h;
        tm(j) -= h;
        dp.col(j) = (probabilities(basis, model.amplitudes(tp)) -
                     probabilities(basis, model.amplitudes(tm))) /
                    (2 * h);
    }
    RMat out = RMat::Zero(m, m);
    for (Eigen::Index k = 0; k < p.size(); ++k) {
        if (p(k) > kZeroProbability) {
            out += dp.row(k).transpose() * dp.row(k) / p(k);
        }
    }
    return out;
}

} // namespace

TEST(Qfi, QubitIsFourEverywhere) {
    const auto model = qubit_rotation_model();
    for (double t : {-0.3, 0.0, 0.1, 0.35}) {
        EXPECT_NEAR(qfi_pure(model, RVec::Constant(1, t))(0, 0), 4.0, 1e-12);
    }
}

TEST(Qfi, LocalQuditAtOrigin) {
    for (Eigen::Index d : {2, 3, 5}) {
        const Eigen::Index m = 2 * (d - 1);
        const RMat f = qfi_pure(local_qudit_model(d), RVec::Zero(m));
        EXPECT_LT((f - 4.0 * RMat::Identity(m, m)).cwiseAbs().maxCoeff(), 1e-12) << d;
    }
}

TEST(Qfi, ConstantModelIsZero) {
    EXPECT_NEAR(qfi_pure(constant_model(), RVec::Zero(1))(0, 0), 0.0, 1e-15);
    const auto sld = sld_pure(constant_model(), RVec::Zero(1));
    EXPECT_LT(sld[0].matrix().norm(), 1e-15);
}

TEST(Sld, QubitAtZeroIsTwoSigmaX) {
    const auto sld = sld_pure(qubit_rotation_model(), RVec::Zero(1));
    CMat sx(2, 2);
    sx << 0.0, 1.0, 1.0, 0.0;
    EXPECT_LT((sld[0].matrix() - 2.0 * sx).norm(), 1e-12);
}

TEST(Sld, SecondMomentEqualsQfi) {
    for (const auto &model : {qubit_rotation_model(), phased_qutrit_model()}) {
        const RVec t = 0.5 * model.domain().upper;
        const CVec psi = model.amplitudes(t);
        const RMat f = qfi_pure(model, t);
        const auto sld = sld_pure(model, t);
        for (std::size_t j = 0; j < sld.size(); ++j) {
            const CMat &l = sld[j].matrix();
            const double second = (psi.adjoint() * l * l * psi)(0, 0).real();
            EXPECT_NEAR(second, f(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)),
                        1e-8);
        }
    }
}

TEST(Sld, SolvesLyapunovEquation) {
    const auto model = phased_qutrit_model();
    const RVec t = RVec::Constant(2, 0.1);
    const CVec psi = model.amplitudes(t);
    const CMat rho = psi * psi.adjoint();
    const CMat dpsi = model.derivatives(t);
    const auto sld = sld_pure(model, t);
    for (Eigen::Index j = 0; j < 2; ++j) {
        const CMat drho = dpsi.col(j) * psi.adjoint() + psi * dpsi.col(j).adjoint();
        const CMat &l = sld[static_cast<std::size_t>(j)].matrix();
        EXPECT_LT((drho - 0.5 * (l * rho + rho * l)).norm(), 1e-8);
    }
}

TEST(Cfi, QubitRotatedBasisIsFour) {
    const auto model = qubit_rotation_model();
    for (double theta : {0.0, 0.2, -0.3}) {
        for (double tau : {-1.0, -0.2, 0.1, 0.5, 1.2}) {
            if (std::pow(std::sin(theta - tau), 2) <= 1e-6) {
                continue;
            }
            const double i = cfi(rotated_qubit_basis(tau), model, RVec::Constant(1, theta))(0, 0);
            EXPECT_NEAR(i, 4.0, 1e-10) << theta << " " << tau;
        }
    }
    // Close to, but not at, the null point.
    EXPECT_NEAR(cfi(rotated_qubit_basis(2e-3), model, RVec::Zero(1))(0, 0), 4.0, 1e-10);
}

TEST(Cfi, ExactNullBasisIsZero) {
    const auto model = qubit_rotation_model();
    EXPECT_EQ(cfi(rotated_qubit_basis(0.0), model, RVec::Zero(1))(0, 0), 0.0);
    EXPECT_EQ(cfi(rotated_qubit_basis(0.2), model, RVec::Constant(1, 0.2))(0, 0), 0.0);
}

TEST(Cfi, MatchesFiniteDifferenceOracle) {
    std::mt19937_64 rng(7);
    const auto model = phased_qutrit_model();
    for (int rep = 0; rep < 10; ++rep) {
        const CMat u = random_unitary(3, rng);
        RVec t(2);
        t << 0.3 * std::cos(rep), 0.3 * std::sin(rep);
        const RMat exact = cfi(ProjectiveBasis(u), model, t);
        EXPECT_LT((exact - finite_difference_cfi(u, model, t)).cwiseAbs().maxCoeff(), 1e-5);
    }
}

TEST(Cfi, BoundedByQfiOnRandomInstances) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::vector<PureStateModel> models = {qubit_rotation_model(), local_qudit_model(2),
                                                local_qudit_model(3), phased_qutrit_model()};
    for (const auto &model : models) {
        const Box &box = model.domain();
        for (int rep = 0; rep < 200; ++rep) {
            RVec t(model.param_dim());
            for (Eigen::Index j = 0; j < t.size(); ++j) {
                t(j) = box.lower(j) + unit(rng) * (box.upper(j) - box.lower(j));
            }
            const ProjectiveBasis basis(random_unitary(model.dim(), rng));
            const RMat gap = qfi_pure(model, t) - cfi(basis, model, t);
            Eigen::SelfAdjointEigenSolver<RMat> es(gap);
            EXPECT_GT(es.eigenvalues().minCoeff(), -1e-8) << model.name();
            const RMat i = cfi(basis, model, t);
            EXPECT_GT(Eigen::SelfAdjointEigenSolver<RMat>(i).eigenvalues().minCoeff(), -1e-10);
        }
    }
}

TEST(QcrbConditions, RealRotatedBasisAchieves) {
    const auto report = qcrb_conditions(rotated_qubit_basis(0.1), qubit_rotation_model(),
                                        RVec::Zero(1));
    EXPECT_TRUE(report.achievable);
    EXPECT_LT(report.max_margin, 1e-10);
}

TEST(QcrbConditions, StandardBasisFailsOnNullOutcome) {
    const ProjectiveBasis standard(CMat::Identity(2, 2).cast<cplx>().eval());
    const auto report = qcrb_conditions(standard, qubit_rotation_model(), RVec::Zero(1));
    EXPECT_FALSE(report.achievable);
    ASSERT_EQ(report.outcomes.size(), 2U);
    EXPECT_TRUE(report.outcomes[0].satisfied);
    EXPECT_FALSE(report.outcomes[1].satisfied);
    EXPECT_NEAR(report.outcomes[1].probability, 0.0, 1e-15);
    EXPECT_NEAR(report.outcomes[1].null_margin, 4.0, 1e-10);
}

TEST(QcrbConditions, ComplexBasisFails) {
    // |+i> basis: probabilities are independent of theta at theta = 0.
    CMat u(2, 2);
    u << 1.0, 1.0, cplx(0.0, 1.0), cplx(0.0, -1.0);
    u /= std::sqrt(2.0);
    const auto report = qcrb_conditions(ProjectiveBasis(u), qubit_rotation_model(), RVec::Zero(1));
    EXPECT_FALSE(report.achievable);
    EXPECT_GT(report.outcomes[0].imaginary_margin, 0.1);
}

TEST(QcrbConditions, SldEigenbasisAchievesAndSaturates) {
    const auto model = phased_qutrit_model(0.7, -1.1);
    const PureStateModel one_param(
        "slice", 3, 1,
        [model](const RVec &t) {
            RVec full(2);
            full << t(0), 0.05;
            return model.amplitudes(full);
        },
        std::nullopt, Box{RVec::Constant(1, -0.3), RVec::Constant(1, 0.3)});
    const RVec t = RVec::Constant(1, 0.12);
    Eigen::SelfAdjointEigenSolver<CMat> es(sld_pure(one_param, t)[0].matrix());
    const ProjectiveBasis basis(CMat(es.eigenvectors()));
    const auto report = qcrb_conditions(basis, one_param, t, 1e-7);
    EXPECT_TRUE(report.achievable);
    EXPECT_NEAR(cfi(basis, one_param, t)(0, 0), qfi_pure(one_param, t)(0, 0), 1e-6);
}

TEST(QcrbConditions, RequiresSingleParameter) {
    EXPECT_THROW((void)qcrb_conditions(sigma_x_basis(), local_qudit_model(2), RVec::Zero(2)),
                 ConfigError);
}

TEST(Compatibility, Examples) {
    EXPECT_TRUE(compatibility(qubit_rotation_model(), RVec::Constant(1, 0.2)).compatible);
    const auto full = compatibility(local_qudit_model(2), RVec::Zero(2));
    EXPECT_FALSE(full.compatible);
    EXPECT_NEAR(std::abs(full.matrix(0, 1)), 1.0, 1e-12);
    EXPECT_NEAR(full.matrix(0, 1), -full.matrix(1, 0), 1e-15);
    const PureStateModel real_model(
        "real", 3, 2,
        [](const RVec &t) {
            CVec v(3);
            v << std::cos(t(0)) * std::cos(t(1)), std::sin(t(0)) * std::cos(t(1)), std::sin(t(1));
            return v;
        },
        std::nullopt, Box{RVec::Constant(2, -0.4), RVec::Constant(2, 0.4)});
    EXPECT_TRUE(compatibility(real_model, RVec::Constant(2, 0.1)).compatible);
}

TEST(FisherReport, AchievableFlag) {
    const auto model = qubit_rotation_model();
    const auto good = fisher_report(rotated_qubit_basis(0.3), model, RVec::Zero(1));
    EXPECT_TRUE(good.achievable);
    const auto bad = fisher_report(rotated_qubit_basis(0.0), model, RVec::Zero(1));
    EXPECT_FALSE(bad.achievable);
}

TEST(FisherReport, ConditionsImplySaturation) {
    const auto model = qubit_rotation_model();
    for (double tau : {-0.4, 0.05, 0.3, 0.7}) {
        const auto basis = rotated_qubit_basis(tau);
        const RVec t = RVec::Constant(1, 0.1);
        if (qcrb_conditions(basis, model, t).achievable) {
            EXPECT_NEAR(cfi(basis, model, t)(0, 0), qfi_pure(model, t)(0, 0), 1e-6);
        }
    }
}

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
 * Acceptance checks 1-11. Prints one PASS/FAIL line per criterion and exits
 * non-zero when any selected criterion fails.
 */
#include <chrono>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dnull/gaussian.hpp"
#include "dnull/harness.hpp"
#include "dnull/information.hpp"
#include "dnull/measurement_design.hpp"
#include "dnull/stats.hpp"

using namespace dnull;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string num(double a) { return fmt("%.4g", a); }

RMat sample_covariance(const std::vector<RVec> &xs) {
    const Eigen::Index m = xs.front().size();
    RVec mu = RVec::Zero(m);
    for (const auto &x : xs) {
        mu += x;
    }
    mu /= static_cast<double>(xs.size());
    RMat cov = RMat::Zero(m, m);
    for (const auto &x : xs) {
        cov += (x - mu) * (x - mu).transpose();
    }
    return cov / static_cast<double>(xs.size() - 1);
}

/// Entrywise comparison with tolerance rel * sqrt(ref_ii ref_jj), which is
/// rel * |ref_ij| on the diagonal and stays meaningful for zero off-diagonals.
bool within_entrywise(const RMat &got, const RMat &ref, double rel, double &worst) {
    worst = 0.0;
    for (Eigen::Index i = 0; i < ref.rows(); ++i) {
        for (Eigen::Index j = 0; j < ref.cols(); ++j) {
            const double scale = std::sqrt(ref(i, i) * ref(j, j));
            worst = std::max(worst, std::abs(got(i, j) - ref(i, j)) / scale);
        }
    }
    return worst <= rel;
}

std::string matrix_text(const RMat &m) {
    std::string s = "[";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        s += i ? "; " : "";
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            s += (j ? " " : "") + num(m(i, j));
        }
    }
    return s + "]";
}

ExperimentConfig base_config(const std::string &model, Strategy strategy) {
    ExperimentConfig c;
    c.model = model;
    c.strategy = strategy;
    c.epsilon = 0.05;
    c.seed = 20260101;
    c.threads = 0;
    return c;
}

// --- 1 & 2: qubit displaced-null -------------------------------------------

const std::vector<TrialResult> &qubit_run() {
    static const std::vector<TrialResult> results = [] {
        auto c = base_config("qubit_rotation", Strategy::displaced_qubit);
        c.n_grid = {1000000};
        c.trials = 10000;
        c.true_parameter = RVec::Constant(1, 0.05);
        return Experiment(c).run_trials(1000000);
    }();
    return results;
}

Outcome criterion_1() {
    const auto &res = qubit_run();
    KahanSum s;
    for (const auto &r : res) {
        s.add(r.loss);
    }
    const double n_mse = 1e6 * s.value() / static_cast<double>(res.size());
    return {n_mse >= 0.225 && n_mse <= 0.275,
            "n*MSE = " + num(n_mse) + " (target [0.225, 0.275]), n=1e6, 1e4 trials"};
}

Outcome criterion_2() {
    const auto &res = qubit_run();
    std::vector<double> z;
    for (const auto &r : res) {
        z.push_back(r.standardized_error(0));
    }
    const auto ks = ks_normal(z);
    return {ks.statistic < 0.02, "KS(2 sqrt(n)(theta_hat - theta)) = " + num(ks.statistic) +
                                     " (target < 0.02), p = " + num(ks.p_value)};
}

// --- 3: naive null ---------------------------------------------------------

Outcome criterion_3() {
    auto c = base_config("qubit_rotation", Strategy::naive_null);
    c.n_grid = {1000, 10000, 100000, 1000000};
    c.trials = 10000;
    c.sign_rule = SignRule::posterior_mean;
    const auto report = run_experiment(c);
    bool monotone = true;
    std::string risks;
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        risks += (i ? ", " : "") + num(report.rows[i].n_risk);
        if (i > 0 && !(report.rows[i].n_risk > report.rows[i - 1].n_risk)) {
            monotone = false;
        }
    }
    const double factor = report.rows.back().n_risk / report.rows.front().n_risk;
    const double bound = -1.0 + c.epsilon / 4.0;
    const bool slope_ok = report.fit && report.fit->ci_low > bound;
    const bool factor_ok = factor > 3.0;
    std::string detail = "n*risk = [" + risks + "] monotone=" + (monotone ? "yes" : "no") +
                         ", factor 1e3->1e6 = " + num(factor) + " (target > 3)" +
                         ", slope = " + num(report.fit ? report.fit->slope : NAN) + " CI [" +
                         num(report.fit ? report.fit->ci_low : NAN) + ", " +
                         num(report.fit ? report.fit->ci_high : NAN) + "] (target low > " +
                         num(bound) + ")";
    return {monotone && factor_ok && slope_ok, detail};
}

// --- 4: Bures full-state estimation ------------------------------------------

Outcome criterion_4() {
    auto c = base_config("local_qudit:3", Strategy::bures);
    c.n_grid = {1000000};
    c.trials = 10000;
    RVec truth(4);
    truth << 0.05, -0.03, 0.02, 0.04;
    c.true_parameter = truth;
    const auto res = Experiment(c).run_trials(1000000);
    KahanSum s;
    std::vector<RVec> errs;
    for (const auto &r : res) {
        s.add(r.loss);
        errs.push_back(r.local_error);
    }
    const double n_risk = 1e6 * s.value() / static_cast<double>(res.size());
    const RMat cov = sample_covariance(errs);
    double worst = 0.0;
    const bool cov_ok = within_entrywise(cov, 0.5 * RMat::Identity(4, 4), 0.1, worst);
    return {n_risk >= 1.8 && n_risk <= 2.2 && cov_ok,
            "n*E[d_b^2] = " + num(n_risk) + " (target [1.8, 2.2]); cov deviation " + num(worst) +
                " of scale (target <= 0.1), cov = " + matrix_text(cov)};
}

// --- 5: general Holevo attainment on the full qubit --------------------------

Outcome criterion_5() {
    auto c = base_config("local_qudit:2", Strategy::general_holevo);
    c.n_grid = {1000000};
    c.trials = 10000;
    RVec truth(2);
    truth << 0.04, -0.02;
    c.true_parameter = truth;
    c.weight = RMat::Identity(2, 2);
    const Experiment exp(c);
    const auto res = exp.run_trials(1000000);
    KahanSum s;
    std::vector<RVec> errs;
    for (const auto &r : res) {
        s.add(r.loss);
        errs.push_back(r.local_error);
    }
    const double n_risk = 1e6 * s.value() / static_cast<double>(res.size());
    const auto lin = linearize_at(exp.model(), truth);
    const auto sol =
        holevo_bound_gaussian(GaussianShiftModel::from_linearized(lin, RMat::Identity(2, 2)));
    const RMat cov = sample_covariance(errs);
    double worst = 0.0;
    const bool cov_ok = within_entrywise(cov, sol.covariance(), 0.1, worst);
    return {n_risk >= 0.9 && n_risk <= 1.1 && cov_ok,
            "n*risk = " + num(n_risk) + " (target [0.9, 1.1], Holevo value " + num(sol.value) +
                "); cov deviation " + num(worst) + " (target <= 0.1), cov = " +
                matrix_text(cov) + " vs TT^T/2 = " + matrix_text(sol.covariance())};
}

// --- 6: QCRB attainment ------------------------------------------------------

Outcome criterion_6() {
    auto c = base_config("phased_qutrit", Strategy::qcrb);
    c.n_grid = {1000000};
    c.trials = 10000;
    RVec truth(2);
    truth << 0.1, -0.05;
    c.true_parameter = truth;
    const Experiment exp(c);
    const auto res = exp.run_trials(1000000);
    std::vector<RVec> errs;
    for (const auto &r : res) {
        errs.push_back(r.local_error);
    }
    const RMat cov = sample_covariance(errs);
    const RMat finv = qfi_pure(exp.model(), truth).inverse();
    double worst = 0.0;
    const bool ok = within_entrywise(cov, finv, 0.1, worst);
    return {ok, "n*Cov = " + matrix_text(cov) + " vs F^-1 = " + matrix_text(finv) +
                    ", deviation " + num(worst) + " (target <= 0.1)"};
}

// --- 7: Holevo solver oracles --------------------------------------------------

Outcome criterion_7() {
    CMat full(1, 2);
    full << 1.0, cplx(0.0, 1.0);
    const double v_full = holevo_bound_gaussian(GaussianShiftModel(full, RMat::Identity(2, 2))).value;
    bool ok = std::abs(v_full - 1.0) < 1e-4;
    std::string detail = "full qubit value " + fmt("%.8f", v_full);

    std::vector<GaussianShiftModel> achievable;
    achievable.emplace_back(CMat::Ones(1, 1), RMat::Identity(1, 1));
    achievable.emplace_back(CMat::Identity(3, 3), RMat::Identity(3, 3));
    {
        const auto model = phased_qutrit_model();
        RVec t(2);
        t << 0.1, -0.05;
        const auto rf = real_form(linearize_at(model, t));
        RMat w(2, 2);
        w << 2.0, 0.3, 0.3, 1.0;
        achievable.push_back(GaussianShiftModel::from_linearized(rf, w));
    }
    std::mt19937_64 rng(42);
    std::normal_distribution<double> g;
    for (int rep = 0; rep < 5; ++rep) {
        RMat c(4, 3);
        for (Eigen::Index i = 0; i < c.size(); ++i) {
            c(i) = g(rng);
        }
        RMat a(3, 3);
        for (Eigen::Index i = 0; i < a.size(); ++i) {
            a(i) = g(rng);
        }
        achievable.emplace_back(c.cast<cplx>(), a * a.transpose() + RMat::Identity(3, 3));
    }
    double worst_gap = 0.0;
    double worst_spread = 0.0;
    for (const auto &m : achievable) {
        const auto sol = holevo_bound_gaussian(m);
        // Closed form Z = Sigma^-1 D^T R: value Tr(W Sigma^-1) / 2 = Tr(W F^-1).
        const RMat sigma = m.D().transpose() * m.D();
        const double closed = 0.5 * (m.W() * sigma.inverse()).trace();
        worst_gap = std::max(worst_gap, std::abs(sol.value - closed));
        worst_gap = std::max(worst_gap, std::abs(sol.value - (m.W() * m.fisher().inverse()).trace()));
        const auto [lo, hi] = std::minmax_element(sol.restart_values.begin(), sol.restart_values.end());
        worst_spread = std::max(worst_spread, (*hi - *lo) / std::abs(sol.value));
    }
    // Restart stability also on incompatible models.
    for (const CMat &c : {full, CMat([] {
                              CMat x(2, 2);
                              x << 1.0, cplx(0.0, 0.5), 0.0, 1.0;
                              return x;
                          }())}) {
        const auto sol = holevo_bound_gaussian(GaussianShiftModel(c, RMat::Identity(2, 2)));
        const auto [lo, hi] = std::minmax_element(sol.restart_values.begin(), sol.restart_values.end());
        worst_spread = std::max(worst_spread, (*hi - *lo) / std::abs(sol.value));
    }
    ok = ok && worst_gap < 1e-6 && worst_spread < 1e-5;
    detail += " (target 1 +- 1e-4); achievable |value - Tr(W F^-1)| max " + num(worst_gap) +
              " (target < 1e-6); 20-restart relative spread max " + num(worst_spread) +
              " (target < 1e-5)";
    return {ok, detail};
}

// --- 8: Fisher suite -----------------------------------------------------------

Outcome criterion_8() {
    const auto qubit = qubit_rotation_model();
    double worst = 0.0;
    for (double theta : {-0.3, -0.1, 0.0, 0.05, 0.2, 0.35}) {
        // Rotated bases are indexed by parameter values, so tau ranges over the domain;
        // tau = theta +- pi/2 would be a second null basis.
        for (int i = 1; i < 400; ++i) {
            const double tau = qubit.domain().lower(0) +
                               (qubit.domain().upper(0) - qubit.domain().lower(0)) * i / 400.0;
            if (std::pow(std::sin(theta - tau), 2) <= 1e-6) {
                continue;
            }
            const double v = cfi(rotated_qubit_basis(tau), qubit, RVec::Constant(1, theta))(0, 0);
            worst = std::max(worst, std::abs(v - 4.0));
        }
    }
    const double at_null = cfi(rotated_qubit_basis(0.1), qubit, RVec::Constant(1, 0.1))(0, 0);

    std::mt19937_64 rng(8);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double min_eig = 1.0;
    int instances = 0;
    for (const auto &model : {qubit, local_qudit_model(2), local_qudit_model(3), phased_qutrit_model()}) {
        for (int rep = 0; rep < 200; ++rep) {
            CMat a(model.dim(), model.dim());
            for (Eigen::Index i = 0; i < a.size(); ++i) {
                a(i) = cplx(g(rng), g(rng));
            }
            const CMat u = Eigen::HouseholderQR<CMat>(a).householderQ() *
                           CMat::Identity(model.dim(), model.dim());
            RVec t(model.param_dim());
            for (Eigen::Index j = 0; j < t.size(); ++j) {
                t(j) = model.domain().lower(j) +
                       unit(rng) * (model.domain().upper(j) - model.domain().lower(j));
            }
            const RMat gap = qfi_pure(model, t) - cfi(ProjectiveBasis(u), model, t);
            min_eig = std::min(min_eig, Eigen::SelfAdjointEigenSolver<RMat>(gap).eigenvalues().minCoeff());
            ++instances;
        }
    }
    const ProjectiveBasis standard(CMat(CMat::Identity(2, 2)));
    const auto cond = qcrb_conditions(standard, qubit, RVec::Zero(1));
    const bool ok = worst < 1e-10 && at_null == 0.0 && min_eig > -1e-8 && !cond.achievable;
    return {ok, "max |CFI - 4| = " + num(worst) + " (target < 1e-10); CFI at null = " + num(at_null) +
                    "; min eig(QFI - CFI) over " + std::to_string(instances) + " instances = " +
                    num(min_eig) + " (target > -1e-8); standard basis achievable = " +
                    (cond.achievable ? "true" : "false") + " (target false)"};
}

// --- 9: Gaussian companion -----------------------------------------------------

Outcome criterion_9() {
    const std::int64_t shots = 1000000;
    CVec z(1);
    z << cplx(0.7, -0.4);
    const double delta_val = 1.5;
    const auto counts = sample_coherent_counts(CoherentState{z}, RVec::Constant(1, delta_val), shots, 91);
    std::vector<double> x(counts[0].begin(), counts[0].end());
    const double lam = std::norm(z(0) - delta_val);
    const double mu = mean(x);
    const double var = sample_variance(x);
    const double z_mean = std::abs(mu - lam) / std::sqrt(lam / shots);
    const double z_var = std::abs(var - lam) / std::sqrt((lam + 2 * lam * lam) / shots);

    // Counting-homodyne estimator variance, single shot, large displacement.
    CVec z2(1);
    z2 << 0.6;
    const double big = 100.0;
    std::vector<double> single;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto c = sample_coherent_counts(CoherentState{z2}, RVec::Constant(1, big), 10000,
                                              derive_seed(9, seed));
        for (auto v : c[0]) {
            single.push_back(big / 2.0 - static_cast<double>(v) / (2.0 * big));
        }
    }
    const double hom_var = sample_variance(single);

    CVec zp(1);
    CVec zm(1);
    zp << 0.8;
    zm << -0.8;
    const auto a = sample_coherent_counts(CoherentState{zp}, RVec::Zero(1), 20000, 1001)[0];
    const auto b = sample_coherent_counts(CoherentState{zm}, RVec::Zero(1), 20000, 2002)[0];
    const auto ks = ks_two_sample(std::vector<double>(a.begin(), a.end()),
                                  std::vector<double>(b.begin(), b.end()));
    const bool ok = z_mean < 3 && z_var < 3 && std::abs(hom_var - 0.25) <= 0.025 && ks.p_value > 0.01;
    return {ok, "Poisson mean z-score " + num(z_mean) + ", variance z-score " + num(z_var) +
                    " (target < 3); homodyne variance " + num(hom_var) +
                    " (target 0.25 +- 10%); +-u two-sample KS p = " + num(ks.p_value) +
                    " (target > 0.01)"};
}

// --- 10: Matsumoto equivalence -------------------------------------------------

Outcome criterion_10() {
    auto c = base_config("local_qudit:2", Strategy::matsumoto);
    c.n_grid = {10000, 100000, 1000000};
    c.trials = 2000;
    RVec truth(2);
    truth << 0.04, -0.02;
    c.true_parameter = truth;
    c.weight = RMat::Identity(2, 2);
    const Experiment exp(c);
    std::vector<double> vals;
    for (auto n : c.n_grid) {
        const auto res = exp.run_trials(n);
        KahanSum s;
        for (const auto &r : res) {
            s.add((r.theta_hat - *r.reference_hat).squaredNorm());
        }
        vals.push_back(static_cast<double>(n) * s.value() / static_cast<double>(res.size()));
    }
    bool ok = true;
    for (std::size_t i = 1; i < vals.size(); ++i) {
        ok = ok && vals[i] < 0.5 * vals[i - 1];
    }
    return {ok, "n*E|theta_hathat - theta_hat|^2 = [" + num(vals[0]) + ", " + num(vals[1]) + ", " +
                    num(vals[2]) + "] at n = 1e4, 1e5, 1e6 (target each < half the previous)"};
}

// --- 11: reasonable-estimator mass --------------------------------------------

Outcome criterion_11() {
    const double eps = 0.05;
    const double c_bound = 0.02;
    bool ok = true;
    std::string masses;
    for (std::int64_t nt : {1000, 10000, 100000}) {
        // theta_tilde mid-domain: k / n_tilde = sin^2(pi/4) = 1/2.
        const PosteriorDensity post(nt / 2, nt);
        const double n = std::pow(static_cast<double>(nt), 1.0 / (1.0 - eps));
        const double tau = std::pow(n, -0.5 + eps / 4.0);
        const double mass = post.two_sided_mass(post.mode(), tau);
        ok = ok && mass >= c_bound;
        masses += (masses.empty() ? "" : ", ") + num(mass);
    }
    return {ok, "two-sided mass = [" + masses + "] at n_tilde = 1e3, 1e4, 1e5 (target >= C = " +
                    num(c_bound) + ")"};
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"dnull acceptance checks"};
    int only = 0;
    app.add_option("--criterion", only, "Run a single criterion (1-11)")->check(CLI::Range(1, 11));
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::function<Outcome()>> checks = {
        criterion_1, criterion_2, criterion_3, criterion_4,  criterion_5, criterion_6,
        criterion_7, criterion_8, criterion_9, criterion_10, criterion_11};
    int failures = 0;
    for (int i = 1; i <= 11; ++i) {
        if (only != 0 && i != only) {
            continue;
        }
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = checks[static_cast<std::size_t>(i - 1)]();
        } catch (const std::exception &e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %d: %s - %s [%.1fs]\n", i, o.pass ? "PASS" : "FAIL", o.detail.c_str(),
                    secs);
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}

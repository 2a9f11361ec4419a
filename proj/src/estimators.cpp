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

#include "dnull/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dnull/information.hpp"
#include "dnull/optimize.hpp"

namespace dnull {

Strategy parse_strategy(const std::string &name) {
    if (name == "naive_null") return Strategy::naive_null;
    if (name == "displaced_qubit") return Strategy::displaced_qubit;
    if (name == "bures") return Strategy::bures;
    if (name == "general_holevo") return Strategy::general_holevo;
    if (name == "qcrb") return Strategy::qcrb;
    if (name == "matsumoto") return Strategy::matsumoto;
    throw ConfigError("unknown strategy '" + name + "'");
}

std::string to_string(Strategy s) {
    switch (s) {
    case Strategy::naive_null: return "naive_null";
    case Strategy::displaced_qubit: return "displaced_qubit";
    case Strategy::bures: return "bures";
    case Strategy::general_holevo: return "general_holevo";
    case Strategy::qcrb: return "qcrb";
    case Strategy::matsumoto: return "matsumoto";
    }
    return "unknown";
}

SignRule parse_sign_rule(const std::string &name) {
    if (name == "plus") return SignRule::plus;
    if (name == "minus") return SignRule::minus;
    if (name == "posterior_mean") return SignRule::posterior_mean;
    throw ConfigError("unknown sign rule '" + name + "'");
}

std::string to_string(SignRule s) {
    switch (s) {
    case SignRule::plus: return "plus";
    case SignRule::minus: return "minus";
    case SignRule::posterior_mean: return "posterior_mean";
    }
    return "unknown";
}

namespace {

constexpr double kQuarterPi = std::numbers::pi / 4.0;
constexpr double kEighthPi = std::numbers::pi / 8.0;

double frequency_or_throw(const OutcomeCounts &counts, std::size_t k, const char *what) {
    if (k >= counts.size()) {
        throw DimensionError(std::string(what) + ": missing outcome in counts");
    }
    return counts.frequency(k);
}

EstimateRecord make_record(RVec theta_tilde, RVec u_hat, double n,
                           std::vector<OutcomeCounts> counts) {
    EstimateRecord r;
    r.theta_hat = theta_tilde + u_hat / std::sqrt(n);
    r.theta_tilde = std::move(theta_tilde);
    r.u_hat = std::move(u_hat);
    r.counts = std::move(counts);
    return r;
}

} // namespace

double preliminary_qubit_mle(const OutcomeCounts &counts, std::int64_t n_tilde) {
    if (counts.size() != 2) {
        throw DimensionError("preliminary_qubit_mle: expected two outcomes");
    }
    if (counts.total() != n_tilde || n_tilde <= 0) {
        throw ConfigError("preliminary_qubit_mle: counts do not sum to n_tilde");
    }
    const double xbar = counts.frequency(1);
    const double theta = kQuarterPi - std::asin(std::sqrt(std::clamp(xbar, 0.0, 1.0)));
    return std::clamp(theta, -kEighthPi, kEighthPi);
}

PreliminaryDesign preliminary_design(const PureStateModel &model) {
    const RVec center = model.domain().center();
    const LinearizedModel lin = linearize_at(model, center);
    const bool compatible = compatibility(model, center).compatible;
    CMat frame = lin.frame;
    if (compatible) {
        frame = real_form(lin).frame;
    }
    const Eigen::Index d = model.dim();
    const RVec uniform = RVec::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
    const RVec v = RVec::Unit(d, 0) - uniform;
    const RMat h = RMat::Identity(d, d) - 2.0 * v * v.transpose() / v.squaredNorm();
    PreliminaryDesign design;
    design.bases.emplace_back(CMat(frame * h.cast<cplx>()));
    design.shares.push_back(1.0);
    if (!compatible) {
        CVec phases = CVec::Constant(d, cplx(0.0, 1.0));
        phases(0) = 1.0;
        design.bases.emplace_back(CMat(frame * phases.asDiagonal() * h.cast<cplx>()));
        design.shares = {0.5, 0.5};
    }
    return design;
}

RVec preliminary_mle(const PureStateModel &model, const PreliminaryDesign &design,
                     const std::vector<OutcomeCounts> &counts) {
    if (counts.size() != design.bases.size()) {
        throw DimensionError("preliminary_mle: one count vector per basis");
    }
    std::int64_t total = 0;
    for (const auto &c : counts) {
        total += c.total();
    }
    if (total <= 0) {
        throw ConfigError("preliminary_mle: no preliminary data");
    }
    const Box &box = model.domain();
    const Eigen::Index m = model.param_dim();
    auto negll = [&](const RVec &theta) {
        if (!box.contains(theta)) {
            return 1e300;
        }
        const CVec psi = model.amplitudes(theta);
        double s = 0.0;
        for (std::size_t b = 0; b < counts.size(); ++b) {
            const RVec p = probabilities(design.bases[b].matrix(), psi);
            for (std::size_t k = 0; k < counts[b].size(); ++k) {
                if (counts[b][k] > 0) {
                    s -= static_cast<double>(counts[b][k]) *
                         std::log(std::max(p(static_cast<Eigen::Index>(k)), 1e-300));
                }
            }
        }
        return s / static_cast<double>(total);
    };
    int per_dim = 5;
    switch (m) {
    case 1: per_dim = 257; break;
    case 2: per_dim = 33; break;
    case 3: per_dim = 11; break;
    case 4: per_dim = 7; break;
    default: per_dim = 5; break;
    }
    const RVec spacing = (box.upper - box.lower) / static_cast<double>(per_dim);
    Eigen::VectorXi idx = Eigen::VectorXi::Zero(m);
    double best = std::numeric_limits<double>::infinity();
    double worst = -std::numeric_limits<double>::infinity();
    RVec best_theta = box.center();
    while (true) {
        RVec theta(m);
        for (Eigen::Index j = 0; j < m; ++j) {
            theta(j) = box.lower(j) + (idx(j) + 0.5) * spacing(j);
        }
        const double v = negll(theta);
        if (v < best) {
            best = v;
            best_theta = theta;
        }
        worst = std::max(worst, v);
        Eigen::Index j = 0;
        while (j < m && ++idx(j) == per_dim) {
            idx(j) = 0;
            ++j;
        }
        if (j == m) {
            break;
        }
    }
    if (worst - best < 1e-12 * (1.0 + std::abs(best))) {
        throw IdentifiabilityError("preliminary_mle: likelihood is flat over the domain");
    }
    const MinimizeResult nm = nelder_mead(negll, best_theta, 0.5 * spacing, 1e-10, 4000);
    return box.clamp(nm.value < best ? nm.x : best_theta);
}

RVec preliminary_generic(const PureStateModel &model, const CVec &true_state,
                         std::int64_t n_tilde, Engine &engine,
                         const PreliminaryDesign *design) {
    PreliminaryDesign local;
    if (design == nullptr) {
        local = preliminary_design(model);
        design = &local;
    }
    std::vector<OutcomeCounts> counts;
    std::int64_t used = 0;
    for (std::size_t b = 0; b < design->bases.size(); ++b) {
        const bool last = b + 1 == design->bases.size();
        const auto shots = last ? n_tilde - used
                                : static_cast<std::int64_t>(std::floor(
                                      design->shares[b] * static_cast<double>(n_tilde)));
        used += shots;
        counts.push_back(
            sample_counts(probabilities(design->bases[b].matrix(), true_state), shots, engine));
    }
    return preliminary_mle(model, *design, counts);
}

RVec preliminary_generic(const PureStateModel &model, const CVec &true_state,
                         std::int64_t n_tilde, std::uint64_t seed) {
    Engine engine(seed);
    return preliminary_generic(model, true_state, n_tilde, engine);
}

EstimateRecord estimate_displaced_qubit(double theta_tilde, const OutcomeCounts &counts,
                                        const DisplacementSchedule &schedule) {
    const double n = static_cast<double>(schedule.n());
    const double eps = schedule.epsilon();
    const double p = frequency_or_throw(counts, 1, "estimate_displaced_qubit");
    RVec u(1);
    u(0) = schedule.Delta() / 2.0 - std::pow(n, 1.0 - 3.0 * eps) * p / 2.0;
    return make_record(RVec::Constant(1, theta_tilde), u, n, {counts});
}

EstimateRecord estimate_bures(const CMat &frame, const RVec &theta_tilde,
                              const OutcomeCounts &counts_y, const OutcomeCounts &counts_x,
                              const DisplacementSchedule &schedule) {
    const Eigen::Index d = frame.rows();
    if (static_cast<Eigen::Index>(counts_y.size()) != d ||
        static_cast<Eigen::Index>(counts_x.size()) != d) {
        throw DimensionError("estimate_bures: counts must have d outcomes");
    }
    const double n = static_cast<double>(schedule.n());
    const double scale = std::pow(n, 1.0 - 3.0 * schedule.epsilon());
    const double half_delta = schedule.Delta() / 2.0;
    RVec u(2 * (d - 1));
    for (Eigen::Index j = 1; j < d; ++j) {
        u(2 * (j - 1)) = half_delta - scale * counts_y.frequency(static_cast<std::size_t>(j)) / 2.0;
        u(2 * (j - 1) + 1) =
            half_delta - scale * counts_x.frequency(static_cast<std::size_t>(j)) / 2.0;
    }
    RVec base = theta_tilde.size() == u.size() ? theta_tilde : RVec::Zero(u.size());
    EstimateRecord r = make_record(base, u, n, {counts_y, counts_x});
    r.state = chart_state(frame, u / std::sqrt(n));
    return r;
}

EstimateRecord estimate_general(const RVec &theta_tilde, const OutcomeCounts &counts,
                                const HolevoSolution &holevo,
                                const DisplacementSchedule &schedule) {
    const Eigen::Index m = holevo.T.rows();
    if (m == 0 || holevo.T.cols() != m) {
        throw ConfigError("estimate_general: solution carries no T matrix");
    }
    if (theta_tilde.size() != m) {
        throw DimensionError("estimate_general: parameter dimension mismatch");
    }
    if (static_cast<Eigen::Index>(counts.size()) <= m) {
        throw DimensionError("estimate_general: counts have too few outcomes");
    }
    const double n = static_cast<double>(schedule.n());
    const double scale = std::pow(n, 1.0 - 3.0 * schedule.epsilon());
    RVec x(m);
    for (Eigen::Index k = 0; k < m; ++k) {
        x(k) = (schedule.Delta() - scale * counts.frequency(static_cast<std::size_t>(k + 1))) /
               std::numbers::sqrt2;
    }
    return make_record(theta_tilde, holevo.T * x, n, {counts});
}

EstimateRecord estimate_qcrb(const RVec &theta_tilde, const OutcomeCounts &counts,
                             const LinearizedModel &lin, const RVec &g,
                             const DisplacementSchedule &schedule) {
    const LinearizedModel rf = real_form(lin);
    const Eigen::Index d = rf.dim();
    if (g.size() != d - 1 || static_cast<Eigen::Index>(counts.size()) != d) {
        throw DimensionError("estimate_qcrb: g or counts have the wrong length");
    }
    const RMat c = rf.C.real();
    const RMat ctc = c.transpose() * c;
    Eigen::FullPivLU<RMat> lu(ctc);
    if (!lu.isInvertible()) {
        throw IdentifiabilityError("estimate_qcrb: C has rank < m");
    }
    const RMat t = lu.solve(c.transpose());
    const double n = static_cast<double>(schedule.n());
    const double scale = std::pow(n, 1.0 - 3.0 * schedule.epsilon());
    RVec x(d - 1);
    for (Eigen::Index k = 0; k < d - 1; ++k) {
        x(k) = g(k) * schedule.Delta() / 2.0 -
               scale * counts.frequency(static_cast<std::size_t>(k + 1)) / (2.0 * g(k));
    }
    return make_record(theta_tilde, t * x, n, {counts});
}

double posterior_log_kernel(std::int64_t k, std::int64_t n_tilde, double theta) {
    if (theta < PosteriorDensity::lower || theta > PosteriorDensity::upper) {
        return -std::numeric_limits<double>::infinity();
    }
    const double x = theta - kQuarterPi;
    double out = 0.0;
    if (k > 0) {
        out += 2.0 * static_cast<double>(k) * std::log(std::abs(std::sin(x)));
    }
    if (n_tilde - k > 0) {
        out += 2.0 * static_cast<double>(n_tilde - k) * std::log(std::cos(x));
    }
    return out;
}

EstimateRecord estimate_naive_null(double theta_tilde, const OutcomeCounts &counts,
                                   const DisplacementSchedule &schedule, SignRule rule,
                                   const std::optional<PosteriorContext> &posterior) {
    if (counts.size() < 2) {
        throw DimensionError("estimate_naive_null: expected at least two outcomes");
    }
    const double p = 1.0 - counts.frequency(0);
    const double r = std::asin(std::sqrt(std::clamp(p, 0.0, 1.0)));
    double shift = 0.0;
    switch (rule) {
    case SignRule::plus: shift = r; break;
    case SignRule::minus: shift = -r; break;
    case SignRule::posterior_mean: {
        if (!posterior) {
            throw ConfigError("estimate_naive_null: posterior_mean needs the preliminary counts");
        }
        if (posterior->n_tilde < 1 || posterior->k < 0 || posterior->k > posterior->n_tilde) {
            throw ConfigError("estimate_naive_null: need 0 <= k <= n_tilde");
        }
        if (r > 0.0) {
            const double lp = posterior_log_kernel(posterior->k, posterior->n_tilde, theta_tilde + r);
            const double lm = posterior_log_kernel(posterior->k, posterior->n_tilde, theta_tilde - r);
            if (std::isfinite(lp) || std::isfinite(lm)) {
                // Weighted average of theta_tilde +- r with posterior weights.
                const double wp = 1.0 / (1.0 + std::exp(lm - lp));
                shift = r * (2.0 * wp - 1.0);
            }
        }
        break;
    }
    }
    const double n = static_cast<double>(schedule.n());
    return make_record(RVec::Constant(1, theta_tilde), RVec::Constant(1, shift * std::sqrt(n)), n,
                       {counts});
}

EstimateRecord estimate_matsumoto(const RVec &theta_tilde, const OutcomeCounts &counts,
                                  const MatsumotoDesign &design,
                                  const DisplacementSchedule &schedule) {
    const Eigen::Index m = design.bz.cols();
    if (theta_tilde.size() != m || static_cast<Eigen::Index>(counts.size()) <= m) {
        throw DimensionError("estimate_matsumoto: dimension mismatch");
    }
    RVec shift = RVec::Zero(m);
    for (Eigen::Index k = 0; k <= m; ++k) {
        if (std::abs(design.bpsi(k)) < 1e-14) {
            throw NumericalError("estimate_matsumoto: vanishing overlap coefficient");
        }
        const double p = counts.frequency(static_cast<std::size_t>(k));
        for (Eigen::Index i = 0; i < m; ++i) {
            shift(i) += (design.bz(k, i) / (std::numbers::sqrt2 * design.bpsi(k))).real() * p;
        }
    }
    const double n = static_cast<double>(schedule.n());
    return make_record(theta_tilde, shift * std::sqrt(n), n, {counts});
}

PosteriorDensity::PosteriorDensity(std::int64_t k, std::int64_t n_tilde) : k_(k), n_(n_tilde) {
    if (n_tilde < 1 || k < 0 || k > n_tilde) {
        throw ConfigError("PosteriorDensity: need 0 <= k <= n_tilde, n_tilde >= 1");
    }
    const double frac = static_cast<double>(k) / static_cast<double>(n_tilde);
    mode_ = std::clamp(kQuarterPi - std::asin(std::sqrt(frac)), lower, upper);
    log_max_ = log_kernel(mode_);
    log_norm_ = 0.0;
    const double z = integrate([this](double t) { return std::exp(log_kernel(t) - log_max_); },
                               lower, upper);
    if (!(z > 0.0) || !std::isfinite(z)) {
        throw NumericalError("PosteriorDensity: normalisation failed");
    }
    log_norm_ = std::log(z);
}

double PosteriorDensity::log_kernel(double theta) const {
    return posterior_log_kernel(k_, n_, theta);
}

double PosteriorDensity::log_density(double theta) const {
    return log_kernel(theta) - log_max_ - log_norm_;
}

double PosteriorDensity::operator()(double theta) const {
    const double l = log_density(theta);
    return std::isfinite(l) ? std::exp(l) : 0.0;
}

double PosteriorDensity::integrate(const std::function<double(double)> &f, double a,
                                   double b) const {
    if (!(b > a)) {
        return 0.0;
    }
    // Break the interval around the peak so the adaptive rule sees it.
    const double width = 1.0 / (2.0 * std::sqrt(static_cast<double>(n_)));
    std::vector<double> pts{a, b};
    for (double s : {-30.0, -10.0, -3.0, 0.0, 3.0, 10.0, 30.0}) {
        const double p = mode_ + s * width;
        if (p > a && p < b) {
            pts.push_back(p);
        }
    }
    std::sort(pts.begin(), pts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            f, pts[i], pts[i + 1], 15, 1e-13);
    }
    return total;
}

double PosteriorDensity::total_mass() const {
    return integrate([this](double t) { return (*this)(t); }, lower, upper);
}

double PosteriorDensity::two_sided_mass(double center, double tau) const {
    const double reach = std::min(upper - center, center - lower);
    if (tau >= reach) {
        return 0.0;
    }
    const double width = 1.0 / (2.0 * std::sqrt(static_cast<double>(n_)));
    const double peak = std::abs(mode_ - center);
    auto g = [&](double r) { return std::min((*this)(center + r), (*this)(center - r)); };
    std::vector<double> pts{std::max(0.0, tau), reach};
    for (double s : {-30.0, -10.0, -3.0, 0.0, 3.0, 10.0, 30.0}) {
        const double p = peak + s * width;
        if (p > pts.front() && p < reach) {
            pts.push_back(p);
        }
    }
    std::sort(pts.begin(), pts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            g, pts[i], pts[i + 1], 15, 1e-13);
    }
    return total;
}

double posterior_density(std::int64_t k, std::int64_t n_tilde, double theta) {
    return PosteriorDensity(k, n_tilde)(theta);
}

} // namespace dnull

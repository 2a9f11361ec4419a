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

#include "dnull/models.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

namespace dnull {

bool Box::contains(const RVec &theta, double slack) const {
    if (theta.size() != lower.size()) {
        return false;
    }
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        if (theta(i) < lower(i) - slack || theta(i) > upper(i) + slack) {
            return false;
        }
    }
    return true;
}

RVec Box::clamp(const RVec &theta) const { return theta.cwiseMax(lower).cwiseMin(upper); }

PureStateModel::PureStateModel(std::string name, Eigen::Index dim, Eigen::Index param_dim,
                               StateFn state, std::optional<DerivativeFn> derivative,
                               Box domain)
    : name_(std::move(name)), dim_(dim), m_(param_dim), state_(std::move(state)),
      derivative_(std::move(derivative)), domain_(std::move(domain)) {
    if (dim_ < 2 || m_ < 1) {
        throw ConfigError("PureStateModel: need dim >= 2 and at least one parameter");
    }
    if (domain_.lower.size() != m_ || domain_.upper.size() != m_ ||
        (domain_.upper.array() <= domain_.lower.array()).any()) {
        throw ConfigError("PureStateModel: domain box does not match the parameter count");
    }
}

void PureStateModel::check_param(const RVec &theta) const {
    if (theta.size() != m_) {
        std::ostringstream os;
        os << name_ << ": expected " << m_ << " parameters, got " << theta.size();
        throw DimensionError(os.str());
    }
}

CVec PureStateModel::amplitudes(const RVec &theta) const {
    check_param(theta);
    CVec v = state_(theta);
    if (v.size() != dim_) {
        throw DimensionError(name_ + ": state function returned the wrong dimension");
    }
    return fix_phase(v);
}

StateVector PureStateModel::state(const RVec &theta) const {
    return StateVector(amplitudes(theta), kConstructionTol);
}

namespace {
CMat project_columns(const CVec &psi, CMat d) {
    for (Eigen::Index j = 0; j < d.cols(); ++j) {
        d.col(j) -= psi * psi.dot(d.col(j));
    }
    return d;
}
} // namespace

CMat PureStateModel::derivatives(const RVec &theta) const {
    if (!derivative_) {
        return finite_difference_derivatives(theta);
    }
    check_param(theta);
    const CVec raw = state_(theta);
    const CVec psi = fix_phase(raw);
    // Bring derivatives into the phase of the fixed state; the part along psi
    // introduced by a theta-dependent phase is removed by the projection.
    const cplx phase = raw.norm() > 0 ? psi.dot(raw) : cplx(1.0);
    CMat d = (*derivative_)(theta) * std::conj(phase);
    if (d.rows() != dim_ || d.cols() != m_) {
        throw DimensionError(name_ + ": derivative function returned the wrong shape");
    }
    return project_columns(psi, std::move(d));
}

CMat PureStateModel::finite_difference_derivatives(const RVec &theta, double h) const {
    check_param(theta);
    const CVec psi = amplitudes(theta);
    CMat d(dim_, m_);
    for (Eigen::Index j = 0; j < m_; ++j) {
        auto at = [&](double s) {
            RVec t = theta;
            t(j) += s * h;
            return amplitudes(t);
        };
        d.col(j) = (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * h);
    }
    return project_columns(psi, std::move(d));
}

CVec project_derivative_gauge(const StateVector &psi, const CVec &dpsi) {
    if (psi.dim() != dpsi.size()) {
        throw DimensionError("project_derivative_gauge: dimension mismatch");
    }
    return dpsi - psi.amplitudes() * psi.amplitudes().dot(dpsi);
}

PureStateModel qubit_rotation_model() {
    const double b = std::numbers::pi / 8.0;
    Box box{RVec::Constant(1, -b), RVec::Constant(1, b)};
    return PureStateModel(
        "qubit_rotation", 2, 1,
        [](const RVec &t) {
            CVec v(2);
            v << std::cos(t(0)), std::sin(t(0));
            return v;
        },
        [](const RVec &t) {
            CMat d(2, 1);
            d << -std::sin(t(0)), std::cos(t(0));
            return d;
        },
        box);
}

CVec chart_state(const CMat &frame, const RVec &u) {
    const Eigen::Index d = frame.rows();
    if (u.size() != 2 * (d - 1)) {
        throw DimensionError("chart_state: expected 2(d-1) coordinates");
    }
    CVec w = CVec::Zero(d);
    for (Eigen::Index k = 1; k < d; ++k) {
        w += cplx(u(2 * (k - 1)), u(2 * (k - 1) + 1)) * frame.col(k);
    }
    const double r = u.norm();
    // sin(r)/r without the removable singularity.
    const double sinc = r < 1e-4 ? 1.0 - r * r / 6.0 : std::sin(r) / r;
    return std::cos(r) * frame.col(0) + sinc * w;
}

RVec chart_coordinates(const CMat &frame, const CVec &state) {
    const Eigen::Index d = frame.rows();
    if (state.size() != d) {
        throw DimensionError("chart_coordinates: dimension mismatch");
    }
    const CVec c = frame.adjoint() * state;
    if (std::abs(c(0)) < 1e-14) {
        throw NumericalError("chart_coordinates: state orthogonal to the chart centre");
    }
    const cplx phase = std::conj(c(0)) / std::abs(c(0));
    const CVec a = c * phase / c.norm();
    const double c0 = std::clamp(a(0).real(), -1.0, 1.0);
    const double tail = a.tail(d - 1).norm();
    const double r = std::atan2(tail, c0);
    const double scale = r < 1e-4 ? 1.0 + r * r / 6.0 : r / std::sin(r);
    RVec u(2 * (d - 1));
    for (Eigen::Index k = 1; k < d; ++k) {
        u(2 * (k - 1)) = scale * a(k).real();
        u(2 * (k - 1) + 1) = scale * a(k).imag();
    }
    return u;
}

PureStateModel local_qudit_model(Eigen::Index d) {
    if (d < 2) {
        throw ConfigError("local_qudit_model: d must be at least 2");
    }
    const Eigen::Index m = 2 * (d - 1);
    const double b = std::numbers::pi / 8.0;
    Box box{RVec::Constant(m, -b), RVec::Constant(m, b)};
    const CMat frame = CMat::Identity(d, d);
    auto derivative = [d, m](const RVec &u) {
        const double r = u.norm();
        double sinc = 0.0;
        double dsinc_over_r = 0.0; // (d/dr sinc(r)) / r
        double sin_over_r = 0.0;
        if (r < 1e-4) {
            sinc = 1.0 - r * r / 6.0;
            dsinc_over_r = -1.0 / 3.0 + r * r / 30.0;
            sin_over_r = sinc;
        } else {
            sinc = std::sin(r) / r;
            dsinc_over_r = (r * std::cos(r) - std::sin(r)) / (r * r * r);
            sin_over_r = sinc;
        }
        CVec w = CVec::Zero(d);
        for (Eigen::Index k = 1; k < d; ++k) {
            w(k) = cplx(u(2 * (k - 1)), u(2 * (k - 1) + 1));
        }
        CMat out(d, m);
        for (Eigen::Index j = 0; j < m; ++j) {
            CVec col = dsinc_over_r * u(j) * w;
            col(0) = -sin_over_r * u(j);
            const Eigen::Index k = j / 2 + 1;
            col(k) += (j % 2 == 0) ? cplx(sinc, 0.0) : cplx(0.0, sinc);
            out.col(j) = col;
        }
        return out;
    };
    std::ostringstream name;
    name << "local_qudit:" << d;
    return PureStateModel(
        name.str(), d, m, [frame](const RVec &u) { return chart_state(frame, u); },
        derivative, box);
}

PureStateModel phased_qutrit_model(double alpha, double beta) {
    const double b = std::numbers::pi / 8.0;
    Box box{RVec::Constant(2, -b), RVec::Constant(2, b)};
    const cplx ea = std::polar(1.0, alpha);
    const cplx eb = std::polar(1.0, beta);
    return PureStateModel(
        "phased_qutrit", 3, 2,
        [ea, eb](const RVec &t) {
            CVec v(3);
            v << std::cos(t(0)) * std::cos(t(1)), ea * std::sin(t(0)) * std::cos(t(1)),
                eb * std::sin(t(1));
            return v;
        },
        [ea, eb](const RVec &t) {
            const double c1 = std::cos(t(0));
            const double s1 = std::sin(t(0));
            const double c2 = std::cos(t(1));
            const double s2 = std::sin(t(1));
            CMat d(3, 2);
            d << -s1 * c2, -c1 * s2, ea * c1 * c2, -ea * s1 * s2, 0.0, eb * c2;
            return d;
        },
        box);
}

RMat LinearizedModel::D() const {
    const Eigen::Index k = C.rows();
    RMat d(2 * k, C.cols());
    d.topRows(k) = std::numbers::sqrt2 * C.real();
    d.bottomRows(k) = std::numbers::sqrt2 * C.imag();
    return d;
}

StateVector LinearizedModel::local_state(const RVec &u, double n) const {
    if (u.size() != param_dim()) {
        throw DimensionError("LinearizedModel::local_state: wrong parameter count");
    }
    CMat g = CMat::Zero(dim(), dim());
    for (Eigen::Index j = 0; j < param_dim(); ++j) {
        g += u(j) * generators[static_cast<std::size_t>(j)].matrix();
    }
    const HermitianOp gen(g, 1e-9);
    return apply_exp_generator(gen, 1.0 / std::sqrt(n), StateVector(frame.col(0), kAlgebraTol));
}

bool has_full_real_rank(const CMat &C) {
    RMat r(2 * C.rows(), C.cols());
    r.topRows(C.rows()) = C.real();
    r.bottomRows(C.rows()) = C.imag();
    Eigen::JacobiSVD<RMat> svd(r);
    const RVec s = svd.singularValues();
    if (s.size() < C.cols() || s(0) <= 0.0) {
        return false;
    }
    return s(C.cols() - 1) > 1e-8 * s(0);
}

LinearizedModel linearize_in_frame(const CMat &frame, const CMat &derivatives,
                                   const RVec &base_point) {
    const Eigen::Index d = frame.rows();
    const Eigen::Index m = derivatives.cols();
    if (frame.cols() != d || derivatives.rows() != d) {
        throw DimensionError("linearize_in_frame: shape mismatch");
    }
    LinearizedModel lin;
    lin.base_point = base_point;
    lin.frame = frame;
    lin.derivatives = derivatives;
    lin.C = frame.rightCols(d - 1).adjoint() * derivatives;
    if (!has_full_real_rank(lin.C)) {
        throw IdentifiabilityError("linearize: coefficient matrix C has real rank < m");
    }
    for (Eigen::Index j = 0; j < m; ++j) {
        CMat s = CMat::Zero(d, d);
        for (Eigen::Index k = 1; k < d; ++k) {
            const cplx c = lin.C(k - 1, j);
            s += c.real() * sigma_y(frame, k).matrix() - c.imag() * sigma_x(frame, k).matrix();
        }
        lin.generators.emplace_back(s, 1e-9);
    }
    return lin;
}

LinearizedModel linearize_at(const PureStateModel &model, const RVec &theta) {
    const StateVector psi = model.state(theta);
    const ProjectiveBasis onb = complete_basis({psi}, model.dim());
    return linearize_in_frame(onb.matrix(), model.derivatives(theta), theta);
}

namespace {
std::mutex &registry_mutex() {
    static std::mutex mu;
    return mu;
}
std::map<std::string, ModelFactory> &registry() {
    static std::map<std::string, ModelFactory> r{
        {"qubit_rotation", [] { return qubit_rotation_model(); }},
        {"phased_qutrit", [] { return phased_qutrit_model(); }},
    };
    return r;
}
} // namespace

void register_model(const std::string &name, ModelFactory factory) {
    std::lock_guard<std::mutex> lock(registry_mutex());
    registry()[name] = std::move(factory);
}

PureStateModel make_model(const std::string &name) {
    const std::string prefix = "local_qudit:";
    if (name.rfind(prefix, 0) == 0) {
        const std::string rest = name.substr(prefix.size());
        std::size_t pos = 0;
        long d = 0;
        try {
            d = std::stol(rest, &pos);
        } catch (const std::exception &) {
            throw ConfigError("make_model: bad dimension in '" + name + "'");
        }
        if (pos != rest.size()) {
            throw ConfigError("make_model: bad dimension in '" + name + "'");
        }
        return local_qudit_model(d);
    }
    std::lock_guard<std::mutex> lock(registry_mutex());
    const auto it = registry().find(name);
    if (it == registry().end()) {
        throw ConfigError("make_model: unknown model '" + name + "'");
    }
    return it->second();
}

std::vector<std::string> registered_models() {
    std::lock_guard<std::mutex> lock(registry_mutex());
    std::vector<std::string> names;
    for (const auto &[k, v] : registry()) {
        names.push_back(k);
    }
    names.push_back("local_qudit:<d>");
    return names;
}

} // namespace dnull

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

#include "dnull/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/distributions/students_t.hpp>

#include "dnull/errors.hpp"

namespace dnull {

double mean(const std::vector<double> &x) {
    if (x.empty()) {
        return 0.0;
    }
    KahanSum s;
    for (double v : x) {
        s.add(v);
    }
    return s.value() / static_cast<double>(x.size());
}

double sample_variance(const std::vector<double> &x) {
    if (x.size() < 2) {
        return 0.0;
    }
    const double mu = mean(x);
    KahanSum s;
    for (double v : x) {
        s.add((v - mu) * (v - mu));
    }
    return s.value() / static_cast<double>(x.size() - 1);
}

double kolmogorov_q(double lambda) {
    if (lambda < 1e-3) {
        return 1.0;
    }
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 200; ++j) {
        const double term = sign * std::exp(-2.0 * j * j * lambda * lambda);
        sum += term;
        if (std::abs(term) < 1e-16 * std::abs(sum)) {
            break;
        }
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {
// Stephens' finite-sample correction of the asymptotic distribution.
double ks_p_value(double d, double ne) {
    const double s = std::sqrt(ne);
    return kolmogorov_q((s + 0.12 + 0.11 / s) * d);
}
} // namespace

KsResult ks_one_sample(std::vector<double> x, const std::function<double(double)> &cdf) {
    if (x.empty()) {
        throw ConfigError("ks_one_sample: empty sample");
    }
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = cdf(x[i]);
        d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
    }
    return {d, ks_p_value(d, n)};
}

KsResult ks_normal(std::vector<double> x) {
    return ks_one_sample(std::move(x), [](double t) {
        return 0.5 * std::erfc(-t / std::numbers::sqrt2);
    });
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) {
        throw ConfigError("ks_two_sample: empty sample");
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double t = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= t) {
            ++i;
        }
        while (j < b.size() && b[j] <= t) {
            ++j;
        }
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return {d, ks_p_value(d, na * nb / (na + nb))};
}

LinearFit ols(const std::vector<double> &x, const std::vector<double> &y, double confidence) {
    if (x.size() != y.size()) {
        throw ConfigError("ols: x and y differ in length");
    }
    if (x.size() < 3) {
        throw ConfigError("ols: need at least three points");
    }
    const double n = static_cast<double>(x.size());
    const double mx = mean(x);
    const double my = mean(y);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) {
        throw ConfigError("ols: x values are all equal");
    }
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - fit.intercept - fit.slope * x[i];
        rss += r * r;
    }
    const double sigma2 = rss / (n - 2.0);
    fit.slope_stderr = std::sqrt(sigma2 / sxx);
    fit.intercept_stderr = std::sqrt(sigma2 * (1.0 / n + mx * mx / sxx));
    const boost::math::students_t dist(n - 2.0);
    const double t = boost::math::quantile(dist, 0.5 + confidence / 2.0);
    fit.slope_low = fit.slope - t * fit.slope_stderr;
    fit.slope_high = fit.slope + t * fit.slope_stderr;
    return fit;
}

} // namespace dnull

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
 * Summary statistics used by the Monte Carlo harness.
 */
#pragma once

#include <functional>
#include <vector>

namespace dnull {

/// Kahan-compensated running sum.
class KahanSum {
  public:
    void add(double x) {
        const double y = x - c_;
        const double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    [[nodiscard]] double value() const { return s_; }

  private:
    double s_ = 0.0;
    double c_ = 0.0;
};

[[nodiscard]] double mean(const std::vector<double> &x);
/// Unbiased sample variance (0 for fewer than two points).
[[nodiscard]] double sample_variance(const std::vector<double> &x);

/// Survival function of the Kolmogorov distribution,
/// Q(l) = 2 sum_j (-1)^(j-1) exp(-2 j^2 l^2).
[[nodiscard]] double kolmogorov_q(double lambda);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

[[nodiscard]] KsResult ks_one_sample(std::vector<double> x, const std::function<double(double)> &cdf);
/// Against the standard normal.
[[nodiscard]] KsResult ks_normal(std::vector<double> x);
[[nodiscard]] KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double intercept_stderr = 0.0;
    /// Two-sided confidence interval for the slope.
    double slope_low = 0.0;
    double slope_high = 0.0;
};

/// Ordinary least squares of y on x with a Student-t interval.
[[nodiscard]] LinearFit ols(const std::vector<double> &x, const std::vector<double> &y,
                            double confidence = 0.95);

} // namespace dnull

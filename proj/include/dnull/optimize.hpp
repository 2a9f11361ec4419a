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

#pragma once

#include <functional>

#include "dnull/quantum_core.hpp"

namespace dnull {

struct MinimizeResult {
    RVec x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Derivative-free Nelder-Mead simplex search (GSL nmsimplex2). Stops when
/// the characteristic simplex size falls below x_tol.
[[nodiscard]] MinimizeResult nelder_mead(const std::function<double(const RVec &)> &f,
                                         const RVec &x0, const RVec &step,
                                         double x_tol = 1e-10, int max_iterations = 20000);

/// Quasi-Newton BFGS minimisation (GSL vector_bfgs2). Stops when the
/// gradient norm falls below g_tol or the line search makes no progress.
[[nodiscard]] MinimizeResult bfgs_minimize(const std::function<double(const RVec &)> &f,
                                           const std::function<RVec(const RVec &)> &grad,
                                           const RVec &x0, double g_tol = 1e-10,
                                           int max_iterations = 5000);

} // namespace dnull

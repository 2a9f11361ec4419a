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

#include "dnull/optimize.hpp"

#include <algorithm>
#include <memory>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>
#include <gsl/gsl_vector.h>

namespace dnull {

namespace {

using VectorPtr = std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)>;

VectorPtr to_gsl(const RVec &v) {
    VectorPtr out(gsl_vector_alloc(static_cast<std::size_t>(v.size())), &gsl_vector_free);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        gsl_vector_set(out.get(), static_cast<std::size_t>(i), v(i));
    }
    return out;
}

RVec from_gsl(const gsl_vector *v) {
    RVec out(static_cast<Eigen::Index>(v->size));
    for (std::size_t i = 0; i < v->size; ++i) {
        out(static_cast<Eigen::Index>(i)) = gsl_vector_get(v, i);
    }
    return out;
}

struct Callbacks {
    const std::function<double(const RVec &)> *f;
    const std::function<RVec(const RVec &)> *grad;
};

double call_f(const gsl_vector *x, void *params) {
    return (*static_cast<Callbacks *>(params)->f)(from_gsl(x));
}

void call_df(const gsl_vector *x, void *params, gsl_vector *g) {
    const RVec gr = (*static_cast<Callbacks *>(params)->grad)(from_gsl(x));
    for (std::size_t i = 0; i < g->size; ++i) {
        gsl_vector_set(g, i, gr(static_cast<Eigen::Index>(i)));
    }
}

void call_fdf(const gsl_vector *x, void *params, double *f, gsl_vector *g) {
    *f = call_f(x, params);
    call_df(x, params, g);
}

// GSL's default handler aborts; status codes are checked instead.
struct ErrorHandlerGuard {
    ErrorHandlerGuard() : previous(gsl_set_error_handler_off()) {}
    ~ErrorHandlerGuard() { gsl_set_error_handler(previous); }
    gsl_error_handler_t *previous;
};

} // namespace

MinimizeResult nelder_mead(const std::function<double(const RVec &)> &f, const RVec &x0,
                           const RVec &step, double x_tol, int max_iterations) {
    MinimizeResult res;
    if (x0.size() == 0) {
        res.x = x0;
        res.value = f(x0);
        res.converged = true;
        return res;
    }
    const ErrorHandlerGuard guard;
    Callbacks cb{&f, nullptr};
    gsl_multimin_function fn{&call_f, static_cast<std::size_t>(x0.size()), &cb};
    std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)> s(
        gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, fn.n),
        &gsl_multimin_fminimizer_free);
    const VectorPtr x = to_gsl(x0);
    const VectorPtr ss = to_gsl(step);
    gsl_multimin_fminimizer_set(s.get(), &fn, x.get(), ss.get());
    for (res.iterations = 1; res.iterations <= max_iterations; ++res.iterations) {
        if (gsl_multimin_fminimizer_iterate(s.get()) != GSL_SUCCESS) {
            break;
        }
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s.get()), x_tol) == GSL_SUCCESS) {
            res.converged = true;
            break;
        }
    }
    res.x = from_gsl(gsl_multimin_fminimizer_x(s.get()));
    res.value = gsl_multimin_fminimizer_minimum(s.get());
    return res;
}

MinimizeResult bfgs_minimize(const std::function<double(const RVec &)> &f,
                             const std::function<RVec(const RVec &)> &grad, const RVec &x0,
                             double g_tol, int max_iterations) {
    MinimizeResult res;
    res.x = x0;
    res.value = f(x0);
    if (x0.size() == 0) {
        res.converged = true;
        return res;
    }
    const ErrorHandlerGuard guard;
    Callbacks cb{&f, &grad};
    gsl_multimin_function_fdf fn{&call_f, &call_df, &call_fdf,
                                 static_cast<std::size_t>(x0.size()), &cb};
    std::unique_ptr<gsl_multimin_fdfminimizer, decltype(&gsl_multimin_fdfminimizer_free)> s(
        gsl_multimin_fdfminimizer_alloc(gsl_multimin_fdfminimizer_vector_bfgs2, fn.n),
        &gsl_multimin_fdfminimizer_free);
    const VectorPtr x = to_gsl(x0);
    const double initial_step = 1e-2 * std::max(1.0, x0.norm());
    gsl_multimin_fdfminimizer_set(s.get(), &fn, x.get(), initial_step, 0.1);
    for (res.iterations = 1; res.iterations <= max_iterations; ++res.iterations) {
        if (gsl_multimin_fdfminimizer_iterate(s.get()) != GSL_SUCCESS) {
            break;
        }
        if (gsl_multimin_test_gradient(gsl_multimin_fdfminimizer_gradient(s.get()), g_tol) ==
            GSL_SUCCESS) {
            res.converged = true;
            break;
        }
    }
    const double value = gsl_multimin_fdfminimizer_minimum(s.get());
    if (value <= res.value) {
        res.x = from_gsl(gsl_multimin_fdfminimizer_x(s.get()));
        res.value = value;
    }
    return res;
}

} // namespace dnull

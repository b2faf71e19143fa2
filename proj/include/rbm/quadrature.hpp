#pragma once

#include <functional>

#include "rbm/common.hpp"

namespace rbm {

struct QuadResult {
    cd value{0.0, 0.0};
    double abs_err = 0.0;
    long n_eval = 0;
};

// Adaptive Gauss-Kronrod 7-15 panels on [a, b] for a complex integrand.
// Bisects until the panel error estimate meets max(rel_tol * |I|, abs_tol).
QuadResult gk_adaptive(const std::function<cd(double)>& f, double a, double b,
                       double rel_tol = 1e-9, double abs_tol = 0.0,
                       int max_depth = 48);

}  // namespace rbm

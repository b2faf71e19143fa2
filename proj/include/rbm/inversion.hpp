#pragma once

#include <string>

#include "rbm/poles.hpp"
#include "rbm/saddle.hpp"

namespace rbm {

struct InversionOptions {
    double contour_eps = 0.05;       // vertical contour offset
    double rel_tol = 1e-9;           // panel relative tolerance
    double tail_tol = 1e-8;          // certified tail fraction of the value
    double v_max = 1e3;              // truncation-failure threshold
    double pole_window_factor = 3.0; // half-circle detour window in units of R eps
    double epsilon_cap = 0.0;        // Morse path half-length; 0 = default
};

struct QuadratureResult {
    cd value{0.0, 0.0};        // imaginary part is a diagnostic
    double abs_error_est = 0.0;  // quadrature + truncation
    double se_propagated = 0.0;  // Monte Carlo input error
    std::string contour;
};

// One of the three vertical-contour integrals; direct Monte Carlo
// transforms feed the integrand.
QuadratureResult eval_I_vertical(int which, double a, double b, const Transforms& tf,
                                 const InversionOptions& opt = {});

// Shifted-contour version through the saddle: explicit residue terms plus
// quadrature over S- + Gamma + S+, with the half-circle detour inside the
// pole window.  Uses the continued transforms.
QuadratureResult eval_shifted(double a, double b, const Transforms& tf,
                              const PoleReport& poles, const InversionOptions& opt = {});

// Like eval_shifted but only the contribution of the given integral.
QuadratureResult eval_shifted_I(int which, double a, double b, const Transforms& tf,
                                const PoleReport& poles, const InversionOptions& opt = {});

// g(a, b) as I1 + I2 + I3 with merged error accounting.
QuadratureResult green_oracle(double a, double b, const Transforms& tf,
                              const PoleReport& poles, bool shifted = false,
                              const InversionOptions& opt = {});

}  // namespace rbm

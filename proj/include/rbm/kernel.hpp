#pragma once

#include "rbm/model.hpp"

namespace rbm {

// Branch points and discriminant data of the kernel gamma(x, y) viewed as a
// quadratic in y (x-plane data) and in x (y-plane data).
struct KernelGeometry {
    double x_min = 0.0, x_max = 0.0;
    double y_min = 0.0, y_max = 0.0;
    double D1 = 0.0, D2 = 0.0;
    double y_at_xmax = 0.0;  // the double root Y(x_max)
    double x_at_ymax = 0.0;  // the double root X(y_max)
    // Length of the cut beyond x_max (resp. y_max) on which the analytic
    // continuation of phi2 (resp. phi1) is defined; +inf when s12 >= 0.
    double cut_extent_x = kInf;
    double cut_extent_y = kInf;
};

KernelGeometry branch_points(const QuadrantParams& params);

cd gamma(const QuadrantParams& params, cd x, cd y);
cd gamma1(const QuadrantParams& params, cd x, cd y);
cd gamma2(const QuadrantParams& params, cd x, cd y);

// Coefficients of gamma(x, .) = a y^2 + b(x) y + c(x).
inline double coeff_a(const QuadrantParams& p) { return 0.5 * p.s22; }
inline cd coeff_b(const QuadrantParams& p, cd x) { return p.s12 * x + p.mu.y; }
inline cd coeff_c(const QuadrantParams& p, cd x) { return 0.5 * p.s11 * x * x + p.mu.x * x; }

// Discriminant b^2 - 4 a c of gamma in y; real on [x_min, x_max], negative
// on the rest of the real axis.
cd disc_x(const QuadrantParams& params, cd x);
double disc_x_deriv_real(const QuadrantParams& params, double x);

// sqrt(disc_x) with the branch that is positive on (x_min, x_max) and
// continuous off the two real cuts; real arguments on the cuts evaluate to
// the limit from the upper half-plane.
cd sqrt_disc_x(const QuadrantParams& params, cd x);

// Two branches of the algebraic function Y(x) solving gamma(x, Y(x)) = 0,
// fixed by Y^-(0) = -2 mu2 / s22.
cd Y_branch(const QuadrantParams& params, cd x, int sign);
cd X_branch(const QuadrantParams& params, cd y, int sign);

// gamma'_y(x, Y^+(x)) = sqrt(disc_x); gamma'_x(X^+(y), y) symmetric.
cd dgamma_y_on_branch(const QuadrantParams& params, cd x);
cd dgamma_x_on_branch(const QuadrantParams& params, cd y);

// d/dx Y^{sign}(x) away from branch points.
cd Y_branch_deriv(const QuadrantParams& params, cd x, int sign);

// Trigonometric parametrization of the ellipse gamma = 0; passes through the
// origin at t = theta.
Vec2 ellipse_param(double t, const ConeParams& cone, const QuadrantParams& params);

}  // namespace rbm

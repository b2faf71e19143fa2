#pragma once

#include <map>
#include <optional>
#include <vector>

#include "rbm/kernel.hpp"

namespace rbm {

// Saddle point of the inversion exponent in direction alpha: the maximizer
// of x cos(alpha) + y sin(alpha) on the ellipse gamma = 0.
struct SaddleData {
    double alpha = 0.0;
    double x = 0.0, y = 0.0;
    double Fxx = kInf;           // F''_x at the saddle, +inf at alpha = 0
    double Gyy = kInf;           // G''_y at the saddle, +inf at alpha = pi/2
    double R = 0.0;              // sqrt(2 / Fxx), scale of the descent chart
    double exponent_rate = 0.0;  // cos(alpha) x + sin(alpha) y
};

SaddleData saddle_point(double alpha, const QuadrantParams& params);

// Quadratic form s11 sin^2 a - 2 s12 sin a cos a + s22 cos^2 a appearing in
// the curvature and in c0.
double curvature_form(double alpha, const QuadrantParams& params);

// F(x, alpha) = -cos(a) x - sin(a) Y^+(x) + cos(a) x(a) + sin(a) y(a).
cd phase_F(cd x, double alpha, const QuadrantParams& params);
cd phase_G(cd y, double alpha, const QuadrantParams& params);
cd phase_F_dx(cd x, double alpha, const QuadrantParams& params);

// Fxx and R(alpha); throws NumericError at alpha = 0 where the curvature of
// F is unbounded (use the G-side there).
std::pair<double, double> curvature(double alpha, const QuadrantParams& params);

struct DescentPath {
    double alpha = 0.0;
    double epsilon_cap = 0.0;
    std::vector<double> t;  // ordered -eps .. +eps
    std::vector<cd> x;
    cd x_plus{0.0, 0.0};   // x(i eps)
    cd x_minus{0.0, 0.0};  // x(-i eps)
};

// Steepest-descent chart through the saddle: solves F(x(it), a) = -t^2 by
// tangent prediction and Newton correction, warm-starting from the nearest
// solved parameter.  Thread-compatible only through distinct instances.
class MorseChart {
public:
    MorseChart(double alpha, const QuadrantParams& params);

    cd x_at(double t) const;        // point x(it)
    cd dx_dt(double t) const;       // i x'_w(it), path velocity in t
    double R() const { return saddle_.R; }
    const SaddleData& saddle() const { return saddle_; }

private:
    cd solve(double t) const;

    double alpha_;
    QuadrantParams params_;
    SaddleData saddle_;
    mutable std::map<double, cd> cache_;
};

// Default half-length of the traced path: 0.1 R(alpha), shrunk so the path
// keeps a margin from the branch points.
double default_epsilon_cap(double alpha, const QuadrantParams& params);

// When a pole abscissa is supplied, signals pole-on-path if the saddle sits
// within window_factor * R(alpha) * epsilon_cap of it; the caller must use
// the half-circle detour instead.
DescentPath trace_descent(double alpha, double epsilon_cap, int n_samples,
                          const QuadrantParams& params,
                          std::optional<double> pole_x = std::nullopt,
                          double window_factor = 3.0);

// x-path for alpha = 0: image under X^+ of the y-descent path; runs the real
// segment [x_max, x_max + eps^2] out and back.
DescentPath descent_path_alpha0(double epsilon_cap, int n_samples,
                                const QuadrantParams& params);

}  // namespace rbm

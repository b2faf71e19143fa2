#include "rbm/saddle.hpp"

#include <algorithm>
#include <cmath>

namespace rbm {

double curvature_form(double alpha, const QuadrantParams& p) {
    const double s = std::sin(alpha), c = std::cos(alpha);
    return p.s11 * s * s - 2.0 * p.s12 * s * c + p.s22 * c * c;
}

SaddleData saddle_point(double alpha, const QuadrantParams& p) {
    const auto [cone, T] = quadrant_to_cone(p);
    (void)T;
    const double omega = omega_of_alpha(alpha, p);
    const Vec2 s = ellipse_param(omega, cone, p);

    SaddleData d;
    d.alpha = alpha;
    d.x = s.x;
    d.y = s.y;
    d.exponent_rate = std::cos(alpha) * s.x + std::sin(alpha) * s.y;

    const double dgy = sqrt_disc_x(p, cd(s.x, 0.0)).real();
    const double dgx = sqrt_disc_x(p.swapped(), cd(s.y, 0.0)).real();
    const double q = curvature_form(alpha, p);
    d.Fxx = alpha > 0.0 ? q / (dgy * std::sin(alpha)) : kInf;
    d.Gyy = alpha < kPi / 2.0 ? q / (dgx * std::cos(alpha)) : kInf;
    d.R = d.Fxx < kInf ? std::sqrt(2.0 / d.Fxx) : 0.0;
    return d;
}

cd phase_F(cd x, double alpha, const QuadrantParams& p) {
    const SaddleData s = saddle_point(alpha, p);
    return -std::cos(alpha) * x - std::sin(alpha) * Y_branch(p, x, +1) + s.exponent_rate;
}

cd phase_G(cd y, double alpha, const QuadrantParams& p) {
    const SaddleData s = saddle_point(alpha, p);
    return -std::cos(alpha) * X_branch(p, y, +1) - std::sin(alpha) * y + s.exponent_rate;
}

cd phase_F_dx(cd x, double alpha, const QuadrantParams& p) {
    return -std::cos(alpha) - std::sin(alpha) * Y_branch_deriv(p, x, +1);
}

std::pair<double, double> curvature(double alpha, const QuadrantParams& p) {
    if (!(alpha > 0.0)) {
        throw NumericError("curvature of F is unbounded at alpha = 0");
    }
    const SaddleData s = saddle_point(alpha, p);
    return {s.Fxx, s.R};
}

double default_epsilon_cap(double alpha, const QuadrantParams& p) {
    const SaddleData s = saddle_point(alpha, p);
    const KernelGeometry g = branch_points(p);
    double eps = 0.1 * s.R;
    // Keep the quadratic estimate of the path inside a margin of the branch
    // points: |x(it) - x(alpha)| ~ R t.
    const double dist = std::min(std::abs(g.x_max - s.x), std::abs(s.x - g.x_min));
    if (dist > 1e-3 && s.R > 0.0) {
        eps = std::min(eps, 0.8 * (dist - 1e-3) / s.R);
    }
    return eps;
}

MorseChart::MorseChart(double alpha, const QuadrantParams& params)
    : alpha_(alpha), params_(params), saddle_(saddle_point(alpha, params)) {
    if (!(alpha > 0.0)) {
        throw NumericError("descent chart in x requires alpha > 0");
    }
    cache_[0.0] = cd(saddle_.x, 0.0);
}

cd MorseChart::solve(double t) const {
    auto it = cache_.find(t);
    if (it != cache_.end()) return it->second;

    // Warm start from the solved parameter nearest to t.
    auto up = cache_.lower_bound(t);
    double t0;
    cd x0;
    if (up == cache_.end()) {
        --up;
        t0 = up->first;
        x0 = up->second;
    } else if (up == cache_.begin()) {
        t0 = up->first;
        x0 = up->second;
    } else {
        auto lo = std::prev(up);
        if (std::abs(lo->first - t) <= std::abs(up->first - t)) {
            t0 = lo->first;
            x0 = lo->second;
        } else {
            t0 = up->first;
            x0 = up->second;
        }
    }

    const double max_step = 0.05 * saddle_.R;
    double cur_t = t0;
    cd cur_x = x0;
    int guard = 0;
    while (cur_t != t) {
        double step = std::clamp(t - cur_t, -max_step, max_step);
        double next_t = (std::abs(t - cur_t) <= max_step) ? t : cur_t + step;
        // Tangent predictor: x' = -2t / F'_x, with the chart tangent i R at
        // the saddle itself.
        cd pred;
        const cd fx = phase_F_dx(cur_x, alpha_, params_);
        if (std::abs(cur_t) < 1e-12 || std::abs(fx) < 1e-14) {
            pred = cur_x + cd(0.0, saddle_.R) * (next_t - cur_t);
        } else {
            pred = cur_x + (-2.0 * cur_t / fx) * (next_t - cur_t);
        }
        // Newton correction on F(x) + t^2 = 0.
        cd xk = pred;
        for (int k = 0; k < 30; ++k) {
            const cd f = phase_F(xk, alpha_, params_) + next_t * next_t;
            if (std::abs(f) <= 1e-14 * std::max(1.0, next_t * next_t)) break;
            const cd d = phase_F_dx(xk, alpha_, params_);
            if (std::abs(d) < 1e-300) break;
            const cd dx = f / d;
            xk -= dx;
            if (std::abs(dx) < 1e-15 * (1.0 + std::abs(xk))) break;
        }
        if (std::abs(phase_F(xk, alpha_, params_) + next_t * next_t) > 1e-11) {
            throw NumericError("descent path Newton iteration failed to converge");
        }
        cur_t = next_t;
        cur_x = xk;
        cache_[cur_t] = cur_x;
        if (++guard > 100000) {
            throw NumericError("descent path continuation exceeded step budget");
        }
    }
    return cur_x;
}

cd MorseChart::x_at(double t) const { return solve(t); }

cd MorseChart::dx_dt(double t) const {
    if (t == 0.0) return cd(0.0, saddle_.R);
    const cd x = solve(t);
    // F(x(it)) = -t^2  =>  dx/dt = -2t / F'_x.
    return -2.0 * t / phase_F_dx(x, alpha_, params_);
}

DescentPath trace_descent(double alpha, double epsilon_cap, int n_samples,
                          const QuadrantParams& p, std::optional<double> pole_x,
                          double window_factor) {
    MorseChart chart(alpha, p);
    if (pole_x &&
        std::abs(chart.saddle().x - *pole_x) < window_factor * chart.R() * epsilon_cap) {
        throw NumericError("pole on descent path: use the half-circle detour");
    }
    DescentPath path;
    path.alpha = alpha;
    path.epsilon_cap = epsilon_cap;
    const int n = std::max(n_samples, 2);
    for (int k = 0; k <= n; ++k) {
        const double t = -epsilon_cap + 2.0 * epsilon_cap * k / n;
        path.t.push_back(t);
        path.x.push_back(chart.x_at(t));
    }
    path.x_minus = path.x.front();
    path.x_plus = path.x.back();
    return path;
}

DescentPath descent_path_alpha0(double epsilon_cap, int n_samples,
                                const QuadrantParams& p) {
    // G(y, 0) = x_max - X^+(y); trace the y-chart (the x-chart of the
    // swapped model at alpha = pi/2 ... shifted by the angle swap) and push
    // it through X^+.  The image runs [x_max, x_max + eps^2] out and back.
    const QuadrantParams ps = p.swapped();
    MorseChart ychart(kPi / 2.0, ps);  // swapped-x chart at pi/2 is the y-chart at 0
    DescentPath path;
    path.alpha = 0.0;
    path.epsilon_cap = epsilon_cap;
    const int n = std::max(n_samples, 2);
    for (int k = 0; k <= n; ++k) {
        const double t = -epsilon_cap + 2.0 * epsilon_cap * k / n;
        const cd y = ychart.x_at(t);
        cd x = X_branch(p, y, +1);
        path.t.push_back(t);
        path.x.push_back(cd(x.real(), 0.0));
    }
    path.x_minus = path.x.front();
    path.x_plus = path.x.back();
    return path;
}

}  // namespace rbm

#include "rbm/poles.hpp"

#include <cmath>

#include "rbm/saddle.hpp"

namespace rbm {

namespace {

// x(alpha) is strictly decreasing from x_max to 0 on [0, alpha_mu]; solve
// x(alpha) = target by bisection.
double alpha_at_saddle_x(double target, const QuadrantParams& p) {
    const double alpha_mu = std::atan2(p.mu.y, p.mu.x);
    double lo = 0.0, hi = alpha_mu;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (saddle_point(mid, p).x > target) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo < 1e-15) break;
    }
    return 0.5 * (lo + hi);
}

double solve_x_star(const QuadrantParams& p) {
    const double ratio = p.refl.a12 / p.refl.a22;
    return 2.0 * (p.mu.y * ratio - p.mu.x) /
           (p.s11 - 2.0 * p.s12 * ratio + p.s22 * ratio * ratio);
}

}  // namespace

PoleReport pole_locations(const QuadrantParams& p) {
    validate(p);
    const KernelGeometry g = branch_points(p);
    const QuadrantParams ps = p.swapped();
    const KernelGeometry gs = branch_points(ps);
    const auto [cone, T] = quadrant_to_cone(p);
    (void)T;

    PoleReport r;
    r.omega_star = cone.theta - 2.0 * cone.delta;
    r.omega_2star = cone.theta + 2.0 * cone.epsilon;

    r.exists_x = g.x_max * p.refl.a12 + g.y_at_xmax * p.refl.a22 > 0.0;
    r.exists_y = gs.x_max * p.refl.a21 + gs.y_at_xmax * p.refl.a11 > 0.0;

    if (r.exists_x) {
        const double xs = solve_x_star(p);
        if (std::abs(xs - g.x_max) < 1e-9 * std::max(1.0, std::abs(g.x_max))) {
            throw NumericError("excluded coincidence: the pole x* meets the branch point x_max");
        }
        r.x_star = xs;
        r.y_star = Y_branch(p, cd(xs, 0.0), +1).real();
        r.y_minus_at_xstar = Y_branch(p, cd(xs, 0.0), -1).real();
        if (std::abs(gamma(p, xs, r.y_minus_at_xstar)) > 1e-10 ||
            std::abs(gamma2(p, xs, r.y_minus_at_xstar)) > 1e-10) {
            throw NumericError("pole cross-check failed: (x*, Y^-(x*)) does not solve "
                               "gamma = 0, gamma2 = 0");
        }
        r.alpha_star = alpha_at_saddle_x(xs, p);
    }
    if (r.exists_y) {
        const double ys = solve_x_star(ps);
        if (std::abs(ys - gs.x_max) < 1e-9 * std::max(1.0, std::abs(gs.x_max))) {
            throw NumericError("excluded coincidence: the pole y** meets the branch point y_max");
        }
        r.y_2star = ys;
        r.x_2star = Y_branch(ps, cd(ys, 0.0), +1).real();
        r.x_minus_at_y2star = Y_branch(ps, cd(ys, 0.0), -1).real();
        if (std::abs(gamma(p, r.x_minus_at_y2star, ys)) > 1e-10 ||
            std::abs(gamma1(p, r.x_minus_at_y2star, ys)) > 1e-10) {
            throw NumericError("pole cross-check failed: (X^-(y**), y**) does not solve "
                               "gamma = 0, gamma1 = 0");
        }
        r.alpha_2star = kPi / 2.0 - alpha_at_saddle_x(ys, ps);
    }
    return r;
}

PoleReport swapped_report(const PoleReport& r) {
    PoleReport s;
    s.exists_x = r.exists_y;
    s.exists_y = r.exists_x;
    s.x_star = r.y_2star;
    s.y_star = r.x_2star;
    s.y_minus_at_xstar = r.x_minus_at_y2star;
    s.y_2star = r.x_star;
    s.x_2star = r.y_star;
    s.x_minus_at_y2star = r.y_minus_at_xstar;
    s.alpha_star = kPi / 2.0 - r.alpha_2star;
    s.alpha_2star = kPi / 2.0 - r.alpha_star;
    s.omega_star = kNaN;  // wedge angles do not swap; recompute if needed
    s.omega_2star = kNaN;
    return s;
}

namespace {

// d/dx gamma2(x, Y^-(x)) at x*, the simple-zero derivative of the
// continuation denominator.
double denominator_slope(const QuadrantParams& p, const PoleReport& poles) {
    const double slope =
        p.refl.a12 + p.refl.a22 * Y_branch_deriv(p, cd(poles.x_star, 0.0), -1).real();
    if (slope == 0.0) {
        throw NumericError("zero residue denominator (cannot happen for x* != x_max)");
    }
    return slope;
}

cd residue_from_phi1(const QuadrantParams& p, const PoleReport& poles, cd phi1_value) {
    const double xs = poles.x_star;
    const double ym = poles.y_minus_at_xstar;
    const cd num = gamma1(p, xs, ym) * phi1_value + std::exp(p.z0.x * xs + p.z0.y * ym);
    return -num / denominator_slope(p, poles);
}

}  // namespace

PhiValue residue_phi2(const QuadrantParams& p, const PoleReport& poles,
                      const std::function<PhiValue(cd)>& phi1_at) {
    if (!poles.exists_x) throw NumericError("phi2 has no pole for this model");
    const PhiValue v = phi1_at(cd(poles.y_minus_at_xstar, 0.0));
    PhiValue out;
    out.value = residue_from_phi1(p, poles, v.value);
    out.se = std::abs(gamma1(p, poles.x_star, poles.y_minus_at_xstar) /
                      denominator_slope(p, poles)) *
             v.se;
    return out;
}

cd residue_phi2_rep(const Transforms& tf, const PoleReport& poles, int k) {
    if (!poles.exists_x) throw NumericError("phi2 has no pole for this model");
    const cd phi1v = tf.phi1_rep(k, cd(poles.y_minus_at_xstar, 0.0));
    return residue_from_phi1(tf.params(), poles, phi1v);
}

PhiValue residue_phi2(const Transforms& tf, const PoleReport& poles) {
    return residue_phi2(tf.params(), poles,
                        [&](cd y) { return tf.phi1(y); });
}

cd residue_phi1_rep(const Transforms& tf, const PoleReport& poles, int k) {
    const PoleReport sp = swapped_report(poles);
    if (!sp.exists_x) throw NumericError("phi1 has no pole for this model");
    const QuadrantParams ps = tf.params().swapped();
    const cd phi2v = tf.phi2_rep(k, cd(sp.y_minus_at_xstar, 0.0));
    return residue_from_phi1(ps, sp, phi2v);
}

PhiValue residue_phi1(const Transforms& tf, const PoleReport& poles) {
    const PoleReport sp = swapped_report(poles);
    if (!sp.exists_x) throw NumericError("phi1 has no pole for this model");
    const QuadrantParams ps = tf.params().swapped();
    return residue_phi2(ps, sp, [&](cd x) { return tf.phi2(x); });
}

double pole_constant_cstar(const QuadrantParams& p, const PoleReport& poles, cd residue) {
    if (!poles.exists_x) throw NumericError("c* requires the x-pole to exist");
    const double g2 = gamma2(p, poles.x_star, poles.y_star).real();
    const double dgy = dgamma_y_on_branch(p, cd(poles.x_star, 0.0)).real();
    return (-residue.real()) * g2 / dgy;
}

double pole_constant_c2star(const QuadrantParams& p, const PoleReport& poles, cd residue) {
    return pole_constant_cstar(p.swapped(), swapped_report(poles), residue);
}

PhiValue pole_constant_cstar(const Transforms& tf, const PoleReport& poles) {
    const SimArtifact& art = tf.artifact();
    std::vector<cd> vals(art.R);
    for (int k = 0; k < art.R; ++k) {
        vals[k] = pole_constant_cstar(tf.params(), poles, residue_phi2_rep(tf, poles, k));
    }
    cd mean(0.0, 0.0);
    for (int k = 0; k < art.R; ++k) {
        mean += vals[k] * (static_cast<double>(art.paths_rep[k]) /
                           static_cast<double>(art.n_paths));
    }
    double var = 0.0;
    for (const cd& v : vals) var += std::norm(v - mean);
    var = art.R > 1 ? var / (art.R - 1) : 0.0;
    return {mean, std::sqrt(var / std::max(art.R, 1))};
}

PhiValue pole_constant_c2star(const Transforms& tf, const PoleReport& poles) {
    const SimArtifact& art = tf.artifact();
    const QuadrantParams ps = tf.params().swapped();
    const PoleReport sp = swapped_report(poles);
    std::vector<cd> vals(art.R);
    for (int k = 0; k < art.R; ++k) {
        vals[k] = pole_constant_cstar(ps, sp, residue_phi1_rep(tf, poles, k));
    }
    cd mean(0.0, 0.0);
    for (int k = 0; k < art.R; ++k) {
        mean += vals[k] * (static_cast<double>(art.paths_rep[k]) /
                           static_cast<double>(art.n_paths));
    }
    double var = 0.0;
    for (const cd& v : vals) var += std::norm(v - mean);
    var = art.R > 1 ? var / (art.R - 1) : 0.0;
    return {mean, std::sqrt(var / std::max(art.R, 1))};
}

}  // namespace rbm

#include "rbm/inversion.hpp"

#include <cmath>
#include <functional>

#include "rbm/quadrature.hpp"

namespace rbm {

namespace {

constexpr cd kI{0.0, 1.0};

// One coordinate side of the machinery.  The y-side integrals are the
// x-side integrals of the swapped model with (a, b) exchanged and phi1 in
// the role of phi2.
struct SideView {
    const Transforms* tf;
    bool y_side;
    QuadrantParams p;  // swapped when y_side
    KernelGeometry geom;

    SideView(const Transforms& t, bool swap)
        : tf(&t),
          y_side(swap),
          p(swap ? t.params().swapped() : t.params()),
          geom(branch_points(p)) {}

    cd phi_direct(cd x) const { return y_side ? tf->phi1_mean(x) : tf->phi2_mean(x); }
    cd phi_continued(cd x) const {
        return y_side ? tf->phi1_continued_mean(x) : tf->phi2_continued_mean(x);
    }
    double phi_direct_relse(cd x) const {
        const PhiValue v = y_side ? tf->phi1(x) : tf->phi2(x);
        return std::abs(v.value) > 0.0 ? v.se / std::abs(v.value) : 0.0;
    }
    double phi_continued_relse(cd x) const {
        const PhiValue v = y_side ? tf->phi1_continued(x) : tf->phi2_continued(x);
        return std::abs(v.value) > 0.0 ? v.se / std::abs(v.value) : 0.0;
    }
};

cd integrand_I1(const SideView& sv, double a, double b, cd x, cd phi_value) {
    const cd yp = Y_branch(sv.p, x, +1);
    return phi_value * gamma2(sv.p, x, yp) / dgamma_y_on_branch(sv.p, x) *
           std::exp(-a * x - b * yp);
}

cd integrand_I3(const SideView& sv, double a, double b, cd x) {
    const cd yp = Y_branch(sv.p, x, +1);
    return std::exp((sv.p.z0.x - a) * x + (sv.p.z0.y - b) * yp) /
           dgamma_y_on_branch(sv.p, x);
}

struct Accum {
    cd value{0.0, 0.0};
    double abs_err = 0.0;
    double se2 = 0.0;

    void add(const QuadResult& q, double rel_se) {
        value += q.value;
        abs_err += q.abs_err;
        const double se = rel_se * std::abs(q.value);
        se2 += se * se;
    }
};

struct TailResult {
    cd value;
    double abs_err;
    double se2;
};

// Integral of f over [0, inf) (both signs when two_sided), truncated when a
// fitted exponential bound certifies the remaining tail below tail_tol of
// the running value.
TailResult integrate_decaying(const std::function<cd(double)>& f,
                              const std::function<double(double)>& rel_se, bool two_sided,
                              const InversionOptions& opt, double decay_scale) {
    Accum acc;
    double lo = 0.0;
    double hi = std::min(std::max(4.0, 8.0 / std::max(decay_scale, 0.05)), opt.v_max);
    double tail = kInf;
    while (true) {
        const int chunks = 4;
        for (int c = 0; c < chunks; ++c) {
            const double a = lo + (hi - lo) * c / chunks;
            const double b = lo + (hi - lo) * (c + 1) / chunks;
            const QuadResult q = gk_adaptive(f, a, b, opt.rel_tol, 0.0);
            acc.add(q, rel_se(0.5 * (a + b)));
            if (two_sided) {
                const QuadResult qm =
                    gk_adaptive([&](double v) { return f(-v); }, a, b, opt.rel_tol, 0.0);
                acc.add(qm, rel_se(-0.5 * (a + b)));
            }
        }
        const double m1 = std::abs(f(hi)) + (two_sided ? std::abs(f(-hi)) : 0.0);
        const double m2 =
            std::abs(f(1.25 * hi)) + (two_sided ? std::abs(f(-1.25 * hi)) : 0.0);
        if (m1 == 0.0 && m2 == 0.0) {
            tail = 0.0;
            break;
        }
        if (m2 > 0.0 && m1 > m2) {
            const double kappa = std::log(m1 / m2) / (0.25 * hi);
            tail = m1 / kappa;
            if (tail <= opt.tail_tol * (std::abs(acc.value) + 1e-300)) break;
        }
        lo = hi;
        hi = 2.0 * hi;
        if (hi > opt.v_max) {
            throw TruncationError(
                "contour tail cannot be certified below tolerance within the v budget");
        }
    }
    return {acc.value, acc.abs_err + tail, acc.se2};
}

// Rough growth rate of Re Y^+(x0 + iv) in v, the exponential damping scale.
double y_growth_rate(const SideView& sv, cd x0) {
    const double r1 = Y_branch(sv.p, x0 + kI * 5.0, +1).real();
    const double r2 = Y_branch(sv.p, x0 + kI * 10.0, +1).real();
    return std::max((r2 - r1) / 5.0, 1e-3);
}

QuadratureResult vertical_impl(int which, double a, double b, const Transforms& tf,
                               const InversionOptions& opt) {
    SideView svx(tf, false);
    SideView svy(tf, true);
    const QuadrantParams& p = tf.params();
    auto zero_se = [](double) { return 0.0; };

    if (which == 1 || which == 2) {
        // I2(a, b) is the I1 machinery of the swapped model at (b, a).
        const SideView& sv = which == 1 ? svx : svy;
        const double aa = which == 1 ? a : b;
        const double bb = which == 1 ? b : a;
        const cd x0(-opt.contour_eps, 0.0);
        auto f = [&](double v) {
            const cd x = x0 + kI * v;
            return integrand_I1(sv, aa, bb, x, sv.phi_direct(x));
        };
        auto rse = [&](double v) { return sv.phi_direct_relse(x0 + kI * v); };
        const TailResult r =
            integrate_decaying(f, rse, true, opt, bb * y_growth_rate(sv, x0));
        return {r.value / (2.0 * kPi), r.abs_err / (2.0 * kPi), std::sqrt(r.se2) / (2.0 * kPi),
                which == 1 ? "vertical-x" : "vertical-y"};
    }
    if (which != 3) throw NumericError("which must be 1, 2 or 3");
    if (b > p.z0.y && a > 0.0) {
        const cd x0(-opt.contour_eps, 0.0);
        auto f = [&](double v) { return integrand_I3(svx, a, b, x0 + kI * v); };
        const TailResult r = integrate_decaying(f, zero_se, true, opt,
                                                (b - p.z0.y) * y_growth_rate(svx, x0));
        return {r.value / (2.0 * kPi), r.abs_err / (2.0 * kPi), 0.0, "vertical-x"};
    }
    if (a > p.z0.x && b > 0.0) {
        const cd y0(-opt.contour_eps, 0.0);
        auto f = [&](double v) { return integrand_I3(svy, b, a, y0 + kI * v); };
        const TailResult r = integrate_decaying(f, zero_se, true, opt,
                                                (a - p.z0.x) * y_growth_rate(svy, y0));
        return {r.value / (2.0 * kPi), r.abs_err / (2.0 * kPi), 0.0, "vertical-y"};
    }
    throw NumericError(
        "I3 requires a > a0 (with b > 0) or b > b0 (with a > 0): point outside the "
        "oracle domain");
}

QuadratureResult shifted_impl(int which, double a, double b, const Transforms& tf,
                              const PoleReport& poles, const InversionOptions& opt) {
    const QuadrantParams& p = tf.params();
    if (!(a > 0.0) || !(b > 0.0)) {
        throw NumericError("shifted contour requires a > 0 and b > 0");
    }
    const bool y_side = (which == 2) || (which == 3 && !(b > p.z0.y));
    if (which == 3 && !(b > p.z0.y && a > 0.0) && !(a > p.z0.x && b > 0.0)) {
        throw NumericError("I3 requires a > a0 or b > b0: point outside the oracle domain");
    }

    SideView sv(tf, y_side);
    const double aa = y_side ? b : a;
    const double bb = y_side ? a : b;
    const double alpha = std::atan2(bb, aa);
    const PoleReport side_poles = y_side ? swapped_report(poles) : poles;

    const SaddleData sad = saddle_point(alpha, sv.p);
    const double eps_cap =
        opt.epsilon_cap > 0.0 ? opt.epsilon_cap : default_epsilon_cap(alpha, sv.p);

    const bool has_pole = side_poles.exists_x;
    const bool in_window =
        which != 3 && has_pole &&
        std::abs(sad.x - side_poles.x_star) < opt.pole_window_factor * sad.R * eps_cap;
    const double alpha_chart = in_window ? side_poles.alpha_star : alpha;

    std::function<cd(cd)> g;
    std::function<double(cd)> rse;
    if (which == 3) {
        g = [&sv, aa, bb](cd x) { return integrand_I3(sv, aa, bb, x); };
        rse = [](cd) { return 0.0; };
    } else {
        g = [&sv, aa, bb](cd x) {
            return integrand_I1(sv, aa, bb, x, sv.phi_continued(x));
        };
        rse = [&sv](cd x) { return sv.phi_continued_relse(x); };
    }

    MorseChart chart(alpha_chart, sv.p);
    Accum acc;
    auto gamma_leg = [&](double t0, double t1) {
        const QuadResult q = gk_adaptive(
            [&](double t) { return g(chart.x_at(t)) * chart.dx_dt(t); }, t0, t1, opt.rel_tol,
            0.0);
        acc.add(q, rse(chart.x_at(0.5 * (t0 + t1))));
    };

    std::string descriptor = y_side ? "shifted-y" : "shifted-x";
    if (!in_window) {
        for (double t0 : {-eps_cap, -0.5 * eps_cap, 0.0, 0.5 * eps_cap}) {
            gamma_leg(t0, t0 + 0.5 * eps_cap);
        }
    } else {
        // Half-circle detour bulging left of the pole, joining the Morse
        // path of alpha* at |t| = eps/2.
        const double tc = 0.5 * eps_cap;
        gamma_leg(-eps_cap, -tc);
        const double xp = side_poles.x_star;
        const cd zm = chart.x_at(-tc) - xp;
        const cd zp = chart.x_at(tc) - xp;
        const double rho_m = std::abs(zm), rho_p = std::abs(zp);
        const double phi_m = std::arg(zm);              // about -pi/2
        const double phi_p = std::arg(zp) - 2.0 * kPi;  // about pi/2 - 2pi
        auto arc = [&](double s) {
            const double phi = phi_m + (phi_p - phi_m) * s;
            const double rho = rho_m + (rho_p - rho_m) * s;
            return xp + rho * std::exp(kI * phi);
        };
        auto darc = [&](double s) {
            const double phi = phi_m + (phi_p - phi_m) * s;
            const double rho = rho_m + (rho_p - rho_m) * s;
            return ((rho_p - rho_m) + kI * rho * (phi_p - phi_m)) * std::exp(kI * phi);
        };
        const QuadResult q = gk_adaptive([&](double s) { return g(arc(s)) * darc(s); },
                                         0.0, 1.0, opt.rel_tol, 0.0);
        acc.add(q, rse(arc(0.5)));
        gamma_leg(tc, eps_cap);
        descriptor += "+detour";
    }

    // Rays from the path endpoints: S- contributes i int_0^inf f(x- - it) dt
    // and S+ contributes i int_0^inf f(x+ + it) dt.
    const double decay = bb * y_growth_rate(sv, cd(sad.x, 0.0));
    for (int sgn : {-1, +1}) {
        const cd base = chart.x_at(sgn * eps_cap);
        auto fray = [&](double t) { return g(base + kI * static_cast<double>(sgn) * t); };
        auto rray = [&](double t) { return rse(base + kI * static_cast<double>(sgn) * t); };
        const TailResult r = integrate_decaying(fray, rray, false, opt, decay);
        acc.value += kI * r.value;
        acc.abs_err += r.abs_err;
        acc.se2 += r.se2;
    }

    QuadratureResult out;
    out.value = acc.value / (2.0 * kPi * kI);
    out.abs_error_est = acc.abs_err / (2.0 * kPi);
    out.se_propagated = std::sqrt(acc.se2) / (2.0 * kPi);
    out.contour = descriptor;

    // Contribution of the crossed pole; the detour contour never crosses it.
    if (which != 3 && has_pole && !in_window && alpha < side_poles.alpha_star) {
        const PhiValue res = y_side ? residue_phi1(tf, poles) : residue_phi2(tf, poles);
        const double g2 = gamma2(sv.p, side_poles.x_star, side_poles.y_star).real();
        const double dgy = dgamma_y_on_branch(sv.p, cd(side_poles.x_star, 0.0)).real();
        const double damp = std::exp(-aa * side_poles.x_star - bb * side_poles.y_star);
        out.value += (-res.value) * g2 / dgy * damp;
        out.se_propagated = std::hypot(out.se_propagated, std::abs(g2 / dgy) * damp * res.se);
        out.contour += "+residue";
    }
    return out;
}

}  // namespace

QuadratureResult eval_I_vertical(int which, double a, double b, const Transforms& tf,
                                 const InversionOptions& opt) {
    const QuadrantParams& p = tf.params();
    if (!((a > p.z0.x && b > 0.0) || (b > p.z0.y && a > 0.0))) {
        throw NumericError("inversion point must satisfy a > a0, b > 0 or b > b0, a > 0");
    }
    if (!(gamma(p, -opt.contour_eps, -opt.contour_eps).real() < 0.0)) {
        throw NumericError("contour offset must satisfy gamma(-eps, -eps) < 0");
    }
    return vertical_impl(which, a, b, tf, opt);
}

QuadratureResult eval_shifted_I(int which, double a, double b, const Transforms& tf,
                                const PoleReport& poles, const InversionOptions& opt) {
    return shifted_impl(which, a, b, tf, poles, opt);
}

QuadratureResult eval_shifted(double a, double b, const Transforms& tf,
                              const PoleReport& poles, const InversionOptions& opt) {
    QuadratureResult total;
    total.contour = "shifted";
    for (int which : {1, 2, 3}) {
        const QuadratureResult r = shifted_impl(which, a, b, tf, poles, opt);
        total.value += r.value;
        total.abs_error_est += r.abs_error_est;
        total.se_propagated = std::hypot(total.se_propagated, r.se_propagated);
    }
    return total;
}

QuadratureResult green_oracle(double a, double b, const Transforms& tf,
                              const PoleReport& poles, bool shifted,
                              const InversionOptions& opt) {
    if (shifted) return eval_shifted(a, b, tf, poles, opt);
    QuadratureResult total;
    total.contour = "vertical";
    for (int which : {1, 2, 3}) {
        const QuadratureResult r = eval_I_vertical(which, a, b, tf, opt);
        total.value += r.value;
        total.abs_error_est += r.abs_error_est;
        total.se_propagated = std::hypot(total.se_propagated, r.se_propagated);
    }
    return total;
}

}  // namespace rbm

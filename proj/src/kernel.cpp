#include "rbm/kernel.hpp"

#include <cmath>

namespace rbm {

KernelGeometry branch_points(const QuadrantParams& p) {
    KernelGeometry g;
    const double det = p.det_sigma();
    const double mx = p.mu.y * p.s12 - p.mu.x * p.s22;
    const double my = p.mu.x * p.s12 - p.mu.y * p.s11;
    g.D1 = mx * mx + p.mu.y * p.mu.y * det;
    g.D2 = my * my + p.mu.x * p.mu.x * det;
    g.x_min = (mx - std::sqrt(g.D1)) / det;
    g.x_max = (mx + std::sqrt(g.D1)) / det;
    g.y_min = (my - std::sqrt(g.D2)) / det;
    g.y_max = (my + std::sqrt(g.D2)) / det;
    g.y_at_xmax = (-p.s12 * g.x_max - p.mu.y) / p.s22;
    g.x_at_ymax = (-p.s12 * g.y_max - p.mu.x) / p.s11;
    g.cut_extent_x = p.s12 >= 0.0 ? kInf : -p.mu.y / p.s12 - g.x_max;
    g.cut_extent_y = p.s12 >= 0.0 ? kInf : -p.mu.x / p.s12 - g.y_max;
    return g;
}

cd gamma(const QuadrantParams& p, cd x, cd y) {
    return 0.5 * (p.s11 * x * x + 2.0 * p.s12 * x * y + p.s22 * y * y) +
           p.mu.x * x + p.mu.y * y;
}

cd gamma1(const QuadrantParams& p, cd x, cd y) { return p.refl.a11 * x + p.refl.a21 * y; }

cd gamma2(const QuadrantParams& p, cd x, cd y) { return p.refl.a12 * x + p.refl.a22 * y; }

cd disc_x(const QuadrantParams& p, cd x) {
    return (p.s12 * p.s12 - p.s11 * p.s22) * x * x +
           2.0 * (p.mu.y * p.s12 - p.mu.x * p.s22) * x + p.mu.y * p.mu.y;
}

double disc_x_deriv_real(const QuadrantParams& p, double x) {
    return 2.0 * (p.s12 * p.s12 - p.s11 * p.s22) * x +
           2.0 * (p.mu.y * p.s12 - p.mu.x * p.s22);
}

// The principal square root of disc_x realizes the branch fixed by
// Y^-(0) = -2 mu2 / s22: disc_x is negative real exactly on the two real
// rays beyond the branch points, so the induced cuts are those rays.  Real
// arguments on the cuts take the upper-edge limit, whose side is determined
// by the sign of disc'_x there.
cd sqrt_disc_x(const QuadrantParams& p, cd x) {
    const cd d = disc_x(p, x);
    if (x.imag() == 0.0) {
        const double dr = d.real();
        if (dr < 0.0) {
            const double root = std::sqrt(-dr);
            return disc_x_deriv_real(p, x.real()) >= 0.0 ? cd(0.0, root) : cd(0.0, -root);
        }
        return cd(std::sqrt(dr), 0.0);
    }
    return std::sqrt(d);
}

cd Y_branch(const QuadrantParams& p, cd x, int sign) {
    const cd s = sqrt_disc_x(p, x);
    return (-p.s12 * x - p.mu.y + (sign >= 0 ? s : -s)) / p.s22;
}

cd X_branch(const QuadrantParams& p, cd y, int sign) {
    return Y_branch(p.swapped(), y, sign);
}

cd dgamma_y_on_branch(const QuadrantParams& p, cd x) { return sqrt_disc_x(p, x); }

cd dgamma_x_on_branch(const QuadrantParams& p, cd y) {
    return sqrt_disc_x(p.swapped(), y);
}

cd Y_branch_deriv(const QuadrantParams& p, cd x, int sign) {
    const cd dd = 2.0 * (p.s12 * p.s12 - p.s11 * p.s22) * x +
                  2.0 * (p.mu.y * p.s12 - p.mu.x * p.s22);
    const cd ds = 0.5 * dd / sqrt_disc_x(p, x);
    return (-p.s12 + (sign >= 0 ? ds : -ds)) / p.s22;
}

Vec2 ellipse_param(double t, const ConeParams& cone, const QuadrantParams& p) {
    const double k = cone.mu_norm / std::sin(cone.beta);
    const double x = k / std::sqrt(p.s11) * (std::cos(t) - std::cos(cone.theta));
    const double y =
        k / std::sqrt(p.s22) * (std::cos(t - cone.beta) - std::cos(cone.theta - cone.beta));
    return {x, y};
}

}  // namespace rbm

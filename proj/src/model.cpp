#include "rbm/model.hpp"

#include <cmath>

namespace rbm {

const QuadrantParams& validate(const QuadrantParams& p) {
    if (!(p.s11 > 0.0) || !(p.s22 > 0.0) || !(p.det_sigma() > 0.0)) {
        throw ValidationError(ModelDefect::covariance_not_spd,
                              "covariance matrix is not symmetric positive definite");
    }
    const Mat2& r = p.refl;
    const bool completely_s =
        r.a11 > 0.0 && r.a22 > 0.0 && (r.det() > 0.0 || (r.a12 > 0.0 && r.a21 > 0.0));
    if (!completely_s) {
        throw ValidationError(ModelDefect::reflection_not_completely_s,
                              "reflection matrix is not completely-S");
    }
    if (!(p.mu.x > 0.0) || !(p.mu.y > 0.0)) {
        throw ValidationError(ModelDefect::drift_not_positive,
                              "drift must be componentwise positive");
    }
    if (!(p.z0.x >= 0.0) || !(p.z0.y >= 0.0)) {
        throw ValidationError(ModelDefect::start_outside_quadrant,
                              "start point must lie in the closed quadrant");
    }
    return p;
}

void validate(const ConeParams& c) {
    if (!(c.beta > 0.0) || !(c.beta < kPi) || !(c.delta > 0.0) || !(c.delta < kPi) ||
        !(c.epsilon > 0.0) || !(c.epsilon < kPi)) {
        throw ValidationError(ModelDefect::cone_angles_out_of_range,
                              "beta, delta, epsilon must lie in (0, pi)");
    }
    if (!(c.theta > 0.0) || !(c.theta < c.beta)) {
        throw ValidationError(ModelDefect::drift_not_positive,
                              "drift angle theta must lie in (0, beta)");
    }
    if (!(c.delta + c.epsilon < c.beta + kPi)) {
        throw ValidationError(ModelDefect::reflection_not_completely_s,
                              "reflection angles must satisfy delta + epsilon < beta + pi");
    }
    if (!(c.mu_norm > 0.0)) {
        throw ValidationError(ModelDefect::drift_not_positive,
                              "drift magnitude must be positive");
    }
}

double cone_opening(const QuadrantParams& p) {
    return std::acos(-p.s12 / std::sqrt(p.s11 * p.s22));
}

Mat2 cone_transform(const QuadrantParams& p) {
    const double beta = cone_opening(p);
    const Mat2 shear{1.0 / std::sin(beta), std::cos(beta) / std::sin(beta), 0.0, 1.0};
    const Mat2 scale{1.0 / std::sqrt(p.s11), 0.0, 0.0, 1.0 / std::sqrt(p.s22)};
    return shear * scale;
}

// Angle in (0, pi) with tangent sin(beta) / d; atan2 picks the branch.
static double angle_from_tan(double beta, double d) {
    return std::atan2(std::sin(beta), d);
}

std::pair<ConeParams, Mat2> quadrant_to_cone(const QuadrantParams& p) {
    validate(p);
    const double beta = cone_opening(p);
    const Mat2 T = cone_transform(p);
    const Vec2 mu_t = T * p.mu;

    ConeParams c;
    c.beta = beta;
    c.delta = angle_from_tan(
        beta, (p.refl.a12 / p.refl.a22) * std::sqrt(p.s22 / p.s11) + std::cos(beta));
    c.epsilon = angle_from_tan(
        beta, (p.refl.a21 / p.refl.a11) * std::sqrt(p.s11 / p.s22) + std::cos(beta));
    c.theta = std::atan2(mu_t.y, mu_t.x);
    c.mu_norm = mu_t.norm();
    c.z0 = T * p.z0;
    validate(c);
    return {c, T};
}

QuadrantParams cone_to_quadrant(const ConeParams& c) {
    validate(c);
    const double sb = std::sin(c.beta);
    const double cb = std::cos(c.beta);

    QuadrantParams p;
    p.s11 = 1.0;
    p.s12 = -cb;
    p.s22 = 1.0;
    p.mu = Vec2{c.mu_norm * std::sin(c.beta - c.theta), c.mu_norm * std::sin(c.theta)};
    p.refl = Mat2{1.0, sb / std::tan(c.delta) - cb, sb / std::tan(c.epsilon) - cb, 1.0};
    // T^{-1} for this covariance is [[sin b, -cos b], [0, 1]].
    p.z0 = Vec2{sb * c.z0.x - cb * c.z0.y, c.z0.y};
    return validate(p);
}

double omega_of_alpha(double alpha, const QuadrantParams& p) {
    const double beta = cone_opening(p);
    if (alpha <= 0.0) return 0.0;
    if (alpha >= kPi / 2.0) return beta;
    const double d = std::sqrt(p.s22 / p.s11) / std::tan(alpha) + std::cos(beta);
    return std::atan2(std::sin(beta), d);
}

double alpha_of_omega(double omega, const QuadrantParams& p) {
    const double beta = cone_opening(p);
    if (omega <= 0.0) return 0.0;
    if (omega >= beta) return kPi / 2.0;
    return std::atan2(std::sqrt(p.s22) * std::sin(omega),
                      std::sqrt(p.s11) * std::sin(beta - omega));
}

ConePolar map_polar(const QuadrantPolar& q, const QuadrantParams& p) {
    const Mat2 T = cone_transform(p);
    const Vec2 z{q.r * std::cos(q.alpha), q.r * std::sin(q.alpha)};
    const Vec2 zt = T * z;
    return ConePolar{zt.norm(), omega_of_alpha(q.alpha, p)};
}

QuadrantPolar map_polar_inverse(const ConePolar& c, const QuadrantParams& p) {
    const Mat2 Tinv = cone_transform(p).inverse();
    const Vec2 zt{c.rho * std::cos(c.omega), c.rho * std::sin(c.omega)};
    const Vec2 z = Tinv * zt;
    return QuadrantPolar{z.norm(), alpha_of_omega(c.omega, p)};
}

double green_density_rescale(double g_quadrant_value, const QuadrantParams& p) {
    return std::sqrt(p.det_sigma()) * g_quadrant_value;
}

double lambda_exponent(const ConeParams& c) {
    validate(c);
    return (c.delta + c.epsilon - kPi) / c.beta;
}

}  // namespace rbm

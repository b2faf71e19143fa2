#pragma once

#include <utility>

#include "rbm/common.hpp"

namespace rbm {

// Reflected Brownian motion in the quadrant: covariance, drift, reflection
// matrix (columns R^1, R^2), start point.
struct QuadrantParams {
    double s11 = 1.0, s12 = 0.0, s22 = 1.0;
    Vec2 mu{1.0, 1.0};
    Mat2 refl = Mat2::identity();
    Vec2 z0{1.0, 1.0};

    Mat2 sigma() const { return {s11, s12, s12, s22}; }
    double det_sigma() const { return s11 * s22 - s12 * s12; }

    // Model with the two coordinates exchanged. Axis-1 quantities of the
    // swapped model are the axis-2 quantities of the original.
    QuadrantParams swapped() const {
        QuadrantParams q;
        q.s11 = s22;
        q.s12 = s12;
        q.s22 = s11;
        q.mu = {mu.y, mu.x};
        q.refl = Mat2{refl.a22, refl.a21, refl.a12, refl.a11};
        q.z0 = {z0.y, z0.x};
        return q;
    }
};

// Standard reflected Brownian motion in a wedge of opening beta: reflection
// angles delta (from the omega=0 edge) and epsilon (from the omega=beta
// edge), drift direction theta and magnitude mu_norm.
struct ConeParams {
    double beta = kPi / 2.0;
    double delta = kPi / 2.0;
    double epsilon = kPi / 2.0;
    double theta = kPi / 4.0;
    double mu_norm = std::sqrt(2.0);
    Vec2 z0{1.0, 1.0};
};

struct QuadrantPolar {
    double r = 0.0;
    double alpha = 0.0;  // in [0, pi/2]
};

struct ConePolar {
    double rho = 0.0;
    double omega = 0.0;  // in [0, beta]
};

// Throws ValidationError unless sigma is SPD, R is completely-S, the drift
// is componentwise positive and z0 lies in the closed quadrant.
const QuadrantParams& validate(const QuadrantParams& params);

void validate(const ConeParams& cone);

// Linear map T with T Sigma T^T = Id sending the quadrant model to a
// standard-covariance model in the wedge of opening beta.
Mat2 cone_transform(const QuadrantParams& params);

std::pair<ConeParams, Mat2> quadrant_to_cone(const QuadrantParams& params);

QuadrantParams cone_to_quadrant(const ConeParams& cone);

// Polar dictionary between the quadrant angle alpha in [0, pi/2] and the
// wedge angle omega in [0, beta]; monotone, endpoint preserving.
double omega_of_alpha(double alpha, const QuadrantParams& params);
double alpha_of_omega(double omega, const QuadrantParams& params);

ConePolar map_polar(const QuadrantPolar& p, const QuadrantParams& params);
QuadrantPolar map_polar_inverse(const ConePolar& p, const QuadrantParams& params);

// g_cone(T z) = sqrt(det Sigma) * g_quadrant(z).
double green_density_rescale(double g_quadrant_value, const QuadrantParams& params);

// lambda = (delta + epsilon - pi) / beta, always < 1 for valid models.
double lambda_exponent(const ConeParams& cone);

}  // namespace rbm

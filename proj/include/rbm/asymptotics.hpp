#pragma once

#include "rbm/inversion.hpp"
#include "rbm/special.hpp"

namespace rbm {

enum class Regime {
    interior,
    pole_x,
    pole_y,
    edge_0,
    edge_beta,
    transition_x,
    transition_y,
};

const char* regime_name(Regime r);

// Case split of the leading asymptotics by the direction alpha0 relative to
// the pole angles (edge labels at the endpoints, transition labels at
// equality within tol).
Regime classify(double alpha0, const PoleReport& poles, double tol = 1e-9);

// Saddle-point constant c0(alpha) with Monte Carlo error.
PhiValue c0(double alpha, const Transforms& tf);
cd c0_rep(int k, double alpha, const Transforms& tf);

struct LeadingTerm {
    Regime regime = Regime::interior;
    double value = 0.0;        // dominant + saddle term
    double se = 0.0;
    double dominant = 0.0;     // the regime's leading term alone
    double saddle_term = 0.0;  // c0 e^{-r E(alpha)} / sqrt(r)
    double decay_rate = 0.0;   // exponent rate of the dominant term, per r
    double prefactor_power = 0.0;  // -1/2 for saddle, 0 for pole
};

LeadingTerm leading_term(double r, double alpha, const Transforms& tf,
                         const PoleReport& poles);

struct EdgeExpansion {
    double c_prime = 0.0, c_prime_se = 0.0;
    double c_dblprime = 0.0, c_dblprime_se = 0.0;
    double value = 0.0, se = 0.0;  // e^{-rE} (c' a + c''/r) / sqrt(r)
    int dominant = 0;              // 1: c' term, 2: c'' term, 0: comparable
};

// Edge expansion near alpha = 0 on the pole-free side (signals otherwise).
// c' is Richardson-extrapolated from c0(alpha)/alpha; c'' is fitted from
// the contour oracle at small alpha.
EdgeExpansion edge_expansion(double r, double alpha, const Transforms& tf,
                             const PoleReport& poles, const InversionOptions& opt = {});

struct TransitionTerm {
    double c = 0.0;           // r (alpha - alpha*)^2
    double A = 0.0;           // -x'_alpha(alpha*) / R(alpha*)
    double factor = 0.5;      // in [0, 1], multiplies c*
    double value = 0.0;       // factor c* e^{-r(cos a x* + sin a y*)}
    double se = 0.0;
    double with_saddle = 0.0; // plus the saddle term
    double with_saddle_se = 0.0;
};

TransitionTerm transition_term(double r, double alpha, const Transforms& tf,
                               const PoleReport& poles);

struct AsymptoticResult {
    Regime regime = Regime::interior;
    double decay_rate = 0.0;       // per rho, trigonometric form
    double prefactor_power = 0.0;
    double c0_value = kNaN, c0_se = 0.0;
    double pole_constant = kNaN, pole_constant_se = 0.0;
    double transition_factor = kNaN;
    double value = kNaN, se = 0.0;  // asymptotic value of the cone density
};

// Evaluation in wedge coordinates: maps (rho, omega) to the quadrant,
// invokes the quadrant machinery and re-expresses the exponents in the
// closed trigonometric forms (both computations must agree to 1e-10).
AsymptoticResult cone_asymptotics(double rho, double omega, const Transforms& tf,
                                  const PoleReport& poles);

}  // namespace rbm

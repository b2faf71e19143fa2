#pragma once

#include <functional>

#include "rbm/laplace.hpp"

namespace rbm {

// Pole data of the continued Laplace transforms.  Absent poles keep NaN
// coordinates; the regime angles use -inf / +inf sentinels so comparisons
// against any alpha0 in [0, pi/2] behave.
struct PoleReport {
    bool exists_x = false;
    bool exists_y = false;
    double x_star = kNaN;             // pole of phi2
    double y_star = kNaN;             // Y^+(x*)
    double y_minus_at_xstar = kNaN;   // Y^-(x*)
    double y_2star = kNaN;            // pole of phi1
    double x_2star = kNaN;            // X^+(y**)
    double x_minus_at_y2star = kNaN;  // X^-(y**)
    double alpha_star = -kInf;
    double alpha_2star = kInf;
    double omega_star = kNaN;   // theta - 2 delta
    double omega_2star = kNaN;  // theta + 2 epsilon
};

PoleReport pole_locations(const QuadrantParams& params);

// Swapped-model view: the x-pole of the swapped report is the y-pole here.
PoleReport swapped_report(const PoleReport& r);

// res_{x = x*} phi2 from an evaluator of phi1 on {Re y < 0}.
PhiValue residue_phi2(const QuadrantParams& params, const PoleReport& poles,
                      const std::function<PhiValue(cd)>& phi1_at);

// Replicate-resolved residues against Monte Carlo transforms.
PhiValue residue_phi2(const Transforms& tf, const PoleReport& poles);
cd residue_phi2_rep(const Transforms& tf, const PoleReport& poles, int k);
PhiValue residue_phi1(const Transforms& tf, const PoleReport& poles);
cd residue_phi1_rep(const Transforms& tf, const PoleReport& poles, int k);

// c* = (-res phi2) gamma2(x*, y*) / gamma'_y(x*, y*); positive in law.
double pole_constant_cstar(const QuadrantParams& params, const PoleReport& poles,
                           cd residue);
double pole_constant_c2star(const QuadrantParams& params, const PoleReport& poles,
                            cd residue);
PhiValue pole_constant_cstar(const Transforms& tf, const PoleReport& poles);
PhiValue pole_constant_c2star(const Transforms& tf, const PoleReport& poles);

}  // namespace rbm

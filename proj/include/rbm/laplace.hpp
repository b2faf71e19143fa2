#pragma once

#include <functional>

#include "rbm/kernel.hpp"
#include "rbm/simulate.hpp"

namespace rbm {

// Monte Carlo backed evaluators for phi, phi1, phi2 and their meromorphic
// continuations.  Direct values are exact transforms of the stored boundary
// histograms; continued values apply the kernel continuation formula with
// one level of chaining.  Replicate-resolved variants drive all error
// propagation.
class Transforms {
public:
    explicit Transforms(const SimArtifact& artifact);

    const QuadrantParams& params() const { return p_; }
    const KernelGeometry& geometry() const { return geom_; }
    const SimArtifact& artifact() const { return *art_; }
    int replicates() const { return art_->R; }

    // Direct transforms, Re(arg) <= 0.
    PhiValue phi1(cd y) const;
    PhiValue phi2(cd x) const;
    cd phi1_rep(int k, cd y) const;
    cd phi2_rep(int k, cd x) const;

    // Value-only paths over the aggregate histograms (no replicate sweep);
    // used inside quadrature loops.
    cd phi1_mean(cd y) const;
    cd phi2_mean(cd x) const;
    cd phi1_continued_mean(cd y) const;
    cd phi2_continued_mean(cd x) const;

    // Continuation of phi2 to {Re x < x_max + cut_extent} minus the real cut
    // beyond x_max; signals near-pole when gamma2(x, Y^-(x)) is tiny.
    PhiValue phi2_continued(cd x) const;
    cd phi2_continued_rep(int k, cd x) const;

    // Symmetric continuation of phi1 (chains through direct phi2 only).
    PhiValue phi1_continued(cd y) const;
    cd phi1_continued_rep(int k, cd y) const;

    // Direct transform when Re <= 0, continuation otherwise.  Keeps the
    // replicate-level cancellations of derived quantities exact.
    cd phi1_auto_rep(int k, cd y) const {
        return y.real() <= 0.0 ? phi1_rep(k, y) : phi1_continued_rep(k, y);
    }
    cd phi2_auto_rep(int k, cd x) const {
        return x.real() <= 0.0 ? phi2_rep(k, x) : phi2_continued_rep(k, x);
    }

    // gamma phi + gamma1 phi1 + gamma2 phi2 + exp((x, y) . z0); zero in law.
    // Requires (x, y) registered as a phi probe of the artifact.
    PhiValue functional_eq_residual(cd x, cd y) const;
    cd functional_eq_residual_rep(int k, cd x, cd y) const;

    double near_pole_floor() const { return near_pole_floor_; }

private:
    cd continued_rep_impl(const QuadrantParams& p, const KernelGeometry& g, int axis,
                          int k, cd arg) const;
    PhiValue continued_impl(const QuadrantParams& p, const KernelGeometry& g, int axis,
                            cd arg) const;

    const SimArtifact* art_;
    QuadrantParams p_, ps_;
    KernelGeometry geom_, geom_s_;
    double near_pole_floor_ = 1e-6;
};

struct TailFit {
    double lambda = 0.0;
    double slope_phi2 = 0.0, r2_phi2 = 0.0;        // target lambda - 1
    double slope_h2_near0 = 0.0, r2_h2 = 0.0;      // target -lambda
    double slope_phi1 = 0.0, r2_phi1 = 0.0;
    double slope_h1_near0 = 0.0, r2_h1 = 0.0;
    bool fit_warning = false;                      // any R^2 < 0.99
};

// Log-log fits of the transform tails (s in [10, 40]) and of the boundary
// densities near the corner (u in [0.02, 0.2]).
TailFit tail_exponent_check(const SimArtifact& artifact);

}  // namespace rbm

#include "rbm/laplace.hpp"

#include <cmath>
#include <vector>

namespace rbm {

namespace {

template <typename F>
PhiValue replicate_mean(const SimArtifact& art, F&& per_rep) {
    std::vector<cd> vals(art.R);
    for (int k = 0; k < art.R; ++k) vals[k] = per_rep(k);
    cd mean(0.0, 0.0);
    for (int k = 0; k < art.R; ++k) {
        mean += vals[k] * (static_cast<double>(art.paths_rep[k]) /
                           static_cast<double>(art.n_paths));
    }
    if (art.R < 2) return {mean, 0.0};
    double var = 0.0;
    for (const cd& v : vals) var += std::norm(v - mean);
    var /= static_cast<double>(art.R - 1);
    return {mean, std::sqrt(var / static_cast<double>(art.R))};
}

}  // namespace

Transforms::Transforms(const SimArtifact& artifact)
    : art_(&artifact),
      p_(artifact.params),
      ps_(artifact.params.swapped()),
      geom_(branch_points(p_)),
      geom_s_(branch_points(ps_)) {}

PhiValue Transforms::phi1(cd y) const {
    return replicate_mean(*art_, [&](int k) { return phi1_rep(k, y); });
}

PhiValue Transforms::phi2(cd x) const {
    return replicate_mean(*art_, [&](int k) { return phi2_rep(k, x); });
}

cd Transforms::phi1_mean(cd y) const {
    if (y.real() > 0.0) throw NumericError("direct phi1 requires Re y <= 0");
    return boundary_transform_mean(*art_, 1, y);
}

cd Transforms::phi2_mean(cd x) const {
    if (x.real() > 0.0) throw NumericError("direct phi2 requires Re x <= 0");
    return boundary_transform_mean(*art_, 2, x);
}

cd Transforms::phi1_rep(int k, cd y) const {
    if (y.real() > 0.0) throw NumericError("direct phi1 requires Re y <= 0");
    return boundary_transform_rep(*art_, 1, k, y);
}

cd Transforms::phi2_rep(int k, cd x) const {
    if (x.real() > 0.0) throw NumericError("direct phi2 requires Re x <= 0");
    return boundary_transform_rep(*art_, 2, k, x);
}

// Continuation formula in the x-plane of the model `p` (axis selects which
// boundary transform plays the role of phi1 in that model).
cd Transforms::continued_rep_impl(const QuadrantParams& p, const KernelGeometry&,
                                  int axis, int k, cd arg) const {
    const cd ym = Y_branch(p, arg, -1);
    const cd g2 = gamma2(p, arg, ym);
    if (std::abs(g2) < near_pole_floor_) {
        throw NumericError("phi continuation evaluated inside the pole floor");
    }
    const cd phi1v = boundary_transform_rep(*art_, axis, k, ym);
    const cd num = -gamma1(p, arg, ym) * phi1v - std::exp(p.z0.x * arg + p.z0.y * ym);
    return num / g2;
}

PhiValue Transforms::continued_impl(const QuadrantParams& p, const KernelGeometry& g,
                                    int axis, cd arg) const {
    if (!(arg.real() < g.x_max + g.cut_extent_x)) {
        throw NumericError("argument beyond the continuation domain");
    }
    if (arg.imag() == 0.0 && arg.real() >= g.x_max) {
        throw NumericError("argument on the cut beyond the branch point");
    }
    const cd ym = Y_branch(p, arg, -1);
    if (!(ym.real() < 0.0)) {
        throw NumericError("continuation requires Re Y^-(x) < 0");
    }
    return replicate_mean(*art_, [&](int k) { return continued_rep_impl(p, g, axis, k, arg); });
}

namespace {

cd continued_mean_impl(const SimArtifact& art, const QuadrantParams& p, int axis, cd arg,
                       double floor_) {
    const cd ym = Y_branch(p, arg, -1);
    const cd g2 = gamma2(p, arg, ym);
    if (std::abs(g2) < floor_) {
        throw NumericError("phi continuation evaluated inside the pole floor");
    }
    const cd phi1v = boundary_transform_mean(art, axis, ym);
    return (-gamma1(p, arg, ym) * phi1v - std::exp(p.z0.x * arg + p.z0.y * ym)) / g2;
}

}  // namespace

cd Transforms::phi2_continued_mean(cd x) const {
    return continued_mean_impl(*art_, p_, 1, x, near_pole_floor_);
}

cd Transforms::phi1_continued_mean(cd y) const {
    return continued_mean_impl(*art_, ps_, 2, y, near_pole_floor_);
}

PhiValue Transforms::phi2_continued(cd x) const {
    return continued_impl(p_, geom_, 1, x);
}

cd Transforms::phi2_continued_rep(int k, cd x) const {
    return continued_rep_impl(p_, geom_, 1, k, x);
}

PhiValue Transforms::phi1_continued(cd y) const {
    return continued_impl(ps_, geom_s_, 2, y);
}

cd Transforms::phi1_continued_rep(int k, cd y) const {
    return continued_rep_impl(ps_, geom_s_, 2, k, y);
}

cd Transforms::functional_eq_residual_rep(int k, cd x, cd y) const {
    const auto& probes = art_->cfg.phi_probes;
    size_t idx = probes.size();
    for (size_t i = 0; i < probes.size(); ++i) {
        if (probes[i].first == x && probes[i].second == y) {
            idx = i;
            break;
        }
    }
    if (idx == probes.size()) {
        throw NumericError("functional equation residual needs a registered phi probe");
    }
    const cd phik = art_->phi_rep[static_cast<size_t>(k) * probes.size() + idx] /
                    static_cast<double>(art_->paths_rep[k]);
    return gamma(p_, x, y) * phik + gamma1(p_, x, y) * phi1_rep(k, y) +
           gamma2(p_, x, y) * phi2_rep(k, x) + std::exp(x * p_.z0.x + y * p_.z0.y);
}

PhiValue Transforms::functional_eq_residual(cd x, cd y) const {
    // Replicate-resolved so the correlation between phi, phi1, phi2 is kept.
    return replicate_mean(*art_,
                          [&](int k) { return functional_eq_residual_rep(k, x, y); });
}

namespace {

struct LogFit {
    double slope = 0.0, intercept = 0.0, r2 = 0.0;
};

LogFit loglog_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    LogFit f;
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    const double n = static_cast<double>(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
        const double lx = std::log(xs[i]), ly = std::log(ys[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        syy += ly * ly;
    }
    const double denom = n * sxx - sx * sx;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    const double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        const double pred = f.intercept + f.slope * std::log(xs[i]);
        const double d = std::log(ys[i]) - pred;
        ss_res += d * d;
    }
    f.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return f;
}

// Corner offset of the shifted-wall scheme along the given axis: the
// effective apex of the simulated wedge sits this far from the origin, so
// corner-scale fits are anchored there.
double corner_offset(const SimArtifact& art, int axis) {
    if (!art.cfg.boundary_shift_correction) return 0.0;
    const double var = axis == 2 ? art.params.s11 : art.params.s22;
    return 0.5826 * std::sqrt(art.cfg.dt * var);
}

LogFit transform_tail_fit(const SimArtifact& art, int axis) {
    const double off = corner_offset(art, axis);
    std::vector<double> ss, vals;
    for (int i = 0; i < 12; ++i) {
        const double s = 10.0 * std::pow(4.0, i / 11.0);
        const double v =
            boundary_transform_mean(art, axis, cd(-s, 0.0)).real() * std::exp(s * off);
        if (v > 0.0) {
            ss.push_back(s);
            vals.push_back(v);
        }
    }
    if (ss.size() < 4) throw NumericError("transform tail fit has too few usable points");
    return loglog_fit(ss, vals);
}

LogFit boundary_near_zero_fit(const SimArtifact& art, int axis) {
    const std::vector<double>& h = axis == 1 ? art.h1 : art.h2;
    const double bbw = art.cfg.boundary_bin_width;
    const double off = corner_offset(art, axis);
    std::vector<double> us, vals;
    const int nbuckets = 9;
    for (int i = 0; i < nbuckets; ++i) {
        const double lo = 0.02 * std::pow(10.0, static_cast<double>(i) / nbuckets);
        const double hi = 0.02 * std::pow(10.0, static_cast<double>(i + 1) / nbuckets);
        const int jlo = static_cast<int>((lo + off) / bbw);
        const int jhi = static_cast<int>((hi + off) / bbw);
        if (jhi <= jlo || jhi > art.nb) continue;
        double mass = 0.0;
        for (int j = jlo; j < jhi; ++j) mass += h[j];
        const double width = (jhi - jlo) * bbw;
        const double dens = mass / (width * static_cast<double>(art.n_paths));
        if (dens > 0.0) {
            us.push_back(std::sqrt(lo * hi));
            vals.push_back(dens);
        }
    }
    if (us.size() < 4) throw NumericError("boundary near-zero fit has too few usable points");
    return loglog_fit(us, vals);
}

}  // namespace

TailFit tail_exponent_check(const SimArtifact& art) {
    TailFit out;
    const auto [cone, T] = quadrant_to_cone(art.params);
    (void)T;
    out.lambda = lambda_exponent(cone);

    const LogFit f2 = transform_tail_fit(art, 2);
    const LogFit f1 = transform_tail_fit(art, 1);
    const LogFit b2 = boundary_near_zero_fit(art, 2);
    const LogFit b1 = boundary_near_zero_fit(art, 1);
    out.slope_phi2 = f2.slope;
    out.r2_phi2 = f2.r2;
    out.slope_phi1 = f1.slope;
    out.r2_phi1 = f1.r2;
    out.slope_h2_near0 = b2.slope;
    out.r2_h2 = b2.r2;
    out.slope_h1_near0 = b1.slope;
    out.r2_h1 = b1.r2;
    out.fit_warning = f2.r2 < 0.99 || f1.r2 < 0.99 || b2.r2 < 0.99 || b1.r2 < 0.99;
    return out;
}

}  // namespace rbm

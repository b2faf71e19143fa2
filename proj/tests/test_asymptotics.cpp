#include "doctest.h"
#include "oracles.hpp"
#include "rbm/asymptotics.hpp"

using namespace rbm;

namespace {

const SimArtifact& p2_art() {
    static SimArtifact art = [] {
        SimConfig c;
        c.dt = 1e-3;
        c.horizon_radius = 30.0;
        c.n_paths = 60000;
        c.seed = 42;
        return simulate(oracle::p2(), c);
    }();
    return art;
}

}  // namespace

TEST_CASE("classification across regimes") {
    const PoleReport r1 = pole_locations(oracle::p1());
    CHECK(classify(0.3, r1) == Regime::interior);
    CHECK(classify(1.2, r1) == Regime::interior);
    CHECK(classify(0.0, r1) == Regime::edge_0);
    CHECK(classify(kPi / 2, r1) == Regime::edge_beta);

    const PoleReport r2 = pole_locations(oracle::p2());
    CHECK(classify(0.05, r2) == Regime::pole_x);
    CHECK(classify(0.5, r2) == Regime::interior);
    CHECK(classify(r2.alpha_star, r2) == Regime::transition_x);
}

TEST_CASE("c0 on P1 at the drift direction is kernel-noise free") {
    SimConfig c;
    c.dt = 2e-3;
    c.horizon_radius = 25.0;
    c.n_paths = 20000;
    c.seed = 5;
    const SimArtifact art = simulate(oracle::p1(), c);
    const Transforms tf(art);
    // The kernel coefficients vanish at the origin, so c0(pi/4) reduces to
    // C(pi/4)/sqrt(2 pi), exactly.
    const PhiValue v = c0(kPi / 4, tf);
    const double expected = std::pow(2.0, -0.25) / std::sqrt(2.0 * kPi);
    CHECK(v.value.real() == doctest::Approx(expected).epsilon(1e-10));
    CHECK(v.se <= 1e-12);
    CHECK(v.value.real() > 3.0 * v.se);

    // C(alpha) two routes agree: sqrt(sin a / gamma_y) = sqrt(cos a / gamma_x).
    const QuadrantParams p = oracle::p1();
    for (double alpha : {0.4, 0.9, 1.3}) {
        const SaddleData s = saddle_point(alpha, p);
        const double c1 = std::sqrt(std::sin(alpha) /
                                    dgamma_y_on_branch(p, cd(s.x, 0.0)).real());
        const double c2 = std::sqrt(std::cos(alpha) /
                                    dgamma_x_on_branch(p, cd(s.y, 0.0)).real());
        CHECK(std::abs(c1 - c2) <= 1e-10);
    }
}

TEST_CASE("exponent consistency between quadrant and cone forms") {
    QuadrantParams p;
    p.s11 = 1.3;
    p.s12 = -0.4;
    p.s22 = 0.9;
    p.mu = {0.8, 1.1};
    const auto [cone, T] = quadrant_to_cone(p);
    for (double omega : {0.2 * cone.beta, 0.5 * cone.beta, 0.8 * cone.beta}) {
        for (double rho : {5.0, 12.0}) {
            const Vec2 zt{rho * std::cos(omega), rho * std::sin(omega)};
            const Vec2 z = T.inverse() * zt;
            const double r = z.norm();
            const double alpha = std::atan2(z.y, z.x);
            const SaddleData s = saddle_point(alpha, p);
            const double quad = r * s.exponent_rate;
            const double dth = 0.5 * (omega - cone.theta);
            const double conef = 2.0 * rho * cone.mu_norm * std::sin(dth) * std::sin(dth);
            CHECK(std::abs(quad - conef) <= 1e-10 * std::max(1.0, std::abs(quad)));
        }
    }
}

TEST_CASE("transition factor limits and continuity") {
    const Transforms tf(p2_art());
    const PoleReport rep = pole_locations(oracle::p2());
    const double astar = rep.alpha_star;

    // c = 0: exactly one half.
    const TransitionTerm t0 = transition_term(1e4, astar, tf, rep);
    CHECK(t0.factor == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(t0.c == 0.0);
    CHECK(t0.A > 0.0);

    // Large c on the pole side: full pole constant.
    const double r = 1e4;
    const TransitionTerm tm = transition_term(r, astar - 0.08, tf, rep);
    CHECK(tm.factor == doctest::Approx(1.0).epsilon(1e-6));
    // Large c on the saddle side: the transition term matches the interior
    // form with c0 ~ const / (alpha - alpha*).
    const double alpha = astar + 0.08;
    const TransitionTerm tp = transition_term(r, alpha, tf, rep);
    const PhiValue res = residue_phi2(tf, rep);
    const QuadrantParams& p = tf.params();
    const SaddleData s = saddle_point(alpha, p);
    const SaddleData sstar = saddle_point(astar, p);
    const double g2 = gamma2(p, rep.x_star, rep.y_star).real();
    const double dgy = dgamma_y_on_branch(p, cd(rep.x_star, 0.0)).real();
    const double Cst = std::sqrt(std::sin(astar) / dgy);
    const double interior_limit =
        std::exp(-r * s.exponent_rate) / std::sqrt(r) * g2 /
        std::sqrt(2.0 * kPi * curvature_form(astar, p)) * res.value.real() /
        (s.x - rep.x_star) * Cst;
    CHECK(tp.value == doctest::Approx(interior_limit).epsilon(0.01));
    (void)sstar;

    // Continuity in alpha at fixed large r: factor moves smoothly through 1/2.
    double prev = 1.0;
    for (double da : {-0.02, -0.01, 0.0, 0.01, 0.02}) {
        const TransitionTerm t = transition_term(400.0, astar + da, tf, rep);
        CHECK(t.factor <= prev + 1e-12);
        prev = t.factor;
        CHECK(t.factor >= 0.0);
        CHECK(t.factor <= 1.0);
    }
}

TEST_CASE("cone asymptotics on P2: regimes and rates") {
    const Transforms tf(p2_art());
    const PoleReport rep = pole_locations(oracle::p2());
    const auto [cone, T] = quadrant_to_cone(oracle::p2());
    (void)T;

    // At the drift direction the rate vanishes.
    const AsymptoticResult at_theta = cone_asymptotics(10.0, cone.theta, tf, rep);
    CHECK(at_theta.decay_rate == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(at_theta.regime == Regime::interior);

    // Below omega* the pole regime with the exact trigonometric rate
    // 2 mu sin(delta) sin(theta - delta - omega); at omega = 0 it reduces to
    // x* exactly.
    const double om = 0.5 * rep.omega_star;
    const AsymptoticResult pole = cone_asymptotics(10.0, om, tf, rep);
    CHECK(pole.regime == Regime::pole_x);
    const double rate = 2.0 * cone.mu_norm * std::sin(cone.delta) *
                        std::sin(cone.theta - cone.delta - om);
    CHECK(pole.decay_rate == doctest::Approx(rate).epsilon(1e-12));
    CHECK(2.0 * cone.mu_norm * std::sin(cone.delta) * std::sin(cone.theta - cone.delta) ==
          doctest::Approx(rep.x_star).epsilon(1e-12));
    CHECK(pole.pole_constant > 0.0);

    // The pole exponent is strictly smaller than the saddle exponent there.
    const double dth = 0.5 * (om - cone.theta);
    CHECK(pole.decay_rate < 2.0 * cone.mu_norm * std::sin(dth) * std::sin(dth));
}

TEST_CASE("c0 vanishes toward the edge and the leading term switches regimes") {
    SimConfig c;
    c.dt = 2e-3;
    c.horizon_radius = 25.0;
    c.n_paths = 20000;
    c.seed = 5;
    static const SimArtifact art = simulate(oracle::p1(), c);
    const Transforms tf(art);
    const PoleReport rep = pole_locations(oracle::p1());
    // c0(alpha) -> 0 as alpha -> 0 (pole-free side).
    const double c08 = std::abs(c0(0.08, tf).value.real());
    const double c04 = std::abs(c0(0.04, tf).value.real());
    const double c02 = std::abs(c0(0.02, tf).value.real());
    CHECK(c04 < c08);
    CHECK(c02 < c04);
    CHECK(c02 < 0.1 * std::abs(c0(kPi / 4, tf).value.real()));

    // Edge expansion classifies the dominance by r sin(alpha).
    const EdgeExpansion big = edge_expansion(2000.0, 0.05, tf, rep);
    CHECK(big.dominant == 1);
    const EdgeExpansion small = edge_expansion(6.0, 0.02, tf, rep);
    CHECK(small.dominant == 2);

    // leading_term uses the transition machinery inside the pole window.
    SimConfig c2 = c;
    static const SimArtifact art2 = simulate(oracle::p2(), c2);
    const Transforms tf2(art2);
    const PoleReport rep2 = pole_locations(oracle::p2());
    const LeadingTerm lt = leading_term(400.0, rep2.alpha_star + 0.005, tf2, rep2);
    CHECK(lt.regime == Regime::transition_x);
    const LeadingTerm far = leading_term(400.0, rep2.alpha_star + 0.5, tf2, rep2);
    CHECK(far.regime == Regime::interior);
}

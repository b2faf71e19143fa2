#include "doctest.h"
#include "oracles.hpp"
#include "rbm/inversion.hpp"

using namespace rbm;

namespace {

// Medium-size shared artifact for inversion checks.
const SimArtifact& p1_art() {
    static SimArtifact art = [] {
        SimConfig c;
        c.dt = 1e-3;
        c.horizon_radius = 30.0;
        c.n_paths = 60000;
        c.seed = 42;
        c.green_probes = {{3.0, 2.0}, {2.0, 3.0}};
        return simulate(oracle::p1(), c);
    }();
    return art;
}

const Transforms& p1_tf() {
    static Transforms tf(p1_art());
    return tf;
}

}  // namespace

TEST_CASE("vertical integrals: reality and symmetry on P1") {
    const Transforms& tf = p1_tf();
    const PoleReport rep = pole_locations(oracle::p1());

    const QuadratureResult g32 = green_oracle(3.0, 2.0, tf, rep, false);
    CHECK(std::abs(g32.value.imag()) <=
          10.0 * (g32.abs_error_est + g32.se_propagated));
    CHECK(g32.value.real() > 0.0);

    const QuadratureResult g23 = green_oracle(2.0, 3.0, tf, rep, false);
    const double comb = 3.0 * std::hypot(g32.se_propagated, g23.se_propagated) +
                        g32.abs_error_est + g23.abs_error_est;
    CHECK(std::abs(g32.value.real() - g23.value.real()) <= comb);
}

TEST_CASE("oracle matches the Monte Carlo density") {
    const Transforms& tf = p1_tf();
    const PoleReport rep = pole_locations(oracle::p1());
    for (Vec2 pt : {Vec2{3.0, 2.0}, Vec2{2.0, 3.0}}) {
        const QuadratureResult orc = green_oracle(pt.x, pt.y, tf, rep, false);
        const OccupationEstimate mc = estimate_green(p1_art(), pt);
        const double comb = 3.0 * std::hypot(orc.se_propagated, mc.std_error) +
                            orc.abs_error_est;
        // The Euler scheme carries an O(sqrt(dt)) local-time bias on top of
        // the statistical error; allow a small proportional margin.
        CHECK(std::abs(orc.value.real() - mc.value) <= comb + 0.04 * mc.value);
    }
}

TEST_CASE("contour shift preserves the value (Cauchy)") {
    const Transforms& tf = p1_tf();
    const PoleReport rep = pole_locations(oracle::p1());
    for (Vec2 pt : {Vec2{3.0, 2.0}, Vec2{2.5, 2.5}}) {
        const QuadratureResult v = green_oracle(pt.x, pt.y, tf, rep, false);
        const QuadratureResult s = green_oracle(pt.x, pt.y, tf, rep, true);
        const double comb = 1e-6 + 3.0 * std::hypot(v.se_propagated, s.se_propagated) +
                            v.abs_error_est + s.abs_error_est;
        CHECK(std::abs(v.value.real() - s.value.real()) <= comb);
    }
}

TEST_CASE("tail certification: doubling the budget leaves the value") {
    const Transforms& tf = p1_tf();
    InversionOptions opt;
    const QuadratureResult a = eval_I_vertical(1, 3.0, 2.0, tf, opt);
    opt.tail_tol = 1e-10;  // forces a larger window
    const QuadratureResult b = eval_I_vertical(1, 3.0, 2.0, tf, opt);
    CHECK(std::abs(a.value - b.value) <= 1e-7 * std::abs(b.value) + 1e-14);
}

TEST_CASE("domain guards") {
    const Transforms& tf = p1_tf();
    const PoleReport rep = pole_locations(oracle::p1());
    // Neither a > a0 nor b > b0: outside the oracle domain.
    CHECK_THROWS_AS(green_oracle(0.6, 0.6, tf, rep, false), NumericError);
    // Tiny b cannot certify the x-ray tails within the budget.
    InversionOptions opt;
    opt.v_max = 40.0;
    CHECK_THROWS_AS(eval_I_vertical(1, 3.0, 1e-4, tf, opt), TruncationError);
}

TEST_CASE("residue bookkeeping is consistent across the pole window on P2") {
    // Crossing alpha* switches between (Morse path + residue) and the
    // detour contour; the value of I1 must not jump.
    SimConfig c;
    c.dt = 2e-3;
    c.horizon_radius = 25.0;
    c.n_paths = 30000;
    c.seed = 42;
    static const SimArtifact art = simulate(oracle::p2(), c);
    const Transforms tf(art);
    const PoleReport rep = pole_locations(oracle::p2());
    const double r = 12.0;

    std::vector<double> angles = {rep.alpha_star - 0.12, rep.alpha_star - 0.04,
                                  rep.alpha_star, rep.alpha_star + 0.04,
                                  rep.alpha_star + 0.12};
    std::vector<QuadratureResult> vals;
    for (double al : angles) {
        vals.push_back(eval_shifted_I(1, r * std::cos(al), r * std::sin(al), tf, rep));
    }
    // Residue included only on the alpha < alpha* side, outside the window.
    CHECK(vals.front().contour.find("residue") != std::string::npos);
    CHECK(vals[2].contour.find("detour") != std::string::npos);
    CHECK(vals.back().contour.find("residue") == std::string::npos);
    // Each shifted value agrees with the vertical contour at its own point.
    for (size_t i = 0; i < angles.size(); ++i) {
        const double a = r * std::cos(angles[i]), b = r * std::sin(angles[i]);
        const QuadratureResult v = eval_I_vertical(1, a, b, tf);
        const double tol = 1e-6 + 3.0 * std::hypot(v.se_propagated, vals[i].se_propagated) +
                           v.abs_error_est + vals[i].abs_error_est;
        CHECK(std::abs(v.value.real() - vals[i].value.real()) <= tol);
    }
}

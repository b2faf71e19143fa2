#include "doctest.h"
#include "oracles.hpp"
#include "rbm/model.hpp"
#include "rbm/rng.hpp"

using namespace rbm;

namespace {

QuadrantParams random_valid_model(PathRng& rng) {
    QuadrantParams p;
    for (int guard = 0; guard < 1000; ++guard) {
        p.s11 = 0.3 + 2.0 * rng.next_uniform();
        p.s22 = 0.3 + 2.0 * rng.next_uniform();
        p.s12 = (2.0 * rng.next_uniform() - 1.0) * 0.9 * std::sqrt(p.s11 * p.s22);
        p.mu = {0.2 + 2.0 * rng.next_uniform(), 0.2 + 2.0 * rng.next_uniform()};
        p.refl = Mat2{1.0, 3.0 * (rng.next_uniform() - 0.4), 3.0 * (rng.next_uniform() - 0.4), 1.0};
        p.z0 = {rng.next_uniform() * 2.0, rng.next_uniform() * 2.0};
        try {
            validate(p);
            return p;
        } catch (const ValidationError&) {
        }
    }
    return p;
}

}  // namespace

TEST_CASE("validation accepts the identity model and rejects each defect") {
    QuadrantParams p;  // sigma = I, mu = (1,1), R = I, z0 = (1,1)
    CHECK_NOTHROW(validate(p));

    QuadrantParams bad = p;
    bad.mu = {1.0, -1.0};
    try {
        validate(bad);
        CHECK(false);
    } catch (const ValidationError& e) {
        CHECK(e.defect() == ModelDefect::drift_not_positive);
        CHECK(static_cast<int>(e.error_class()) == 2);
    }

    bad = p;
    bad.s12 = 1.5;  // dominates sqrt(s11 s22)
    try {
        validate(bad);
        CHECK(false);
    } catch (const ValidationError& e) {
        CHECK(e.defect() == ModelDefect::covariance_not_spd);
    }

    bad = p;
    bad.refl = Mat2{1.0, 4.0, 2.0, 1.0};  // det < 0 but r12, r21 > 0: completely-S
    CHECK_NOTHROW(validate(bad));
    bad.refl = Mat2{-1.0, 0.0, 0.0, 1.0};
    try {
        validate(bad);
        CHECK(false);
    } catch (const ValidationError& e) {
        CHECK(e.defect() == ModelDefect::reflection_not_completely_s);
    }
    bad.refl = Mat2{1.0, 0.0, -2.0, 1.0};  // det = 1 > 0: fine with negative r21
    CHECK_NOTHROW(validate(bad));

    bad = p;
    bad.z0 = {-0.1, 1.0};
    try {
        validate(bad);
        CHECK(false);
    } catch (const ValidationError& e) {
        CHECK(e.defect() == ModelDefect::start_outside_quadrant);
    }

    // r12 = 3 keeps det R = 1 > 0.
    CHECK_NOTHROW(validate(oracle::p2()));
}

TEST_CASE("quadrant_to_cone on the reference models") {
    const auto [c1, t1] = quadrant_to_cone(oracle::p1());
    CHECK(c1.beta == doctest::Approx(kPi / 2).epsilon(1e-14));
    CHECK(c1.theta == doctest::Approx(kPi / 4).epsilon(1e-14));
    CHECK(c1.delta == doctest::Approx(kPi / 2).epsilon(1e-14));
    CHECK(c1.epsilon == doctest::Approx(kPi / 2).epsilon(1e-14));
    CHECK(c1.mu_norm == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(std::abs(t1.a11 - 1.0) < 1e-14);
    CHECK(std::abs(t1.a12) < 1e-14);
    CHECK(std::abs(t1.a21) < 1e-14);
    CHECK(std::abs(t1.a22 - 1.0) < 1e-14);

    const auto [c2, t2] = quadrant_to_cone(oracle::p2());
    (void)t2;
    CHECK(c2.delta == doctest::Approx(std::atan(1.0 / 3.0)).epsilon(1e-13));
    CHECK(c2.epsilon == doctest::Approx(kPi / 2).epsilon(1e-13));
}

TEST_CASE("T Sigma T^T = Id and angle round trips on random models") {
    PathRng rng(7, 0);
    for (int i = 0; i < 60; ++i) {
        const QuadrantParams p = random_valid_model(rng);
        const auto [cone, T] = quadrant_to_cone(p);
        const Mat2 m = T * p.sigma() * T.transpose();
        CHECK(std::abs(m.a11 - 1.0) <= 1e-12);
        CHECK(std::abs(m.a12) <= 1e-12);
        CHECK(std::abs(m.a21) <= 1e-12);
        CHECK(std::abs(m.a22 - 1.0) <= 1e-12);

        const QuadrantParams q = cone_to_quadrant(cone);
        const auto [cone2, T2] = quadrant_to_cone(q);
        (void)T2;
        CHECK(std::abs(cone2.beta - cone.beta) <= 1e-10);
        CHECK(std::abs(cone2.delta - cone.delta) <= 1e-10);
        CHECK(std::abs(cone2.epsilon - cone.epsilon) <= 1e-10);
        CHECK(std::abs(cone2.theta - cone.theta) <= 1e-10);
        CHECK(std::abs(cone2.mu_norm - cone.mu_norm) <= 1e-10 * cone.mu_norm);

        CHECK(lambda_exponent(cone) < 1.0);
    }
}

TEST_CASE("cone_to_quadrant reference values") {
    ConeParams c;
    c.beta = kPi / 2;
    c.delta = kPi / 2;
    c.epsilon = kPi / 2;
    c.theta = kPi / 4;
    c.mu_norm = std::sqrt(2.0);
    c.z0 = {1.0, 1.0};
    const QuadrantParams p = cone_to_quadrant(c);
    CHECK(p.s12 == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(p.mu.x == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p.mu.y == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(p.refl.a12) < 1e-14);
    CHECK(std::abs(p.refl.a21) < 1e-14);

    ConeParams c2 = c;
    c2.beta = 2.0 * kPi / 3.0;
    c2.theta = kPi / 3.0;
    const QuadrantParams q = cone_to_quadrant(c2);
    CHECK(q.s12 == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("map_polar endpoints, monotonicity and direct-angle agreement") {
    QuadrantParams p = oracle::p1();
    CHECK(omega_of_alpha(kPi / 4, p) == doctest::Approx(kPi / 4).epsilon(1e-14));
    CHECK(omega_of_alpha(0.0, p) == 0.0);

    p.s11 = 2.0;
    p.s12 = -0.7;
    p.s22 = 1.3;
    const auto [cone, T] = quadrant_to_cone(p);
    CHECK(omega_of_alpha(kPi / 2, p) == doctest::Approx(cone.beta).epsilon(1e-13));

    double prev = -1.0;
    for (int i = 0; i <= 50; ++i) {
        const double alpha = kPi / 2 * i / 50.0;
        const double omega = omega_of_alpha(alpha, p);
        CHECK(omega > prev);
        prev = omega;
        if (i > 0 && i < 50) {
            const Vec2 v = T * Vec2{std::cos(alpha), std::sin(alpha)};
            const double direct = std::atan2(v.y, v.x);
            CHECK(std::abs(omega - direct) <= 1e-12);
        }
        CHECK(std::abs(alpha_of_omega(omega, p) - alpha) <= 1e-10);
    }
}

TEST_CASE("density rescale and lambda") {
    QuadrantParams p = oracle::p1();
    CHECK(green_density_rescale(0.37, p) == doctest::Approx(0.37));
    p.s11 = 4.0;  // det = 4
    CHECK(green_density_rescale(1.5, p) == doctest::Approx(3.0));

    const auto [c1, t1] = quadrant_to_cone(oracle::p1());
    (void)t1;
    CHECK(lambda_exponent(c1) == doctest::Approx(0.0).epsilon(1e-14));
    const auto [c2, t2] = quadrant_to_cone(oracle::p2());
    (void)t2;
    const double expected = (std::atan(1.0 / 3.0) + kPi / 2 - kPi) / (kPi / 2);
    CHECK(lambda_exponent(c2) == doctest::Approx(expected).epsilon(1e-13));
    CHECK(lambda_exponent(c2) == doctest::Approx(-0.7952).epsilon(1e-4));
}

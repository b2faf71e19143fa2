#include "doctest.h"
#include "oracles.hpp"
#include "rbm/rng.hpp"
#include "rbm/saddle.hpp"

using namespace rbm;

TEST_CASE("saddle point reference values") {
    const QuadrantParams p = oracle::p1();
    // Drift direction: saddle at the origin.
    const SaddleData smu = saddle_point(kPi / 4, p);
    CHECK(std::abs(smu.x) <= 1e-13);
    CHECK(std::abs(smu.y) <= 1e-13);
    CHECK(smu.exponent_rate == doctest::Approx(0.0).epsilon(1e-13));

    const SaddleData s3 = saddle_point(kPi / 3, p);
    CHECK(s3.x == doctest::Approx(-1.0 + std::sqrt(2.0) / 2.0).epsilon(1e-12));
    CHECK(s3.y == doctest::Approx(-1.0 + std::sqrt(6.0) / 2.0).epsilon(1e-12));

    const KernelGeometry g = branch_points(p);
    const SaddleData s0 = saddle_point(0.0, p);
    CHECK(s0.x == doctest::Approx(g.x_max).epsilon(1e-13));
    CHECK(s0.y == doctest::Approx(g.y_at_xmax).epsilon(1e-13));
    const SaddleData s90 = saddle_point(kPi / 2, p);
    CHECK(s90.y == doctest::Approx(g.y_max).epsilon(1e-13));
    CHECK(s90.x == doctest::Approx(g.x_at_ymax).epsilon(1e-13));
}

TEST_CASE("saddle point vs dense argmax on random models") {
    PathRng rng(17, 0);
    for (int trial = 0; trial < 25; ++trial) {
        QuadrantParams p;
        p.s11 = 0.5 + 1.5 * rng.next_uniform();
        p.s22 = 0.5 + 1.5 * rng.next_uniform();
        p.s12 = (2.0 * rng.next_uniform() - 1.0) * 0.8 * std::sqrt(p.s11 * p.s22);
        p.mu = {0.3 + rng.next_uniform(), 0.3 + rng.next_uniform()};
        for (int ai = 0; ai < 4; ++ai) {
            const double alpha = 0.05 + (kPi / 2 - 0.1) * rng.next_uniform();
            const SaddleData s = saddle_point(alpha, p);
            const auto [bx, by] = oracle::saddle_argmax(p, alpha);
            CHECK(std::abs(s.x - bx) <= 1e-8);
            CHECK(std::abs(s.y - by) <= 1e-8);
            CHECK(std::abs(gamma(p, s.x, s.y)) <= 1e-11);
            (void)ai;
        }
    }
}

TEST_CASE("phase F vanishes at the saddle with vanishing derivative") {
    const QuadrantParams p = oracle::p1();
    for (double alpha : {0.3, kPi / 4, 1.2}) {
        const SaddleData s = saddle_point(alpha, p);
        CHECK(std::abs(phase_F(cd(s.x, 0.0), alpha, p)) <= 1e-12);
        CHECK(std::abs(phase_G(cd(s.y, 0.0), alpha, p)) <= 1e-12);
        auto f = [&](double x) { return phase_F(cd(x, 0.0), alpha, p); };
        CHECK(std::abs(oracle::diff1(f, s.x, 1e-6)) <= 1e-7);
        CHECK(std::abs(phase_F_dx(cd(s.x, 0.0), alpha, p)) <= 1e-10);
    }
}

TEST_CASE("curvature against finite differences; alpha = 0 signals") {
    const QuadrantParams p = oracle::p1();
    const auto [fxx, r] = curvature(kPi / 4, p);
    CHECK(fxx == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(r == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-12));
    // Second finite difference of F along the real axis.
    auto f = [&](double x) { return phase_F(cd(x, 0.0), kPi / 4, p); };
    CHECK(std::abs(oracle::diff2(f, 0.0, 1e-4) - fxx) <= 1e-6);

    CHECK_THROWS_AS(curvature(0.0, p), NumericError);
    // G-side curvature finite at alpha = 0.
    CHECK(saddle_point(0.0, p).Gyy < kInf);

    PathRng rng(23, 0);
    QuadrantParams q;
    q.s11 = 1.4;
    q.s12 = 0.35;
    q.s22 = 0.9;
    q.mu = {1.2, 0.7};
    for (int i = 0; i < 100; ++i) {
        const double alpha = 0.05 + (kPi / 2 - 0.05) * rng.next_uniform();
        const auto [fxx2, r2] = curvature(alpha, q);
        CHECK(fxx2 > 0.0);
        CHECK(r2 == doctest::Approx(std::sqrt(2.0 / fxx2)).epsilon(1e-13));
    }
}

TEST_CASE("descent path: Morse residual, tangent, endpoints, image identity") {
    const QuadrantParams p = oracle::p1();
    for (double alpha : {0.3, kPi / 4, 1.2}) {
        const double eps = default_epsilon_cap(alpha, p);
        const DescentPath path = trace_descent(alpha, eps, 50, p);
        const SaddleData s = saddle_point(alpha, p);
        REQUIRE(path.x.size() == 51);
        double max_resid = 0.0;
        for (size_t i = 0; i < path.x.size(); ++i) {
            const double t = path.t[i];
            max_resid = std::max(max_resid,
                                 std::abs(phase_F(path.x[i], alpha, p) + t * t));
        }
        CHECK(max_resid <= 1e-10);
        CHECK(std::abs(path.x[25] - cd(s.x, 0.0)) <= 1e-12);
        CHECK(path.x_plus.imag() > 0.0);
        CHECK(path.x_minus.imag() < 0.0);
        CHECK(std::abs(phase_F(path.x_plus, alpha, p) + eps * eps) <= 1e-10);
        CHECK(std::abs(phase_F(path.x_minus, alpha, p) + eps * eps) <= 1e-10);

        // Initial tangent i R(alpha).
        MorseChart chart(alpha, p);
        for (double d : {1e-3, 1e-4}) {
            const cd slope = (chart.x_at(d) - chart.x_at(0.0)) / cd(0.0, d);
            CHECK(std::abs(slope - s.R) <= 20.0 * d);
        }

        // Image of the x-path under Y+ matches the y-path (reversed).
        const QuadrantParams ps = p.swapped();
        MorseChart ychart(kPi / 2 - alpha, ps);
        for (double t : {-eps * 0.9, -eps * 0.4, 0.0, eps * 0.5, eps * 0.8}) {
            const cd y_img = Y_branch(p, chart.x_at(t), +1);
            const cd y_path = ychart.x_at(-t);
            CHECK(std::abs(y_img - y_path) <= 1e-8);
        }
    }
}

TEST_CASE("alpha = 0 path runs the real segment beyond x_max") {
    const QuadrantParams p = oracle::p1();
    const KernelGeometry g = branch_points(p);
    const double eps = 0.1;
    const DescentPath path = descent_path_alpha0(eps, 40, p);
    for (const cd& x : path.x) {
        CHECK(x.imag() == 0.0);
        CHECK(x.real() >= g.x_max - 1e-12);
    }
    CHECK(path.x_plus.real() == doctest::Approx(g.x_max + eps * eps).epsilon(1e-10));
    CHECK(path.x_minus.real() == doctest::Approx(g.x_max + eps * eps).epsilon(1e-10));
    CHECK(path.x_plus.real() == doctest::Approx(0.41421356 + 0.01).epsilon(1e-7));
    // Middle sample sits at the branch point.
    CHECK(path.x[20].real() == doctest::Approx(g.x_max).epsilon(1e-10));
}

TEST_CASE("pole-on-path window signals") {
    const QuadrantParams p = oracle::p2();
    // x* = 0.4 for this model; picking alpha with x(alpha) = x* must signal
    // when the pole abscissa is supplied.
    double lo = 0.0, hi = std::atan2(1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        (saddle_point(mid, p).x > 0.4 ? lo : hi) = mid;
    }
    const double alpha_star = 0.5 * (lo + hi);
    CHECK_THROWS_AS(trace_descent(alpha_star, default_epsilon_cap(alpha_star, p), 10, p,
                                  0.4),
                    NumericError);
    CHECK_NOTHROW(trace_descent(alpha_star + 0.3, 0.05, 10, p, 0.4));
}

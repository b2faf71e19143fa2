#include "doctest.h"
#include "oracles.hpp"
#include "rbm/special.hpp"

using namespace rbm;

TEST_CASE("Phi basics") {
    CHECK(std::abs(Phi(cd(0.0, 0.0))) == 0.0);
    // Odd function.
    for (cd z : {cd(0.7, 0.0), cd(1.3, 0.4), cd(0.2, -1.1)}) {
        CHECK(std::abs(Phi(-z) + Phi(z)) <= 1e-14);
    }
    // Phi(1) against adaptive quadrature of the defining integral.
    const cd q = 2.0 / std::sqrt(kPi) *
                 oracle::integrate([](double t) { return cd(std::exp(-t * t), 0.0); }, 0.0, 1.0);
    CHECK(std::abs(Phi(cd(1.0, 0.0)) - q) <= 1e-12);
    CHECK(Phi(cd(1.0, 0.0)).real() == doctest::Approx(0.8427007929497149).epsilon(1e-12));
    // Complex value against the quadrature along a straight segment.
    const cd z(1.0, 0.5);
    const cd qz = 2.0 / std::sqrt(kPi) *
                  oracle::integrate([&](double s) { return std::exp(-(z * s) * (z * s)) * z; },
                                    0.0, 1.0);
    CHECK(std::abs(Phi(z) - qz) <= 1e-11);
    // Large-argument branch.
    CHECK(Phi(cd(5.0, 0.0)).real() == doctest::Approx(std::erf(5.0)).epsilon(1e-13));
    CHECK(std::abs(Phi(cd(4.2, 0.3)) - (1.0 - (1.0 - Phi(cd(4.2, 0.3))))) < 1.0);  // sanity
}

TEST_CASE("Pi closed form vs quadrature of the defining integral") {
    auto pi_quad = [](cd w) {
        auto f = [&](double s) { return std::exp(-s * s) / (s + cd(0.0, 1.0) * w); };
        // The integrand decays like exp(-s^2); [-9, 9] truncation is below 1e-30.
        return oracle::integrate(f, -9.0, 9.0, 1e-14, 48);
    };
    for (cd w : {cd(0.5, 0.0), cd(-0.5, 0.0), cd(1.0, 0.0), cd(-1.0, 0.0), cd(2.0, 0.0),
                 cd(-2.0, 0.0), cd(1.0, 0.3)}) {
        CHECK(std::abs(Pi_closed(w) - pi_quad(w)) <= 1e-8);
    }
    // Odd symmetry.
    for (cd w : {cd(0.7, 0.1), cd(1.4, -0.2)}) {
        CHECK(std::abs(Pi_closed(-w) + Pi_closed(w)) <= 1e-12);
    }
    CHECK_THROWS_AS(Pi_closed(cd(0.0, 0.5)), NumericError);
}

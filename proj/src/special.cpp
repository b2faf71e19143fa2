#include "rbm/special.hpp"

#include <cmath>

namespace rbm {

namespace {

const double kSqrtPi = std::sqrt(kPi);

// Maclaurin series, adequate to ~1e-12 for |z| <= 3.5.
cd erf_series(cd z) {
    const cd z2 = z * z;
    cd term = z;
    cd sum = z;
    for (int n = 1; n < 160; ++n) {
        term *= -z2 / static_cast<double>(n);
        const cd add = term / static_cast<double>(2 * n + 1);
        sum += add;
        if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    }
    return 2.0 / kSqrtPi * sum;
}

// Continued fraction for erfc on Re z > 0, |z| large (Lentz).
cd erfc_cf(cd z) {
    const cd z2 = z * z;
    const double tiny = 1e-300;
    cd f = tiny, C = f, D = 0.0;
    // erfc(z) = exp(-z^2)/sqrt(pi) / (z + (1/2)/(z + 1/(z + (3/2)/(z + ...))))
    for (int n = 1; n < 300; ++n) {
        const cd a = (n == 1) ? cd(1.0) : cd(0.5 * (n - 1));
        D = z + a * D;
        if (std::abs(D) < tiny) D = tiny;
        C = z + a / C;
        if (std::abs(C) < tiny) C = tiny;
        D = 1.0 / D;
        const cd delta = C * D;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-z2) / kSqrtPi * f;
}

}  // namespace

cd erf_complex(cd z) {
    if (z.imag() == 0.0) return cd(std::erf(z.real()), 0.0);
    if (std::abs(z) <= 3.5) return erf_series(z);
    // erf(z) = 1 - erfc(z); reduce to Re z > 0 by oddness.
    if (z.real() < 0.0) return -erf_complex(-z);
    return 1.0 - erfc_cf(z);
}

cd Phi(cd z) { return erf_complex(z); }

cd Pi_closed(cd w) {
    if (w.real() == 0.0) {
        throw NumericError("Pi(w) requires Re w != 0");
    }
    if (w.real() > 0.0) {
        return -kPi * cd(0.0, 1.0) * std::exp(w * w) * (1.0 - Phi(w));
    }
    return kPi * cd(0.0, 1.0) * std::exp(w * w) * (1.0 - Phi(-w));
}

}  // namespace rbm

#pragma once

#include "rbm/common.hpp"

namespace rbm {

// Error function for complex argument.
cd erf_complex(cd z);

// Phi(z) = (2/sqrt(pi)) int_0^z exp(-t^2) dt = erf(z); odd, Phi(0) = 0.
cd Phi(cd z);

// Pi(w) = int_R exp(-s^2) / (s + i w) ds, closed form per half-plane;
// rejects Re w = 0.
cd Pi_closed(cd w);

}  // namespace rbm

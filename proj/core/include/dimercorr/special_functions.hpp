#pragma once

#include "dimercorr/types.hpp"

namespace dimercorr::special {

// psi_1(z) for Re z > 0.
cd trigamma(cd z);

// Exponential integrals E_1(z), E_2(z) for z off the negative real axis.
cd expint_e1(cd z);
cd expint_e2(cd z);

}  // namespace dimercorr::special

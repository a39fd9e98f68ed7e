#pragma once

#include "dlat/core.hpp"

namespace dlat {

/// Faddeeva function w(z) = exp(-z^2) erfc(-i z), any complex z.
/// Relative accuracy ~1e-14 in the upper half plane.
cplx faddeeva_w(cplx z);

/// Complementary error function of complex argument.
cplx erfc(cplx z);

/// exp(log_scale) * erfc(z) without forming either factor separately
/// (avoids overflow/cancellation when both are extreme).
cplx scaled_erfc(cplx z, cplx log_scale);

}  // namespace dlat

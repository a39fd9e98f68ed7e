#include "dlat/faddeeva.hpp"

#include <cmath>

namespace dlat {
namespace {

constexpr double inv_sqrt_pi = 0.56418958354775628695;  // 1/sqrt(pi)

// Laplace continued fraction, backward evaluation with n_terms levels.
cplx w_continued_fraction(cplx z, int n_terms) {
  cplx t{0.0, 0.0};
  for (int n = n_terms; n >= 1; --n) t = (0.5 * n) / (z - t);
  return I * inv_sqrt_pi / (z - t);
}

// exp(-z^2) (1 + 2i/sqrt(pi) sum z^(2n+1) / (n! (2n+1))); fine for |z| < 6, Im z < 1
// where the cancellation factor exp(2 y^2) stays below e^2.
cplx w_series(cplx z) {
  const cplx z2 = z * z;
  cplx term = z;
  cplx sum = z;
  const double z2abs = std::abs(z2);
  for (int n = 1; n < 500; ++n) {
    term *= z2 / static_cast<double>(n);
    const cplx add = term / static_cast<double>(2 * n + 1);
    sum += add;
    if (n > z2abs && std::abs(add) <= 1e-17 * std::abs(sum)) break;
  }
  return std::exp(-z2) * (1.0 + 2.0 * I * inv_sqrt_pi * sum);
}

// Upper half plane, Re z >= 0.
cplx w_first_quadrant(cplx z) {
  const double x = z.real();
  const double y = z.imag();
  if (x * x + y * y >= 36.0) return w_continued_fraction(z, 30);
  if (y < 1.0) return w_series(z);
  const int n = static_cast<int>(std::ceil(12.0 + 180.0 / (y * y)));
  return w_continued_fraction(z, n);
}

}  // namespace

cplx faddeeva_w(cplx z) {
  if (z.imag() < 0.0) return 2.0 * std::exp(-z * z) - faddeeva_w(-z);
  if (z.real() < 0.0) return std::conj(w_first_quadrant(std::conj(-z)));
  return w_first_quadrant(z);
}

cplx erfc(cplx z) { return scaled_erfc(z, cplx(0.0, 0.0)); }

cplx scaled_erfc(cplx z, cplx log_scale) {
  if (z.real() >= 0.0) return std::exp(log_scale - z * z) * faddeeva_w(I * z);
  return 2.0 * std::exp(log_scale) - std::exp(log_scale - z * z) * faddeeva_w(-I * z);
}

}  // namespace dlat

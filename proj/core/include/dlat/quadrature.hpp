#pragma once

#include "dlat/core.hpp"

#include <functional>

namespace dlat {

struct QuadResult {
  cplx value{0.0, 0.0};
  double abs_error = 0.0;
  int evaluations = 0;
  bool converged = false;
};

struct QuadOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_intervals = 2000;
};

using ComplexIntegrand = std::function<cplx(double)>;

/// Globally adaptive Gauss-Kronrod (7/15) on a finite interval.
QuadResult integrate(const ComplexIntegrand& f, double a, double b, const QuadOptions& opt = {});

/// Same on [a, inf) through t = a + u / (1 - u).
QuadResult integrate_to_infinity(const ComplexIntegrand& f, double a, const QuadOptions& opt = {});

}  // namespace dlat

#pragma once

#include "dlat/core.hpp"

#include <optional>

namespace dlat {

enum class SumMethod { DirectDamped, EwaldSplit };

std::string_view to_string(SumMethod m);

struct LatticeSumResult {
  cplx value{0.0, 0.0};
  double abs_error_estimate = 0.0;
  SumMethod method = SumMethod::EwaldSplit;
  int terms_used = 0;
};

struct EwaldParams {
  /// Proper-time split point s* (length^2). Unset: min(a^2/(4 pi), 4/|omega|^2).
  std::optional<double> split_parameter;
  /// Shell caps for the real- and reciprocal-space sums. Shells are summed
  /// until the Gaussian tail reaches round-off; hitting a cap is an error.
  int real_space_radius = 64;
  int reciprocal_radius = 64;
  /// Interval cap of the adaptive quadrature used for J_2.
  int quadrature_nodes = 4000;
  /// Relative tolerance the reported error estimate must meet.
  double tolerance = 1e-10;
  /// Wood anomaly guard: |omega^2 - q_n^2| > wood_tolerance * |omega|^2.
  double wood_tolerance = 1e-8;

  void validate() const;
};

/// exp(-x^2/4s) / (4 pi s)^{3/2}
double heat_kernel(double s, const Vec3& x);

/// Brute-force J_s: sum over 0 < |n| <= radius (Euclidean) of
/// exp(i omega a|n| + i k_par.a n)/(a|n|)^s. Needs Im omega > 0.
LatticeSumResult j_sum_direct(int s_exp, const Frequency& omega, const Vec2& k_par, double a,
                              int radius);

/// Upper bound on the part of j_sum_direct beyond `radius`.
double j_sum_direct_tail_bound(int s_exp, const Frequency& omega, double a, int radius);

/// J_s for s = 1, 2, 3 at real or complex omega (Ewald split).
LatticeSumResult j_sum(int s_exp, const Frequency& omega, const Vec2& k_par, double a,
                       const EwaldParams& params = {});

/// T = J_3 - i omega J_2, i.e. (omega^2 + Laplacian_par) of the lattice
/// Green function at the origin; cheaper than J_2 and J_3 separately.
LatticeSumResult j_tm_sum(const Frequency& omega, const Vec2& k_par, double a,
                          const EwaldParams& params = {});

/// Throws WoodAnomaly if some order with |n| <= radius has
/// |omega^2 - q_n^2| <= tol * |omega|^2.
void check_wood_anomaly(const Frequency& omega, const Vec2& k_par, double a, int radius,
                        double tol);

/// Lattice phi~(k) with the heat-kernel regulator eps >= 0 kept in the
/// primed sum. For eps = 0 this is the closed form in J_1, J_2, J_3.
cplx phi_lattice_regularized(ModeKind mode, double eps, const Frequency& omega, const Vec2& k_par,
                             double a, cplx renormalized_inverse_coupling,
                             const EwaldParams& params = {});

}  // namespace dlat

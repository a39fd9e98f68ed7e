#pragma once

#include "dlat/core.hpp"
#include "dlat/lattice_sums.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dlat {

enum class LimitPath { EpsFirstThenA, AFirstThenEps };
enum class LimitOutcome { FiniteCommuting, FiniteNoncommuting, Divergent };

std::string_view to_string(LimitPath p);
std::string_view to_string(LimitOutcome o);

/// z-profile of the sheet obtained for a -> 0 at fixed regulator eps.
/// eps = 0 gives exp(i k3 |z|).
cplx h_eps(double z, double eps, const Frequency& omega, const Vec2& k_par);

/// phi~ after a -> 0 (the sum over centers replaced by density 1/a^2 times an
/// integral) at regulator eps. eps = 0 uses the closed forms; the P mode
/// diverges like sqrt(2 pi)/(a^2 sqrt(eps)) and needs remove_singular_term_by_hand.
cplx phi_tilde_a0(ModeKind mode, cplx inverse_coupling, double eps, double a,
                  const Frequency& omega, const WaveVector& k,
                  bool remove_singular_term_by_hand = false);

/// The eps^{-1/2} term of the P-mode a -> 0 function: sqrt(2 pi)/(a^2 sqrt(eps)).
double p_mode_singular_term(double eps, double a);

/// Reflection coefficient from phi~ for the a -> 0 sheet:
/// scalar 1/(2 i a^2 k3 phi~), EM 2 pi i c/(a^2 k3 phi~) with c = w^2, k3^2, k_par^2.
cplx r_from_phi_a0(ModeKind mode, cplx phi, double a, const Frequency& omega,
                   const WaveVector& k);

/// Continuum-sheet reflection coefficients at density rho:
///   Scalar -1/(1 - 2 i k3/(rho g))            (also the hydrodynamic form with g for g_r)
///   TE     -1/(1 - k3/(2 pi i w^2 alpha rho))
///   TM     -1/(1 - 1/(2 pi i alpha k3 rho))      (a -> 0 first)
///   P      -1/(1 - k3/(2 pi i k_par^2 alpha rho)) (after subtraction)
/// strong_coupling takes coupling -> infinity (r = -1).
cplx r_continuum(ModeKind mode, const Frequency& omega, const WaveVector& k, double rho,
                 cplx coupling, bool strong_coupling = false);

struct ScalingFit {
  double exponent = 0.0;   // slope of log|q| vs log a
  double intercept = 0.0;
  bool monotone = true;    // |q| monotone in a
};

/// Least-squares slope of log|quantity(a)| against log a.
ScalingFit scaling_probe(const std::function<double(double)>& quantity,
                         const std::vector<double>& a_values);

struct LimitReport {
  ModeKind mode = ModeKind::Scalar;
  LimitPath path = LimitPath::EpsFirstThenA;
  LimitOutcome outcome = LimitOutcome::FiniteCommuting;
  std::optional<cplx> limiting_r;
  std::optional<double> divergence_exponent;  // in a (eps-first) or eps (a-first)
};

struct LimitsParams {
  cplx omega{1.0, 0.0};
  Vec2 k_par = Vec2::Zero();
  /// g_r (scalar) or alpha_ren (EM) at the reference spacing a_ref.
  cplx coupling{1.0, 0.0};
  /// Reference spacing: carries the density rho = 1/a_ref^2 on the a-first path.
  double a_ref = 0.02;
  /// Lattice spacings for the eps-first path (coupling scaled to keep rho*coupling fixed).
  std::vector<double> a_values{0.16, 0.08, 0.04, 0.02};
  /// Regulators for the a-first path, decreasing.
  std::vector<double> eps_values{1e-4, 2.5e-5, 6.25e-6, 1.5625e-6};
  bool remove_singular_term_by_hand = false;
  double tolerance = 1e-3;
  EwaldParams sums;
};

struct OrderOfLimitsReport {
  ModeKind mode = ModeKind::Scalar;
  LimitOutcome outcome = LimitOutcome::FiniteCommuting;
  LimitReport eps_first;
  LimitReport a_first;
  std::optional<cplx> continuum_r;   // closed-form sheet coefficient for comparison
  std::optional<cplx> subtracted_r;  // P mode with the singular term removed by hand
  std::string note;
};

OrderOfLimitsReport order_of_limits_report(ModeKind mode, const LimitsParams& params);

}  // namespace dlat

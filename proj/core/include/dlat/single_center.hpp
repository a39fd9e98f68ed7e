#pragma once

#include "dlat/core.hpp"

#include <optional>

namespace dlat {

/// Self-adjoint-extension parameter alpha_SE (1/length).
struct ExtensionParameter {
  double alpha_se = 0.0;
};

struct BoundState {
  double kappa = 0.0;          // decay rate, psi ~ exp(-kappa r)/r
  double normalization = 0.0;  // sqrt(kappa / 2 pi)
};

enum class RenormScheme { FieldTheoretic, Electrostatic };

std::string_view to_string(RenormScheme s);

struct BoundaryParams {
  double mu = 0.0;
  double theta = 0.0;
};

/// f = 1/(alpha_SE - i omega). Throws Pole at omega = -i alpha_SE.
cplx scattering_amplitude_sae(ExtensionParameter alpha, const Frequency& omega);

/// kappa = -alpha_SE when alpha_SE < 0.
std::optional<BoundState> bound_state(ExtensionParameter alpha);

/// a_0 = -1/alpha_SE.
double scattering_length(ExtensionParameter alpha);

/// mu = 1/eps, theta = 2 atan(eps alpha_SE - 1).
BoundaryParams sae_boundary_params(ExtensionParameter alpha, double eps);

/// alpha_SE = -4 pi / g_r, so that -1/(4 pi phi_0) = 1/(alpha_SE - i omega).
double alpha_se_from_scalar_coupling(double g_r);
double scalar_coupling_from_alpha_se(double alpha_se);

/// Divergent part of the proper-time integral of the single-center phi_0 at
/// regulator eps (what renormalization absorbs).
cplx counterterm(ModeKind mode, double eps, const Frequency& omega);

/// eps-independent part of the same integral:
/// i w/4pi (scalar), -i w^3 (TE), -i w^3/3 (TM), -2 i w^3/3 (P).
cplx radiative_part(ModeKind mode, const Frequency& omega);

/// Inverse renormalized coupling: 1/coupling + counterterm; the Electrostatic
/// scheme also absorbs radiative_part for TE/TM/P.
cplx renormalize_coupling(const Mode& mode, double eps, RenormScheme scheme,
                          const Frequency& omega);

/// phi_0 from the inverse renormalized coupling.
cplx phi0(ModeKind mode, cplx inverse_renormalized_coupling, const Frequency& omega,
          RenormScheme scheme);

/// Bare phi_0(eps) = 1/coupling + proper-time integral, evaluated numerically
/// (quadrature on [0, S] plus closed-form tail, continued to real omega).
cplx phi0_proper_time(ModeKind mode, cplx inverse_bare_coupling, double eps,
                      const Frequency& omega);

/// Field around one center at the origin. Infinite phi0 gives the plane wave.
cplx single_center_field(ModeKind mode, cplx phi0, const Vec3& x, const WaveVector& k,
                         const Frequency& omega);

/// (w^2 + Laplacian_par) e^{i w r}/r and (w^2 + d_z^2) e^{i w r}/r, r = |x| > 0.
cplx tm_operator_on_spherical_wave(const Vec3& x, cplx omega);
cplx p_operator_on_spherical_wave(const Vec3& x, cplx omega);

}  // namespace dlat

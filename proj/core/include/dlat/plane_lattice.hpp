#pragma once

#include "dlat/core.hpp"
#include "dlat/lattice_sums.hpp"
#include "dlat/single_center.hpp"

#include <Eigen/Core>

#include <optional>
#include <vector>

namespace dlat {

using Vec2i = Eigen::Vector2i;

struct DiffractionOrder {
  Vec2i n = Vec2i::Zero();
  Vec2 q_n = Vec2::Zero();        // k_par + 2 pi n / a
  cplx gamma_n{0.0, 0.0};         // sqrt(omega^2 - q_n^2), Im >= 0
  bool propagating = false;
  Vec2 laue_direction = Vec2::Zero();  // in-plane part of the outgoing unit vector, q_n / omega
  std::optional<cplx> r_n;
};

struct BlochIndex {
  Vec2 q = Vec2::Zero();   // quasimomentum, |q_i| <= pi/a
  Vec2i m = Vec2i::Zero();  // zone of the incoming wave
};

BlochIndex bloch_index(const Vec2& k_par, double a);

/// Gamma_n; throws WoodAnomaly when |omega^2 - q_n^2| <= wood_tol |omega|^2.
cplx gamma(const Frequency& omega, const Vec2& k_par, double a, const Vec2i& n,
           double wood_tol = 1e-8);

/// All orders with q_n^2 < omega^2 at real omega > 0.
std::vector<DiffractionOrder> propagating_orders(double omega, const Vec2& k_par, double a);

/// f_0 = 1/(alpha_SE - i omega - J_1(omega, k)).
cplx f0_bloch(ExtensionParameter alpha, const Frequency& omega, const WaveVector& k, double a,
              const EwaldParams& params = {});

/// Lattice phi~(k): Scalar 1/g + i w/4pi + J_1/4pi; TE inv - w^2 J_1;
/// TM inv + i w J_2 - J_3; P inv - w^2 J_1 - i w J_2 + J_3.
cplx phi_tilde(ModeKind mode, cplx inverse_coupling, const Frequency& omega, const WaveVector& k,
               double a, const EwaldParams& params = {});

/// Inverse coupling to feed phi_tilde so that a lossless dipole of renormalized
/// inverse polarizability `inv_ren` keeps its radiation damping: 1/g for the
/// scalar mode, phi_0 of the chosen scheme otherwise.
cplx lattice_inverse_coupling(ModeKind mode, cplx inv_ren, const Frequency& omega,
                              RenormScheme scheme = RenormScheme::FieldTheoretic);

/// Mode factor c_n multiplying the outgoing order: 1, w^2, Gamma_n^2, q_n^2.
cplx mode_factor(ModeKind mode, const Frequency& omega, const Vec2& q_n, cplx gamma_n);

/// r_n: scalar -i/(2 a^2 Gamma_n phi~); EM 2 pi i c_n/(a^2 phi~ Gamma_n).
cplx reflection(ModeKind mode, cplx phi_tilde_value, const Frequency& omega, const WaveVector& k,
                double a, const Vec2i& n, double wood_tol = 1e-8);

/// e^{ik.x} + f_0 sum_{|n| <= radius} e^{i k_par.a n} e^{i w|x - a n|}/|x - a n|.
/// radius = 0 picks the smallest radius whose tail bound is below tol.
cplx field_spherical(cplx f0, const Vec3& x, const Frequency& omega, const WaveVector& k,
                     double a, int radius = 0, double tol = 1e-12);

/// Same field in the plane-wave (Poisson-resummed) form, z != 0.
/// order_radius = 0 sums shells until the evanescent tail is below tol.
cplx field_planewave(ModeKind mode, cplx phi_tilde_value, const Vec3& x, const Frequency& omega,
                     const WaveVector& k, double a, int order_radius = 0, double tol = 1e-14);

/// Reflection coefficients of all propagating orders.
std::vector<DiffractionOrder> reflection_orders(ModeKind mode, cplx phi_tilde_value, double omega,
                                                const WaveVector& k, double a);

/// sum_prop w_n (|r_n|^2 + |delta_n0 + r_n|^2) - 1 with the flux weight
/// w_n = (c_0/c_n) Gamma_n/k3 (= Gamma_n/k3 for scalar and TE).
double flux_deficit(ModeKind mode, const std::vector<DiffractionOrder>& orders, double omega,
                    const WaveVector& k);

double flux_balance(ExtensionParameter alpha, double omega, const WaveVector& k, double a,
                    const EwaldParams& params = {});
double flux_balance(ModeKind mode, cplx inv_ren, double omega, const WaveVector& k, double a,
                    const EwaldParams& params = {},
                    RenormScheme scheme = RenormScheme::FieldTheoretic);

}  // namespace dlat

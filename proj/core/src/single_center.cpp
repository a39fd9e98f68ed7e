#include "dlat/single_center.hpp"

#include "dlat/faddeeva.hpp"
#include "dlat/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace dlat {

std::string_view to_string(RenormScheme s) {
  return s == RenormScheme::FieldTheoretic ? "field_theoretic" : "electrostatic";
}

cplx scattering_amplitude_sae(ExtensionParameter alpha, const Frequency& omega) {
  if (!std::isfinite(alpha.alpha_se)) throw Error(ErrorKind::Validation, "alpha_SE must be finite");
  const cplx d = alpha.alpha_se - I * omega.omega();
  if (std::abs(d) <= 1e-300) throw Error(ErrorKind::Pole, "omega at the pole -i alpha_SE", 0.0);
  return 1.0 / d;
}

std::optional<BoundState> bound_state(ExtensionParameter alpha) {
  if (!(alpha.alpha_se < 0.0)) return std::nullopt;
  BoundState b;
  b.kappa = -alpha.alpha_se;
  b.normalization = std::sqrt(b.kappa / (2.0 * pi));
  return b;
}

double scattering_length(ExtensionParameter alpha) {
  if (alpha.alpha_se == 0.0)
    throw Error(ErrorKind::Divergent, "alpha_SE = 0: infinite scattering length");
  return -1.0 / alpha.alpha_se;
}

BoundaryParams sae_boundary_params(ExtensionParameter alpha, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorKind::Validation, "eps must be > 0");
  return {1.0 / eps, 2.0 * std::atan(eps * alpha.alpha_se - 1.0)};
}

double alpha_se_from_scalar_coupling(double g_r) {
  if (g_r == 0.0) throw Error(ErrorKind::Validation, "g_r must be nonzero");
  return -4.0 * pi / g_r;
}

double scalar_coupling_from_alpha_se(double alpha_se) {
  if (alpha_se == 0.0) throw Error(ErrorKind::Validation, "alpha_SE must be nonzero");
  return -4.0 * pi / alpha_se;
}

cplx counterterm(ModeKind mode, double eps, const Frequency& omega) {
  if (!(eps > 0.0)) throw Error(ErrorKind::Validation, "eps must be > 0");
  const cplx w2 = omega.omega() * omega.omega();
  const double r2pe = std::sqrt(2.0 * pi * eps);
  const double e32 = std::sqrt(2.0 * pi) * eps * std::sqrt(eps);
  switch (mode) {
    case ModeKind::Scalar: return 1.0 / (2.0 * std::pow(2.0 * pi, 1.5) * std::sqrt(eps));
    case ModeKind::TE: return -w2 / r2pe;
    case ModeKind::TM: return 1.0 / (6.0 * e32) - w2 / (3.0 * r2pe);
    case ModeKind::P: return 1.0 / (12.0 * e32) - 2.0 * w2 / (3.0 * r2pe);
  }
  return {};
}

cplx radiative_part(ModeKind mode, const Frequency& omega) {
  const cplx w = omega.omega();
  const cplx w3 = w * w * w;
  switch (mode) {
    case ModeKind::Scalar: return I * w / (4.0 * pi);
    case ModeKind::TE: return -I * w3;
    case ModeKind::TM: return -I * w3 / 3.0;
    case ModeKind::P: return -2.0 * I * w3 / 3.0;
  }
  return {};
}

cplx renormalize_coupling(const Mode& mode, double eps, RenormScheme scheme,
                          const Frequency& omega) {
  mode.validate();
  if (mode.coupling == cplx(0.0, 0.0))
    throw Error(ErrorKind::Validation, "renormalization needs a nonzero bare coupling");
  cplx inv = 1.0 / mode.coupling + counterterm(mode.kind, eps, omega);
  if (scheme == RenormScheme::Electrostatic && mode.kind != ModeKind::Scalar)
    inv += radiative_part(mode.kind, omega);
  return inv;
}

cplx phi0(ModeKind mode, cplx inv_ren, const Frequency& omega, RenormScheme scheme) {
  if (mode == ModeKind::Scalar || scheme == RenormScheme::FieldTheoretic)
    return inv_ren + radiative_part(mode, omega);
  return inv_ren;
}

namespace {

// int_c^inf u^{-m} e^{-p u} du for m = 3/2, 5/2, multiplied by exp(shift);
// sqrt(p) is taken with Re >= 0 (p = -omega^2, sqrt p = -i omega).
struct Tails {
  cplx f32, f52;
};

Tails incomplete_tails(cplx p, cplx sqrt_p, double c, cplx shift) {
  const double sc = std::sqrt(c);
  const cplx e = std::exp(shift - p * c);
  const cplx f32 = 2.0 * e / sc - 2.0 * std::sqrt(pi) * sqrt_p * scaled_erfc(sqrt_p * sc, shift);
  const cplx f52 = (2.0 / 3.0) * e / (c * sc) - (2.0 * p / 3.0) * f32;
  return {f32, f52};
}

}  // namespace

cplx phi0_proper_time(ModeKind mode, cplx inv_bare, double eps, const Frequency& omega) {
  if (!(eps > 0.0)) throw Error(ErrorKind::Validation, "eps must be > 0");
  const cplx w = omega.omega();
  const cplx w2 = w * w;
  // weight of t^{-3/2} and t^{-5/2} in the integrand, t = s + 2 eps
  cplx c32, c52;
  const double kernel = 1.0 / std::pow(4.0 * pi, 1.5);
  switch (mode) {
    case ModeKind::Scalar: c32 = kernel; c52 = 0.0; break;
    case ModeKind::TE: c32 = -4.0 * pi * kernel * w2; c52 = 0.0; break;
    case ModeKind::TM: c32 = -4.0 * pi * kernel * w2; c52 = 4.0 * pi * kernel; break;
    case ModeKind::P: c32 = -4.0 * pi * kernel * w2; c52 = 2.0 * pi * kernel; break;
  }
  // keep |exp(s w^2)| <= e on the quadrature range
  const double S = std::min(1.0, 1.0 / std::max(std::norm(w), 1e-300));
  auto f = [&](double s) -> cplx {
    const double t = s + 2.0 * eps;
    return std::exp(s * w2) * (c32 + c52 / t) / (t * std::sqrt(t));
  };
  QuadOptions qo;
  qo.rel_tol = 1e-14;
  qo.abs_tol = 0.0;
  qo.max_intervals = 4000;
  // the integrand varies on the scale eps near s = 0: split there
  const double s1 = std::min(S, 50.0 * eps);
  const QuadResult q1 = integrate(f, 0.0, s1, qo);
  const QuadResult q2 = integrate(f, s1, S, qo);
  if (!q1.converged || !q2.converged)
    throw Error(ErrorKind::NonConvergence, "phi_0 proper-time quadrature failed",
                q1.abs_error + q2.abs_error);
  // tail: int_S^inf e^{s w^2} t^{-m} ds = e^{-2 eps w^2} int_{S+2eps}^inf e^{u w^2} u^{-m} du
  const Tails tl = incomplete_tails(-w2, -I * w, S + 2.0 * eps, -2.0 * eps * w2);
  return inv_bare + q1.value + q2.value + c32 * tl.f32 + c52 * tl.f52;
}

namespace {

struct Radial {
  cplx g, d1, d2;  // e^{iwr}/r and its first two r-derivatives
};

Radial radial(double r, cplx w) {
  const cplx e = std::exp(I * w * r);
  return {e / r, e * (I * w / r - 1.0 / (r * r)),
          e * (-w * w / r - 2.0 * I * w / (r * r) + 2.0 / (r * r * r))};
}

}  // namespace

cplx p_operator_on_spherical_wave(const Vec3& x, cplx w) {
  const double r = x.norm();
  if (!(r > 0.0)) throw Error(ErrorKind::Validation, "field point coincides with the center");
  const Radial g = radial(r, w);
  const double cz = x.z() * x.z() / (r * r);
  const cplx dzz = g.d2 * cz + g.d1 * (1.0 - cz) / r;
  return w * w * g.g + dzz;
}

cplx tm_operator_on_spherical_wave(const Vec3& x, cplx w) {
  // (w^2 + Laplacian) g = 0 away from the origin, so (w^2 + Laplacian_par) g = -d_z^2 g
  const double r = x.norm();
  if (!(r > 0.0)) throw Error(ErrorKind::Validation, "field point coincides with the center");
  const Radial g = radial(r, w);
  const double cz = x.z() * x.z() / (r * r);
  return -(g.d2 * cz + g.d1 * (1.0 - cz) / r);
}

cplx single_center_field(ModeKind mode, cplx phi0_value, const Vec3& x, const WaveVector& k,
                         const Frequency& omega) {
  const double r = x.norm();
  if (!(r > 0.0)) throw Error(ErrorKind::Validation, "field is singular at the center");
  const cplx w = omega.omega();
  const cplx plane = std::exp(I * (k.k_par.x() * x.x() + k.k_par.y() * x.y() + k.k3 * x.z()));
  if (std::isinf(std::abs(phi0_value))) return plane;
  const cplx g = std::exp(I * w * r) / r;
  switch (mode) {
    case ModeKind::Scalar: return plane - g / (4.0 * pi * phi0_value);
    case ModeKind::TE: return plane + w * w * g / phi0_value;
    case ModeKind::TM: return plane + tm_operator_on_spherical_wave(x, w) / phi0_value;
    case ModeKind::P: return plane + p_operator_on_spherical_wave(x, w) / phi0_value;
  }
  return plane;
}

}  // namespace dlat

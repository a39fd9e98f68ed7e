#include "dlat/plane_lattice.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dlat {
namespace {

void check_a(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw Error(ErrorKind::Validation, "a must be > 0");
}

cplx plane_wave(const WaveVector& k, const Vec3& x) {
  return std::exp(I * (k.k_par.x() * x.x() + k.k_par.y() * x.y() + k.k3 * x.z()));
}

Vec2 q_of(const Vec2& k_par, double a, const Vec2i& n) {
  return k_par + (2.0 * pi / a) * n.cast<double>();
}

template <class F>
void for_shell(int m, F&& f) {
  if (m == 0) {
    f(0, 0);
    return;
  }
  for (int i = -m; i <= m; ++i) {
    f(i, m);
    f(i, -m);
  }
  for (int j = -m + 1; j <= m - 1; ++j) {
    f(m, j);
    f(-m, j);
  }
}

}  // namespace

BlochIndex bloch_index(const Vec2& k_par, double a) {
  check_a(a);
  BlochIndex b;
  const double G = 2.0 * pi / a;
  for (int i = 0; i < 2; ++i) {
    b.m(i) = static_cast<int>(std::lround(k_par(i) / G));
    b.q(i) = k_par(i) - G * b.m(i);
  }
  return b;
}

cplx gamma(const Frequency& omega, const Vec2& k_par, double a, const Vec2i& n, double wood_tol) {
  check_a(a);
  const cplx w2 = omega.omega() * omega.omega();
  const cplx d = w2 - q_of(k_par, a, n).squaredNorm();
  if (std::abs(d) <= wood_tol * std::norm(omega.omega()))
    throw Error(ErrorKind::WoodAnomaly,
                "Wood anomaly: Gamma_(" + std::to_string(n.x()) + "," + std::to_string(n.y()) +
                    ") ~ 0",
                std::sqrt(std::abs(d)));
  return sqrt_upper(d);
}

std::vector<DiffractionOrder> propagating_orders(double omega, const Vec2& k_par, double a) {
  check_a(a);
  if (!(omega > 0.0)) throw Error(ErrorKind::Validation, "propagating orders need real omega > 0");
  // |q_n| < omega needs |2 pi n/a| < omega + |k_par|
  const int N = static_cast<int>(std::ceil(a * (omega + k_par.norm()) / (2.0 * pi))) + 1;
  std::vector<DiffractionOrder> out;
  for (int i = -N; i <= N; ++i) {
    for (int j = -N; j <= N; ++j) {
      const Vec2i n(i, j);
      const Vec2 q = q_of(k_par, a, n);
      const double q2 = q.squaredNorm();
      if (!(q2 < omega * omega)) continue;
      DiffractionOrder o;
      o.n = n;
      o.q_n = q;
      o.gamma_n = std::sqrt(omega * omega - q2);
      o.propagating = true;
      o.laue_direction = q / omega;
      out.push_back(o);
    }
  }
  std::sort(out.begin(), out.end(), [](const DiffractionOrder& l, const DiffractionOrder& r) {
    const int nl = l.n.squaredNorm(), nr = r.n.squaredNorm();
    if (nl != nr) return nl < nr;
    return l.n.x() != r.n.x() ? l.n.x() < r.n.x() : l.n.y() < r.n.y();
  });
  return out;
}

cplx f0_bloch(ExtensionParameter alpha, const Frequency& omega, const WaveVector& k, double a,
              const EwaldParams& params) {
  const cplx w = omega.omega();
  const LatticeSumResult j1 = j_sum(1, omega, k.k_par, a, params);
  const cplx den = alpha.alpha_se - I * w - j1.value;
  const double scale = std::abs(alpha.alpha_se) + std::abs(w) + std::abs(j1.value);
  if (std::abs(den) <= std::max(1e-12 * scale, j1.abs_error_estimate))
    throw Error(ErrorKind::Pole, "lattice resonance: alpha_SE - i omega - J_1 vanishes",
                std::abs(den));
  return 1.0 / den;
}

cplx phi_tilde(ModeKind mode, cplx inv, const Frequency& omega, const WaveVector& k, double a,
               const EwaldParams& params) {
  return phi_lattice_regularized(mode, 0.0, omega, k.k_par, a, inv, params);
}

cplx lattice_inverse_coupling(ModeKind mode, cplx inv_ren, const Frequency& omega,
                              RenormScheme scheme) {
  if (mode == ModeKind::Scalar) return inv_ren;
  return phi0(mode, inv_ren, omega, scheme);
}

cplx mode_factor(ModeKind mode, const Frequency& omega, const Vec2& q_n, cplx gamma_n) {
  switch (mode) {
    case ModeKind::Scalar: return 1.0;
    case ModeKind::TE: return omega.omega() * omega.omega();
    case ModeKind::TM: return gamma_n * gamma_n;
    case ModeKind::P: return q_n.squaredNorm();
  }
  return 1.0;
}

namespace {

// amplitude of the outgoing order n per unit c_n/Gamma_n
cplx order_prefactor(ModeKind mode, cplx phi, double a) {
  if (mode == ModeKind::Scalar) return -I / (2.0 * a * a * phi);  // 2 pi i f_0/a^2
  return 2.0 * pi * I / (a * a * phi);
}

}  // namespace

cplx reflection(ModeKind mode, cplx phi, const Frequency& omega, const WaveVector& k, double a,
                const Vec2i& n, double wood_tol) {
  const cplx g = gamma(omega, k.k_par, a, n, wood_tol);
  const Vec2 q = q_of(k.k_par, a, n);
  return order_prefactor(mode, phi, a) * mode_factor(mode, omega, q, g) / g;
}

cplx field_spherical(cplx f0, const Vec3& x, const Frequency& omega, const WaveVector& k,
                     double a, int radius, double tol) {
  check_a(a);
  const cplx w = omega.omega();
  const double damp = w.imag();
  if (!(damp > 0.0))
    throw Error(ErrorKind::Validation, "spherical-wave lattice sum needs Im(omega) > 0");
  if (radius < 0) throw Error(ErrorKind::Validation, "radius must be >= 0");
  const cplx plane = plane_wave(k, x);
  if (f0 == cplx(0.0, 0.0)) return plane;

  // tail bound over annuli m < |n| <= m+1 for m >= R
  const double rho = Vec2(x.x(), x.y()).norm();
  const double zabs = std::abs(x.z());
  const double c = pi * (1.0 + std::sqrt(2.0));
  auto annulus_bound = [&](int m) {
    const double d = std::max(a * m - rho, zabs);
    if (!(d > 0.0)) return HUGE_VAL;
    return std::abs(f0) * c * (2 * m + 1) * std::exp(-damp * d) / d;
  };
  auto tail_from = [&](int R) {
    double s = 0.0;
    for (int m = R;; ++m) {
      const double b = annulus_bound(m);
      s += b;
      if (!std::isfinite(s)) return s;
      if ((b <= 1e-20 * s && a * m > rho + 1.0 / damp) || b < 1e-300) break;
    }
    return s;
  };
  int R = radius;
  if (R == 0) {
    R = static_cast<int>(std::ceil((rho + 1.0 / damp) / a)) + 1;
    while (tail_from(R) > tol) R = R + std::max(1, R / 8);
  } else if (tail_from(R) > tol) {
    throw Error(ErrorKind::NonConvergence,
                "insufficient damping: tail bound exceeds tolerance at radius " +
                    std::to_string(R),
                tail_from(R));
  }
  cplx sum{0.0, 0.0};
  const long R2 = static_cast<long>(R) * R;
  for (int i = -R; i <= R; ++i) {
    for (int j = -R; j <= R; ++j) {
      if (static_cast<long>(i) * i + static_cast<long>(j) * j > R2) continue;
      const Vec3 an(a * i, a * j, 0.0);
      const double d = (x - an).norm();
      if (d == 0.0) throw Error(ErrorKind::Validation, "field point on a lattice site");
      sum += std::exp(I * (k.k_par.x() * an.x() + k.k_par.y() * an.y() + w * d)) / d;
    }
  }
  return plane + f0 * sum;
}

cplx field_planewave(ModeKind mode, cplx phi, const Vec3& x, const Frequency& omega,
                     const WaveVector& k, double a, int order_radius, double tol) {
  check_a(a);
  const double z = std::abs(x.z());
  if (!(z > 0.0))
    throw Error(ErrorKind::Validation, "plane-wave representation needs z != 0");
  if (order_radius < 0) throw Error(ErrorKind::Validation, "order_radius must be >= 0");
  const Vec2 xp(x.x(), x.y());
  const cplx pre = order_prefactor(mode, phi, a);
  const double wabs = std::abs(omega.omega());
  cplx sum{0.0, 0.0};
  const int cap = order_radius > 0 ? order_radius : 100000;
  bool converged = order_radius > 0;
  for (int m = 0; m <= cap; ++m) {
    double shell = 0.0;
    for_shell(m, [&](int i, int j) {
      const Vec2i n(i, j);
      const cplx g = gamma(omega, k.k_par, a, n);
      const Vec2 q = q_of(k.k_par, a, n);
      const cplx t = mode_factor(mode, omega, q, g) * std::exp(I * (g * z + q.dot(xp))) / g;
      sum += t;
      shell = std::max(shell, std::abs(t));
    });
    if (order_radius == 0 && (2.0 * pi / a) * m - k.k_par.norm() > wabs &&
        std::abs(pre) * shell * (8 * m + 8) <= tol * std::max(1.0, std::abs(pre * sum))) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw Error(ErrorKind::NonConvergence, "evanescent order sum did not converge");
  return plane_wave(k, x) + pre * sum;
}

std::vector<DiffractionOrder> reflection_orders(ModeKind mode, cplx phi, double omega,
                                                const WaveVector& k, double a) {
  auto orders = propagating_orders(omega, k.k_par, a);
  for (auto& o : orders) o.r_n = reflection(mode, phi, omega, k, a, o.n);
  return orders;
}

double flux_deficit(ModeKind mode, const std::vector<DiffractionOrder>& orders, double omega,
                    const WaveVector& k) {
  const Frequency w(omega);
  const double k3 = k.k3.real();
  if (!(k3 > 0.0)) throw Error(ErrorKind::Validation, "flux balance needs k3 > 0");
  const cplx c0 = mode_factor(mode, w, k.k_par, k.k3);
  double total = 0.0;
  for (const auto& o : orders) {
    if (!o.r_n) throw Error(ErrorKind::Validation, "order without reflection coefficient");
    const cplx r = *o.r_n;
    const bool specular = o.n.x() == 0 && o.n.y() == 0;
    if (specular) {
      total += std::norm(1.0 + r) + std::norm(r);
      continue;
    }
    const cplx cn = mode_factor(mode, w, o.q_n, o.gamma_n);
    if (std::abs(cn) == 0.0) continue;  // order not excited
    const double weight = std::abs(c0 / cn) * o.gamma_n.real() / k3;
    total += 2.0 * weight * std::norm(r);
  }
  return total - 1.0;
}

double flux_balance(ExtensionParameter alpha, double omega, const WaveVector& k, double a,
                    const EwaldParams& params) {
  const cplx inv_g = -alpha.alpha_se / (4.0 * pi);
  const cplx phi = phi_tilde(ModeKind::Scalar, inv_g, omega, k, a, params);
  return flux_deficit(ModeKind::Scalar, reflection_orders(ModeKind::Scalar, phi, omega, k, a),
                      omega, k);
}

double flux_balance(ModeKind mode, cplx inv_ren, double omega, const WaveVector& k, double a,
                    const EwaldParams& params, RenormScheme scheme) {
  const cplx inv = lattice_inverse_coupling(mode, inv_ren, omega, scheme);
  const cplx phi = phi_tilde(mode, inv, omega, k, a, params);
  return flux_deficit(mode, reflection_orders(mode, phi, omega, k, a), omega, k);
}

}  // namespace dlat

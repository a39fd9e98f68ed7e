#include "dlat/lattice_sums.hpp"

#include "dlat/faddeeva.hpp"
#include "dlat/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dlat {
namespace {

constexpr double sqrt_pi = 1.77245385090551602729;
constexpr double eps_mach = 2.220446049250313e-16;

void check_s_exp(int s) {
  if (s < 1 || s > 3) throw Error(ErrorKind::Validation, "s_exp must be 1, 2 or 3");
}

void check_a(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw Error(ErrorKind::Validation, "a must be > 0");
}

// Visits the lattice points n with max(|n1|,|n2|) == m.
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

struct EwaldOut {
  cplx j1{0.0, 0.0};
  cplx t{0.0, 0.0};
  double err_j1 = 0.0;
  double err_t = 0.0;
  int terms = 0;
};

double default_split(double a, cplx k) {
  double s = a * a / (4.0 * pi);
  const double re_k2 = (k * k).real();
  // keep exp(k^2/4E^2) = exp(s k^2) moderate for large real frequencies
  if (re_k2 > 0.0) s = std::min(s, 4.0 / re_k2);
  return s;
}

// J_1 and T = J_3 - i k J_2 at complex wavenumber k by the Ewald split with
// Gaussian parameter E = 1/(2 sqrt(s*)).
EwaldOut ewald(cplx k, const Vec2& kp, double a, double E, const EwaldParams& p, bool want_t) {
  EwaldOut out;
  const double E2 = E * E;
  const cplx k2 = k * k;
  const cplx ek = std::exp(k2 / (4.0 * E2));
  const cplx ik = I * k;

  // real space, n != 0
  cplx real_j1{0.0, 0.0}, real_t{0.0, 0.0};
  double abs_j1 = 0.0, abs_t = 0.0;
  double last_j1 = 0.0, last_t = 0.0;
  bool done = false;
  for (int m = 1; m <= p.real_space_radius; ++m) {
    double shell_j1 = 0.0, shell_t = 0.0;
    cplx acc_j1{0.0, 0.0}, acc_t{0.0, 0.0};
    for_shell(m, [&](int n1, int n2) {
      const Vec2 R = a * Vec2(n1, n2);
      const double r = R.norm();
      const cplx phase = std::exp(I * kp.dot(R));
      const cplx zp = r * E + ik / (2.0 * E);
      const cplx zm = r * E - ik / (2.0 * E);
      const cplx Ap = scaled_erfc(zp, ik * r);
      const cplx Am = scaled_erfc(zm, -ik * r);
      const cplx sum = Ap + Am;
      const cplx g = sum / (2.0 * r);
      acc_j1 += phase * g;
      shell_j1 += std::abs(g);
      if (want_t) {
        const cplx D = std::exp(-r * r * E2 + k2 / (4.0 * E2));
        const cplx tr = sum / (2.0 * r * r * r) - ik * (Ap - Am) / (2.0 * r * r) +
                        (4.0 * E2 * E / sqrt_pi + 2.0 * E / (sqrt_pi * r * r)) * D;
        acc_t += phase * tr;
        shell_t += std::abs(tr);
      }
      ++out.terms;
    });
    real_j1 += acc_j1;
    real_t += acc_t;
    abs_j1 += shell_j1;
    abs_t += shell_t;
    last_j1 = shell_j1;
    last_t = shell_t;
    if (m >= 2 && shell_j1 <= 1e-17 * abs_j1 && (!want_t || shell_t <= 1e-17 * abs_t)) {
      done = true;
      break;
    }
  }
  if (!done)
    throw Error(ErrorKind::NonConvergence, "Ewald real-space sum hit real_space_radius",
                last_j1);

  // reciprocal space
  const double A = a * a;
  cplx rec_j1{0.0, 0.0}, rec_t{0.0, 0.0};
  double rabs_j1 = 0.0, rabs_t = 0.0, rlast_j1 = 0.0, rlast_t = 0.0;
  done = false;
  for (int m = 0; m <= p.reciprocal_radius; ++m) {
    double shell_j1 = 0.0, shell_t = 0.0;
    cplx acc_j1{0.0, 0.0}, acc_t{0.0, 0.0};
    for_shell(m, [&](int n1, int n2) {
      const Vec2 q = kp + (2.0 * pi / a) * Vec2(n1, n2);
      const cplx gam = -I * sqrt_upper(k2 - q.squaredNorm());  // Re >= 0
      if (gam == cplx(0.0, 0.0))
        throw Error(ErrorKind::WoodAnomaly, "Gamma_n = 0 in reciprocal sum", 0.0);
      const cplx e = erfc(gam / (2.0 * E));
      const cplx tj = (2.0 * pi / A) * e / gam;
      acc_j1 += tj;
      shell_j1 += std::abs(tj);
      if (want_t) {
        const cplx tt = -(2.0 * pi / A) * gam * e;
        acc_t += tt;
        shell_t += std::abs(tt);
      }
      ++out.terms;
    });
    rec_j1 += acc_j1;
    rec_t += acc_t;
    rabs_j1 += shell_j1;
    rabs_t += shell_t;
    rlast_j1 = shell_j1;
    rlast_t = shell_t;
    // the Gaussian factor only sets in once |q| exceeds |k|
    const double qmin = (2.0 * pi / a) * m - kp.norm();
    if (m >= 2 && qmin > std::abs(k) && shell_j1 <= 1e-17 * rabs_j1 &&
        (!want_t || shell_t <= 1e-17 * rabs_t)) {
      done = true;
      break;
    }
  }
  if (!done)
    throw Error(ErrorKind::NonConvergence, "Ewald reciprocal sum hit reciprocal_radius",
                rlast_j1);

  const cplx erfc0 = erfc(-ik / (2.0 * E));
  const cplx self_j1 = ik * erfc0 + (2.0 * E / sqrt_pi) * ek;
  out.j1 = real_j1 + rec_j1 - self_j1;
  out.err_j1 = 2.0 * (last_j1 + rlast_j1) + 8.0 * eps_mach * (abs_j1 + rabs_j1 + std::abs(self_j1));
  if (want_t) {
    const cplx F2 = E * ek + (sqrt_pi * ik / 2.0) * erfc0;
    const cplx self_t = (2.0 / sqrt_pi) * ((k2 / 3.0) * F2 - (4.0 * E2 * E / 3.0) * ek);
    out.t = real_t + rec_t - self_t;
    out.err_t = 2.0 * (last_t + rlast_t) + 8.0 * eps_mach * (abs_t + rabs_t + std::abs(self_t));
  }
  return out;
}

double resolve_E(const EwaldParams& p, double a, cplx k) {
  const double s = p.split_parameter ? *p.split_parameter : default_split(a, k);
  return 1.0 / (2.0 * std::sqrt(s));
}

// J_2(k) = int_0^inf J_1(k + i y) dy, the y-integral undoing one power of 1/r.
LatticeSumResult j2_by_quadrature(cplx k, const Vec2& kp, double a, const EwaldParams& p) {
  const double E = resolve_E(p, a, k);
  const double tol = p.tolerance;
  // tail: |J_1(k + i y)| <= 2 * 4 exp(-y a)/a once y a >= 3
  const double Y = std::max(3.0, std::log(8.0 / (1e-3 * tol))) / a;
  double max_err = 0.0;
  int terms = 0;
  auto f = [&](double y) -> cplx {
    const EwaldOut o = ewald(k + I * y, kp, a, E, p, false);
    max_err = std::max(max_err, o.err_j1);
    terms += o.terms;
    return o.j1;
  };
  QuadOptions qo;
  qo.rel_tol = 0.1 * tol;
  qo.abs_tol = 1e-3 * tol / (a * a);
  qo.max_intervals = p.quadrature_nodes;
  const QuadResult q = integrate(f, 0.0, Y, qo);
  if (!q.converged)
    throw Error(ErrorKind::NonConvergence, "J_2 proper-time quadrature did not converge",
                q.abs_error);
  LatticeSumResult r;
  r.value = q.value;
  r.abs_error_estimate = q.abs_error + max_err * Y + 8.0 * std::exp(-Y * a) / (a * a);
  r.method = SumMethod::EwaldSplit;
  r.terms_used = terms;
  return r;
}

// scale: the undamped nearest-neighbour size 1/a^s, so that sums that are
// exponentially small at strong damping are judged in absolute terms
void check_tolerance(const LatticeSumResult& r, double tol, double scale, const char* what) {
  if (r.abs_error_estimate > tol * std::max(std::abs(r.value), scale))
    throw Error(ErrorKind::NonConvergence,
                std::string(what) + ": error estimate exceeds tolerance", r.abs_error_estimate);
}

}  // namespace

std::string_view to_string(SumMethod m) {
  return m == SumMethod::DirectDamped ? "direct_damped" : "ewald_split";
}

void EwaldParams::validate() const {
  if (split_parameter && !(*split_parameter > 0.0))
    throw Error(ErrorKind::Validation, "split_parameter must be > 0");
  if (real_space_radius < 1 || reciprocal_radius < 1 || quadrature_nodes < 1)
    throw Error(ErrorKind::Validation, "Ewald radii and quadrature_nodes must be positive");
  if (!(tolerance > 0.0) || !(wood_tolerance > 0.0))
    throw Error(ErrorKind::Validation, "tolerances must be positive");
}

double heat_kernel(double s, const Vec3& x) {
  if (!(s > 0.0)) throw Error(ErrorKind::Validation, "heat kernel needs s > 0");
  return std::exp(-x.squaredNorm() / (4.0 * s)) / std::pow(4.0 * pi * s, 1.5);
}

double j_sum_direct_tail_bound(int s_exp, const Frequency& omega, double a, int radius) {
  const double damp = omega.omega().imag() * a;
  // lattice points with m < |n| <= m+1 number at most pi (1+sqrt2)(2m+1)
  const double c = pi * (1.0 + std::sqrt(2.0));
  double bound = 0.0;
  for (int m = std::max(radius, 1);; ++m) {
    const double term = c * (2 * m + 1) * std::exp(-damp * m) / std::pow(a * m, s_exp);
    bound += term;
    if (term <= 1e-18 * bound || term < 1e-300) break;
    if (m > radius + 100000) break;
  }
  return bound;
}

LatticeSumResult j_sum_direct(int s_exp, const Frequency& omega, const Vec2& k_par, double a,
                              int radius) {
  check_s_exp(s_exp);
  check_a(a);
  if (!(omega.omega().imag() > 0.0))
    throw Error(ErrorKind::Validation, "direct lattice sum needs Im(omega) > 0");
  if (radius < 1) throw Error(ErrorKind::Validation, "radius must be >= 1");
  const cplx w = omega.omega();
  cplx total{0.0, 0.0};
  int terms = 0;
  const long r2max = static_cast<long>(radius) * radius;
  // n and -n together: 2 cos(k.a n) e^{i w r}/r^s, exactly even in k_par
  for (int n1 = 0; n1 <= radius; ++n1) {
    for (int n2 = n1 == 0 ? 1 : -radius; n2 <= radius; ++n2) {
      const long nn = static_cast<long>(n1) * n1 + static_cast<long>(n2) * n2;
      if (nn > r2max) continue;
      const Vec2 R = a * Vec2(n1, n2);
      const double r = R.norm();
      total += 2.0 * std::cos(k_par.dot(R)) * std::exp(I * w * r) / std::pow(r, s_exp);
      terms += 2;
    }
  }
  LatticeSumResult res;
  res.value = total;
  res.abs_error_estimate = j_sum_direct_tail_bound(s_exp, omega, a, radius);
  res.method = SumMethod::DirectDamped;
  res.terms_used = terms;
  return res;
}

void check_wood_anomaly(const Frequency& omega, const Vec2& k_par, double a, int radius,
                        double tol) {
  const cplx w2 = omega.omega() * omega.omega();
  const double scale = std::norm(omega.omega());
  for (int n1 = -radius; n1 <= radius; ++n1) {
    for (int n2 = -radius; n2 <= radius; ++n2) {
      const Vec2 q = k_par + (2.0 * pi / a) * Vec2(n1, n2);
      const double d = std::abs(w2 - q.squaredNorm());
      if (d <= tol * scale)
        throw Error(ErrorKind::WoodAnomaly,
                    "Wood anomaly at order (" + std::to_string(n1) + "," + std::to_string(n2) +
                        ")",
                    d);
    }
  }
}

namespace {

void prepare(int s_exp, const Frequency& omega, const Vec2& k_par, double a,
             const EwaldParams& params) {
  check_s_exp(s_exp);
  check_a(a);
  params.validate();
  if (!k_par.allFinite()) throw Error(ErrorKind::Validation, "k_par must be finite");
  check_wood_anomaly(omega, k_par, a, params.reciprocal_radius, params.wood_tolerance);
}

}  // namespace

LatticeSumResult j_sum(int s_exp, const Frequency& omega, const Vec2& k_par, double a,
                       const EwaldParams& params) {
  prepare(s_exp, omega, k_par, a, params);
  const cplx k = omega.omega();
  LatticeSumResult r;
  r.method = SumMethod::EwaldSplit;
  if (s_exp == 1) {
    const EwaldOut o = ewald(k, k_par, a, resolve_E(params, a, k), params, false);
    r.value = o.j1;
    r.abs_error_estimate = o.err_j1;
    r.terms_used = o.terms;
  } else if (s_exp == 2) {
    r = j2_by_quadrature(k, k_par, a, params);
  } else {
    const EwaldOut o = ewald(k, k_par, a, resolve_E(params, a, k), params, true);
    const LatticeSumResult j2 = j2_by_quadrature(k, k_par, a, params);
    r.value = o.t + I * k * j2.value;
    r.abs_error_estimate = o.err_t + std::abs(k) * j2.abs_error_estimate;
    r.terms_used = o.terms + j2.terms_used;
  }
  check_tolerance(r, params.tolerance, std::pow(a, -s_exp), "j_sum");
  return r;
}

LatticeSumResult j_tm_sum(const Frequency& omega, const Vec2& k_par, double a,
                          const EwaldParams& params) {
  prepare(1, omega, k_par, a, params);
  const cplx k = omega.omega();
  const EwaldOut o = ewald(k, k_par, a, resolve_E(params, a, k), params, true);
  LatticeSumResult r;
  r.value = o.t;
  r.abs_error_estimate = o.err_t;
  r.method = SumMethod::EwaldSplit;
  r.terms_used = o.terms;
  check_tolerance(r, params.tolerance, std::pow(a, -3.0), "j_tm_sum");
  return r;
}

namespace {

// 4 pi sum' e^{i k.R} int_0^{2 eps} e^{t w^2} m(t,R) K_t(R) dt: the part of the
// proper-time integral that the regulator removes.
cplx small_time_part(ModeKind mode, double eps, cplx w, const Vec2& kp, double a, double tol) {
  const cplx w2 = w * w;
  const double tmax = 2.0 * eps;
  // K_t(R) <= exp(-R^2/(4 tmax)); stop once that is below 1e-18 of the leading shell
  const double rmax = std::sqrt(4.0 * tmax * 42.0) + a;
  const int mmax = static_cast<int>(std::ceil(rmax / a));
  cplx total{0.0, 0.0};
  QuadOptions qo;
  qo.rel_tol = tol;
  qo.abs_tol = 1e-300;
  for (int m = 1; m <= mmax; ++m) {
    for_shell(m, [&](int n1, int n2) {
      const Vec2 R = a * Vec2(n1, n2);
      const double r2 = R.squaredNorm();
      if (r2 / (4.0 * tmax) > 700.0) return;
      auto f = [&](double t) -> cplx {
        cplx mult{1.0, 0.0};
        if (mode == ModeKind::TM) mult = w2 - 1.0 / t + r2 / (4.0 * t * t);
        if (mode == ModeKind::P) mult = w2 - 1.0 / (2.0 * t);
        return 4.0 * pi * std::exp(t * w2 - r2 / (4.0 * t)) * mult / std::pow(4.0 * pi * t, 1.5);
      };
      const QuadResult q = integrate(f, 0.0, tmax, qo);
      if (!q.converged)
        throw Error(ErrorKind::NonConvergence, "small proper-time quadrature failed",
                    q.abs_error);
      total += std::exp(I * kp.dot(R)) * q.value;
    });
  }
  return total;
}

}  // namespace

cplx phi_lattice_regularized(ModeKind mode, double eps, const Frequency& omega, const Vec2& k_par,
                             double a, cplx inv, const EwaldParams& params) {
  if (!(eps >= 0.0) || !std::isfinite(eps))
    throw Error(ErrorKind::Validation, "eps must be >= 0");
  const cplx w = omega.omega();
  const cplx w2 = w * w;
  const bool need_j1 = mode != ModeKind::TM;
  const bool need_t = mode == ModeKind::TM || mode == ModeKind::P;
  const cplx j1 = need_j1 ? j_sum(1, omega, k_par, a, params).value : cplx{};
  const cplx t = need_t ? j_tm_sum(omega, k_par, a, params).value : cplx{};

  // lattice part at eps = 0, in the normalization where phi~ = inv + [iw/4pi] + L
  cplx lattice{};
  switch (mode) {
    case ModeKind::Scalar: lattice = j1; break;
    case ModeKind::TE: lattice = -w2 * j1; break;
    case ModeKind::TM: lattice = -t; break;
    case ModeKind::P: lattice = -w2 * j1 + t; break;
  }
  if (eps > 0.0) {
    const cplx q = small_time_part(mode, eps, w, k_par, a, 0.1 * params.tolerance);
    cplx sub{};
    switch (mode) {
      case ModeKind::Scalar: sub = q; break;
      case ModeKind::TE: sub = -w2 * q; break;
      case ModeKind::TM:
      case ModeKind::P: sub = -q; break;
    }
    lattice = std::exp(-2.0 * eps * w2) * (lattice - sub);
  }
  if (mode == ModeKind::Scalar) return inv + I * w / (4.0 * pi) + lattice / (4.0 * pi);
  return inv + lattice;
}

}  // namespace dlat

#include "dlat/limits.hpp"

#include "dlat/faddeeva.hpp"
#include "dlat/plane_lattice.hpp"
#include "dlat/quadrature.hpp"
#include "dlat/single_center.hpp"

#include <algorithm>
#include <cmath>

namespace dlat {
namespace {

constexpr double sqrt_pi = 1.77245385090551602729;

QuadOptions tight() {
  QuadOptions q;
  q.rel_tol = 1e-13;
  q.abs_tol = 0.0;
  q.max_intervals = 4000;
  return q;
}

cplx quad_or_throw(const ComplexIntegrand& f, double lo, double hi, const char* what) {
  const QuadResult r = integrate(f, lo, hi, tight());
  if (!r.converged) throw Error(ErrorKind::NonConvergence, what, r.abs_error);
  return r.value;
}

void check_k3(const WaveVector& k) {
  if (std::abs(k.k3) == 0.0) throw Error(ErrorKind::Validation, "k3 = 0 (grazing incidence)");
}

}  // namespace

std::string_view to_string(LimitPath p) {
  return p == LimitPath::EpsFirstThenA ? "eps_first_then_a" : "a_first_then_eps";
}

std::string_view to_string(LimitOutcome o) {
  switch (o) {
    case LimitOutcome::FiniteCommuting: return "finite_commuting";
    case LimitOutcome::FiniteNoncommuting: return "finite_noncommuting";
    case LimitOutcome::Divergent: return "divergent";
  }
  return "?";
}

cplx h_eps(double z, double eps, const Frequency& omega, const Vec2& k_par) {
  if (!(eps >= 0.0) || !std::isfinite(eps) || !std::isfinite(z))
    throw Error(ErrorKind::Validation, "h_eps needs finite z and eps >= 0");
  const WaveVector k = make_incident_wave(omega, k_par);
  check_k3(k);
  const double az = std::abs(z);
  if (eps == 0.0) return std::exp(I * k.k3 * az);

  const cplx p = -k.k3 * k.k3;  // xi^2 + k_par^2
  const cplx sp = -I * k.k3;    // sqrt(p), Re >= 0
  const double kp2 = k_par.squaredNorm();
  const double S = std::min(1.0, 1.0 / std::abs(p));
  auto f = [&](double s) -> cplx {
    const double u = s + eps;
    return std::exp(-z * z / (4.0 * u) - s * p - 2.0 * eps * kp2) / std::sqrt(u);
  };
  const double s1 = std::min(S, 50.0 * eps);
  cplx body = quad_or_throw(f, 0.0, s1, "h_eps quadrature failed");
  body += quad_or_throw(f, s1, S, "h_eps quadrature failed");
  // tail s > S: int_c^inf u^{-1/2} e^{-A/u - p u} du, c = S + eps, A = z^2/4
  const double c = S + eps;
  const cplx shift = eps * p - 2.0 * eps * kp2;
  const double rAc = az / (2.0 * std::sqrt(c));
  const cplx rpc = sp * std::sqrt(c);
  const cplx tail = (sqrt_pi / (2.0 * sp)) * (scaled_erfc(rpc - rAc, shift - az * sp) +
                                              scaled_erfc(rpc + rAc, shift + az * sp));
  return (-I * k.k3 / sqrt_pi) * (body + tail);
}

double p_mode_singular_term(double eps, double a) {
  return std::sqrt(2.0 * pi) / (a * a * std::sqrt(eps));
}

cplx phi_tilde_a0(ModeKind mode, cplx inv, double eps, double a, const Frequency& omega,
                  const WaveVector& k, bool subtract) {
  if (!(a > 0.0)) throw Error(ErrorKind::Validation, "a must be > 0");
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw Error(ErrorKind::Validation, "eps must be >= 0");
  check_k3(k);
  const cplx w = omega.omega();
  const cplx w2 = w * w;
  const cplx k3 = k.k3;
  const double kp2 = k.k_par.squaredNorm();
  const double a2 = a * a;
  if (eps == 0.0) {
    switch (mode) {
      case ModeKind::Scalar: return inv + I / (2.0 * a2 * k3);
      case ModeKind::TE: return inv - 2.0 * pi * I * w2 / (a2 * k3);
      case ModeKind::TM: return inv - 2.0 * pi * I * k3 / a2;
      case ModeKind::P:
        if (!subtract)
          throw Error(ErrorKind::Divergent,
                      "P mode: a -> 0 first has no eps -> 0 limit (sqrt(2 pi)/(a^2 sqrt(eps)))");
        return inv - 2.0 * pi * I * kp2 / (a2 * k3);
    }
  }
  // phi~ = inv + (A I_{1/2} + B I_{3/2}) / a^2,
  // I_m = int_0^inf ds (s + 2 eps)^{-m} exp(-s p - 2 eps k_par^2), p = -k3^2
  cplx A{0.0, 0.0}, B{0.0, 0.0};
  switch (mode) {
    case ModeKind::Scalar: A = 1.0 / (2.0 * sqrt_pi); break;
    case ModeKind::TE: A = -2.0 * sqrt_pi * w2; break;
    case ModeKind::TM: A = -2.0 * sqrt_pi * k3 * k3; break;
    case ModeKind::P: A = -2.0 * sqrt_pi * w2; B = sqrt_pi; break;
  }
  const cplx p = -k3 * k3;
  const cplx sp = -I * k3;
  const double S = std::min(1.0, 1.0 / std::abs(p));
  auto f = [&](double s) -> cplx {
    const double t = s + 2.0 * eps;
    return std::exp(-s * p - 2.0 * eps * kp2) * (A + B / t) / std::sqrt(t);
  };
  const double s1 = std::min(S, 100.0 * eps);
  cplx body = quad_or_throw(f, 0.0, s1, "a -> 0 proper-time quadrature failed");
  body += quad_or_throw(f, s1, S, "a -> 0 proper-time quadrature failed");
  const double c = S + 2.0 * eps;
  const cplx shift = -2.0 * eps * w2;
  const cplx erf_part = scaled_erfc(sp * std::sqrt(c), shift);
  const cplx g12 = (sqrt_pi / sp) * erf_part;
  const cplx g32 = 2.0 * std::exp(shift - p * c) / std::sqrt(c) - 2.0 * sqrt_pi * sp * erf_part;
  cplx phi = inv + (body + A * g12 + B * g32) / a2;
  if (mode == ModeKind::P && subtract) phi -= p_mode_singular_term(eps, a);
  return phi;
}

cplx r_from_phi_a0(ModeKind mode, cplx phi, double a, const Frequency& omega,
                   const WaveVector& k) {
  check_k3(k);
  const double a2 = a * a;
  const cplx w = omega.omega();
  switch (mode) {
    case ModeKind::Scalar: return 1.0 / (2.0 * I * a2 * k.k3 * phi);
    case ModeKind::TE: return 2.0 * pi * I * w * w / (a2 * k.k3 * phi);
    case ModeKind::TM: return 2.0 * pi * I * k.k3 / (a2 * phi);
    case ModeKind::P: return 2.0 * pi * I * k.k_par.squaredNorm() / (a2 * k.k3 * phi);
  }
  return {};
}

cplx r_continuum(ModeKind mode, const Frequency& omega, const WaveVector& k, double rho,
                 cplx coupling, bool strong) {
  check_k3(k);
  if (!(rho > 0.0)) throw Error(ErrorKind::Validation, "density must be > 0");
  if (strong) return -1.0;
  if (coupling == cplx(0.0, 0.0)) return 0.0;
  const cplx k3 = k.k3;
  const cplx w = omega.omega();
  switch (mode) {
    case ModeKind::Scalar: return -1.0 / (1.0 - 2.0 * I * k3 / (rho * coupling));
    case ModeKind::TE: return -1.0 / (1.0 - k3 / (2.0 * pi * I * w * w * coupling * rho));
    case ModeKind::TM: return -1.0 / (1.0 - 1.0 / (2.0 * pi * I * coupling * k3 * rho));
    case ModeKind::P: {
      const double kp2 = k.k_par.squaredNorm();
      if (kp2 == 0.0) return 0.0;  // a normal-incidence wave does not excite p_z
      return -1.0 / (1.0 - k3 / (2.0 * pi * I * kp2 * coupling * rho));
    }
  }
  return {};
}

ScalingFit scaling_probe(const std::function<double(double)>& quantity,
                         const std::vector<double>& a_values) {
  if (a_values.size() < 3) throw Error(ErrorKind::Validation, "scaling probe needs >= 3 points");
  const auto [mn, mx] = std::minmax_element(a_values.begin(), a_values.end());
  if (!(*mn > 0.0) || *mx / *mn < 4.0)
    throw Error(ErrorKind::Validation, "scaling probe needs positive a spanning a factor >= 4");
  std::vector<double> x, y;
  for (double a : a_values) {
    const double q = std::abs(quantity(a));
    if (!(q > 0.0) || !std::isfinite(q))
      throw Error(ErrorKind::Validation, "scaling probe: quantity must be finite and nonzero");
    x.push_back(std::log(a));
    y.push_back(std::log(q));
  }
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  ScalingFit fit;
  fit.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.exponent * sx) / n;
  // monotone in a: sort by a and check the sign of successive differences
  std::vector<std::size_t> idx(x.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](auto l, auto r) { return x[l] < x[r]; });
  int sign = 0;
  for (std::size_t i = 1; i < idx.size(); ++i) {
    const double d = y[idx[i]] - y[idx[i - 1]];
    const int s = d > 0 ? 1 : (d < 0 ? -1 : 0);
    if (s != 0 && sign != 0 && s != sign) fit.monotone = false;
    if (s != 0) sign = s;
  }
  return fit;
}

OrderOfLimitsReport order_of_limits_report(ModeKind mode, const LimitsParams& P) {
  if (P.a_values.size() < 3 || P.eps_values.size() < 3)
    throw Error(ErrorKind::Validation, "need >= 3 lattice spacings and >= 3 regulators");
  const Frequency omega(P.omega);
  const WaveVector k = make_incident_wave(omega, P.k_par);
  check_k3(k);
  OrderOfLimitsReport rep;
  rep.mode = mode;
  const double rho = 1.0 / (P.a_ref * P.a_ref);

  // eps -> 0 first: renormalized lattice at shrinking a, rho * coupling held fixed
  {
    LimitReport& e = rep.eps_first;
    e.mode = mode;
    e.path = LimitPath::EpsFirstThenA;
    std::vector<double> as = P.a_values;
    std::sort(as.begin(), as.end(), std::greater<>());
    std::vector<cplx> rs, lat;
    for (double a : as) {
      const cplx coupling = P.coupling * (a / P.a_ref) * (a / P.a_ref);
      const cplx inv = lattice_inverse_coupling(mode, 1.0 / coupling, omega);
      const cplx phi = phi_tilde(mode, inv, omega, k, a, P.sums);
      lat.push_back(phi - inv - (mode == ModeKind::Scalar ? I * P.omega / (4.0 * pi) : 0.0));
      rs.push_back(reflection(mode, phi, omega, k, a, Vec2i(0, 0)));
    }
    std::size_t i = 0;
    const ScalingFit fit = scaling_probe([&](double) { return std::abs(lat[i++]); }, as);
    if (fit.exponent < -2.5) {
      e.outcome = LimitOutcome::Divergent;
      e.divergence_exponent = fit.exponent;
    } else {
      // r(a) = r_inf + O(a): linear extrapolation through the two smallest spacings
      const std::size_t n = as.size();
      const double a1 = as[n - 2], a2 = as[n - 1];
      e.limiting_r = (a1 * rs[n - 1] - a2 * rs[n - 2]) / (a1 - a2);
      e.outcome = LimitOutcome::FiniteCommuting;
    }
  }

  // a -> 0 first at fixed density, then eps -> 0
  {
    LimitReport& f = rep.a_first;
    f.mode = mode;
    f.path = LimitPath::AFirstThenEps;
    std::vector<double> es = P.eps_values;
    std::sort(es.begin(), es.end(), std::greater<>());
    const cplx inv = 1.0 / P.coupling;
    std::vector<cplx> ph;
    for (double e : es) ph.push_back(phi_tilde_a0(mode, inv, e, P.a_ref, omega, k, false));
    const std::size_t n = es.size();
    const cplx d1 = ph[n - 3] - ph[n - 2];
    const cplx d2 = ph[n - 2] - ph[n - 1];
    const double ratio = std::log(es[n - 3] / es[n - 2]);
    const double expo = std::log(std::abs(d1) / std::abs(d2)) / ratio;
    // phi(eps) = phi_0 + O(sqrt eps): extrapolate linearly in sqrt(eps)
    auto extrapolate = [&](cplx p1, cplx p2) {
      const double s1 = std::sqrt(es[n - 2]), s2 = std::sqrt(es[n - 1]);
      return (s1 * p2 - s2 * p1) / (s1 - s2);
    };
    if (expo < 0.0) {
      f.outcome = LimitOutcome::Divergent;
      f.divergence_exponent = expo;
      if (mode == ModeKind::P && P.remove_singular_term_by_hand) {
        const cplx p1 = ph[n - 2] - p_mode_singular_term(es[n - 2], P.a_ref);
        const cplx p2 = ph[n - 1] - p_mode_singular_term(es[n - 1], P.a_ref);
        rep.subtracted_r = r_from_phi_a0(mode, extrapolate(p1, p2), P.a_ref, omega, k);
      }
    } else {
      f.outcome = LimitOutcome::FiniteCommuting;
      f.limiting_r = r_from_phi_a0(mode, extrapolate(ph[n - 2], ph[n - 1]), P.a_ref, omega, k);
    }
  }

  rep.continuum_r = r_continuum(mode, omega, k, rho, P.coupling);
  const bool ef = rep.eps_first.limiting_r.has_value();
  const bool af = rep.a_first.limiting_r.has_value();
  if (ef && af) {
    const bool agree = std::abs(*rep.eps_first.limiting_r - *rep.a_first.limiting_r) <= P.tolerance;
    rep.outcome = agree ? LimitOutcome::FiniteCommuting : LimitOutcome::FiniteNoncommuting;
    rep.note = agree ? "both orders of limits give the same finite r"
                     : "both orders finite but the limiting r differ";
  } else if (ef || af) {
    rep.outcome = LimitOutcome::FiniteNoncommuting;
    rep.note = ef ? "a -> 0 first diverges in eps; eps -> 0 first is finite"
                  : "eps -> 0 first diverges as a -> 0; a -> 0 first is finite";
  } else {
    rep.outcome = LimitOutcome::Divergent;
    rep.note = "divergent on both paths";
    if (rep.subtracted_r) rep.note += "; subtracted_r removes sqrt(2 pi)/(a^2 sqrt(eps)) by hand";
  }
  if (!ef) rep.eps_first.outcome = LimitOutcome::Divergent;
  if (!af) rep.a_first.outcome = LimitOutcome::Divergent;
  if (ef) rep.eps_first.outcome = rep.outcome;
  if (af) rep.a_first.outcome = rep.outcome;
  return rep;
}

}  // namespace dlat

// One PASS/FAIL line per acceptance criterion; nonzero exit if any fails.

#include "dlat/lattice_sums.hpp"
#include "dlat/limits.hpp"
#include "dlat/multi_center.hpp"
#include "dlat/plane_lattice.hpp"
#include "dlat/single_center.hpp"

#include <Eigen/Dense>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

using namespace dlat;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& what) {
  std::printf("CRITERION %2d: %s  %s\n", id, pass ? "PASS" : "FAIL", what.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void run(int id, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(id, false, std::string("exception: ") + e.what());
  }
}

constexpr std::array<ModeKind, 4> kModes{ModeKind::Scalar, ModeKind::TE, ModeKind::TM, ModeKind::P};

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const Frequency w(cplx(0.7, 0.05));
  const WaveVector k = make_incident_wave(w, Vec2(0.2, 0.1));
  const ExtensionParameter alpha{1.3};
  const double a = 1.0;
  const Vec3 x(0.3, 0.4, 1.2);
  const cplx f0 = f0_bloch(alpha, w, k, a);
  const cplx phi = phi_tilde(ModeKind::Scalar, -alpha.alpha_se / (4.0 * pi), w, k, a);
  const cplx s = field_spherical(f0, x, w, k, a);
  const cplx p = field_planewave(ModeKind::Scalar, phi, x, w, k, a);
  const double rel = std::abs(s - p) / std::abs(p);
  const double t = seconds_since(t0);
  report(1, rel < 1e-6 && t < 10.0,
         fmt("Poisson duality: rel diff %.2e (tol 1e-6), %.2f s (limit 10 s)", rel, t));
}

void criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  const Frequency w(cplx(0.6, 0.1));
  const WaveVector k = make_incident_wave(w, Vec2(0, 0));
  const ExtensionParameter alpha{-2.0};
  const auto c = square_patch(20, 1.0);
  const auto sol = solve(assemble(c, alpha, w, k));
  const cplx fc = sol.f(static_cast<Eigen::Index>(c.size() / 2));
  const cplx f0 = f0_bloch(alpha, w, k, 1.0);
  const double rel = std::abs(fc - f0) / std::abs(f0);
  const double t = seconds_since(t0);
  report(2, rel < 1e-2 && t < 120.0,
         fmt("41x41 patch vs Bloch f0 (a=1, w=0.6+0.1i, alpha_SE=-2): rel %.2e (tol 1e-2), "
             "%.1f s (limit 120 s)",
             rel, t));
}

void criterion3() {
  const Frequency w(1.0);
  const WaveVector k = make_incident_wave(w, Vec2(0, 0));
  std::string vals;
  double prev = INFINITY, last = 0.0;
  bool mono = true;
  for (double a : {0.5, 0.25, 0.125}) {
    const cplx j = j_sum(1, w, k.k_par, a).value;
    const cplx lead = 2.0 * pi * I / (a * a * k.k3);
    last = std::abs(j - lead) * std::abs(a * a * k.k3 / (2.0 * pi));
    mono = mono && last < prev;
    prev = last;
    vals += fmt(" %.4f", last);
  }
  report(3, mono && last < 0.05,
         fmt("J1 leading term: normalized deviation at a=0.5,0.25,0.125:%s; monotone=%s, final "
             "%.4f (tol 0.05)",
             vals.c_str(), mono ? "yes" : "no", last));
}

void criterion4() {
  const Frequency w(0.5);
  const std::vector<double> as{0.4, 0.2, 0.1, 0.05};
  const ScalingFit f3 =
      scaling_probe([&](double a) { return std::abs(j_sum(3, w, Vec2(0, 0), a).value); }, as);
  const ScalingFit f1 =
      scaling_probe([&](double a) { return std::abs(j_sum(1, w, Vec2(0, 0), a).value); }, as);
  const bool pass = std::abs(f3.exponent + 3.0) <= 0.1 && std::abs(f1.exponent + 2.0) <= 0.1;
  report(4, pass,
         fmt("log-log slopes over a in {0.4,0.2,0.1,0.05}, w=0.5: |J3| %.4f (want -3 +- 0.1), "
             "|J1| %.4f (want -2 +- 0.1)",
             f3.exponent, f1.exponent));
}

void criterion5() {
  const Frequency w(1.0);
  const WaveVector k = make_incident_wave(w, Vec2(0, 0));
  const double a = 0.02, rho = 1.0 / (a * a);

  const double g = a * a;  // rho g_r = 1
  const cplx phi_s = phi_tilde(ModeKind::Scalar, 1.0 / g, w, k, a);
  const cplx rs = reflection(ModeKind::Scalar, phi_s, w, k, a, Vec2i(0, 0));
  const cplx cs = r_continuum(ModeKind::Scalar, w, k, rho, g);
  const double ds = std::abs(rs - cs) / std::abs(cs);

  const double alpha = a * a * k.k3.real() / 10.0;
  const cplx inv = lattice_inverse_coupling(ModeKind::TE, 1.0 / alpha, w);
  const cplx rte = reflection(ModeKind::TE, phi_tilde(ModeKind::TE, inv, w, k, a), w, k, a,
                              Vec2i(0, 0));
  const cplx cte = r_continuum(ModeKind::TE, w, k, rho, alpha);
  const double dte = std::abs(rte - cte) / std::abs(cte);

  // TE sheet = scalar sheet with g -> -4 pi alpha w^2
  double ident = 0.0;
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.05, 2.0);
  for (int i = 0; i < 50; ++i) {
    const double wv = u(rng), al = u(rng) - 1.0, r = 10.0 * u(rng);
    const WaveVector kk = make_incident_wave(wv, Vec2(0.3 * wv, 0.0));
    const cplx te = r_continuum(ModeKind::TE, wv, kk, r, al);
    const cplx sc = r_continuum(ModeKind::Scalar, wv, kk, r, -4.0 * pi * al * wv * wv);
    ident = std::max(ident, std::abs(te - sc) / std::abs(sc));
  }
  const bool pass = ds < 1e-2 && dte < 1e-2 && ident <= 4.0 * 2.22e-16;
  report(5, pass,
         fmt("a=0.02 lattice r0 vs sheet: scalar rel %.2e, TE rel %.2e (tol 1e-2); TE/scalar "
             "identity max rel %.1e (machine precision)",
             ds, dte, ident));
}

void criterion6() {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  int n = 0, multi = 0;
  std::string first;
  while (n < 10) {
    ModeKind m = kModes[n % 4];
    double w, a;
    Vec2 kp;
    if (n == 0) {
      w = 1.0;
      a = 7.0;
      kp = Vec2(0, 0);
    } else {
      w = 0.5 + 1.5 * u(rng);
      a = 0.5 + 8.0 * u(rng);
      kp = 0.7 * w * Vec2(u(rng) - 0.5, u(rng) - 0.5);
    }
    const double inv = 4.0 * (u(rng) - 0.5);
    try {
      const WaveVector k = make_incident_wave(w, kp);
      const double d = m == ModeKind::Scalar ? flux_balance(ExtensionParameter{-4.0 * pi * inv}, w, k, a)
                                             : flux_balance(m, inv, w, k, a);
      const auto orders = propagating_orders(w, kp, a);
      if (orders.size() > 1) ++multi;
      if (n == 0) first = fmt("a=7 w=1 case: %zu orders, deficit %.1e", orders.size(), d);
      worst = std::max(worst, std::abs(d));
      ++n;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::WoodAnomaly) throw;
    }
  }
  report(6, worst < 1e-6,
         fmt("flux deficit over 10 random configs (%d multi-order; %s): max %.2e (tol 1e-6)",
             multi, first.c_str(), worst));
}

void criterion7() {
  double worst = 0.0;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      const double alpha = -5.0 + 10.0 * i / 9.0, w = 0.05 + 3.0 * j / 9.0;
      const cplx f = scattering_amplitude_sae({alpha}, w);
      worst = std::max(worst, std::abs(f.imag() - w * std::norm(f)));
    }
  report(7, worst < 1e-14,
         fmt("optical theorem Im f = w|f|^2 on 10x10 (alpha_SE, w) grid: max %.1e (tol 1e-14)",
             worst));
}

void criterion8() {
  const Frequency w(1.0);
  const Vec2 kp(0.3, 0.0);
  const cplx k3 = make_incident_wave(w, kp).k3;
  double worst = 0.0;
  for (double z : {0.5, 1.0, 2.0, 5.0, 10.0})
    worst = std::max(worst, std::abs(h_eps(z, 1e-4, w, kp) - std::exp(I * k3 * z)));
  const double h10 = std::abs(h_eps(10.0, 0.5, w, kp));
  const double gauss = std::exp(-100.0 / (4.0 * 0.5));
  // a bound C e^{-z^2/4eps} with C of order one
  const bool tail = h10 <= 10.0 * gauss;
  report(8, worst <= 1e-4 && tail,
         fmt("h_eps: eps=1e-4, w=1, k_par=(0.3,0), z in {0.5,1,2,5,10}: max |h - e^{ik3 z}| "
             "%.3e (tol 1e-4); eps=0.5, z=10: |h| %.3e vs e^{-z^2/4eps} %.3e",
             worst, h10, gauss));
}

void criterion9() {
  const Frequency w(1.0);
  const WaveVector k = make_incident_wave(w, Vec2(0.3, 0.0));
  const double a = 1.0, alpha = 0.5;
  const std::array<double, 4> eps{1e-4, 2.5e-5, 6.25e-6, 1.5625e-6};
  std::array<cplx, 4> ph{};
  for (int i = 0; i < 4; ++i) ph[i] = phi_tilde_a0(ModeKind::P, 1.0 / alpha, eps[i], a, w, k);
  const double expo = -std::log(std::abs(ph[2] - ph[3]) / std::abs(ph[1] - ph[2])) / std::log(4.0);

  // subtract, then extrapolate the O(sqrt eps) remainder away
  auto sub = [&](int i) { return ph[i] - p_mode_singular_term(eps[i], a); };
  const cplx fin = 2.0 * sub(3) - sub(2);
  const cplx expected = 1.0 / alpha - 2.0 * pi * I * k.k_par.squaredNorm() / (a * a * k.k3);
  const double dfin = std::abs(fin - expected) / std::abs(expected);
  const cplx r = r_from_phi_a0(ModeKind::P, fin, a, w, k);
  const cplx rc = r_continuum(ModeKind::P, w, k, 1.0 / (a * a), alpha);
  const double dr = std::abs(r - rc) / std::abs(rc);
  report(9, std::abs(expo + 0.5) <= 0.05 && dfin < 1e-3 && dr < 1e-3,
         fmt("P mode a->0: eps exponent %.4f (want -0.5 +- 0.05); subtracted finite part rel "
             "%.2e, r rel %.2e (tol 1e-3)",
             expo, dfin, dr));
}

void criterion10() {
  const Frequency w(1.0);
  const cplx wv = w.omega(), w3 = wv * wv * wv;
  const std::array<double, 4> want_exp{-0.5, -0.5, -1.5, -1.5};
  // the finite parts as printed: i w/4pi, i w^3, i w^3/3, 2 i w^3/3
  const std::array<cplx, 4> printed{I * wv / (4.0 * pi), I * w3, I * w3 / 3.0, 2.0 * I * w3 / 3.0};
  const std::array<const char*, 4> names{"scalar", "TE", "TM", "P"};

  // least squares on eps^{-3/2}, eps^{-1/2}, 1, eps^{1/2}, eps, eps^{3/2}
  constexpr int npts = 10;
  std::array<double, npts> eps{};
  for (int i = 0; i < npts; ++i) eps[i] = 1e-3 * std::pow(0.5, i);
  const std::array<double, 6> powers{-1.5, -0.5, 0.0, 0.5, 1.0, 1.5};

  bool all_exp = true, all_fin = true;
  std::string detail;
  for (std::size_t m = 0; m < kModes.size(); ++m) {
    std::array<cplx, npts> v{};
    for (int i = 0; i < npts; ++i) v[i] = phi0_proper_time(kModes[m], 0.0, eps[i], w);
    const cplx d1 = v[npts - 3] - v[npts - 2], d2 = v[npts - 2] - v[npts - 1];
    const double expo = -std::log(std::abs(d2) / std::abs(d1)) / std::log(2.0);

    Eigen::MatrixXcd A(npts, 6);
    Eigen::VectorXcd b(npts);
    for (int i = 0; i < npts; ++i) {
      // rows scaled by eps^{3/2} to balance the columns
      const double sc = std::pow(eps[i], 1.5);
      for (int j = 0; j < 6; ++j) A(i, j) = std::pow(eps[i], powers[j]) * sc;
      b(i) = v[i] * sc;
    }
    const cplx fin = A.colPivHouseholderQr().solve(b)(2);
    const bool ok_exp = std::abs(expo - want_exp[m]) <= 0.05;
    const bool ok_fin = std::abs(fin - printed[m]) <= 1e-3;
    all_exp = all_exp && ok_exp;
    all_fin = all_fin && ok_fin;
    detail += fmt(" %s: exp %.3f, finite %.4f%+.4fi vs %.4f%+.4fi;", names[m], expo, fin.real(),
                  fin.imag(), printed[m].real(), printed[m].imag());
  }
  report(10, all_exp && all_fin,
         fmt("proper-time phi_0 at w=1 (exponents +-0.05: %s; finite parts 1e-3: %s):%s",
             all_exp ? "ok" : "off", all_fin ? "ok" : "off", detail.c_str()));
}

}  // namespace

int main() {
  run(1, criterion1);
  run(2, criterion2);
  run(3, criterion3);
  run(4, criterion4);
  run(5, criterion5);
  run(6, criterion6);
  run(7, criterion7);
  run(8, criterion8);
  run(9, criterion9);
  run(10, criterion10);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}

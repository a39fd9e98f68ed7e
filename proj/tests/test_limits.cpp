#include "doctest.h"
#include "oracle_values.hpp"

#include "dlat/limits.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>

using namespace dlat;

namespace {

// value at eps = 0 of c0 + c1 sqrt(eps) + c2 eps through three points
cplx extrapolate_sqrt(const std::array<double, 3>& eps, const std::array<cplx, 3>& v) {
  Eigen::Matrix3cd m;
  Eigen::Vector3cd b;
  for (int i = 0; i < 3; ++i) {
    m(i, 0) = 1.0;
    m(i, 1) = std::sqrt(eps[i]);
    m(i, 2) = eps[i];
    b(i) = v[i];
  }
  return m.partialPivLu().solve(b)(0);
}

}  // namespace

TEST_CASE("h_eps") {
  const Frequency w(1.0);
  const Vec2 kp(0.3, 0.0);
  const cplx k3 = make_incident_wave(w, kp).k3;
  for (double z : {-3.0, 0.0, 0.5, 7.0}) CHECK(h_eps(z, 0.0, w, kp) == std::exp(I * k3 * std::abs(z)));
  CHECK(h_eps(0.0, 0.0, w, kp) == cplx(1.0, 0.0));

  CHECK(std::abs(h_eps(0.0, 0.5, w, kp) - oracle::h_z0_eps05) < 1e-12);
  CHECK(std::abs(h_eps(1.0, 0.5, w, kp) - oracle::h_z1_eps05) < 1e-12);
  CHECK(std::abs(h_eps(10.0, 0.5, w, kp) - oracle::h_z10_eps05) < 1e-12);
  CHECK(std::abs(h_eps(-10.0, 0.5, w, kp) - oracle::h_z10_eps05) < 1e-12);
  CHECK(std::abs(h_eps(2.0, 1e-4, w, kp) - oracle::h_z2_eps1em4) < 1e-12);

  // pointwise continuity in eps: leading correction is linear in eps away from z = 0
  for (double z : {0.5, 1.0, 2.0, 5.0, 10.0}) {
    const cplx h1 = h_eps(z, 1e-4, w, kp), h2 = h_eps(z, 2.5e-5, w, kp);
    CHECK(std::abs((4.0 * h2 - h1) / 3.0 - std::exp(I * k3 * z)) < 1e-4);
  }
  CHECK_THROWS_AS(h_eps(1.0, -1e-3, w, kp), Error);
  CHECK_THROWS_AS(h_eps(1.0, 1e-3, w, Vec2(1.0, 0.0)), Error);
}

TEST_CASE("a -> 0 phi~ against closed forms") {
  const Frequency w(1.0);
  const WaveVector k = make_incident_wave(w, Vec2(0.3, 0));
  const std::array<ModeKind, 4> modes{ModeKind::Scalar, ModeKind::TE, ModeKind::TM, ModeKind::P};
  const std::array<cplx, 4> ref{oracle::phi_a0_scalar, oracle::phi_a0_te, oracle::phi_a0_tm,
                                oracle::phi_a0_p};
  for (std::size_t i = 0; i < modes.size(); ++i)
    CHECK(std::abs(phi_tilde_a0(modes[i], 0.5, 1e-3, 0.5, w, k) - ref[i]) <
          1e-11 * std::abs(ref[i]));
}

TEST_CASE("a -> 0 phi~: eps -> 0") {
  const Frequency w(1.0);
  const WaveVector k = make_incident_wave(w, Vec2(0.3, 0));
  const std::array<double, 3> eps{1e-2, 1e-3, 1e-4};
  const double a = 1.0;

  std::array<cplx, 3> v{};
  for (int i = 0; i < 3; ++i) v[i] = phi_tilde_a0(ModeKind::Scalar, 1.0, eps[i], a, w, k);
  const cplx scalar0 = 1.0 + I / (2.0 * a * a * k.k3);
  CHECK(std::abs(extrapolate_sqrt(eps, v) - scalar0) < 1e-4);
  CHECK(phi_tilde_a0(ModeKind::Scalar, 1.0, 0.0, a, w, k) == scalar0);

  for (int i = 0; i < 3; ++i) v[i] = phi_tilde_a0(ModeKind::TM, 1.0, eps[i], a, w, k);
  const cplx tm0 = 1.0 - 2.0 * pi * I * k.k3 / (a * a);
  CHECK(std::abs(extrapolate_sqrt(eps, v) - tm0) < 1e-4 * std::abs(tm0));
  CHECK(std::abs(phi_tilde_a0(ModeKind::TM, 1.0, 0.0, a, w, k) - tm0) < 1e-15);

  // P: leading eps^{-1/2} term
  const cplx p_fin = 1.0 - 2.0 * pi * I * k.k_par.squaredNorm() / (a * a * k.k3);
  for (double e : {1e-6, 1e-8}) {
    const cplx p = phi_tilde_a0(ModeKind::P, 1.0, e, a, w, k);
    CHECK(std::abs((p - p_fin) * a * a * std::sqrt(e) - std::sqrt(2.0 * pi)) < 1e-3);
    const cplx s = phi_tilde_a0(ModeKind::P, 1.0, e, a, w, k, true);
    CHECK(std::abs(s - (p - p_mode_singular_term(e, a))) < 1e-12 * std::abs(p));
  }
  CHECK_THROWS_AS(phi_tilde_a0(ModeKind::P, 1.0, 0.0, a, w, k), Error);
  CHECK(std::abs(phi_tilde_a0(ModeKind::P, 1.0, 0.0, a, w, k, true) - p_fin) < 1e-15);
}

TEST_CASE("continuum reflection coefficients") {
  const Frequency w(1.0);
  const WaveVector k = make_incident_wave(w, Vec2(0.3, 0.2));
  CHECK(r_continuum(ModeKind::Scalar, w, k, 100.0, 1.0, true) == cplx(-1.0, 0.0));
  CHECK(std::abs(r_continuum(ModeKind::Scalar, w, k, 100.0, 1e12) + 1.0) < 1e-9);
  const WaveVector graze = make_incident_wave(w, Vec2(1.0 - 1e-12, 0.0));
  CHECK(std::abs(r_continuum(ModeKind::Scalar, w, graze, 1.0, 1.0) + 1.0) < 1e-5);
  CHECK(std::abs(r_continuum(ModeKind::TE, w, k, 1.0, 1e-12)) < 1e-10);
  CHECK_THROWS_AS(r_continuum(ModeKind::Scalar, w, make_incident_wave(w, Vec2(1.0, 0.0)), 1.0, 1.0),
                  Error);

  // TE coefficient is the scalar one with g -> -4 pi alpha w^2
  for (double alpha : {0.01, 0.3, -2.0}) {
    for (double wv : {0.5, 1.0, 2.5}) {
      const Frequency ww(wv);
      const WaveVector kk = make_incident_wave(ww, Vec2(0.2 * wv, 0.1 * wv));
      const cplx te = r_continuum(ModeKind::TE, ww, kk, 7.0, alpha);
      const cplx sc = r_continuum(ModeKind::Scalar, ww, kk, 7.0, -4.0 * pi * alpha * wv * wv);
      CHECK(std::abs(te - sc) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(sc));
    }
  }
  // coefficients match the a -> 0 phi~ at eps = 0
  const double a = 0.1;
  for (ModeKind m : {ModeKind::Scalar, ModeKind::TE, ModeKind::TM}) {
    const cplx phi = phi_tilde_a0(m, 1.0 / 0.02, 0.0, a, w, k);
    CHECK(std::abs(r_from_phi_a0(m, phi, a, w, k) - r_continuum(m, w, k, 1.0 / (a * a), 0.02)) <
          1e-14);
  }
  const cplx pp = phi_tilde_a0(ModeKind::P, 1.0 / 0.02, 0.0, a, w, k, true);
  CHECK(std::abs(r_from_phi_a0(ModeKind::P, pp, a, w, k) -
                 r_continuum(ModeKind::P, w, k, 1.0 / (a * a), 0.02)) < 1e-14);
}

TEST_CASE("scaling probe") {
  const std::vector<double> as{0.4, 0.2, 0.1, 0.05};
  const ScalingFit c = scaling_probe([](double) { return 1.0; }, as);
  CHECK(std::abs(c.exponent) < 1e-10);
  const ScalingFit p = scaling_probe([](double a) { return 3.0 / (a * a); }, as);
  CHECK(p.exponent == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(p.monotone);
  const ScalingFit n = scaling_probe([](double a) { return a == 0.1 ? 10.0 : 1.0; }, as);
  CHECK_FALSE(n.monotone);
  CHECK_THROWS_AS(scaling_probe([](double) { return 1.0; }, {0.4, 0.2}), Error);
  CHECK_THROWS_AS(scaling_probe([](double) { return 1.0; }, {0.4, 0.3, 0.2}), Error);
  CHECK_THROWS_AS(scaling_probe([](double) { return 0.0; }, as), Error);
}

TEST_CASE("order of limits") {
  const Frequency w(1.0);
  const Vec2 kp(0.3, 0.0);
  const cplx k3 = make_incident_wave(w, kp).k3;
  LimitsParams p;
  p.k_par = kp;

  p.coupling = p.a_ref * p.a_ref;  // rho g_r = 1
  const OrderOfLimitsReport s = order_of_limits_report(ModeKind::Scalar, p);
  CHECK(s.outcome == LimitOutcome::FiniteCommuting);
  REQUIRE(s.eps_first.limiting_r);
  REQUIRE(s.a_first.limiting_r);
  REQUIRE(s.continuum_r);
  CHECK(std::abs(*s.eps_first.limiting_r - *s.continuum_r) < 1e-3);
  CHECK(std::abs(*s.a_first.limiting_r - *s.continuum_r) < 1e-3);

  p.coupling = p.a_ref * p.a_ref * k3 / 10.0;
  const OrderOfLimitsReport te = order_of_limits_report(ModeKind::TE, p);
  CHECK(te.outcome == LimitOutcome::FiniteCommuting);
  CHECK(std::abs(*te.a_first.limiting_r - *te.continuum_r) < 1e-3);

  const OrderOfLimitsReport tm = order_of_limits_report(ModeKind::TM, p);
  CHECK(tm.outcome == LimitOutcome::FiniteNoncommuting);
  CHECK(tm.eps_first.outcome == LimitOutcome::Divergent);
  CHECK_FALSE(tm.eps_first.limiting_r);
  REQUIRE(tm.eps_first.divergence_exponent);
  CHECK(std::abs(*tm.eps_first.divergence_exponent + 3.0) < 0.1);
  REQUIRE(tm.a_first.limiting_r);
  CHECK(std::abs(*tm.a_first.limiting_r - *tm.continuum_r) < 1e-3);

  p.remove_singular_term_by_hand = true;
  const OrderOfLimitsReport pm = order_of_limits_report(ModeKind::P, p);
  CHECK(pm.outcome == LimitOutcome::Divergent);
  REQUIRE(pm.a_first.divergence_exponent);
  CHECK(std::abs(*pm.a_first.divergence_exponent + 0.5) < 0.05);
  CHECK_FALSE(pm.a_first.limiting_r);
  REQUIRE(pm.subtracted_r);
  CHECK(std::abs(*pm.subtracted_r - *pm.continuum_r) < 1e-3 * std::abs(*pm.continuum_r));
  // invariant: Divergent <=> no limiting r and an exponent
  for (const auto* r : {&s.eps_first, &s.a_first, &tm.eps_first, &tm.a_first, &pm.eps_first,
                        &pm.a_first}) {
    const bool div = r->outcome == LimitOutcome::Divergent;
    CHECK(div == !r->limiting_r.has_value());
    CHECK(div == r->divergence_exponent.has_value());
  }
}

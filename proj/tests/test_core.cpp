#include "doctest.h"
#include "oracle_values.hpp"

#include "dlat/core.hpp"
#include "dlat/faddeeva.hpp"
#include "dlat/quadrature.hpp"

#include <cmath>
#include <random>

using namespace dlat;

TEST_CASE("incident wave vector") {
  CHECK(std::abs(make_incident_wave(1.0, Vec2(0, 0)).k3 - 1.0) < 1e-15);
  CHECK(std::abs(make_incident_wave(1.0, Vec2(0.6, 0)).k3 - 0.8) < 1e-15);
  const Frequency w(cplx(1.0, 0.1));
  const WaveVector k = make_incident_wave(w, Vec2(0.5, 0));
  CHECK(k.k3.imag() > 0.0);
  CHECK(std::abs(k.k3 * k.k3 - (w.omega() * w.omega() - 0.25)) < 1e-15);
  CHECK_THROWS_AS(make_incident_wave(1.0, Vec2(1.5, 0)), Error);
}

TEST_CASE("wave vector lies on the shell") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0), v(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const Frequency w(cplx(2.5 + u(rng), v(rng)));
    const WaveVector k = make_incident_wave(w, Vec2(u(rng), u(rng)));
    CHECK(std::abs(k.shell_residual(w)) < 1e-12 * std::norm(w.omega()));
    CHECK(k.k3.imag() >= 0.0);
  }
}

TEST_CASE("frequency convention") {
  CHECK_THROWS_AS(Frequency(cplx(1.0, -0.1)), Error);
  CHECK_THROWS_AS(Frequency(NAN), Error);
  CHECK(Frequency(cplx(0.0, 2.0)).xi() == cplx(2.0, 0.0));
  CHECK(sqrt_upper(-4.0) == cplx(0.0, 2.0));
}

TEST_CASE("mode parsing and lattice config") {
  CHECK(parse_mode("te") == ModeKind::TE);
  CHECK(parse_mode("P") == ModeKind::P);
  CHECK(to_string(ModeKind::TM) == "TM");
  CHECK_THROWS_AS(parse_mode("xy"), Error);
  CHECK(LatticeConfig::from_density(4.0).a() == doctest::Approx(0.5));
  CHECK_THROWS_AS(LatticeConfig(-1.0), Error);
  Mode m;
  m.coupling = 0.0;
  CHECK_THROWS_AS(m.validate(), Error);
  m.strong_coupling_limit = true;
  CHECK_NOTHROW(m.validate());
}

TEST_CASE("complex erfc against mpmath") {
  auto rel = [](cplx a, cplx b) { return std::abs(a - b) / std::abs(b); };
  CHECK(rel(dlat::erfc(cplx(0.5, 0.5)), oracle::erfc_a) < 1e-13);
  CHECK(rel(dlat::erfc(cplx(-1.2, 0.3)), oracle::erfc_b) < 1e-13);
  CHECK(rel(dlat::erfc(cplx(3.0, -2.0)), oracle::erfc_c) < 1e-12);
  CHECK(rel(dlat::erfc(cplx(0.1, 6.0)), oracle::erfc_d) < 1e-12);
  // real axis against the C library
  for (double x : {-3.0, -0.7, 0.0, 0.4, 2.0, 5.5})
    CHECK(std::abs(dlat::erfc(cplx(x, 0.0)) - std::erfc(x)) < 1e-14 * std::max(1.0, std::erfc(x)));
  // scaled form stays finite where the factors over/underflow
  const cplx z(30.0, 1.0);
  const cplx s = scaled_erfc(z, z * z);
  CHECK(std::isfinite(s.real()));
  CHECK(std::abs(s - faddeeva_w(I * z)) < 1e-14 * std::abs(s));
}

TEST_CASE("adaptive quadrature") {
  const QuadResult r = integrate([](double x) { return cplx(std::cos(x), std::sin(x)); }, 0.0, 3.0);
  CHECK(r.converged);
  CHECK(std::abs(r.value - (std::exp(I * 3.0) - 1.0) / I) < 1e-13);
  const QuadResult t = integrate_to_infinity([](double x) { return cplx(std::exp(-x * x)); }, 0.0);
  CHECK(std::abs(t.value - std::sqrt(pi) / 2.0) < 1e-10);
  const QuadResult s = integrate([](double x) { return cplx(1.0 / std::sqrt(x)); }, 0.0, 1.0);
  CHECK(std::abs(s.value - 2.0) < 1e-8);
}

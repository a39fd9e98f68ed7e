#pragma once

#include <Eigen/Core>

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dlat {

using cplx = std::complex<double>;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr cplx I{0.0, 1.0};

enum class ErrorKind {
  Validation,      // bad input
  NonConvergence,  // sum/quadrature did not reach tolerance
  WoodAnomaly,     // Gamma_n too close to zero
  Pole,            // scattering amplitude pole hit
  Singular,        // near-singular linear system (intrinsic mode)
  Divergent,       // quantity has no finite limit
};

std::string_view to_string(ErrorKind k);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what, double detail = 0.0)
      : std::runtime_error(what), kind_(kind), detail_(detail) {}
  ErrorKind kind() const noexcept { return kind_; }
  /// Auxiliary number: condition estimate, |Gamma_n|, error estimate, ...
  double detail() const noexcept { return detail_; }

private:
  ErrorKind kind_;
  double detail_;
};

/// Complex frequency with the retarded convention Im(omega) >= 0 (c = 1).
class Frequency {
public:
  Frequency(cplx omega);  // NOLINT: implicit on purpose
  Frequency(double omega) : Frequency(cplx(omega, 0.0)) {}

  cplx omega() const { return omega_; }
  /// Imaginary-frequency variable xi = -i omega.
  cplx xi() const { return -I * omega_; }
  bool is_real() const { return omega_.imag() == 0.0; }

private:
  cplx omega_;
};

/// Square root with Im >= 0; a negative real radicand gives +i sqrt(|z|).
cplx sqrt_upper(cplx z);

struct WaveVector {
  Vec2 k_par = Vec2::Zero();  // 1/length
  cplx k3{0.0, 0.0};          // 1/length, Im >= 0

  /// |k_par|^2 + k3^2 - omega^2
  cplx shell_residual(const Frequency& w) const;
};

/// k3 = sqrt(omega^2 - k_par^2) on the Im >= 0 branch.
WaveVector make_incident_wave(const Frequency& omega, const Vec2& k_par);

enum class ModeKind { Scalar, TE, TM, P };

std::string_view to_string(ModeKind m);
ModeKind parse_mode(std::string_view s);

/// Mode kind plus coupling: g for Scalar, alpha_par for TE/TM, alpha_3 for P.
struct Mode {
  ModeKind kind = ModeKind::Scalar;
  cplx coupling{1.0, 0.0};
  bool strong_coupling_limit = false;

  void validate() const;
};

/// Square lattice a_n = a n in the plane z = 0.
class LatticeConfig {
public:
  explicit LatticeConfig(double a);
  static LatticeConfig from_density(double rho);

  double a() const { return a_; }
  double rho() const { return 1.0 / (a_ * a_); }
  double cell_area() const { return a_ * a_; }

private:
  double a_;
};

}  // namespace dlat

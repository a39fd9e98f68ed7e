#include "dlat/core.hpp"

#include <cctype>
#include <cmath>
#include <string>

namespace dlat {

std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::Validation: return "validation";
    case ErrorKind::NonConvergence: return "non_convergence";
    case ErrorKind::WoodAnomaly: return "wood_anomaly";
    case ErrorKind::Pole: return "pole";
    case ErrorKind::Singular: return "singular";
    case ErrorKind::Divergent: return "divergent";
  }
  return "unknown";
}

Frequency::Frequency(cplx omega) : omega_(omega) {
  if (!std::isfinite(omega.real()) || !std::isfinite(omega.imag()))
    throw Error(ErrorKind::Validation, "frequency must be finite");
  if (omega.imag() < 0.0)
    throw Error(ErrorKind::Validation, "Im(omega) must be >= 0 (retarded convention)");
}

cplx sqrt_upper(cplx z) {
  if (z.imag() == 0.0) {
    // handles -0.0 imaginary parts consistently
    return z.real() >= 0.0 ? cplx(std::sqrt(z.real()), 0.0) : cplx(0.0, std::sqrt(-z.real()));
  }
  cplx s = std::sqrt(z);
  if (s.imag() < 0.0) s = -s;
  return s;
}

cplx WaveVector::shell_residual(const Frequency& w) const {
  return k_par.squaredNorm() + k3 * k3 - w.omega() * w.omega();
}

WaveVector make_incident_wave(const Frequency& omega, const Vec2& k_par) {
  if (!k_par.allFinite()) throw Error(ErrorKind::Validation, "k_par must be finite");
  const cplx w = omega.omega();
  if (omega.is_real() && k_par.norm() > std::abs(w.real()))
    throw Error(ErrorKind::Validation,
                "|k_par| > |omega| at real omega: no propagating incident wave");
  WaveVector k;
  k.k_par = k_par;
  k.k3 = sqrt_upper(w * w - k_par.squaredNorm());
  return k;
}

std::string_view to_string(ModeKind m) {
  switch (m) {
    case ModeKind::Scalar: return "scalar";
    case ModeKind::TE: return "TE";
    case ModeKind::TM: return "TM";
    case ModeKind::P: return "P";
  }
  return "?";
}

ModeKind parse_mode(std::string_view s) {
  std::string t(s);
  for (auto& c : t) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (t == "scalar") return ModeKind::Scalar;
  if (t == "te") return ModeKind::TE;
  if (t == "tm") return ModeKind::TM;
  if (t == "p") return ModeKind::P;
  throw Error(ErrorKind::Validation, "unknown mode '" + std::string(s) + "' (scalar|TE|TM|P)");
}

void Mode::validate() const {
  if (!std::isfinite(coupling.real()) || !std::isfinite(coupling.imag()))
    throw Error(ErrorKind::Validation, "coupling must be finite");
  if (coupling == cplx(0.0, 0.0) && !strong_coupling_limit)
    throw Error(ErrorKind::Validation, "coupling must be nonzero");
}

LatticeConfig::LatticeConfig(double a) : a_(a) {
  if (!(a > 0.0) || !std::isfinite(a))
    throw Error(ErrorKind::Validation, "lattice spacing a must be > 0");
}

LatticeConfig LatticeConfig::from_density(double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho))
    throw Error(ErrorKind::Validation, "density rho must be > 0");
  return LatticeConfig(1.0 / std::sqrt(rho));
}

}  // namespace dlat

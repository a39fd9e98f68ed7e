#include "dlat/multi_center.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <cmath>
#include <string>

namespace dlat {
namespace {

cplx kernel(cplx w, double d) { return -std::exp(I * w * d) / d; }

CMatrix system_matrix(const std::vector<Vec3>& c, double alpha, cplx w) {
  const auto n = static_cast<Eigen::Index>(c.size());
  CMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = alpha - I * w;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = (c[i] - c[j]).norm();
      m(i, j) = m(j, i) = kernel(w, d);
    }
  }
  return m;
}

void check_centers(const std::vector<Vec3>& centers, int cap) {
  if (centers.empty()) throw Error(ErrorKind::Validation, "need at least one center");
  if (static_cast<int>(centers.size()) > cap)
    throw Error(ErrorKind::Validation,
                "too many centers (" + std::to_string(centers.size()) + " > " +
                    std::to_string(cap) + ")");
  for (std::size_t i = 0; i < centers.size(); ++i) {
    if (!centers[i].allFinite()) throw Error(ErrorKind::Validation, "center is not finite");
    for (std::size_t j = 0; j < i; ++j)
      if ((centers[i] - centers[j]).norm() == 0.0)
        throw Error(ErrorKind::Validation,
                    "duplicate centers " + std::to_string(j) + " and " + std::to_string(i));
  }
}

double sigma_min_of(const CMatrix& m) {
  if (m.rows() <= 64) return Eigen::JacobiSVD<CMatrix>(m).singularValues().minCoeff();
  return Eigen::BDCSVD<CMatrix>(m).singularValues().minCoeff();
}

}  // namespace

MultiCenterSystem assemble(const std::vector<Vec3>& centers, ExtensionParameter alpha_se,
                           const Frequency& omega, const WaveVector& k, const SolveOptions& opt) {
  check_centers(centers, opt.max_centers);
  MultiCenterSystem s;
  s.centers = centers;
  s.alpha_se = alpha_se;
  s.omega = omega.omega();
  s.k = k;
  s.matrix = system_matrix(centers, alpha_se.alpha_se, s.omega);
  s.rhs.resize(static_cast<Eigen::Index>(centers.size()));
  for (std::size_t i = 0; i < centers.size(); ++i)
    s.rhs(static_cast<Eigen::Index>(i)) =
        std::exp(I * (k.k_par.x() * centers[i].x() + k.k_par.y() * centers[i].y() +
                      k.k3 * centers[i].z()));
  return s;
}

AmplitudeSolution solve(const MultiCenterSystem& system, const SolveOptions& opt) {
  Eigen::PartialPivLU<CMatrix> lu(system.matrix);
  const double rcond = lu.rcond();
  AmplitudeSolution sol;
  sol.condition_estimate = rcond > 0.0 ? 1.0 / rcond : INFINITY;
  if (!(sol.condition_estimate < opt.max_condition))
    throw Error(ErrorKind::Singular,
                "system matrix near-singular (intrinsic mode nearby); condition estimate " +
                    std::to_string(sol.condition_estimate),
                sol.condition_estimate);
  sol.f = lu.solve(system.rhs);
  sol.residual_norm = (system.matrix * sol.f - system.rhs).norm();
  return sol;
}

cplx field_at(const std::vector<Vec3>& centers, const AmplitudeSolution& sol, const Vec3& x,
              const WaveVector& k, const Frequency& omega) {
  if (static_cast<Eigen::Index>(centers.size()) != sol.f.size())
    throw Error(ErrorKind::Validation, "amplitude count does not match center count");
  const cplx w = omega.omega();
  cplx v = std::exp(I * (k.k_par.x() * x.x() + k.k_par.y() * x.y() + k.k3 * x.z()));
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const double d = (x - centers[i]).norm();
    if (d == 0.0) throw Error(ErrorKind::Validation, "field point coincides with a center");
    v += sol.f(static_cast<Eigen::Index>(i)) * std::exp(I * w * d) / d;
  }
  return v;
}

std::vector<ModeScanPoint> scan_sigma_min(const std::vector<Vec3>& centers,
                                          ExtensionParameter alpha_se,
                                          const std::vector<cplx>& omega_scan) {
  check_centers(centers, 4000);
  std::vector<ModeScanPoint> out;
  out.reserve(omega_scan.size());
  for (const cplx w : omega_scan)
    out.push_back({w, sigma_min_of(system_matrix(centers, alpha_se.alpha_se, w))});
  return out;
}

std::vector<ModeScanPoint> detect_intrinsic_modes(const std::vector<Vec3>& centers,
                                                  ExtensionParameter alpha_se,
                                                  const std::vector<cplx>& omega_scan,
                                                  double tolerance) {
  const auto scan = scan_sigma_min(centers, alpha_se, omega_scan);
  std::vector<ModeScanPoint> minima;
  for (std::size_t i = 0; i < scan.size(); ++i) {
    const double s = scan[i].sigma_min;
    const bool left = i == 0 || scan[i - 1].sigma_min > s;
    const bool right = i + 1 == scan.size() || scan[i + 1].sigma_min >= s;
    if (left && right && s < tolerance) minima.push_back(scan[i]);
  }
  return minima;
}

std::vector<Vec3> square_patch(int L, double a) {
  if (L < 0 || !(a > 0.0)) throw Error(ErrorKind::Validation, "patch needs L >= 0 and a > 0");
  std::vector<Vec3> c;
  c.reserve(static_cast<std::size_t>((2 * L + 1) * (2 * L + 1)));
  for (int i = -L; i <= L; ++i)
    for (int j = -L; j <= L; ++j) c.emplace_back(a * i, a * j, 0.0);
  return c;
}

}  // namespace dlat

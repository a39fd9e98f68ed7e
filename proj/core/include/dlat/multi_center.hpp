#pragma once

#include "dlat/core.hpp"
#include "dlat/single_center.hpp"

#include <Eigen/Dense>

#include <vector>

namespace dlat {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Zero-range multiple-scattering system for centers a_m:
/// (alpha_SE - i w) f_m - sum_{n != m} e^{i w d_mn}/d_mn f_n = e^{i k.a_m}.
struct MultiCenterSystem {
  std::vector<Vec3> centers;
  ExtensionParameter alpha_se;
  cplx omega{0.0, 0.0};
  WaveVector k;
  CMatrix matrix;
  CVector rhs;
};

struct AmplitudeSolution {
  CVector f;
  double residual_norm = 0.0;
  double condition_estimate = 0.0;  // 1-norm estimate from the LU factors
};

struct SolveOptions {
  double max_condition = 1e12;
  int max_centers = 4000;
};

MultiCenterSystem assemble(const std::vector<Vec3>& centers, ExtensionParameter alpha_se,
                           const Frequency& omega, const WaveVector& k,
                           const SolveOptions& opt = {});

AmplitudeSolution solve(const MultiCenterSystem& system, const SolveOptions& opt = {});

/// e^{i k.x} + sum_n f_n e^{i w |x - a_n|}/|x - a_n|
cplx field_at(const std::vector<Vec3>& centers, const AmplitudeSolution& sol, const Vec3& x,
              const WaveVector& k, const Frequency& omega);

struct ModeScanPoint {
  cplx omega{0.0, 0.0};
  double sigma_min = 0.0;
};

/// Smallest singular value of the system matrix along a frequency scan.
std::vector<ModeScanPoint> scan_sigma_min(const std::vector<Vec3>& centers,
                                          ExtensionParameter alpha_se,
                                          const std::vector<cplx>& omega_scan);

/// Local minima of the scan with sigma_min below `tolerance` (homogeneous solutions).
std::vector<ModeScanPoint> detect_intrinsic_modes(const std::vector<Vec3>& centers,
                                                  ExtensionParameter alpha_se,
                                                  const std::vector<cplx>& omega_scan,
                                                  double tolerance = 1e-2);

/// (2L+1)^2 square patch of spacing a in the plane z = 0, centered at the origin.
std::vector<Vec3> square_patch(int L, double a);

}  // namespace dlat

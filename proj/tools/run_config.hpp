#pragma once

#include "dlat/core.hpp"

#include "json.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace cli {

using json = nlohmann::json;
using dlat::cplx;

struct Sweep {
  std::string param = "none";  // none | a | kx | ky | omega
  double start = 0.0;
  double stop = 0.0;
  int points = 1;

  std::vector<double> values() const;
};

struct Axis {
  double start = 0.0;
  double stop = 0.0;
  int points = 1;

  std::vector<double> values() const;
};

/// Everything one invocation needs. Serialized verbatim as the "inputs" block of
/// the output, so an output file can be fed back with --config.
struct RunConfig {
  std::string subcommand;
  std::string mode = "scalar";
  std::optional<cplx> coupling;
  bool pre_renormalized = true;
  bool strong_coupling = false;
  std::optional<double> alpha_se;
  std::string scheme = "field_theoretic";
  std::optional<double> eps;
  cplx omega{1.0, 0.0};
  std::array<double, 2> k_par{0.0, 0.0};
  std::optional<double> a;
  std::optional<double> rho;

  // sum
  std::vector<int> s_exp{1};
  int direct_radius = 0;  // > 0: brute-force damped sum instead of Ewald
  Sweep sweep;

  // field
  Axis gx, gy, gz;
  bool field_planewave_only = false;

  // solve
  std::string centers_file;
  std::vector<std::array<double, 3>> centers;

  // limits
  std::vector<double> a_values{0.16, 0.08, 0.04, 0.02};
  std::vector<double> eps_values{1e-4, 2.5e-5, 6.25e-6, 1.5625e-6};
  bool remove_singular_term_by_hand = false;
  double limits_tolerance = 1e-3;

  // tolerances
  double sum_tol = 1e-10;
  double wood_tol = 1e-8;
  double flux_alert = 1e-6;

  std::string format = "json";  // json | csv (stdout)
  std::string csv_path;

  void validate() const;
  /// Lattice spacing from a or rho (exactly one is set).
  double spacing() const;
};

json to_json(const RunConfig& c);
RunConfig from_json(const json& j);

json cplx_json(cplx z);
cplx json_cplx(const json& j);

}  // namespace cli

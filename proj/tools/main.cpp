#include "commands.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

namespace {

using cli::json;
using cli::RunConfig;

// Raw option storage shared by all subcommands (only one runs per call).
struct Raw {
  std::string mode = "scalar";
  std::optional<double> coupling, coupling_im, alpha_se, eps, a, rho;
  bool bare = false, strong = false;
  std::string scheme = "field_theoretic";
  double omega = 1.0, omega_im = 0.0;
  std::vector<double> kpar{0.0, 0.0};
  std::vector<int> s{1};
  int direct = 0;
  std::vector<std::string> sweep;
  std::vector<double> gx, gy, gz;
  bool planewave_only = false;
  std::string centers;
  std::vector<double> a_values, eps_values;
  bool remove_singular = false;
  std::optional<double> limits_tol, sum_tol, wood_tol, flux_alert;
  std::string format = "json", csv;
};

void add_common(CLI::App* sub, Raw& r) {
  sub->add_option("--mode", r.mode, "scalar | TE | TM | P")->capture_default_str();
  sub->add_option("--coupling", r.coupling, "g_r (scalar) or alpha (EM), real part");
  sub->add_option("--coupling-im", r.coupling_im, "imaginary part of the coupling");
  sub->add_flag("--bare", r.bare, "coupling is bare; renormalize with --eps");
  sub->add_flag("--strong", r.strong, "strong-coupling limit (1/coupling = 0)");
  sub->add_option("--alpha-se", r.alpha_se, "self-adjoint extension parameter (scalar)");
  sub->add_option("--scheme", r.scheme, "field_theoretic | electrostatic")->capture_default_str();
  sub->add_option("--eps", r.eps, "proper-time regulator");
  sub->add_option("--omega", r.omega, "Re omega")->capture_default_str();
  sub->add_option("--omega-im", r.omega_im, "Im omega >= 0")->capture_default_str();
  sub->add_option("--kpar", r.kpar, "in-plane wave vector KX KY")->expected(2);
  auto* oa = sub->add_option("--a", r.a, "lattice spacing");
  sub->add_option("--rho", r.rho, "areal density 1/a^2")->excludes(oa);
  sub->add_option("--sum-tol", r.sum_tol, "lattice sum relative tolerance");
  sub->add_option("--wood-tol", r.wood_tol, "Wood anomaly tolerance");
  sub->add_option("--format", r.format, "json | csv on stdout")->capture_default_str();
  sub->add_option("--csv", r.csv, "also write the table as CSV to PATH");
}

RunConfig build(const std::string& name, const Raw& r) {
  RunConfig c;
  c.subcommand = name;
  c.mode = r.mode;
  if (r.coupling) c.coupling = cli::cplx(*r.coupling, r.coupling_im.value_or(0.0));
  else if (r.coupling_im) throw dlat::Error(dlat::ErrorKind::Validation, "--coupling-im needs --coupling");
  c.pre_renormalized = !r.bare;
  c.strong_coupling = r.strong;
  c.alpha_se = r.alpha_se;
  c.scheme = r.scheme;
  c.eps = r.eps;
  c.omega = {r.omega, r.omega_im};
  c.k_par = {r.kpar[0], r.kpar[1]};
  c.a = r.a;
  c.rho = r.rho;
  c.s_exp = r.s;
  c.direct_radius = r.direct;
  if (!r.sweep.empty()) {
    c.sweep.param = r.sweep[0];
    try {
      c.sweep.start = std::stod(r.sweep[1]);
      c.sweep.stop = std::stod(r.sweep[2]);
      c.sweep.points = std::stoi(r.sweep[3]);
    } catch (const std::exception&) {
      throw dlat::Error(dlat::ErrorKind::Validation, "--sweep expects PARAM START STOP N");
    }
  }
  auto axis = [](const std::vector<double>& v, cli::Axis& ax) {
    if (v.empty()) return;
    ax.start = v[0];
    ax.stop = v[1];
    ax.points = static_cast<int>(v[2]);
    if (ax.points != v[2]) throw dlat::Error(dlat::ErrorKind::Validation, "grid N must be an integer");
  };
  axis(r.gx, c.gx);
  axis(r.gy, c.gy);
  axis(r.gz, c.gz);
  c.field_planewave_only = r.planewave_only;
  c.centers_file = r.centers;
  if (!r.centers.empty()) c.centers = cli::read_centers_csv(r.centers);
  if (!r.a_values.empty()) c.a_values = r.a_values;
  if (!r.eps_values.empty()) c.eps_values = r.eps_values;
  c.remove_singular_term_by_hand = r.remove_singular;
  if (r.limits_tol) c.limits_tolerance = *r.limits_tol;
  if (r.sum_tol) c.sum_tol = *r.sum_tol;
  if (r.wood_tol) c.wood_tol = *r.wood_tol;
  if (r.flux_alert) c.flux_alert = *r.flux_alert;
  c.format = r.format;
  c.csv_path = r.csv;
  return c;
}

int fail(std::string_view kind, const std::string& msg, double detail, int code) {
  json e = {{"error", {{"kind", kind}, {"message", msg}, {"detail", detail}}}, {"exit_code", code}};
  std::cerr << e.dump() << '\n';
  return code;
}

int exit_code(dlat::ErrorKind k) {
  switch (k) {
    case dlat::ErrorKind::NonConvergence:
    case dlat::ErrorKind::Singular: return 3;
    default: return 2;
  }
}

int run(const RunConfig& cfg) {
  const cli::Output out = cli::dispatch(cfg);
  json values = out.values;
  values["table"] = cli::rows_json(out.table);
  json doc = {{"inputs", cli::to_json(cfg)},
              {"values", values},
              {"error_estimates", out.error_estimates},
              {"method", out.method}};
  if (!cfg.csv_path.empty()) {
    std::ofstream f(cfg.csv_path);
    if (!f) throw dlat::Error(dlat::ErrorKind::Validation, "cannot write '" + cfg.csv_path + "'");
    f << cli::rows_csv(out.table);
  }
  if (cfg.format == "csv") std::cout << cli::rows_csv(out.table);
  else std::cout << doc.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Point interactions on a plane lattice: lattice sums, scattering and limits",
               "dirac_lattice"};
  std::string config_path;
  app.add_option("--config", config_path, "rerun from an output or inputs JSON file");
  app.require_subcommand(0, 1);
  Raw raw;

  auto* sum = app.add_subcommand("sum", "lattice sums J_s");
  add_common(sum, raw);
  sum->add_option("--s", raw.s, "exponents (1, 2, 3)")->capture_default_str();
  sum->add_option("--direct", raw.direct, "damped direct sum to this radius instead of Ewald");
  sum->add_option("--sweep", raw.sweep, "PARAM START STOP N with PARAM in a|kx|ky|omega")
      ->expected(4);

  auto* single = app.add_subcommand("single", "single center: amplitude, bound state, phi0");
  add_common(single, raw);

  auto* solve = app.add_subcommand("solve", "finite set of centers: amplitudes f_j");
  add_common(solve, raw);
  solve->add_option("--centers", raw.centers, "CSV file x,y,z (optional header)")->required();

  auto* reflect = app.add_subcommand("reflect", "reflection coefficients of the plane lattice");
  add_common(reflect, raw);
  reflect->add_option("--sweep", raw.sweep, "PARAM START STOP N with PARAM in a|kx|ky|omega")
      ->expected(4);
  reflect->add_option("--flux-alert", raw.flux_alert, "flag points with |flux deficit| above");

  auto* field = app.add_subcommand("field", "total field on a grid");
  add_common(field, raw);
  field->add_option("--x", raw.gx, "X0 X1 N")->expected(3);
  field->add_option("--y", raw.gy, "Y0 Y1 N")->expected(3);
  field->add_option("--z", raw.gz, "Z0 Z1 N")->expected(3);
  field->add_flag("--planewave-only", raw.planewave_only, "skip the spherical-wave sum");

  auto* limits = app.add_subcommand("limits", "order of the eps -> 0 and a -> 0 limits");
  add_common(limits, raw);
  limits->add_option("--a-values", raw.a_values, "spacings for the a -> 0 fit");
  limits->add_option("--eps-values", raw.eps_values, "regulators for the eps -> 0 fit");
  limits->add_flag("--remove-singular-term-by-hand", raw.remove_singular,
                   "P mode: subtract the 1/(a^2 sqrt eps) term");
  limits->add_option("--limits-tol", raw.limits_tol, "agreement tolerance between paths");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("validation", e.what(), 0.0, 2);
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw dlat::Error(dlat::ErrorKind::Validation, "cannot open '" + config_path + "'");
      cfg = cli::from_json(json::parse(f));
    } else {
      const auto subs = app.get_subcommands();
      if (subs.empty()) {
        std::cerr << app.help();
        return 2;
      }
      cfg = build(subs.front()->get_name(), raw);
    }
    return run(cfg);
  } catch (const dlat::Error& e) {
    return fail(dlat::to_string(e.kind()), e.what(), e.detail(), exit_code(e.kind()));
  } catch (const json::exception& e) {
    return fail("validation", std::string("config: ") + e.what(), 0.0, 2);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 0.0, 3);
  }
}

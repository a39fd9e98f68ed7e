#include "run_config.hpp"

#include <cmath>

namespace cli {

using dlat::Error;
using dlat::ErrorKind;

namespace {

std::vector<double> linspace(double a, double b, int n) {
  if (n < 1) throw Error(ErrorKind::Validation, "sweeps need at least one point");
  if (n == 1) return {a};
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  return v;
}

template <class T>
void get_opt(const json& j, const char* key, std::optional<T>& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

template <class T>
void get(const json& j, const char* key, T& out) {
  if (j.contains(key)) j.at(key).get_to(out);
}

json axis_json(const Axis& a) { return {{"start", a.start}, {"stop", a.stop}, {"points", a.points}}; }

Axis json_axis(const json& j) {
  Axis a;
  get(j, "start", a.start);
  get(j, "stop", a.stop);
  get(j, "points", a.points);
  return a;
}

}  // namespace

std::vector<double> Sweep::values() const { return linspace(start, stop, points); }
std::vector<double> Axis::values() const { return linspace(start, stop, points); }

json cplx_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

cplx json_cplx(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  return {j.at("re").get<double>(), j.at("im").get<double>()};
}

void RunConfig::validate() const {
  if (a && rho) throw Error(ErrorKind::Validation, "give only one of --a and --rho");
  const bool lattice = subcommand == "sum" || subcommand == "reflect" || subcommand == "field" ||
                       subcommand == "limits";
  if (lattice && !a && !rho)
    throw Error(ErrorKind::Validation, "give exactly one of --a and --rho");
  if (a && !(*a > 0.0)) throw Error(ErrorKind::Validation, "a must be > 0");
  if (rho && !(*rho > 0.0)) throw Error(ErrorKind::Validation, "rho must be > 0");
  if (sweep.points < 1 || gx.points < 1 || gy.points < 1 || gz.points < 1)
    throw Error(ErrorKind::Validation, "sweeps need at least one point");
  if (format != "json" && format != "csv")
    throw Error(ErrorKind::Validation, "format must be json or csv");
  if (scheme != "field_theoretic" && scheme != "electrostatic")
    throw Error(ErrorKind::Validation, "scheme must be field_theoretic or electrostatic");
  if ((alpha_se.has_value() + coupling.has_value() + strong_coupling) > 1)
    throw Error(ErrorKind::Validation, "give only one of --coupling, --alpha-se and --strong");
  if (!pre_renormalized && !eps)
    throw Error(ErrorKind::Validation, "a bare coupling needs --eps for the counterterm");
  for (int s : s_exp)
    if (s < 1 || s > 3) throw Error(ErrorKind::Validation, "s must be 1, 2 or 3");
  if (!(sum_tol > 0.0) || !(wood_tol > 0.0) || !(flux_alert > 0.0))
    throw Error(ErrorKind::Validation, "tolerances must be positive");
}

double RunConfig::spacing() const { return a ? *a : 1.0 / std::sqrt(*rho); }

json to_json(const RunConfig& c) {
  json j;
  j["subcommand"] = c.subcommand;
  j["mode"] = c.mode;
  j["coupling"] = c.coupling ? cplx_json(*c.coupling) : json(nullptr);
  j["pre_renormalized"] = c.pre_renormalized;
  j["strong_coupling"] = c.strong_coupling;
  j["alpha_se"] = c.alpha_se ? json(*c.alpha_se) : json(nullptr);
  j["scheme"] = c.scheme;
  j["eps"] = c.eps ? json(*c.eps) : json(nullptr);
  j["omega"] = cplx_json(c.omega);
  j["k_par"] = c.k_par;
  j["a"] = c.a ? json(*c.a) : json(nullptr);
  j["rho"] = c.rho ? json(*c.rho) : json(nullptr);
  j["s"] = c.s_exp;
  j["direct_radius"] = c.direct_radius;
  j["sweep"] = {{"param", c.sweep.param},
                {"start", c.sweep.start},
                {"stop", c.sweep.stop},
                {"points", c.sweep.points}};
  j["grid"] = {{"x", axis_json(c.gx)}, {"y", axis_json(c.gy)}, {"z", axis_json(c.gz)}};
  j["field_planewave_only"] = c.field_planewave_only;
  j["centers_file"] = c.centers_file;
  j["centers"] = c.centers;
  j["a_values"] = c.a_values;
  j["eps_values"] = c.eps_values;
  j["remove_singular_term_by_hand"] = c.remove_singular_term_by_hand;
  j["limits_tolerance"] = c.limits_tolerance;
  j["tolerances"] = {{"sum", c.sum_tol}, {"wood", c.wood_tol}, {"flux_alert", c.flux_alert}};
  j["format"] = c.format;
  j["csv_path"] = c.csv_path;
  return j;
}

RunConfig from_json(const json& in) {
  // accept a whole output document as well as a bare inputs block
  const json& j = in.contains("inputs") ? in.at("inputs") : in;
  RunConfig c;
  get(j, "subcommand", c.subcommand);
  get(j, "mode", c.mode);
  if (j.contains("coupling") && !j.at("coupling").is_null()) c.coupling = json_cplx(j.at("coupling"));
  get(j, "pre_renormalized", c.pre_renormalized);
  get(j, "strong_coupling", c.strong_coupling);
  get_opt(j, "alpha_se", c.alpha_se);
  get(j, "scheme", c.scheme);
  get_opt(j, "eps", c.eps);
  if (j.contains("omega")) c.omega = json_cplx(j.at("omega"));
  get(j, "k_par", c.k_par);
  get_opt(j, "a", c.a);
  get_opt(j, "rho", c.rho);
  get(j, "s", c.s_exp);
  get(j, "direct_radius", c.direct_radius);
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    get(s, "param", c.sweep.param);
    get(s, "start", c.sweep.start);
    get(s, "stop", c.sweep.stop);
    get(s, "points", c.sweep.points);
  }
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    if (g.contains("x")) c.gx = json_axis(g.at("x"));
    if (g.contains("y")) c.gy = json_axis(g.at("y"));
    if (g.contains("z")) c.gz = json_axis(g.at("z"));
  }
  get(j, "field_planewave_only", c.field_planewave_only);
  get(j, "centers_file", c.centers_file);
  get(j, "centers", c.centers);
  get(j, "a_values", c.a_values);
  get(j, "eps_values", c.eps_values);
  get(j, "remove_singular_term_by_hand", c.remove_singular_term_by_hand);
  get(j, "limits_tolerance", c.limits_tolerance);
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    get(t, "sum", c.sum_tol);
    get(t, "wood", c.wood_tol);
    get(t, "flux_alert", c.flux_alert);
  }
  get(j, "format", c.format);
  get(j, "csv_path", c.csv_path);
  return c;
}

}  // namespace cli

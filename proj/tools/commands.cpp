#include "commands.hpp"

#include "dlat/lattice_sums.hpp"
#include "dlat/limits.hpp"
#include "dlat/multi_center.hpp"
#include "dlat/plane_lattice.hpp"
#include "dlat/single_center.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

namespace cli {

using dlat::Error;
using dlat::ErrorKind;
using dlat::ModeKind;
using dlat::Vec2;
using dlat::Vec3;

unsigned thread_count() {
  if (const char* env = std::getenv("DIRAC_LATTICE_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && n >= 1) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

// Evaluates fn(0..n-1) on up to thread_count() workers; results keep index
// order and the first exception (by index) is rethrown.
template <class T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& fn) {
  std::vector<T> out(n);
  std::vector<std::exception_ptr> errs(n);
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), n));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

dlat::RenormScheme scheme_of(const RunConfig& c) {
  return c.scheme == "electrostatic" ? dlat::RenormScheme::Electrostatic
                                     : dlat::RenormScheme::FieldTheoretic;
}

dlat::EwaldParams sum_params(const RunConfig& c) {
  dlat::EwaldParams p;
  p.tolerance = c.sum_tol;
  p.wood_tolerance = c.wood_tol;
  return p;
}

// Renormalized inverse coupling 1/g_r (scalar) or 1/alpha_ren (EM).
cplx inverse_coupling(const RunConfig& c, ModeKind mode, const dlat::Frequency& w) {
  if (c.strong_coupling) return 0.0;
  if (c.alpha_se) {
    if (mode != ModeKind::Scalar)
      throw Error(ErrorKind::Validation, "--alpha-se applies to the scalar mode only");
    return -*c.alpha_se / (4.0 * dlat::pi);
  }
  if (!c.coupling) throw Error(ErrorKind::Validation, "give --coupling, --alpha-se or --strong");
  if (*c.coupling == cplx(0.0, 0.0)) throw Error(ErrorKind::Validation, "coupling must be nonzero");
  if (c.pre_renormalized) return 1.0 / *c.coupling;
  dlat::Mode m{mode, *c.coupling, false};
  return dlat::renormalize_coupling(m, *c.eps, scheme_of(c), w);
}

// Coupling as used by the limits module (g_r or alpha_ren).
cplx plain_coupling(const RunConfig& c, ModeKind mode, const dlat::Frequency& w) {
  const cplx inv = inverse_coupling(c, mode, w);
  if (inv == cplx(0.0, 0.0)) throw Error(ErrorKind::Validation, "limits needs a finite coupling");
  return 1.0 / inv;
}

struct Point {
  double a;
  Vec2 k;
  cplx omega;
};

std::vector<Point> sweep_points(const RunConfig& c) {
  const Point base{c.spacing(), Vec2(c.k_par[0], c.k_par[1]), c.omega};
  if (c.sweep.param == "none") return {base};
  std::vector<Point> pts;
  for (double v : c.sweep.values()) {
    Point p = base;
    if (c.sweep.param == "a") p.a = v;
    else if (c.sweep.param == "kx") p.k.x() = v;
    else if (c.sweep.param == "ky") p.k.y() = v;
    else if (c.sweep.param == "omega") p.omega = cplx(v, c.omega.imag());
    else throw Error(ErrorKind::Validation, "sweep parameter must be a, kx, ky or omega");
    pts.push_back(p);
  }
  return pts;
}

void append(std::vector<Row>& dst, std::vector<Row>&& src) {
  for (auto& r : src) dst.push_back(std::move(r));
}

json nullable(const std::optional<cplx>& z) { return z ? cplx_json(*z) : json(nullptr); }

}  // namespace

Output run_sum(const RunConfig& c) {
  const auto pts = sweep_points(c);
  const dlat::EwaldParams params = sum_params(c);
  struct Cell {
    std::vector<Row> rows;
    std::vector<json> errs;
  };
  auto cells = parallel_map<Cell>(pts.size(), [&](std::size_t i) {
    Cell cell;
    const Point& p = pts[i];
    for (int s : c.s_exp) {
      const dlat::LatticeSumResult r =
          c.direct_radius > 0 ? dlat::j_sum_direct(s, p.omega, p.k, p.a, c.direct_radius)
                              : dlat::j_sum(s, p.omega, p.k, p.a, params);
      cell.rows.push_back({{"a", p.a},
                           {"kx", p.k.x()},
                           {"ky", p.k.y()},
                           {"omega", cplx_json(p.omega)},
                           {"s", s},
                           {"J", cplx_json(r.value)}});
      cell.errs.push_back({{"s", s}, {"abs_error", r.abs_error_estimate}, {"terms", r.terms_used}});
    }
    return cell;
  });
  Output out;
  out.method = c.direct_radius > 0 ? "direct_damped" : "ewald_split";
  json errs = json::array();
  for (auto& cell : cells) {
    append(out.table, std::move(cell.rows));
    for (auto& e : cell.errs) errs.push_back(std::move(e));
  }
  out.error_estimates["points"] = errs;
  return out;
}

Output run_single(const RunConfig& c) {
  const ModeKind mode = dlat::parse_mode(c.mode);
  const dlat::Frequency w(c.omega);
  Output out;
  Row row{{"mode", std::string(dlat::to_string(mode))}};
  if (c.alpha_se) {
    const dlat::ExtensionParameter al{*c.alpha_se};
    if (mode != ModeKind::Scalar)
      throw Error(ErrorKind::Validation, "--alpha-se applies to the scalar mode only");
    row.emplace_back("f", cplx_json(dlat::scattering_amplitude_sae(al, w)));
    const auto bs = dlat::bound_state(al);
    row.emplace_back("kappa", bs ? json(bs->kappa) : json(nullptr));
    row.emplace_back("normalization", bs ? json(bs->normalization) : json(nullptr));
    row.emplace_back("scattering_length", dlat::scattering_length(al));
    if (c.eps) {
      const auto bp = dlat::sae_boundary_params(al, *c.eps);
      row.emplace_back("mu", bp.mu);
      row.emplace_back("theta", bp.theta);
    }
    out.method = "self_adjoint_extension";
  } else {
    out.method = c.pre_renormalized ? "renormalized_coupling" : "bare_coupling_with_counterterm";
  }
  const cplx inv = inverse_coupling(c, mode, w);
  const cplx p0 = dlat::phi0(mode, inv, w, scheme_of(c));
  row.emplace_back("phi0", cplx_json(p0));
  // scalar: psi_sc = f e^{i w r}/r with f = -1/(4 pi phi0)
  if (mode == ModeKind::Scalar && !c.alpha_se && p0 != cplx(0.0, 0.0))
    row.emplace_back("f", cplx_json(-1.0 / (4.0 * dlat::pi * p0)));
  if (c.eps) {
    row.emplace_back("eps", *c.eps);
    row.emplace_back("counterterm", cplx_json(dlat::counterterm(mode, *c.eps, w)));
  }
  row.emplace_back("radiative_part", cplx_json(dlat::radiative_part(mode, w)));
  out.table.push_back(row);
  for (auto& [k, v] : row) out.values[k] = v;
  return out;
}

std::vector<std::array<double, 3>> read_centers_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Validation, "cannot open centers file '" + path + "'");
  std::vector<std::array<double, 3>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    std::array<double, 3> p{};
    if (!(ss >> p[0] >> p[1] >> p[2])) {
      if (lineno == 1 && out.empty()) continue;  // header
      throw Error(ErrorKind::Validation,
                  "centers file line " + std::to_string(lineno) + ": expected x,y,z");
    }
    out.push_back(p);
  }
  if (out.empty()) throw Error(ErrorKind::Validation, "centers file has no points");
  return out;
}

Output run_solve(const RunConfig& c) {
  if (!c.alpha_se) throw Error(ErrorKind::Validation, "solve needs --alpha-se");
  if (c.centers.empty()) throw Error(ErrorKind::Validation, "solve needs --centers");
  std::vector<Vec3> centers;
  for (const auto& p : c.centers) centers.emplace_back(p[0], p[1], p[2]);
  const dlat::Frequency w(c.omega);
  const dlat::WaveVector k = dlat::make_incident_wave(w, Vec2(c.k_par[0], c.k_par[1]));
  const auto sys = dlat::assemble(centers, dlat::ExtensionParameter{*c.alpha_se}, w, k);
  const auto sol = dlat::solve(sys);
  Output out;
  out.method = "dense_lu_partial_pivoting";
  for (std::size_t i = 0; i < centers.size(); ++i)
    out.table.push_back({{"index", i},
                         {"x", centers[i].x()},
                         {"y", centers[i].y()},
                         {"z", centers[i].z()},
                         {"f", cplx_json(sol.f(static_cast<Eigen::Index>(i)))}});
  out.values["k3"] = cplx_json(k.k3);
  out.error_estimates["residual_norm"] = sol.residual_norm;
  out.error_estimates["condition_estimate"] = sol.condition_estimate;
  return out;
}

Output run_reflect(const RunConfig& c) {
  const ModeKind mode = dlat::parse_mode(c.mode);
  const auto pts = sweep_points(c);
  const dlat::EwaldParams params = sum_params(c);
  for (const auto& p : pts)
    if (p.omega.imag() != 0.0)
      throw Error(ErrorKind::Validation, "reflect needs a real frequency");
  struct Cell {
    std::vector<Row> rows;
    double deficit;
  };
  auto cells = parallel_map<Cell>(pts.size(), [&](std::size_t i) {
    const Point& p = pts[i];
    const dlat::Frequency w(p.omega);
    const double om = p.omega.real();
    const dlat::WaveVector k = dlat::make_incident_wave(w, p.k);
    const cplx inv = dlat::lattice_inverse_coupling(mode, inverse_coupling(c, mode, w), w,
                                                    scheme_of(c));
    const cplx phi = dlat::phi_tilde(mode, inv, w, k, p.a, params);
    const auto orders = dlat::reflection_orders(mode, phi, om, k, p.a);
    Cell cell;
    cell.deficit = dlat::flux_deficit(mode, orders, om, k);
    for (const auto& o : orders)
      cell.rows.push_back({{"a", p.a},
                           {"kx", p.k.x()},
                           {"ky", p.k.y()},
                           {"omega", om},
                           {"n1", o.n.x()},
                           {"n2", o.n.y()},
                           {"qx", o.q_n.x()},
                           {"qy", o.q_n.y()},
                           {"gamma", cplx_json(o.gamma_n)},
                           {"laue_x", o.laue_direction.x()},
                           {"laue_y", o.laue_direction.y()},
                           {"r", nullable(o.r_n)},
                           {"flux_deficit", cell.deficit}});
    return cell;
  });
  Output out;
  out.method = "ewald_split";
  json deficits = json::array(), alerts = json::array();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    deficits.push_back(cells[i].deficit);
    if (std::abs(cells[i].deficit) > c.flux_alert) alerts.push_back(i);
    append(out.table, std::move(cells[i].rows));
  }
  out.values["flux_alerts"] = alerts;
  out.error_estimates["flux_deficit"] = deficits;
  out.error_estimates["sum_tolerance"] = c.sum_tol;
  return out;
}

Output run_field(const RunConfig& c) {
  const ModeKind mode = dlat::parse_mode(c.mode);
  const double a = c.spacing();
  const dlat::Frequency w(c.omega);
  const dlat::WaveVector k = dlat::make_incident_wave(w, Vec2(c.k_par[0], c.k_par[1]));
  const dlat::EwaldParams params = sum_params(c);
  const cplx inv =
      dlat::lattice_inverse_coupling(mode, inverse_coupling(c, mode, w), w, scheme_of(c));
  const cplx phi = dlat::phi_tilde(mode, inv, w, k, a, params);
  const bool spherical =
      mode == ModeKind::Scalar && c.omega.imag() > 0.0 && !c.field_planewave_only;
  // scalar lattice amplitude f_0 = -1/(4 pi phi~)
  const cplx f0 = spherical ? -1.0 / (4.0 * dlat::pi * phi) : cplx{};

  std::vector<Vec3> xs;
  for (double x : c.gx.values())
    for (double y : c.gy.values())
      for (double z : c.gz.values()) xs.emplace_back(x, y, z);
  auto rows = parallel_map<Row>(xs.size(), [&](std::size_t i) {
    const Vec3& x = xs[i];
    Row row{{"x", x.x()}, {"y", x.y()}, {"z", x.z()}};
    row.emplace_back("spherical",
                     spherical ? cplx_json(dlat::field_spherical(f0, x, w, k, a)) : json(nullptr));
    row.emplace_back("planewave", x.z() != 0.0
                                      ? cplx_json(dlat::field_planewave(mode, phi, x, w, k, a))
                                      : json(nullptr));
    return row;
  });
  Output out;
  out.method = spherical ? "spherical_and_planewave" : "planewave";
  out.table = std::move(rows);
  out.values["phi_tilde"] = cplx_json(phi);
  if (spherical) out.values["f0"] = cplx_json(f0);
  return out;
}

Output run_limits(const RunConfig& c) {
  const ModeKind mode = dlat::parse_mode(c.mode);
  const dlat::Frequency w(c.omega);
  dlat::LimitsParams P;
  P.omega = c.omega;
  P.k_par = Vec2(c.k_par[0], c.k_par[1]);
  P.coupling = plain_coupling(c, mode, w);
  P.a_ref = c.spacing();
  P.a_values = c.a_values;
  P.eps_values = c.eps_values;
  P.remove_singular_term_by_hand = c.remove_singular_term_by_hand;
  P.tolerance = c.limits_tolerance;
  P.sums = sum_params(c);
  const auto rep = dlat::order_of_limits_report(mode, P);

  auto path_row = [](const dlat::LimitReport& r) -> Row {
    return {{"path", std::string(dlat::to_string(r.path))},
            {"outcome", std::string(dlat::to_string(r.outcome))},
            {"limiting_r", nullable(r.limiting_r)},
            {"divergence_exponent",
             r.divergence_exponent ? json(*r.divergence_exponent) : json(nullptr)}};
  };
  Output out;
  out.method = "order_of_limits";
  out.table.push_back(path_row(rep.eps_first));
  out.table.push_back(path_row(rep.a_first));
  out.values["mode"] = std::string(dlat::to_string(mode));
  out.values["outcome"] = std::string(dlat::to_string(rep.outcome));
  out.values["continuum_r"] = nullable(rep.continuum_r);
  out.values["subtracted_r"] = nullable(rep.subtracted_r);
  out.values["note"] = rep.note;
  out.error_estimates["tolerance"] = c.limits_tolerance;
  return out;
}

Output dispatch(const RunConfig& c) {
  c.validate();
  if (c.subcommand == "sum") return run_sum(c);
  if (c.subcommand == "single") return run_single(c);
  if (c.subcommand == "solve") return run_solve(c);
  if (c.subcommand == "reflect") return run_reflect(c);
  if (c.subcommand == "field") return run_field(c);
  if (c.subcommand == "limits") return run_limits(c);
  throw Error(ErrorKind::Validation, "unknown subcommand '" + c.subcommand + "'");
}

json rows_json(const std::vector<Row>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    json o = json::object();
    for (const auto& [k, v] : r) o[k] = v;
    arr.push_back(std::move(o));
  }
  return arr;
}

namespace {

bool is_cplx(const json& v) { return v.is_object() && v.contains("re") && v.contains("im"); }

std::string cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  }
  return v.dump();
}

}  // namespace

std::string rows_csv(const std::vector<Row>& rows) {
  // header from the first row; complex columns keep their split even if null
  std::vector<std::pair<std::string, bool>> cols;
  for (const auto& r : rows) {
    for (const auto& [k, v] : r) {
      auto it = std::find_if(cols.begin(), cols.end(), [&](const auto& c) { return c.first == k; });
      if (it == cols.end()) cols.emplace_back(k, is_cplx(v));
      else if (is_cplx(v)) it->second = true;
    }
  }
  std::ostringstream os;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) os << ',';
    if (cols[i].second) os << cols[i].first << "_re," << cols[i].first << "_im";
    else os << cols[i].first;
  }
  os << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i) os << ',';
      const json* v = nullptr;
      for (const auto& [k, val] : r)
        if (k == cols[i].first) v = &val;
      if (cols[i].second) {
        if (v && is_cplx(*v)) os << cell(v->at("re")) << ',' << cell(v->at("im"));
        else os << ',';
      } else {
        os << (v ? cell(*v) : std::string());
      }
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace cli

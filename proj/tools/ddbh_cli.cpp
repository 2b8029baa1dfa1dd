// Command-line front end: steady states, sweeps, phase diagrams and spectra.
//
//   ddbh-cli <command> [--preset figN] [--u ..] [--j ..] [--f ..] [--gamma ..] [--out file] [--format csv|json]
//
// All physics inputs are ratios over the detuning. Outputs are deterministic for a
// fixed configuration: the header echoes every setting and a hash of them, and
// carries no timestamps.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ddbh/bogoliubov.hpp"
#include "ddbh/exact_prep.hpp"
#include "ddbh/gross_pitaevskii.hpp"
#include "ddbh/lindblad.hpp"
#include "ddbh/meanfield.hpp"
#include "ddbh/weak_drive.hpp"

using namespace ddbh;
using json = nlohmann::ordered_json;

namespace {

const std::vector<std::string> kCommands{"single",   "oracle",   "meanfield", "sweep",   "phase-diagram",
                                         "gp",       "spectrum", "weakdrive", "validate"};
const std::vector<std::string> kPresets{"fig1", "fig2", "fig3", "fig4", "fig5", "fig6"};

struct RunConfig {
  std::string command;
  std::string preset;
  // Physics, as ratios over the detuning.
  double u = 2.0, j = 1.0, f = 0.4, gamma = 0.2;
  double delta_omega = 1.0;  // absolute scale, metadata only
  // Grids.
  std::string axis = "J";
  double from = 0.0, to = 3.0;
  int points = 31;
  bool log_grid = false;
  double u_from = 0.4, u_to = 3.0, j_from = 0.0, j_to = 3.0;
  int u_points = 20, j_points = 20;
  int path_points = 20;  // segments per leg of the Gamma-X-M-Gamma path
  int photons = 2;       // n of the n-photon resonance (fig3)
  // Numerics.
  int nmax_cap = 60;
  int nmax = 0;  // fixed fluctuation truncation; 0 selects it adaptively
  int kgrid = 3;
  double tol_series = 1e-14;
  double tol_fixedpoint = 1e-10;
  double leak_tol = 1e-12;
  bool stability = false;
  std::string selector = "smallest-decay";
  unsigned workers = 0;
  std::uint64_t seed = 20240611;
  // Output.
  std::string out;
  std::string format = "csv";
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Canonical key=value view of the configuration; the header and hash use it.
std::map<std::string, std::string> canonical(const RunConfig& c) {
  return {{"command", c.command},
          {"preset", c.preset.empty() ? "none" : c.preset},
          {"u", num(c.u)},
          {"j", num(c.j)},
          {"f", num(c.f)},
          {"gamma", num(c.gamma)},
          {"delta-omega", num(c.delta_omega)},
          {"axis", c.axis},
          {"from", num(c.from)},
          {"to", num(c.to)},
          {"points", std::to_string(c.points)},
          {"log", c.log_grid ? "true" : "false"},
          {"u-from", num(c.u_from)},
          {"u-to", num(c.u_to)},
          {"u-points", std::to_string(c.u_points)},
          {"j-from", num(c.j_from)},
          {"j-to", num(c.j_to)},
          {"j-points", std::to_string(c.j_points)},
          {"path-points", std::to_string(c.path_points)},
          {"photons", std::to_string(c.photons)},
          {"nmax-cap", std::to_string(c.nmax_cap)},
          {"nmax", std::to_string(c.nmax)},
          {"kgrid", std::to_string(c.kgrid)},
          {"tol-series", num(c.tol_series)},
          {"tol-fixedpoint", num(c.tol_fixedpoint)},
          {"leak-tol", num(c.leak_tol)},
          {"stability", c.stability ? "true" : "false"},
          {"selector", c.selector},
          {"seed", std::to_string(c.seed)},
          {"format", c.format}};
}

/// FNV-1a, 64 bit.
std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_hash(const std::map<std::string, std::string>& kv) {
  std::string s;
  for (const auto& [k, v] : kv) s += k + "=" + v + "\n";
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, fnv1a(s));
  return buf;
}

/// Caption conditions of each figure. Only settings the user did not give are touched.
void apply_preset(RunConfig& c, const CLI::App& app) {
  auto set = [&](const char* flag, auto& field, auto value) {
    if (app.count(flag) == 0) field = value;
  };
  if (c.preset.empty()) return;
  if (c.preset == "fig1") {
    // Single cavity at the two-photon resonance; gamma spans F^2/10 .. F/5.
    set("--u", c.u, 2.0);
    set("--j", c.j, 0.0);
    set("--f", c.f, 1e-2);
    set("--axis", c.axis, std::string("gamma"));
    set("--from", c.from, c.f * c.f / 10.0);
    set("--to", c.to, c.f / 5.0);
    set("--points", c.points, 41);
    set("--log", c.log_grid, true);
  } else if (c.preset == "fig2") {
    set("--u", c.u, 2.0);
    set("--f", c.f, 1e-2);
    set("--gamma", c.gamma, c.f * c.f / 10.0);
    set("--axis", c.axis, std::string("J"));
    set("--from", c.from, 0.0);
    set("--to", c.to, 2.0);
    set("--points", c.points, 81);
  } else if (c.preset == "fig3") {
    // n-photon resonance with F^n / (dw^(n-1) gamma) = 10.
    if (c.photons < 2) throw Error(ErrorCode::InvalidArgument, "--photons must be >= 2");
    set("--u", c.u, weak::resonance_detuning(c.photons));
    set("--f", c.f, 1e-2);
    set("--gamma", c.gamma, std::pow(c.f, c.photons) / 10.0);
    set("--axis", c.axis, std::string("J"));
    set("--from", c.from, 0.0);
    set("--to", c.to, 2.0 * weak::critical_coupling(c.photons, 1.0));
    set("--points", c.points, 81);
  } else if (c.preset == "fig4") {
    set("--j", c.j, 3.0);
    set("--f", c.f, 0.4);
    set("--gamma", c.gamma, 0.2);
    set("--axis", c.axis, std::string("U"));
    set("--from", c.from, 0.1);
    set("--to", c.to, 2.0);
    set("--points", c.points, 39);
  } else if (c.preset == "fig5") {
    set("--f", c.f, 0.4);
    set("--gamma", c.gamma, 0.2);
    set("--u-from", c.u_from, 0.4);
    set("--u-to", c.u_to, 3.0);
    set("--u-points", c.u_points, 20);
    set("--j-from", c.j_from, 0.0);
    set("--j-to", c.j_to, 3.0);
    set("--j-points", c.j_points, 20);
  } else if (c.preset == "fig6") {
    set("--u", c.u, 0.5);
    set("--j", c.j, 3.0);
    set("--f", c.f, 0.4);
    set("--gamma", c.gamma, 0.2);
  }
}

// ---------------------------------------------------------------------------
// Tables

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  json extra = json::object();  // JSON-only payload (density matrices)
  std::string summary;          // printed to stdout when writing to a file
};

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return num(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

json cell_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return std::isfinite(*d) ? json(*d) : json(nullptr);
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  return std::get<std::string>(c);
}

void write_table(std::ostream& os, const RunConfig& c, const Table& t) {
  const auto kv = canonical(c);
  const std::string hash = config_hash(kv);
  if (c.format == "json") {
    json doc;
    json cfg = json::object();
    for (const auto& [k, v] : kv) cfg[k] = v;
    doc["config"] = cfg;
    doc["config_hash"] = hash;
    doc["columns"] = t.columns;
    json rows = json::array();
    for (const auto& r : t.rows) {
      json row = json::array();
      for (const auto& x : r) row.push_back(cell_json(x));
      rows.push_back(row);
    }
    doc["rows"] = rows;
    for (const auto& [k, v] : t.extra.items()) doc[k] = v;
    os << doc.dump(1) << "\n";
    return;
  }
  os << "# ddbh-cli " << c.command << "\n";
  for (const auto& [k, v] : kv) os << "# " << k << " = " << v << "\n";
  os << "# config-hash = " << hash << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << cell_text(r[i]);
    os << "\n";
  }
}

json rho_json(const DensityMatrix& rho) {
  json re = json::array(), im = json::array();
  for (int n = 0; n < rho.dim(); ++n) {
    json rr = json::array(), ii = json::array();
    for (int m = 0; m < rho.dim(); ++m) {
      rr.push_back(rho.matrix()(n, m).real());
      ii.push_back(rho.matrix()(n, m).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return json{{"dim", rho.dim()}, {"re", re}, {"im", im}};
}

// ---------------------------------------------------------------------------
// Commands

SystemParams params_of(const RunConfig& c) {
  SystemParams p = SystemParams::from_ratios(c.u, c.f, c.gamma, c.j, c.delta_omega);
  p.check();
  return p;
}

meanfield::SolveOptions solve_options(const RunConfig& c) {
  meanfield::SolveOptions o;
  o.series.rel_tol = c.tol_series;
  o.fixed_point.tol = c.tol_fixedpoint;
  o.with_stability = c.stability;
  o.kgrid = c.kgrid;
  o.fluctuation.n_max = c.nmax;
  o.fluctuation.truncation.leak_tol = c.leak_tol;
  o.fluctuation.truncation.n_max_ceiling = c.nmax_cap;
  return o;
}

oracle::AdaptiveConfig adaptive(const RunConfig& c) {
  oracle::AdaptiveConfig a;
  a.leak_tol = c.leak_tol;
  a.n_max_ceiling = c.nmax_cap;
  return a;
}

double g2_or_nan(const Observables& o) { return o.g2 ? *o.g2 : std::nan(""); }

std::vector<double> axis_grid(const RunConfig& c) {
  if (c.points < 1) throw Error(ErrorCode::InvalidArgument, "--points must be >= 1");
  if (c.log_grid && !(c.from > 0.0 && c.to > 0.0)) throw Error(ErrorCode::InvalidArgument, "log grid needs positive ends");
  std::vector<double> g;
  for (int i = 0; i < c.points; ++i) {
    const double t = c.points == 1 ? 0.0 : static_cast<double>(i) / (c.points - 1);
    g.push_back(c.log_grid ? c.from * std::pow(c.to / c.from, t) : c.from + t * (c.to - c.from));
  }
  return g;
}

std::vector<double> linear(double a, double b, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "grid needs at least one point");
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
  return g;
}

meanfield::Axis parse_axis(const std::string& s) {
  if (s == "J") return meanfield::Axis::J;
  if (s == "U") return meanfield::Axis::U;
  if (s == "F") return meanfield::Axis::F;
  if (s == "gamma") return meanfield::Axis::Gamma;
  throw Error(ErrorCode::InvalidArgument, "unknown axis " + s);
}

Table run_single(const RunConfig& c) {
  SystemParams p = params_of(c);
  p.j = 0.0;
  SeriesConfig sc;
  sc.rel_tol = c.tol_series;
  const Observables o = exact::observables(p, sc);
  Table t{{"u", "f", "gamma", "n", "g2", "re_b", "im_b"}, {}};
  t.rows.push_back({c.u, c.f, c.gamma, o.n_mean, g2_or_nan(o), o.coherence.real(), o.coherence.imag()});
  return t;
}

Table run_oracle(const RunConfig& c) {
  SystemParams p = params_of(c);
  p.j = 0.0;
  const auto ss = oracle::adaptive_steady_state(p, p.f, adaptive(c));
  const Observables o = observables_from(ss.rho);
  Table t{{"u", "f", "gamma", "n_max", "n", "g2", "re_b", "im_b"}, {}};
  t.rows.push_back({c.u, c.f, c.gamma, static_cast<long long>(ss.rho.n_max()), o.n_mean, g2_or_nan(o),
                    o.coherence.real(), o.coherence.imag()});
  t.extra["rho"] = rho_json(ss.rho);
  return t;
}

const std::vector<std::string> kSolutionColumns{"index", "re_b", "im_b", "n", "g2", "residual", "stability"};

void append_solution(std::vector<Cell>& row, std::size_t i, const MeanFieldSolution& s) {
  row.insert(row.end(), {static_cast<long long>(i), s.b.real(), s.b.imag(), s.obs.n_mean, g2_or_nan(s.obs), s.residual,
                         std::string(to_string(s.stable))});
}

Table run_meanfield(const RunConfig& c) {
  const auto sols = meanfield::solve(params_of(c), solve_options(c));
  Table t{kSolutionColumns, {}};
  for (std::size_t i = 0; i < sols.size(); ++i) {
    std::vector<Cell> row;
    append_solution(row, i, sols[i]);
    t.rows.push_back(row);
  }
  return t;
}

Table run_sweep(const RunConfig& c) {
  const SystemParams base = params_of(c);
  const auto axis = parse_axis(c.axis);
  const auto pts = meanfield::sweep(base, axis, axis_grid(c), solve_options(c));
  Table t;
  t.columns = {c.axis, "xi", "gp_n_max"};
  t.columns.insert(t.columns.end(), kSolutionColumns.begin(), kSolutionColumns.end());
  t.columns.push_back("error");
  for (const auto& pt : pts) {
    const SystemParams p = meanfield::with_axis(base, axis, pt.value);
    const double xi = weak::xi(std::abs(p.f) / p.delta_omega, p.gamma / p.delta_omega);
    const auto roots = gp::gp_density_roots(p);
    const double gp_n = roots.empty() ? std::nan("") : roots.back().n;
    if (pt.solutions.empty()) {
      t.rows.push_back({pt.value, xi, gp_n, -1LL, std::nan(""), std::nan(""), std::nan(""), std::nan(""),
                        std::nan(""), std::string("none"), pt.error});
      continue;
    }
    for (std::size_t i = 0; i < pt.solutions.size(); ++i) {
      std::vector<Cell> row{pt.value, xi, gp_n};
      append_solution(row, i, pt.solutions[i]);
      row.push_back(std::string());
      t.rows.push_back(row);
    }
  }
  return t;
}

Table run_phase_diagram(const RunConfig& c) {
  const SystemParams base = SystemParams::from_ratios(1.0, c.f, c.gamma, 0.0, c.delta_omega);
  base.check();
  meanfield::PhaseDiagramOptions opt;
  opt.solve.series.rel_tol = c.tol_series;
  opt.solve.fixed_point.tol = c.tol_fixedpoint;
  opt.solve.fluctuation.n_max = c.nmax;
  opt.solve.fluctuation.truncation.n_max_ceiling = c.nmax_cap;
  opt.kgrid = c.kgrid;
  opt.workers = c.workers;
  const auto grid = meanfield::phase_diagram(base, linear(c.u_from, c.u_to, c.u_points),
                                             linear(c.j_from, c.j_to, c.j_points), opt);
  Table t{{"u", "j", "n_solutions", "n_stable", "prep", "gp", "converged", "error"}, {}};
  int prep = 0, gpb = 0, prep_only = 0;
  for (const auto& row : grid)
    for (const auto& cell : row) {
      const bool q = cell.classification == meanfield::Classification::Bistable;
      const bool g = cell.gp_classification == meanfield::Classification::Bistable;
      prep += q;
      gpb += g;
      prep_only += q && !g;
      t.rows.push_back({cell.u_over_dw, cell.j_over_dw, static_cast<long long>(cell.n_solutions),
                        static_cast<long long>(cell.n_solutions_stable), std::string(meanfield::to_string(cell.classification)),
                        std::string(meanfield::to_string(cell.gp_classification)), static_cast<long long>(cell.converged),
                        cell.error});
    }
  t.summary = "prep-bistable " + std::to_string(prep) + ", gp-bistable " + std::to_string(gpb) + ", prep-only " +
              std::to_string(prep_only);
  return t;
}

Table run_gp(const RunConfig& c) {
  const SystemParams p = params_of(c);
  const std::string cls = gp::gp_bistable(p) == gp::Stability::Bistable ? "bistable" : "monostable";
  Table t{{"index", "n", "re_beta", "im_beta", "classification"}, {}};
  const auto roots = gp::gp_density_roots(p);
  for (std::size_t i = 0; i < roots.size(); ++i)
    t.rows.push_back({static_cast<long long>(i), roots[i].n, roots[i].beta.real(), roots[i].beta.imag(), cls});
  return t;
}

/// Low-energy branches along Gamma-X-M-Gamma for the densest stable state, in units of gamma.
Table run_spectrum(const RunConfig& c) {
  const SystemParams p = params_of(c);
  meanfield::SolveOptions so = solve_options(c);
  so.with_stability = true;
  const auto sols = meanfield::solve(p, so);
  const MeanFieldSolution* s = meanfield::densest(sols, true);
  if (!s) s = meanfield::densest(sols);
  const auto roots = gp::gp_density_roots(p);
  std::vector<double> arc;
  const auto path = square_lattice_path(c.path_points, &arc);

  bogoliubov::SpectrumOptions opt;
  if (c.selector == "closest-to-gp") {
    opt.selector = bogoliubov::BranchSelector::ClosestToGP;
    opt.gp_reference = roots.back();
  } else if (c.selector != "smallest-decay") {
    throw Error(ErrorCode::InvalidArgument, "unknown selector " + c.selector);
  }
  const auto q = bogoliubov::spectrum(p, *s, path, so.fluctuation, opt);
  const auto g = gp::gp_spectrum(p, roots.back(), path);
  Table t{{"s", "kx", "ky", "re_w1", "im_w1", "re_w2", "im_w2", "gp_re_w1", "gp_im_w1", "gp_re_w2", "gp_im_w2"}, {}};
  for (std::size_t i = 0; i < path.size(); ++i) {
    std::vector<Cell> row{arc[i], path[i].kx, path[i].ky};
    for (const auto& pair : {q.low_energy[i], g.low_energy[i]})
      for (const Complex& w : pair) {
        row.push_back(w.real() / p.gamma);
        row.push_back(w.imag() / p.gamma);
      }
    t.rows.push_back(row);
  }
  t.summary = "state n=" + num(s->obs.n_mean) + " (" + std::string(to_string(s->stable)) + ")";
  return t;
}

/// Exact single-cavity values against the two-photon closed forms, over the axis grid of gamma.
Table run_weakdrive(const RunConfig& c) {
  SystemParams p = params_of(c);
  p.j = 0.0;
  SeriesConfig sc;
  sc.rel_tol = c.tol_series;
  Table t{{"gamma", "xi", "n", "g2", "re_b", "im_b", "n_closed", "g2_closed", "re_b_closed", "im_b_closed"}, {}};
  for (double g : axis_grid(c)) {
    p.gamma = g * p.delta_omega;
    const double xi = weak::xi(std::abs(p.f) / p.delta_omega, g);
    const Observables ex = exact::observables(p, sc);
    const Observables cf = weak::two_photon_observables(p, xi);
    t.rows.push_back({g, xi, ex.n_mean, g2_or_nan(ex), ex.coherence.real(), ex.coherence.imag(), cf.n_mean,
                      g2_or_nan(cf), cf.coherence.real(), cf.coherence.imag()});
  }
  return t;
}

/// Seeded random grid: closed form against the Lindblad oracle.
Table run_validate(const RunConfig& c) {
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> du(0.1, 4.0), df(0.05, 0.5), dg(0.05, 0.5);
  SeriesConfig sc;
  sc.rel_tol = c.tol_series;
  Table t{{"u", "f", "gamma", "dev_n", "dev_g2", "dev_b"}, {}};
  double wn = 0.0, wg = 0.0, wb = 0.0;
  for (int i = 0; i < c.points; ++i) {
    const double u = du(rng), f = df(rng), g = dg(rng);
    const auto p = SystemParams::from_ratios(u, f, g, 0.0, c.delta_omega);
    const Observables ex = exact::observables(p, sc);
    const Observables orc = observables_from(oracle::adaptive_steady_state(p, p.f, adaptive(c)).rho);
    const double dn = std::abs(ex.n_mean - orc.n_mean) / orc.n_mean;
    const double dg2 = std::abs(*ex.g2 - *orc.g2) / *orc.g2;
    const double db = std::abs(ex.coherence - orc.coherence) / std::abs(orc.coherence);
    wn = std::max(wn, dn);
    wg = std::max(wg, dg2);
    wb = std::max(wb, db);
    t.rows.push_back({u, f, g, dn, dg2, db});
  }
  t.summary = "max relative deviation: n " + num(wn) + ", g2 " + num(wg) + ", b " + num(wb);
  return t;
}

Table dispatch(const RunConfig& c) {
  if (c.command == "single") return run_single(c);
  if (c.command == "oracle") return run_oracle(c);
  if (c.command == "meanfield") return run_meanfield(c);
  if (c.command == "sweep") return run_sweep(c);
  if (c.command == "phase-diagram") return run_phase_diagram(c);
  if (c.command == "gp") return run_gp(c);
  if (c.command == "spectrum") return run_spectrum(c);
  if (c.command == "weakdrive") return run_weakdrive(c);
  return run_validate(c);
}

int fail(const std::string& code, const std::string& message) {
  std::cerr << json{{"error", code}, {"message", message}}.dump() << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig c;
  CLI::App app{"Mean-field driven-dissipative Bose-Hubbard lattice"};
  app.set_config("--config", "", "flat key=value file; flags override it");
  app.add_option("command", c.command, "what to compute")->required()->check(CLI::IsMember(kCommands));
  app.add_option("--preset", c.preset, "figure conditions")->check(CLI::IsMember(kPresets));
  app.add_option("--u", c.u, "U / dw");
  app.add_option("--j", c.j, "J / dw");
  app.add_option("--f", c.f, "F / dw");
  app.add_option("--gamma", c.gamma, "gamma / dw");
  app.add_option("--delta-omega", c.delta_omega, "absolute detuning (metadata)");
  app.add_option("--axis", c.axis, "sweep axis")->check(CLI::IsMember({"J", "U", "F", "gamma"}));
  app.add_option("--from", c.from, "sweep start");
  app.add_option("--to", c.to, "sweep end");
  app.add_option("--points", c.points, "sweep points, or validation samples");
  app.add_flag("--log", c.log_grid, "logarithmic sweep grid");
  app.add_option("--u-from", c.u_from);
  app.add_option("--u-to", c.u_to);
  app.add_option("--u-points", c.u_points);
  app.add_option("--j-from", c.j_from);
  app.add_option("--j-to", c.j_to);
  app.add_option("--j-points", c.j_points);
  app.add_option("--path-points", c.path_points, "segments per leg of the momentum path");
  app.add_option("--photons", c.photons, "n of the n-photon resonance (fig3)");
  app.add_option("--nmax-cap", c.nmax_cap, "largest Fock truncation");
  app.add_option("--nmax", c.nmax, "fixed fluctuation truncation (0: adaptive)");
  app.add_option("--kgrid", c.kgrid, "n x n momenta for stability");
  app.add_option("--tol-series", c.tol_series);
  app.add_option("--tol-fixedpoint", c.tol_fixedpoint);
  app.add_option("--leak-tol", c.leak_tol, "top Fock population bound");
  app.add_flag("--stability", c.stability, "classify solutions by their fluctuation spectrum");
  app.add_option("--selector", c.selector, "low-energy branch rule")
      ->check(CLI::IsMember({"smallest-decay", "closest-to-gp"}));
  app.add_option("--workers", c.workers, "phase-diagram threads (0: all cores)");
  app.add_option("--seed", c.seed, "validation grid seed");
  app.add_option("--out", c.out, "output file (default stdout)");
  app.add_option("--format", c.format)->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("InvalidArgument", e.what());
  }

  try {
    apply_preset(c, app);
    const Table t = dispatch(c);
    if (c.out.empty()) {
      write_table(std::cout, c, t);
    } else {
      std::ofstream os(c.out, std::ios::binary);
      if (!os) return fail("IoError", "cannot open " + c.out);
      write_table(os, c, t);
      if (!t.summary.empty()) std::cout << t.summary << "\n";
    }
  } catch (const Error& e) {
    return fail(std::string(to_string(e.code())), e.what());
  } catch (const std::exception& e) {
    return fail("Internal", e.what());
  }
  return 0;
}

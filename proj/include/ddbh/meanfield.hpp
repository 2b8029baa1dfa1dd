#pragma once

// Self-consistent homogeneous mean field: <b> = coherence of a single cavity
// driven by F' = F - J <b>.

#include <algorithm>
#include <cmath>
#include <future>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "ddbh/bogoliubov.hpp"
#include "ddbh/exact_prep.hpp"
#include "ddbh/gross_pitaevskii.hpp"
#include "ddbh/solution.hpp"

namespace ddbh::meanfield {

inline Complex effective_drive(const SystemParams& p, Complex b) { return p.f - p.j * b; }

inline Complex self_consistent_map(Complex b, const SystemParams& p, const SeriesConfig& cfg = {}) {
  return exact::coherence(p.with_drive(effective_drive(p, b)), cfg);
}

struct SolveOptions {
  SeriesConfig series{};
  FixedPointConfig fixed_point{};
  bool with_stability = false;
  int kgrid = 8;  // n x n momenta over [0, pi]^2
  bogoliubov::FluctuationConfig fluctuation{};
  std::vector<Complex> extra_seeds;  // continuation seeds
};

/// Seeds: 0, the linear-cavity field, the coherent-field roots, and a ring of 8.
inline std::vector<Complex> default_seeds(const SystemParams& p) {
  std::vector<Complex> seeds{Complex{0.0, 0.0}};
  const Complex lin{p.delta_omega + p.j, p.gamma / 2.0};
  if (lin != Complex{0.0, 0.0}) seeds.push_back(p.f / lin);
  double radius = std::abs(p.f) / std::max(std::abs(p.delta_omega), 1e-12);
  for (const gp::GPState& s : gp::gp_density_roots(p)) {
    seeds.push_back(s.beta);
    radius = std::max(radius, std::abs(s.beta));
  }
  constexpr double kPi = 3.14159265358979323846;
  for (int i = 0; i < 8; ++i) seeds.push_back(std::polar(radius, 2.0 * kPi * i / 8.0));
  return seeds;
}

inline MeanFieldSolution make_solution(const SystemParams& p, Complex b, const SolveOptions& opt) {
  MeanFieldSolution s;
  s.b = b;
  s.f_eff = effective_drive(p, b);
  s.residual = std::abs(self_consistent_map(b, p, opt.series) - b);
  s.obs = exact::observables(p.with_drive(s.f_eff), opt.series);
  s.obs.coherence = b;
  return s;
}

/// All distinct self-consistent solutions reachable from the seed set.
/// Throws NoneFound when no seed converges.
inline std::vector<MeanFieldSolution> solve(const SystemParams& p, const SolveOptions& opt = {}) {
  p.check();
  std::vector<Complex> seeds = opt.extra_seeds;
  for (const Complex& s : default_seeds(p)) seeds.push_back(s);
  const auto map = [&](Complex b) { return self_consistent_map(b, p, opt.series); };
  const std::vector<Complex> points = find_fixed_points(map, seeds, opt.fixed_point);

  std::vector<MeanFieldSolution> out;
  for (const Complex& b : points) out.push_back(make_solution(p, b, opt));
  if (opt.with_stability) {
    const auto grid = quarter_zone_grid(opt.kgrid);
    for (auto& s : out) {
      try {
        s.stable = bogoliubov::stability(p, s, grid, opt.fluctuation);
      } catch (const Error&) {
        s.stable = StabilityVerdict::Undetermined;
      }
    }
  }
  return out;
}

/// Solution of largest density, optionally restricted to stable ones.
inline const MeanFieldSolution* densest(const std::vector<MeanFieldSolution>& sols, bool stable_only = false) {
  const MeanFieldSolution* best = nullptr;
  for (const auto& s : sols) {
    if (stable_only && s.stable != StabilityVerdict::Stable) continue;
    if (!best || s.obs.n_mean > best->obs.n_mean) best = &s;
  }
  return best;
}

enum class Axis { J, U, F, Gamma };

constexpr std::string_view to_string(Axis a) {
  switch (a) {
    case Axis::J: return "J";
    case Axis::U: return "U";
    case Axis::F: return "F";
    case Axis::Gamma: return "gamma";
  }
  return "J";
}

/// Sets one parameter, given as a ratio over the detuning.
inline SystemParams with_axis(SystemParams p, Axis axis, double ratio) {
  const double v = ratio * p.delta_omega;
  switch (axis) {
    case Axis::J: p.j = v; break;
    case Axis::U: p.u = v; break;
    case Axis::F: p.f = Complex{v, 0.0}; break;
    case Axis::Gamma: p.gamma = v; break;
  }
  return p;
}

struct SweepPoint {
  double value = 0.0;  // axis value over the detuning
  std::vector<MeanFieldSolution> solutions;
  std::string error;   // empty when the point converged
};

/// Sequential sweep; each point is also seeded with the previous point's
/// solutions so branches are followed through hysteresis regions.
inline std::vector<SweepPoint> sweep(const SystemParams& base, Axis axis, const std::vector<double>& grid,
                                     const SolveOptions& opt = {}) {
  if (!std::is_sorted(grid.begin(), grid.end())) throw Error(ErrorCode::InvalidArgument, "sweep grid must be sorted");
  std::vector<SweepPoint> out;
  std::vector<Complex> carry;
  for (double v : grid) {
    SweepPoint pt;
    pt.value = v;
    SolveOptions o = opt;
    o.extra_seeds.insert(o.extra_seeds.end(), carry.begin(), carry.end());
    try {
      pt.solutions = solve(with_axis(base, axis, v), o);
      carry.clear();
      for (const auto& s : pt.solutions) carry.push_back(s.b);
    } catch (const Error& e) {
      pt.error = e.what();
    }
    out.push_back(std::move(pt));
  }
  return out;
}

enum class Classification { Monostable, Bistable };

constexpr std::string_view to_string(Classification c) {
  return c == Classification::Bistable ? "bistable" : "monostable";
}

struct PhaseCell {
  double u_over_dw = 0.0;
  double j_over_dw = 0.0;
  int n_solutions = 0;
  int n_solutions_stable = 0;
  Classification classification = Classification::Monostable;  // from the quantum mean field
  Classification gp_classification = Classification::Monostable;
  bool converged = true;
  std::string error;
};

/// Fluctuation truncation for grid scans: a looser leak bound keeps n_max near 25
/// at large U n without moving growth rates at the stability margin.
inline bogoliubov::FluctuationConfig scan_fluctuation_config() {
  bogoliubov::FluctuationConfig cfg;
  cfg.truncation.leak_tol = 1e-8;
  return cfg;
}

struct PhaseDiagramOptions {
  SolveOptions solve{.fluctuation = scan_fluctuation_config()};
  int kgrid = 3;
  unsigned workers = 0;  // 0: hardware concurrency
};

/// Classify one cell. A lone fixed point is taken as the stable state; the
/// fluctuation spectrum is computed only when several fixed points coexist.
inline PhaseCell classify_cell(const SystemParams& base, double u_ratio, double j_ratio, const PhaseDiagramOptions& opt) {
  PhaseCell cell;
  cell.u_over_dw = u_ratio;
  cell.j_over_dw = j_ratio;
  const SystemParams p = with_axis(with_axis(base, Axis::U, u_ratio), Axis::J, j_ratio);
  cell.gp_classification =
      gp::gp_bistable(p) == gp::Stability::Bistable ? Classification::Bistable : Classification::Monostable;
  try {
    SolveOptions so = opt.solve;
    so.with_stability = false;
    auto sols = solve(p, so);
    cell.n_solutions = static_cast<int>(sols.size());
    if (sols.size() == 1) {
      cell.n_solutions_stable = 1;
    } else {
      const auto grid = quarter_zone_grid(opt.kgrid);
      for (auto& s : sols) {
        StabilityVerdict v = StabilityVerdict::Undetermined;
        try {
          v = bogoliubov::stability(p, s, grid, opt.solve.fluctuation);
        } catch (const Error&) {
        }
        if (v == StabilityVerdict::Stable) ++cell.n_solutions_stable;
      }
    }
  } catch (const Error& e) {
    cell.converged = false;
    cell.error = e.what();
  }
  cell.classification = cell.n_solutions_stable >= 2 ? Classification::Bistable : Classification::Monostable;
  return cell;
}

/// Grid of cells indexed [iu][ij]. Rows (fixed U) are distributed over workers;
/// the result order does not depend on scheduling.
inline std::vector<std::vector<PhaseCell>> phase_diagram(const SystemParams& base, const std::vector<double>& u_grid,
                                                         const std::vector<double>& j_grid,
                                                         const PhaseDiagramOptions& opt = {}) {
  if (!std::is_sorted(u_grid.begin(), u_grid.end()) || !std::is_sorted(j_grid.begin(), j_grid.end()))
    throw Error(ErrorCode::InvalidArgument, "phase-diagram grids must be sorted");
  std::vector<std::vector<PhaseCell>> out(u_grid.size());
  auto row = [&](std::size_t iu) {
    std::vector<PhaseCell> r;
    for (double jr : j_grid) r.push_back(classify_cell(base, u_grid[iu], jr, opt));
    return r;
  };
  unsigned workers = opt.workers ? opt.workers : std::max(1u, std::thread::hardware_concurrency());
  if (workers <= 1) {
    for (std::size_t iu = 0; iu < u_grid.size(); ++iu) out[iu] = row(iu);
    return out;
  }
  std::size_t next = 0;
  while (next < u_grid.size()) {
    std::vector<std::pair<std::size_t, std::future<std::vector<PhaseCell>>>> batch;
    for (unsigned w = 0; w < workers && next < u_grid.size(); ++w, ++next)
      batch.emplace_back(next, std::async(std::launch::async, row, next));
    for (auto& [iu, fut] : batch) out[iu] = fut.get();
  }
  return out;
}

}  // namespace ddbh::meanfield

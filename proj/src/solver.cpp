#include "qcenv/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qcenv/envelope1d.hpp"

namespace qcenv {

std::pair<double, double> cfl_step(const SchemeParams& params,
                                   const Grid& grid) {
  params.validate();
  const double h = grid.spacing();
  double k = 1.0 / (params.epsilon * h) + 2.0 / (h * h);
  return {1.0 / k, k};
}

GridFunction initialize(const Obstacle& g, const Grid& grid,
                        InitPolicy policy) {
  GridFunction gs = sample(g, grid);
  if (policy == InitPolicy::obstacle) return gs;
  GridFunction u(grid, gs.min());
  return u;
}

std::vector<std::vector<std::size_t>> lattice_lines(
    const Grid& grid, const std::array<int, 2>& d) {
  if (d[0] == 0 && (grid.dim() == 1 || d[1] == 0))
    throw std::invalid_argument("lattice_lines: zero direction");
  std::vector<std::vector<std::size_t>> lines;
  const int n = grid.points_per_axis();
  auto on = [&](int i, int j) { return grid.on_lattice(i, j); };
  for (int i = 0; i < n; ++i) {
    int jmax = grid.dim() == 2 ? n : 1;
    for (int j = 0; j < jmax; ++j) {
      if (on(i - d[0], j - d[1])) continue;  // not a chain start
      std::vector<std::size_t> chain;
      for (int ci = i, cj = j; on(ci, cj); ci += d[0], cj += d[1])
        chain.push_back(grid.flat(ci, cj));
      if (chain.size() >= 2) lines.push_back(std::move(chain));
    }
  }
  return lines;
}

GridFunction line_sweep_round(const GridFunction& u,
                              const StencilSet& stencil) {
  GridFunction out = u;
  for (const auto& d : stencil.half()) {
    auto lines = lattice_lines(out.grid(), d);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t li = 0; li < lines.size(); ++li) {
      const auto& chain = lines[li];
      thread_local std::vector<double> tbuf;
      tbuf.resize(chain.size());
      for (std::size_t k = 0; k < chain.size(); ++k) tbuf[k] = out[chain[k]];
      qce_line_inplace(tbuf);
      for (std::size_t k = 0; k < chain.size(); ++k) out[chain[k]] = tbuf[k];
    }
  }
  return out;
}

namespace {

struct BandArm {
  long neighbor;  // >= 0: lattice arm; < 0: clipped at the boundary
  double value;   // g at the boundary intersection when clipped
  double length;  // Euclidean arm length
};

// Precomputed geometry for one (grid, params, scheme) combination.  Nodes in
// the far-interior box use pure offset arithmetic; the band near the
// boundary carries per-arm clip data resolved once.
struct Workspace {
  Grid grid;
  SchemeKind kind = SchemeKind::penalized;
  double eps = 0.0;
  double inv_eps = 0.0;
  std::vector<double> gval;
  int nhalf = 0;
  std::vector<long> off;
  std::vector<double> len1;  // h*|v|
  std::vector<double> inv1;  // 1/(h*|v|)
  std::vector<double> inv2;  // 1/(h*|v|)^2
  int far_lo = 0, far_hi = -1;
  std::vector<std::size_t> band_nodes;
  std::vector<BandArm> band_arms;  // band_nodes.size() * nhalf * 2
  std::vector<std::size_t> boundary_nodes;
  long far_work = 0;
  long band_work = 0;

  Workspace(const Grid& g) : grid(g) {}
};

Workspace build_workspace(const Grid& grid, const SchemeParams& params,
                          SchemeKind kind) {
  params.validate();
  if (params.obstacle->dim() != grid.dim())
    throw std::invalid_argument("solver: obstacle/grid dimension mismatch");
  Workspace ws(grid);
  ws.kind = kind;
  ws.eps = params.epsilon;
  ws.inv_eps = 1.0 / params.epsilon;

  const int n = grid.points_per_axis();
  const double h = grid.spacing();
  GridFunction gs = sample(*params.obstacle, grid);
  ws.gval = gs.values();

  const auto& half = params.stencil->half();
  ws.nhalf = static_cast<int>(half.size());
  int reach = 0;
  for (const auto& v : half) {
    long o = grid.dim() == 1 ? v[0] : static_cast<long>(v[0]) * n + v[1];
    ws.off.push_back(o);
    double vn = std::hypot(static_cast<double>(v[0]),
                           static_cast<double>(v[1]));
    ws.len1.push_back(h * vn);
    ws.inv1.push_back(1.0 / (h * vn));
    ws.inv2.push_back(1.0 / (h * vn * h * vn));
    reach = std::max({reach, std::abs(v[0]), std::abs(v[1])});
  }
  ws.far_lo = reach;
  ws.far_hi = n - 1 - reach;
  if (ws.far_hi >= ws.far_lo) {
    long span = ws.far_hi - ws.far_lo + 1;
    ws.far_work = (grid.dim() == 1 ? span : span * span) * ws.nhalf;
  }

  GridFunction dummy(grid);  // arm values are ignored for clipped arms
  for (std::size_t f = 0; f < grid.node_count(); ++f) {
    auto m = grid.multi(f);
    if (grid.is_boundary(m[0], m[1])) {
      ws.boundary_nodes.push_back(f);
      continue;
    }
    bool far = m[0] >= ws.far_lo && m[0] <= ws.far_hi &&
               (grid.dim() == 1 ||
                (m[1] >= ws.far_lo && m[1] <= ws.far_hi));
    if (far) continue;
    ws.band_nodes.push_back(f);
    for (int k = 0; k < ws.nhalf; ++k) {
      for (int sign : {+1, -1}) {
        auto arm = detail::sample_arm(dummy, m[0], m[1], half[k], sign,
                                      *params.obstacle);
        if (arm.lattice) {
          long nb = static_cast<long>(f) + sign * ws.off[k];
          ws.band_arms.push_back({nb, 0.0, arm.length});
        } else {
          ws.band_arms.push_back({-1, arm.value, arm.length});
        }
      }
    }
  }
  ws.band_work = static_cast<long>(ws.band_nodes.size()) * ws.nhalf;
  return ws;
}

// One Jacobi step; returns sup |next - u|.  OpenMP regions are entered only
// when the per-step work amortizes the fork cost.
double step(const Workspace& ws, const std::vector<double>& ucur,
            std::vector<double>& unext, double delta, double shift) {
  const double* u = ucur.data();
  double* out = unext.data();
  const int n = ws.grid.points_per_axis();
  const int dim = ws.grid.dim();
  double sup = 0.0;

  auto combine = [&](double uc, double gx, double fmin, double d1min,
                     double rmin) {
    double interior;
    switch (ws.kind) {
      case SchemeKind::penalized:
        interior = ws.eps - fmin;
        break;
      case SchemeKind::first_order:
        interior = ws.eps - ws.inv_eps * d1min;
        break;
      case SchemeKind::robust:
      default:
        interior = rmin == std::numeric_limits<double>::infinity()
                       ? -std::numeric_limits<double>::infinity()
                       : -rmin;
        break;
    }
    double g = std::max(uc - gx, interior) - shift;
    return uc - delta * g;
  };

  for (std::size_t b : ws.boundary_nodes) {
    double nv = ws.gval[b] + shift;
    sup = std::max(sup, std::abs(nv - u[b]));
    out[b] = nv;
  }

  const bool par_far = ws.far_work >= 60000;
  const bool par_band = ws.band_work >= 60000;
  const long* off = ws.off.data();
  const double* inv1 = ws.inv1.data();
  const double* inv2 = ws.inv2.data();
  const int nh = ws.nhalf;

  auto node_1d = [&](int i) {
    double uc = u[i];
    double fmin = std::numeric_limits<double>::infinity();
    double d1min = fmin, rmin = fmin;
    for (int k = 0; k < nh; ++k) {
      double up = u[i + off[k]], um = u[i - off[k]];
      double d1 = std::max(up - uc, um - uc) * inv1[k];
      double d2 = (up + um - 2.0 * uc) * inv2[k];
      fmin = std::min(fmin, ws.inv_eps * d1 + d2);
      d1min = std::min(d1min, d1);
      if (d1 <= ws.eps) rmin = std::min(rmin, d2);
    }
    double nv = combine(uc, ws.gval[i], fmin, d1min, rmin);
    out[i] = nv;
    return std::abs(nv - uc);
  };

  auto row_2d = [&](int i) {
    double row_sup = 0.0;
    for (int j = ws.far_lo; j <= ws.far_hi; ++j) {
      std::size_t f = static_cast<std::size_t>(i) * n + j;
      double uc = u[f];
      double fmin = std::numeric_limits<double>::infinity();
      double d1min = fmin, rmin = fmin;
      for (int k = 0; k < nh; ++k) {
        double up = u[f + off[k]], um = u[f - off[k]];
        double d1 = std::max(up - uc, um - uc) * inv1[k];
        double d2 = (up + um - 2.0 * uc) * inv2[k];
        fmin = std::min(fmin, ws.inv_eps * d1 + d2);
        d1min = std::min(d1min, d1);
        if (d1 <= ws.eps) rmin = std::min(rmin, d2);
      }
      double nv = combine(uc, ws.gval[f], fmin, d1min, rmin);
      out[f] = nv;
      row_sup = std::max(row_sup, std::abs(nv - uc));
    }
    return row_sup;
  };

  auto band_node = [&](std::size_t bi) {
    std::size_t f = ws.band_nodes[bi];
    double uc = u[f];
    double fmin = std::numeric_limits<double>::infinity();
    double d1min = fmin, rmin = fmin;
    const BandArm* arms = ws.band_arms.data() + bi * nh * 2;
    for (int k = 0; k < nh; ++k) {
      const BandArm& ap = arms[2 * k];
      const BandArm& am = arms[2 * k + 1];
      double vp = ap.neighbor >= 0 ? u[ap.neighbor] : ap.value;
      double vm = am.neighbor >= 0 ? u[am.neighbor] : am.value;
      double d1 = std::max((vp - uc) / ap.length, (vm - uc) / am.length);
      double d2;
      if (ap.neighbor >= 0 && am.neighbor >= 0)
        d2 = (vp + vm - 2.0 * uc) * inv2[k];
      else
        d2 = 2.0 *
             (am.length * vp + ap.length * vm -
              (ap.length + am.length) * uc) /
             (ap.length * am.length * (ap.length + am.length));
      fmin = std::min(fmin, ws.inv_eps * d1 + d2);
      d1min = std::min(d1min, d1);
      if (d1 <= ws.eps) rmin = std::min(rmin, d2);
    }
    double nv = combine(uc, ws.gval[f], fmin, d1min, rmin);
    out[f] = nv;
    return std::abs(nv - uc);
  };

  if (ws.far_hi >= ws.far_lo) {
    if (dim == 1) {
      if (par_far) {
#pragma omp parallel for reduction(max : sup) schedule(static)
        for (int i = ws.far_lo; i <= ws.far_hi; ++i)
          sup = std::max(sup, node_1d(i));
      } else {
        for (int i = ws.far_lo; i <= ws.far_hi; ++i)
          sup = std::max(sup, node_1d(i));
      }
    } else {
      if (par_far) {
#pragma omp parallel for reduction(max : sup) schedule(static)
        for (int i = ws.far_lo; i <= ws.far_hi; ++i)
          sup = std::max(sup, row_2d(i));
      } else {
        for (int i = ws.far_lo; i <= ws.far_hi; ++i)
          sup = std::max(sup, row_2d(i));
      }
    }
  }

  if (!ws.band_nodes.empty()) {
    if (par_band) {
#pragma omp parallel for reduction(max : sup) schedule(static)
      for (std::size_t bi = 0; bi < ws.band_nodes.size(); ++bi)
        sup = std::max(sup, band_node(bi));
    } else {
      for (std::size_t bi = 0; bi < ws.band_nodes.size(); ++bi)
        sup = std::max(sup, band_node(bi));
    }
  }
  return sup;
}

std::pair<GridFunction, SolveReport> run_solver(const Grid& grid,
                                                const SchemeParams& params,
                                                const SolverConfig& config,
                                                double shift) {
  auto t0 = std::chrono::steady_clock::now();
  Workspace ws = build_workspace(grid, params, config.scheme);

  auto [delta, k] = cfl_step(params, grid);
  if (config.step_override > 0.0) {
    if (config.step_override > 1.0 / k + 1e-15)
      throw std::invalid_argument("solve: step_override violates the CFL bound");
    delta = config.step_override;
  }
  if (!(config.tol > 0.0))
    throw std::invalid_argument("solve: tol must be > 0");
  long max_iter = config.max_iter > 0
                      ? config.max_iter
                      : (grid.dim() == 1 ? 1000000L : 200000L);

  GridFunction u = initialize(*params.obstacle, grid, config.init);
  std::vector<double> cur = u.values();
  std::vector<double> next(cur.size());

  SolveReport rep;
  rep.delta = delta;
  rep.lipschitz_k = k;

  const long cadence = 2L * grid.points_per_axis();
  const double sweep_floor = 100.0 * config.tol * delta;
  double sup_update = std::numeric_limits<double>::infinity();

  long it = 0;
  while (it < max_iter) {
    ++it;
    sup_update = step(ws, cur, next, delta, shift);
    cur.swap(next);
    if ((it & 63) == 0 || it == 1)
      rep.residual_history.emplace_back(it, sup_update);
    if (sup_update <= config.tol * delta) {
      rep.converged = true;
      break;
    }
    if (config.accel == Accel::line_sweep &&
        config.scheme == SchemeKind::penalized && shift == 0.0 &&
        it % cadence == 0 && sup_update >= sweep_floor) {
      GridFunction tmp(grid);
      tmp.values() = cur;
      cur = line_sweep_round(tmp, *params.stencil).values();
      ++rep.accel_rounds;
    }
  }
  if (rep.residual_history.empty() ||
      rep.residual_history.back().first != it)
    rep.residual_history.emplace_back(it, sup_update);
  rep.iterations = it;
  rep.residual_final = sup_update / delta;
  u.values() = cur;

  rep.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return {std::move(u), std::move(rep)};
}

}  // namespace

std::pair<GridFunction, double> euler_step(const GridFunction& u,
                                           const SchemeParams& params,
                                           double delta, SchemeKind kind) {
  Workspace ws = build_workspace(u.grid(), params, kind);
  GridFunction out(u.grid());
  double sup = step(ws, u.values(), out.values(), delta, 0.0);
  return {std::move(out), sup};
}

std::pair<GridFunction, SolveReport> solve(const Grid& grid,
                                           const SchemeParams& params,
                                           const SolverConfig& config) {
  return run_solver(grid, params, config, 0.0);
}

namespace detail {
std::pair<GridFunction, SolveReport> solve_shifted(const Grid& grid,
                                                   const SchemeParams& params,
                                                   const SolverConfig& config,
                                                   double shift) {
  return run_solver(grid, params, config, shift);
}
}  // namespace detail

}  // namespace qcenv

#pragma once

#include <utility>
#include <vector>

#include "qcenv/grid.hpp"
#include "qcenv/obstacle.hpp"
#include "qcenv/operators.hpp"
#include "qcenv/stencil.hpp"

namespace qcenv {

enum class InitPolicy { constant_min, obstacle };
enum class Accel { none, line_sweep };
// interior operator driven by the fixed-point iteration
enum class SchemeKind { penalized, first_order, robust };

struct SolverConfig {
  double tol = 1e-6;       // on the residual scale G[u] ~ update/delta
  long max_iter = 0;       // 0: 1e6 in 1D, 2e5 in 2D
  InitPolicy init = InitPolicy::constant_min;
  Accel accel = Accel::none;
  double step_override = 0.0;  // 0: delta = 1/K
  SchemeKind scheme = SchemeKind::penalized;
};

struct SolveReport {
  long iterations = 0;
  double delta = 0.0;
  double lipschitz_k = 0.0;
  bool converged = false;
  double residual_final = 0.0;  // sup |G| at the last step
  double wall_time_s = 0.0;
  long accel_rounds = 0;
  std::vector<std::pair<long, double>> residual_history;  // (iter, sup update)
};

// CFL bound: K = 1/(eps*h) + 2/h^2 (the 2 is the u(x) coefficient of the
// normalized second difference), delta = 1/K.
std::pair<double, double> cfl_step(const SchemeParams& params,
                                   const Grid& grid);

GridFunction initialize(const Obstacle& g, const Grid& grid,
                        InitPolicy policy);

// One Jacobi update u - delta*G[u] at interior nodes; boundary nodes are set
// to g.  Returns the new iterate and the sup-norm of the update.
std::pair<GridFunction, double> euler_step(
    const GridFunction& u, const SchemeParams& params, double delta,
    SchemeKind kind = SchemeKind::penalized);

// Fixed-point iteration until sup_update <= tol*delta or max_iter.  With
// accel = line_sweep, one sweep round runs after every 2N Euler steps while
// the update is still above 100*tol*delta.
std::pair<GridFunction, SolveReport> solve(const Grid& grid,
                                           const SchemeParams& params,
                                           const SolverConfig& config);

// Replace u on every maximal lattice line along each stencil direction by its
// 1D quasiconvex envelope (endpoints fixed); directions run sequentially.
GridFunction line_sweep_round(const GridFunction& u,
                              const StencilSet& stencil);

// Maximal lattice chains along integer direction d, as flat node indices.
std::vector<std::vector<std::size_t>> lattice_lines(
    const Grid& grid, const std::array<int, 2>& d);

namespace detail {
// Solves G[u] = shift (used by comparison fuzzing).
std::pair<GridFunction, SolveReport> solve_shifted(const Grid& grid,
                                                   const SchemeParams& params,
                                                   const SolverConfig& config,
                                                   double shift);
}  // namespace detail

}  // namespace qcenv

#include "qcenv/qcenv.h"

#include <array>
#include <cstring>
#include <functional>
#include <new>
#include <stdexcept>
#include <string>

#include "qcenv/experiments.hpp"
#include "qcenv/grid.hpp"
#include "qcenv/obstacle.hpp"
#include "qcenv/solver.hpp"
#include "qcenv/stencil.hpp"

struct qcenv_grid {
  qcenv::Grid g;
};
struct qcenv_obstacle {
  qcenv::Obstacle ob;
};
struct qcenv_stencil {
  qcenv::StencilSet st;
};
struct qcenv_solution {
  qcenv::GridFunction u;
  qcenv::SolveReport rep;
  std::string report_json;
};

namespace {

thread_local std::string g_last_error;

void set_error(const char* what) { g_last_error = what ? what : "unknown"; }

template <typename Fn>
auto guarded(Fn&& fn) -> decltype(fn()) {
  using R = decltype(fn());
  try {
    return fn();
  } catch (const std::bad_alloc&) {
    set_error("out of memory");
  } catch (const std::exception& e) {
    set_error(e.what());
  } catch (...) {
    set_error("unknown error");
  }
  return R{};
}

qcenv_status guarded_status(qcenv_status on_error,
                            const std::function<void()>& fn) {
  try {
    fn();
    return QCENV_OK;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return QCENV_ERR_PARAM;
  } catch (const std::exception& e) {
    set_error(e.what());
    return on_error;
  } catch (...) {
    set_error("unknown error");
    return QCENV_ERR_INTERNAL;
  }
}

}  // namespace

extern "C" {

const char* qcenv_version(void) { return "0.1.0"; }

const char* qcenv_last_error(void) { return g_last_error.c_str(); }

qcenv_grid* qcenv_grid_create(int dim, int points_per_axis) {
  return guarded([&]() -> qcenv_grid* {
    return new qcenv_grid{qcenv::Grid(dim, points_per_axis)};
  });
}

void qcenv_grid_destroy(qcenv_grid* grid) { delete grid; }

int qcenv_grid_dim(const qcenv_grid* grid) { return grid->g.dim(); }
int qcenv_grid_points(const qcenv_grid* grid) {
  return grid->g.points_per_axis();
}
double qcenv_grid_spacing(const qcenv_grid* grid) { return grid->g.spacing(); }
size_t qcenv_grid_node_count(const qcenv_grid* grid) {
  return grid->g.node_count();
}

qcenv_obstacle* qcenv_obstacle_create(const char* example_name) {
  return guarded([&]() -> qcenv_obstacle* {
    if (!example_name) throw std::invalid_argument("null example name");
    return new qcenv_obstacle{qcenv::Obstacle::by_cli_name(example_name)};
  });
}

qcenv_obstacle* qcenv_obstacle_from_csv(const char* path) {
  return guarded([&]() -> qcenv_obstacle* {
    if (!path) throw std::invalid_argument("null path");
    return new qcenv_obstacle{qcenv::Obstacle::from_grid_csv(path)};
  });
}

void qcenv_obstacle_destroy(qcenv_obstacle* obstacle) { delete obstacle; }

int qcenv_obstacle_dim(const qcenv_obstacle* obstacle) {
  return obstacle->ob.dim();
}

qcenv_status qcenv_obstacle_eval(const qcenv_obstacle* obstacle,
                                 const double* x, double* value) {
  return guarded_status(QCENV_ERR_INTERNAL, [&] {
    if (!obstacle || !x || !value)
      throw std::invalid_argument("null argument");
    std::array<double, 2> p = {x[0], obstacle->ob.dim() == 2 ? x[1] : 0.0};
    *value = obstacle->ob.eval(p);
  });
}

qcenv_stencil* qcenv_stencil_create(int dim, int width) {
  return guarded([&]() -> qcenv_stencil* {
    return new qcenv_stencil{qcenv::StencilSet::make(dim, width)};
  });
}

void qcenv_stencil_destroy(qcenv_stencil* stencil) { delete stencil; }

double qcenv_stencil_dtheta(const qcenv_stencil* stencil) {
  return stencil->st.dtheta();
}

int qcenv_stencil_size(const qcenv_stencil* stencil) {
  return static_cast<int>(stencil->st.vectors().size());
}

void qcenv_solve_options_init(qcenv_solve_options* opts) {
  if (!opts) return;
  opts->epsilon = 0.0;
  opts->tol = 0.0;
  opts->max_iter = 0;
  opts->init_policy = 0;
  opts->accel = 0;
  opts->scheme = 0;
  opts->step_override = 0.0;
}

qcenv_status qcenv_solve(const qcenv_obstacle* obstacle,
                         const qcenv_grid* grid, const qcenv_stencil* stencil,
                         const qcenv_solve_options* opts,
                         qcenv_solution** out) {
  return guarded_status(QCENV_ERR_INTERNAL, [&] {
    if (!obstacle || !grid || !stencil || !out)
      throw std::invalid_argument("null argument");
    qcenv_solve_options defaults;
    qcenv_solve_options_init(&defaults);
    const qcenv_solve_options& o = opts ? *opts : defaults;

    qcenv::SchemeParams params;
    params.epsilon = o.epsilon > 0.0 ? o.epsilon : grid->g.spacing() / 2.0;
    params.stencil = &stencil->st;
    params.obstacle = &obstacle->ob;

    qcenv::SolverConfig config;
    config.tol = o.tol > 0.0 ? o.tol : 1e-6;
    config.max_iter = o.max_iter > 0 ? o.max_iter : 0;
    config.init = o.init_policy == 1 ? qcenv::InitPolicy::obstacle
                                     : qcenv::InitPolicy::constant_min;
    config.accel =
        o.accel == 1 ? qcenv::Accel::line_sweep : qcenv::Accel::none;
    config.scheme = o.scheme == 1   ? qcenv::SchemeKind::first_order
                    : o.scheme == 2 ? qcenv::SchemeKind::robust
                                    : qcenv::SchemeKind::penalized;
    config.step_override = o.step_override > 0.0 ? o.step_override : 0.0;

    auto [u, rep] = qcenv::solve(grid->g, params, config);
    *out = new qcenv_solution{std::move(u), std::move(rep), {}};
  });
}

void qcenv_solution_destroy(qcenv_solution* sol) { delete sol; }

const double* qcenv_solution_values(const qcenv_solution* sol, size_t* count) {
  if (count) *count = sol->u.size();
  return sol->u.values().data();
}

long qcenv_solution_iterations(const qcenv_solution* sol) {
  return sol->rep.iterations;
}

int qcenv_solution_converged(const qcenv_solution* sol) {
  return sol->rep.converged ? 1 : 0;
}

double qcenv_solution_residual(const qcenv_solution* sol) {
  return sol->rep.residual_final;
}

double qcenv_solution_delta(const qcenv_solution* sol) {
  return sol->rep.delta;
}

const char* qcenv_solution_report_json(qcenv_solution* sol) {
  return guarded([&]() -> const char* {
    if (sol->report_json.empty())
      sol->report_json = qcenv::report_to_json(sol->rep);
    return sol->report_json.c_str();
  });
}

qcenv_status qcenv_solution_write_csv(const qcenv_solution* sol,
                                      const char* path) {
  return guarded_status(QCENV_ERR_IO, [&] {
    if (!sol || !path) throw std::invalid_argument("null argument");
    qcenv::write_csv_file(sol->u, path);
  });
}

int qcenv_run_experiment(const char* config_json) {
  if (!config_json) {
    set_error("null config");
    return 2;
  }
  try {
    return qcenv::run(qcenv::config_from_json(config_json));
  } catch (const std::exception& e) {
    set_error(e.what());
    return 2;
  }
}

}  // extern "C"

/* C interface for the quasiconvex-envelope PDE solver.
 *
 * Opaque handles own their C++ objects; every create has a matching destroy.
 * Functions returning a status never throw; the last failure message is
 * available from qcenv_last_error() (thread-local).
 */
#ifndef QCENV_H
#define QCENV_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  QCENV_OK = 0,
  QCENV_ERR_PARAM = 1,
  QCENV_ERR_USAGE = 2,
  QCENV_ERR_NO_CONVERGENCE = 3,
  QCENV_ERR_IO = 4,
  QCENV_ERR_INTERNAL = 5
} qcenv_status;

typedef struct qcenv_grid qcenv_grid;
typedef struct qcenv_obstacle qcenv_obstacle;
typedef struct qcenv_stencil qcenv_stencil;
typedef struct qcenv_solution qcenv_solution;

const char* qcenv_version(void);
const char* qcenv_last_error(void);

/* grids: uniform nodes on [-1,1]^dim, spacing 2/(points_per_axis-1) */
qcenv_grid* qcenv_grid_create(int dim, int points_per_axis);
void qcenv_grid_destroy(qcenv_grid* grid);
int qcenv_grid_dim(const qcenv_grid* grid);
int qcenv_grid_points(const qcenv_grid* grid);
double qcenv_grid_spacing(const qcenv_grid* grid);
size_t qcenv_grid_node_count(const qcenv_grid* grid);

/* obstacles: built-in corpus by name (double-well, parabola, square,
 * pacman, circles) or a CSV node dump with nearest-node evaluation */
qcenv_obstacle* qcenv_obstacle_create(const char* example_name);
qcenv_obstacle* qcenv_obstacle_from_csv(const char* path);
void qcenv_obstacle_destroy(qcenv_obstacle* obstacle);
int qcenv_obstacle_dim(const qcenv_obstacle* obstacle);
qcenv_status qcenv_obstacle_eval(const qcenv_obstacle* obstacle,
                                 const double* x, double* value);

/* symmetric reduced integer stencils of a given width */
qcenv_stencil* qcenv_stencil_create(int dim, int width);
void qcenv_stencil_destroy(qcenv_stencil* stencil);
double qcenv_stencil_dtheta(const qcenv_stencil* stencil);
int qcenv_stencil_size(const qcenv_stencil* stencil);

typedef struct {
  double epsilon;       /* <= 0: h/2 */
  double tol;           /* <= 0: 1e-6 */
  long max_iter;        /* <= 0: 1e6 in 1D, 2e5 in 2D */
  int init_policy;      /* 0: constant min of g, 1: obstacle */
  int accel;            /* 0: none, 1: line sweep */
  int scheme;           /* 0: penalized, 1: first-order, 2: robust */
  double step_override; /* <= 0: 1/K */
} qcenv_solve_options;

void qcenv_solve_options_init(qcenv_solve_options* opts);

/* Runs the fixed-point iteration.  Non-convergence still produces a
 * solution handle; check qcenv_solution_converged. */
qcenv_status qcenv_solve(const qcenv_obstacle* obstacle,
                         const qcenv_grid* grid, const qcenv_stencil* stencil,
                         const qcenv_solve_options* opts,
                         qcenv_solution** out);

void qcenv_solution_destroy(qcenv_solution* sol);
const double* qcenv_solution_values(const qcenv_solution* sol, size_t* count);
long qcenv_solution_iterations(const qcenv_solution* sol);
int qcenv_solution_converged(const qcenv_solution* sol);
double qcenv_solution_residual(const qcenv_solution* sol);
double qcenv_solution_delta(const qcenv_solution* sol);
/* JSON report (iterations, delta, lipschitz_K, converged, residual_final,
 * wall_time_s, accel_rounds); owned by the solution handle */
const char* qcenv_solution_report_json(qcenv_solution* sol);
qcenv_status qcenv_solution_write_csv(const qcenv_solution* sol,
                                      const char* path);

/* Full experiment runner; config_json mirrors the CLI flags.  Returns a
 * process exit code: 0 ok, 2 usage error, 3 non-convergence. */
int qcenv_run_experiment(const char* config_json);

#ifdef __cplusplus
}
#endif

#endif /* QCENV_H */

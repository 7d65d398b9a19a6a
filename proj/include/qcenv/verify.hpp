#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qcenv/grid.hpp"
#include "qcenv/operators.hpp"
#include "qcenv/solver.hpp"
#include "qcenv/stencil.hpp"

namespace qcenv {

struct CheckReport {
  std::string name;
  bool passed = false;
  double worst_violation = 0.0;
  double tolerance = 0.0;
  std::string location;
  long samples = 0;
};

// Worst sup-distance between u restricted to a lattice line (any stencil
// direction) and the 1D quasiconvex envelope of that restriction.
CheckReport qc_along_stencil(const GridFunction& u, const StencilSet& stencil,
                             double tolerance = 1e-3);

// Quasiconvexity defect along off-stencil directions, measured on
// piecewise-linear interpolated line samples (2D only).  threshold = +inf
// makes the check informational; the implied constant defect/dtheta and the
// interpolation error scale are reported in `location`.
CheckReport approx_qc_offgrid(const GridFunction& u, double dtheta,
                              int sample_dirs = 64,
                              double threshold =
                                  std::numeric_limits<double>::infinity());

struct ConsistencyRow {
  int width = 0;
  int points = 0;
  double h = 0.0;
  double dtheta = 0.0;
  double max_err = 0.0;
};

// max over far-interior nodes (margin = max width, common to all rows) and
// over the given quadratics of |f_eps_scheme - f_eps_exact|
std::vector<ConsistencyRow> consistency_sweep(
    const std::vector<QuadraticTestFunction>& quadratics, double eps,
    const std::vector<int>& widths, const std::vector<int>& points_list,
    int oracle_samples = 10000);

// Raising a stencil neighbor never raises the scheme value; raising the
// center never lowers it.
CheckReport ellipticity_fuzz(const SchemeParams& params, const Grid& grid,
                             int trials, std::uint64_t seed);

// Solves G[u]=0 and G[v]=c > 0 for random smooth obstacles and asserts
// u <= v nodewise (discrete comparison).
CheckReport comparison_fuzz(int trials, std::uint64_t seed);

// lambda_QC >= lambda_QC^{eps^2} >= F^eps - eps for random quadratics
CheckReport ordering_audit(const std::vector<QuadraticTestFunction>& quads,
                           const std::vector<double>& eps_list,
                           double tolerance = 1e-5);

std::vector<QuadraticTestFunction> random_quadratics(int count,
                                                     std::uint64_t seed,
                                                     int dim = 2,
                                                     double hessian_scale = 1.0,
                                                     double gradient_scale = 1.0);

}  // namespace qcenv

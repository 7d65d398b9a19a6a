#pragma once

#include <span>
#include <vector>

namespace qcenv {

// Largest quasiconvex (nonincreasing-then-nondecreasing) sequence below a:
// elementwise max of the running minimum from the left and the running
// minimum from the right.  Two passes, O(n).
std::vector<double> qce_line(std::span<const double> a);
void qce_line_inplace(std::span<double> a);

// Closed-form solution of  eps*u'' + |u'| = eps^2  on [0, W] with
// u(0) = 0, u(W) = H.  The shape is governed by S = H/(eps^2*W).
enum class Case1D {
  linear_plus,   // S = +1: u = eps^2 x
  linear_minus,  // S = -1: u = -eps^2 x
  increasing,    // monotone nondecreasing exponential profile
  decreasing,    // mirror image
  interior_min,  // strict interior minimum at x*
};

struct Analytic1DCase {
  double interval_length = 0.0;  // W
  double boundary_rise = 0.0;    // H
  double epsilon = 0.0;
  double S = 0.0;
  Case1D kind = Case1D::interior_min;
  double c_plus = 0.0;
  double c_minus = 0.0;
  double x_star = 0.0;
  double u0 = 0.0;
  bool fitted = false;
};

// Computes S, picks the case and fits its constants.
Analytic1DCase classify_case(double interval_length, double boundary_rise,
                             double epsilon);
// Re-derives the constants from the boundary conditions (monotone cases) or
// locates x* by bisection (interior minimum).  Idempotent.
void fit_constants(Analytic1DCase& c);

double eval_analytic(const Analytic1DCase& c, double x);

// eps*u'' + |u'| - eps^2 from the analytic derivatives; one-sided at the
// interior-minimum kink.  Zero (to rounding) when the case is consistent.
double analytic_ode_residual(const Analytic1DCase& c, double x);

}  // namespace qcenv

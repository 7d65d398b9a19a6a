#include "qcenv/envelope1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qcenv {

std::vector<double> qce_line(std::span<const double> a) {
  std::vector<double> out(a.begin(), a.end());
  qce_line_inplace(out);
  return out;
}

void qce_line_inplace(std::span<double> a) {
  if (a.empty()) throw std::invalid_argument("qce_line: empty sequence");
  thread_local std::vector<double> pref;
  pref.assign(a.begin(), a.end());
  for (std::size_t i = 1; i < pref.size(); ++i)
    pref[i] = std::min(pref[i - 1], pref[i]);
  double suf = std::numeric_limits<double>::infinity();
  for (std::size_t i = a.size(); i-- > 0;) {
    suf = std::min(suf, a[i]);
    a[i] = std::max(pref[i], suf);
  }
}

namespace {

// Chord slope (in units of eps^2) reachable by the interior-minimum profile
// as x* -> 0; the profile family covers |S| <= s0 < 1 and the monotone
// exponential profiles cover the rest.
double chord_slope_limit(double W, double eps) {
  return 1.0 - (eps / W) * (1.0 - std::exp(-W / eps));
}

// boundary-value gap of the interior-minimum ansatz as a function of x*
double interior_gap(double W, double H, double eps, double xs) {
  return eps * eps * (W - 2.0 * xs) +
         eps * eps * eps *
             (std::exp(-(W - xs) / eps) - std::exp(-xs / eps)) -
         H;
}

}  // namespace

void fit_constants(Analytic1DCase& c) {
  const double W = c.interval_length;
  const double H = c.boundary_rise;
  const double eps = c.epsilon;
  const double e2 = eps * eps;

  switch (c.kind) {
    case Case1D::linear_plus:
    case Case1D::linear_minus:
      break;
    case Case1D::increasing:
      c.c_plus = (H - e2 * W) / (1.0 - std::exp(-W / eps));
      break;
    case Case1D::decreasing:
      c.c_minus = (H + e2 * W) / (1.0 - std::exp(W / eps));
      break;
    case Case1D::interior_min: {
      double lo = 0.0, hi = W;
      double glo = interior_gap(W, H, eps, lo);
      double ghi = interior_gap(W, H, eps, hi);
      if (!(glo >= 0.0 && ghi <= 0.0))
        throw std::logic_error(
            "fit_constants: interior-minimum bisection does not bracket");
      while (hi - lo > 1e-12) {
        double mid = 0.5 * (lo + hi);
        if (interior_gap(W, H, eps, mid) >= 0.0)
          lo = mid;
        else
          hi = mid;
      }
      c.x_star = 0.5 * (lo + hi);
      c.u0 = -e2 * c.x_star -
             eps * e2 * (std::exp(-c.x_star / eps) - 1.0);
      break;
    }
  }
  c.fitted = true;
}

Analytic1DCase classify_case(double interval_length, double boundary_rise,
                             double epsilon) {
  if (!(interval_length > 0.0))
    throw std::invalid_argument("classify_case: interval length must be > 0");
  if (!(epsilon > 0.0))
    throw std::invalid_argument("classify_case: epsilon must be > 0");

  Analytic1DCase c;
  c.interval_length = interval_length;
  c.boundary_rise = boundary_rise;
  c.epsilon = epsilon;
  c.S = boundary_rise / (epsilon * epsilon * interval_length);

  if (std::abs(c.S - 1.0) <= 1e-12) {
    c.kind = Case1D::linear_plus;
  } else if (std::abs(c.S + 1.0) <= 1e-12) {
    c.kind = Case1D::linear_minus;
  } else if (c.S > 1.0) {
    c.kind = Case1D::increasing;
  } else if (c.S < -1.0) {
    c.kind = Case1D::decreasing;
  } else {
    // The interior-minimum profile only reaches chord slopes up to s0 < 1;
    // between s0 and 1 the solution is still monotone (the exponential
    // ansatz keeps a one-signed derivative there).
    double s0 = chord_slope_limit(interval_length, epsilon);
    if (c.S > s0)
      c.kind = Case1D::increasing;
    else if (c.S < -s0)
      c.kind = Case1D::decreasing;
    else
      c.kind = Case1D::interior_min;
  }
  fit_constants(c);
  return c;
}

double eval_analytic(const Analytic1DCase& c, double x) {
  if (!c.fitted)
    throw std::logic_error("eval_analytic: constants not fitted");
  if (x < -1e-9 || x > c.interval_length + 1e-9)
    throw std::invalid_argument("eval_analytic: x outside [0, W]");
  x = std::clamp(x, 0.0, c.interval_length);

  const double W = c.interval_length;
  const double H = c.boundary_rise;
  const double eps = c.epsilon;
  const double e2 = eps * eps;

  switch (c.kind) {
    case Case1D::linear_plus:
      return e2 * x;
    case Case1D::linear_minus:
      return -e2 * x;
    case Case1D::increasing:
      // e2*x + C+ (1 - exp(-x/eps)) in overflow-safe ratio form
      return e2 * x + (H - e2 * W) * (1.0 - std::exp(-x / eps)) /
                          (1.0 - std::exp(-W / eps));
    case Case1D::decreasing:
      return -e2 * x + (H + e2 * W) *
                           (std::exp(-W / eps) - std::exp(-(W - x) / eps)) /
                           (std::exp(-W / eps) - 1.0);
    case Case1D::interior_min: {
      double s = std::abs(x - c.x_star);
      return e2 * s + eps * e2 * (std::exp(-s / eps) - 1.0) + c.u0;
    }
  }
  return 0.0;
}

double analytic_ode_residual(const Analytic1DCase& c, double x) {
  if (!c.fitted)
    throw std::logic_error("analytic_ode_residual: constants not fitted");
  const double W = c.interval_length;
  const double H = c.boundary_rise;
  const double eps = c.epsilon;
  const double e2 = eps * eps;

  double du = 0.0, ddu = 0.0;
  switch (c.kind) {
    case Case1D::linear_plus:
      du = e2;
      break;
    case Case1D::linear_minus:
      du = -e2;
      break;
    case Case1D::increasing: {
      double k = (H - e2 * W) / (1.0 - std::exp(-W / eps));
      du = e2 + (k / eps) * std::exp(-x / eps);
      ddu = -(k / e2) * std::exp(-x / eps);
      break;
    }
    case Case1D::decreasing: {
      double k = (H + e2 * W) / (1.0 - std::exp(-W / eps));
      du = -e2 + (k / eps) * std::exp(-(W - x) / eps);
      ddu = (k / e2) * std::exp(-(W - x) / eps);
      break;
    }
    case Case1D::interior_min: {
      double s = x - c.x_star;
      double a = std::abs(s);
      double sgn = s >= 0.0 ? 1.0 : -1.0;  // one-sided at the kink
      du = sgn * (e2 - e2 * std::exp(-a / eps));
      ddu = eps * std::exp(-a / eps);
      break;
    }
  }
  return eps * ddu + std::abs(du) - e2;
}

}  // namespace qcenv

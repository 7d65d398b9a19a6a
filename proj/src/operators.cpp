#include "qcenv/operators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace qcenv {

void SchemeParams::validate() const {
  if (!(epsilon > 0.0))
    throw std::invalid_argument("SchemeParams: epsilon must be > 0");
  if (!stencil || !obstacle)
    throw std::invalid_argument("SchemeParams: missing stencil or obstacle");
  if (stencil->dtheta() > M_PI / 4.0 + 1e-12)
    throw std::invalid_argument("SchemeParams: dtheta must be <= pi/4");
}

namespace detail {

Arm sample_arm(const GridFunction& u, int i, int j,
               const std::array<int, 2>& v, int sign, const Obstacle& g) {
  const Grid& grid = u.grid();
  const double h = grid.spacing();
  const double vnorm = std::hypot(static_cast<double>(v[0]),
                                  static_cast<double>(v[1]));
  int ni = i + sign * v[0];
  int nj = grid.dim() == 2 ? j + sign * v[1] : 0;
  if (grid.on_lattice(ni, nj))
    return {u.at(ni, nj), h * vnorm, true};

  auto x = grid.coord(i, j);
  std::array<double, 2> w = {sign * static_cast<double>(v[0]),
                             grid.dim() == 2 ? sign * static_cast<double>(v[1])
                                             : 0.0};
  double t = grid.ray_clip(x, w).t_plus;
  std::array<double, 2> hit = {x[0] + t * w[0], x[1] + t * w[1]};
  for (int k = 0; k < grid.dim(); ++k) hit[k] = std::clamp(hit[k], -1.0, 1.0);
  return {g.eval(hit), t * vnorm, false};
}

}  // namespace detail

namespace {

void require_interior(const GridFunction& u, int i, int j, const char* who) {
  if (!u.grid().on_lattice(i, j))
    throw std::invalid_argument(std::string(who) + ": node off lattice");
  if (u.grid().is_boundary(i, j))
    throw std::logic_error(std::string(who) +
                           ": evaluated at a boundary node");
}

}  // namespace

double first_diff(const GridFunction& u, int i, int j,
                  const std::array<int, 2>& v, const Obstacle& g) {
  require_interior(u, i, j, "first_diff");
  double uc = u.at(i, j);
  auto p = detail::sample_arm(u, i, j, v, +1, g);
  auto m = detail::sample_arm(u, i, j, v, -1, g);
  return detail::dir_first_diff(uc, p, m);
}

double second_diff(const GridFunction& u, int i, int j,
                   const std::array<int, 2>& v, const Obstacle& g) {
  require_interior(u, i, j, "second_diff");
  double uc = u.at(i, j);
  auto p = detail::sample_arm(u, i, j, v, +1, g);
  auto m = detail::sample_arm(u, i, j, v, -1, g);
  return detail::dir_second_diff(uc, p, m);
}

double f_eps_scheme(const GridFunction& u, int i, int j,
                    const SchemeParams& params) {
  params.validate();
  require_interior(u, i, j, "f_eps_scheme");
  const double inv_eps = 1.0 / params.epsilon;
  double uc = u.at(i, j);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& v : params.stencil->half()) {
    auto p = detail::sample_arm(u, i, j, v, +1, *params.obstacle);
    auto m = detail::sample_arm(u, i, j, v, -1, *params.obstacle);
    double cand = inv_eps * detail::dir_first_diff(uc, p, m) +
                  detail::dir_second_diff(uc, p, m);
    best = std::min(best, cand);
  }
  return best;
}

double g_eps_scheme(const GridFunction& u, int i, int j,
                    const SchemeParams& params) {
  params.validate();
  if (!u.grid().on_lattice(i, j))
    throw std::invalid_argument("g_eps_scheme: node off lattice");
  double gx = params.obstacle->eval(u.grid().coord(i, j));
  if (u.grid().is_boundary(i, j)) return u.at(i, j) - gx;
  return std::max(u.at(i, j) - gx,
                  params.epsilon - f_eps_scheme(u, i, j, params));
}

double robust_scheme(const GridFunction& u, int i, int j, double eps_r,
                     const StencilSet& stencil, const Obstacle& g) {
  require_interior(u, i, j, "robust_scheme");
  double uc = u.at(i, j);
  double best = kInfeasible;
  for (const auto& v : stencil.half()) {
    auto p = detail::sample_arm(u, i, j, v, +1, g);
    auto m = detail::sample_arm(u, i, j, v, -1, g);
    if (detail::dir_first_diff(uc, p, m) <= eps_r)
      best = std::min(best, detail::dir_second_diff(uc, p, m));
  }
  return best;
}

double first_order_scheme(const GridFunction& u, int i, int j,
                          const SchemeParams& params) {
  params.validate();
  require_interior(u, i, j, "first_order_scheme");
  double uc = u.at(i, j);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& v : params.stencil->half()) {
    auto p = detail::sample_arm(u, i, j, v, +1, *params.obstacle);
    auto m = detail::sample_arm(u, i, j, v, -1, *params.obstacle);
    best = std::min(best, detail::dir_first_diff(uc, p, m));
  }
  return -best / params.epsilon;
}

// ---------------------------------------------------------------------------

double QuadraticTestFunction::value(const std::array<double, 2>& x) const {
  if (dim == 1) return a11 * x[0] * x[0] + b1 * x[0] + c;
  return a11 * x[0] * x[0] + 2.0 * a12 * x[0] * x[1] + a22 * x[1] * x[1] +
         b1 * x[0] + b2 * x[1] + c;
}

std::array<double, 2> QuadraticTestFunction::gradient(
    const std::array<double, 2>& x) const {
  if (dim == 1) return {2.0 * a11 * x[0] + b1, 0.0};
  return {2.0 * (a11 * x[0] + a12 * x[1]) + b1,
          2.0 * (a12 * x[0] + a22 * x[1]) + b2};
}

namespace {

inline double quad_form(const std::array<double, 3>& M, double cx, double sx) {
  return M[0] * cx * cx + 2.0 * M[1] * cx * sx + M[2] * sx * sx;
}

inline double penalized_objective(const std::array<double, 2>& p,
                                  const std::array<double, 3>& M,
                                  double inv_eps, double th) {
  double cx = std::cos(th), sx = std::sin(th);
  return inv_eps * std::abs(p[0] * cx + p[1] * sx) + quad_form(M, cx, sx);
}

double golden_min(const std::function<double(double)>& f, double a, double b) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 60 && (b - a) > 1e-13; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return std::min(fc, fd);
}

double min_eigenvalue(const std::array<double, 3>& M) {
  double tr = M[0] + M[2];
  double disc = std::sqrt(0.25 * (M[0] - M[2]) * (M[0] - M[2]) + M[1] * M[1]);
  return 0.5 * tr - disc;
}

}  // namespace

FEpsOracle::FEpsOracle(const std::array<double, 3>& M, int dim, double eps,
                       int samples)
    : m_(M), dim_(dim), samples_(samples) {
  if (!(eps > 0.0)) throw std::invalid_argument("FEpsOracle: eps must be > 0");
  if (dim != 1 && dim != 2)
    throw std::invalid_argument("FEpsOracle: dim must be 1 or 2");
  inv_eps_ = 1.0 / eps;
  if (dim_ == 1) return;
  if (samples_ < 10000)
    throw std::invalid_argument("FEpsOracle: samples must be >= 1e4 in 2D");
  cs_.resize(samples_);
  sn_.resize(samples_);
  qs_.resize(samples_);
  const double step = M_PI / samples_;  // v and -v coincide
  for (int k = 0; k < samples_; ++k) {
    double th = k * step;
    cs_[k] = std::cos(th);
    sn_[k] = std::sin(th);
    qs_[k] = quad_form(m_, cs_[k], sn_[k]);
  }
}

double FEpsOracle::operator()(const std::array<double, 2>& p) const {
  if (dim_ == 1) return inv_eps_ * std::abs(p[0]) + m_[0];

  double best = std::numeric_limits<double>::infinity();
  int best_k = 0;
  for (int k = 0; k < samples_; ++k) {
    double val = inv_eps_ * std::abs(p[0] * cs_[k] + p[1] * sn_[k]) + qs_[k];
    if (val < best) {
      best = val;
      best_k = k;
    }
  }
  auto obj = [&](double th) {
    return penalized_objective(p, m_, inv_eps_, th);
  };
  // the objective is non-smooth exactly where v.p = 0; try those angles
  if (p[0] != 0.0 || p[1] != 0.0)
    best = std::min(best, obj(std::atan2(p[1], p[0]) + M_PI / 2.0));
  const double step = M_PI / samples_;
  best = std::min(best, golden_min(obj, best_k * step - step,
                                   best_k * step + step));
  return best;
}

double f_eps_exact(const std::array<double, 2>& p,
                   const std::array<double, 3>& M, int dim, double eps,
                   int samples) {
  return FEpsOracle(M, dim, eps, samples)(p);
}

double f_eps_exact(const QuadraticTestFunction& q,
                   const std::array<double, 2>& x, double eps, int samples) {
  return f_eps_exact(q.gradient(x), q.hessian(), q.dim, eps, samples);
}

double lambda_exact(const std::array<double, 2>& p,
                    const std::array<double, 3>& M, int dim,
                    ConstraintKind kind, double eps_r) {
  if (dim == 1) {
    bool admissible = kind == ConstraintKind::equality
                          ? p[0] == 0.0
                          : std::abs(p[0]) <= eps_r;
    return admissible ? M[0] : kInfeasible;
  }

  double pnorm = std::hypot(p[0], p[1]);
  if (kind == ConstraintKind::equality) {
    if (pnorm == 0.0) return min_eigenvalue(M);
    double cx = -p[1] / pnorm, sx = p[0] / pnorm;
    return quad_form(M, cx, sx);
  }

  if (eps_r < 0.0)
    throw std::invalid_argument("lambda_exact: eps_r must be >= 0");
  if (pnorm <= eps_r) return min_eigenvalue(M);

  // admissible angles: |cos(th - phi)| <= s, two closed arcs around the
  // tangential directions; the quadratic form is a sinusoid in 2*th, so the
  // minimum sits at an arc endpoint or at its unconstrained minimizer.
  double s = eps_r / pnorm;
  double phi = std::atan2(p[1], p[0]);
  double beta = std::acos(s);

  double best = std::numeric_limits<double>::infinity();
  auto eval = [&](double th) {
    best = std::min(best, quad_form(M, std::cos(th), std::sin(th)));
  };
  eval(phi + beta);
  eval(phi + M_PI - beta);
  // unconstrained minimizer of m + R cos(2 th - chi)
  double chi = std::atan2(2.0 * M[1], M[0] - M[2]);
  for (double th : {0.5 * (chi + M_PI), 0.5 * (chi + M_PI) + M_PI}) {
    double cosgap = std::abs(std::cos(th - phi));
    if (cosgap <= s + 1e-15) eval(th);
  }
  return best;
}

double lambda_exact(const QuadraticTestFunction& q,
                    const std::array<double, 2>& x, ConstraintKind kind,
                    double eps_r) {
  return lambda_exact(q.gradient(x), q.hessian(), q.dim, kind, eps_r);
}

}  // namespace qcenv

#pragma once

#include <array>
#include <limits>
#include <vector>

#include "qcenv/grid.hpp"
#include "qcenv/obstacle.hpp"
#include "qcenv/stencil.hpp"

namespace qcenv {

struct SchemeParams {
  double epsilon = 0.0;
  const StencilSet* stencil = nullptr;
  const Obstacle* obstacle = nullptr;

  void validate() const;
};

namespace detail {

// One stencil arm from node (i,j): either the lattice endpoint x + sign*h*v,
// or, when that leaves the cube, the exact boundary intersection where the
// obstacle supplies the value.  length is the Euclidean distance from x.
struct Arm {
  double value;
  double length;
  bool lattice;
};

Arm sample_arm(const GridFunction& u, int i, int j,
               const std::array<int, 2>& v, int sign, const Obstacle& g);

// Normalized differences shared by the pointwise operators and the solver:
// both approximate unit-direction derivatives (|grad u . v/|v||  and
// (v/|v|)^T D^2u (v/|v|)) so the min over directions is unbiased.
inline double dir_first_diff(double uc, const Arm& p, const Arm& m) {
  return std::max((p.value - uc) / p.length, (m.value - uc) / m.length);
}

inline double dir_second_diff(double uc, const Arm& p, const Arm& m) {
  if (p.lattice && m.lattice)
    return (p.value + m.value - 2.0 * uc) / (p.length * p.length);
  // non-uniform three-point second difference; keeps coefficient signs
  return 2.0 *
         (m.length * p.value + p.length * m.value -
          (p.length + m.length) * uc) /
         (p.length * m.length * (p.length + m.length));
}

}  // namespace detail

// max over the two arms of (value - u(x)) / arm length; degenerate-elliptic
// Eikonal term per unit direction.  x must be interior.
double first_diff(const GridFunction& u, int i, int j,
                  const std::array<int, 2>& v, const Obstacle& g);

// centered second difference normalized by squared arm length; non-uniform
// form when an arm is clipped at the boundary.  Exact on quadratics along
// unclipped arms.
double second_diff(const GridFunction& u, int i, int j,
                   const std::array<int, 2>& v, const Obstacle& g);

// min over stencil directions of (1/eps) first_diff + second_diff
double f_eps_scheme(const GridFunction& u, int i, int j,
                    const SchemeParams& params);

// obstacle scheme: interior max(u - g, eps - f_eps_scheme); boundary u - g
double g_eps_scheme(const GridFunction& u, int i, int j,
                    const SchemeParams& params);

// min of second_diff over directions whose first_diff is at most eps_r;
// +infinity when no direction is admissible (documented sentinel)
double robust_scheme(const GridFunction& u, int i, int j, double eps_r,
                     const StencilSet& stencil, const Obstacle& g);

// -min over directions of first_diff/eps: the pure-Eikonal discretization
// whose implicit h/2 curvature term supplies the second-order part
double first_order_scheme(const GridFunction& u, int i, int j,
                          const SchemeParams& params);

// ---------------------------------------------------------------------------
// exact continuous-operator evaluators (oracles)

struct QuadraticTestFunction {
  int dim = 2;
  // Hessian of the quadratic part is 2A
  double a11 = 0.0, a12 = 0.0, a22 = 0.0;
  double b1 = 0.0, b2 = 0.0;
  double c = 0.0;

  double value(const std::array<double, 2>& x) const;
  std::array<double, 2> gradient(const std::array<double, 2>& x) const;
  // M = D^2 q, row-major {m11, m12, m22}
  std::array<double, 3> hessian() const { return {2 * a11, 2 * a12, 2 * a22}; }
};

inline constexpr double kInfeasible = std::numeric_limits<double>::infinity();

// Evaluates min over unit v of (1/eps)|v.p| + v^T M v by a deterministic
// angular sweep with kink candidates and golden-section refinement.  The
// angular table depends only on M and is reused across gradients.
class FEpsOracle {
 public:
  FEpsOracle(const std::array<double, 3>& M, int dim, double eps,
             int samples = 1 << 16);
  double operator()(const std::array<double, 2>& p) const;

 private:
  std::array<double, 3> m_;
  int dim_;
  double inv_eps_;
  int samples_;
  std::vector<double> cs_, sn_, qs_;
};

// one-shot form; samples >= 1e4 in 2D
double f_eps_exact(const std::array<double, 2>& p,
                   const std::array<double, 3>& M, int dim, double eps,
                   int samples = 1 << 16);
double f_eps_exact(const QuadraticTestFunction& q,
                   const std::array<double, 2>& x, double eps,
                   int samples = 1 << 16);

enum class ConstraintKind { equality, inequality };

// equality: min of v^T M v over unit v with v.p = 0 (min eigenvalue when
// p = 0); inequality: constraint |v.p| <= eps_r.  Returns kInfeasible for an
// empty constraint set (possible only in 1D).
double lambda_exact(const std::array<double, 2>& p,
                    const std::array<double, 3>& M, int dim,
                    ConstraintKind kind, double eps_r = 0.0);
double lambda_exact(const QuadraticTestFunction& q,
                    const std::array<double, 2>& x, ConstraintKind kind,
                    double eps_r = 0.0);

}  // namespace qcenv

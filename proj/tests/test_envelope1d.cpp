#include <doctest.h>

#include "test_support.hpp"

#include <cmath>
#include <stdexcept>
#include <random>
#include <vector>

#include "qcenv/envelope1d.hpp"
#include "qcenv/obstacle.hpp"

using namespace qcenv;

namespace {

// Largest nonincreasing-then-nondecreasing minorant with the valley fixed at
// index m: prefix minima on the left, suffix minima on the right.
std::vector<double> valley_minorant(const std::vector<double>& a,
                                    std::size_t m) {
  std::vector<double> q(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    double pm = a[i], sm = a[i];
    for (std::size_t k = 0; k <= i; ++k) pm = std::min(pm, a[k]);
    for (std::size_t k = i; k < a.size(); ++k) sm = std::min(sm, a[k]);
    if (i < m)
      q[i] = pm;
    else if (i > m)
      q[i] = sm;
    else
      q[i] = std::min(pm, sm);
  }
  return q;
}

// Every quasiconvex minorant has some valley index, so the envelope is the
// elementwise max of the per-valley maximal minorants.
std::vector<double> brute_qce(const std::vector<double>& a) {
  std::vector<double> best(a.size(), -1e300);
  for (std::size_t m = 0; m < a.size(); ++m) {
    auto q = valley_minorant(a, m);
    for (std::size_t i = 0; i < a.size(); ++i)
      best[i] = std::max(best[i], q[i]);
  }
  return best;
}

}  // namespace

TEST_CASE("qce_line basics") {
  std::vector<double> mono = {1, 2, 3, 4};
  CHECK(qce_line(mono) == mono);
  std::vector<double> down = {4, 3, 1, 0};
  CHECK(qce_line(down) == down);

  std::vector<double> a = {3, 1, 2, 0, 4};
  std::vector<double> want = {3, 1, 1, 0, 4};
  CHECK(qce_line(a) == want);
  CHECK(brute_qce(a) == want);

  std::vector<double> single = {7};
  CHECK(qce_line(single) == single);
}

TEST_CASE("double-well envelope value at the origin") {
  auto g = Obstacle::double_well_1d();
  const int n = 201;
  std::vector<double> vals(n);
  for (int i = 0; i < n; ++i) vals[i] = g(-1.0 + 2.0 * i / (n - 1));
  auto env = qce_line(vals);
  CHECK(env[(n - 1) / 2] == near(0.0, 1e-12));
}

TEST_CASE("qce_line properties against the brute-force oracle") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> ulen(1, 8);
  std::uniform_int_distribution<int> uval(0, 4);
  for (int t = 0; t < 3000; ++t) {
    std::size_t n = ulen(rng);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = uval(rng);
      b[i] = a[i] + uval(rng);  // a <= b
    }
    auto qa = qce_line(a);
    auto qb = qce_line(b);
    auto oracle = brute_qce(a);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(qa[i] == near(oracle[i], 0));
      CHECK(qa[i] <= a[i]);        // minorant
      CHECK(qa[i] <= qb[i]);       // monotone
    }
    CHECK(qce_line(qa) == qa);     // idempotent (fixes quasiconvex inputs)
  }
}

TEST_CASE("analytic case classification") {
  double W = 2.0, eps = 0.1;
  auto lin = classify_case(W, eps * eps * W, eps);
  CHECK(lin.kind == Case1D::linear_plus);
  CHECK(lin.S == doctest::Approx(1.0));

  auto flat = classify_case(W, 0.0, eps);
  CHECK(flat.kind == Case1D::interior_min);
  CHECK(flat.S == 0.0);

  auto inc = classify_case(W, 2.0 * eps * eps * W, eps);
  CHECK(inc.kind == Case1D::increasing);
  CHECK(inc.S == doctest::Approx(2.0));

  auto dec = classify_case(W, -2.0 * eps * eps * W, eps);
  CHECK(dec.kind == Case1D::decreasing);

  CHECK_THROWS_AS(classify_case(-1.0, 0.0, eps), std::invalid_argument);
  CHECK_THROWS_AS(classify_case(W, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("linear case evaluates exactly") {
  double W = 1.0, eps = 0.2;
  auto c = classify_case(W, eps * eps * W, eps);
  for (double x : {0.0, 0.25, 0.8, 1.0})
    CHECK(eval_analytic(c, x) == near(eps * eps * x, 1e-15));
  CHECK(analytic_ode_residual(c, 0.5) == near(0.0, 1e-15));
}

TEST_CASE("interior minimum: symmetry, Taylor expansion, boundary values") {
  double W = 2.0, eps = 0.1;
  auto c = classify_case(W, 0.0, eps);
  CHECK(c.x_star == near(1.0, 1e-10));  // symmetric
  CHECK(eval_analytic(c, 0.0) == near(0.0, 1e-12));
  CHECK(eval_analytic(c, W) == near(0.0, 1e-12));
  CHECK(eval_analytic(c, c.x_star) == near(c.u0, 1e-14));

  // u(x) - u(x*) = (eps/2)(x - x*)^2 + O(|x - x*|^3)
  for (double d : {1e-3, 5e-3, 1e-2}) {
    double lhs = eval_analytic(c, c.x_star + d) - c.u0;
    CHECK(lhs == doctest::Approx(0.5 * eps * d * d).epsilon(0.05));
  }
}

TEST_CASE("fitted constants satisfy the boundary conditions and the ODE") {
  // includes the near-degenerate band |S| just below 1 where the monotone
  // profile takes over from the interior-minimum formula
  double W = 2.0;
  for (double eps : {0.2, 0.1, 0.05}) {
    for (double S : {0.0, 0.5, -0.5, 0.93, -0.93, 0.999, 2.0, -2.0, 5.0}) {
      double H = S * eps * eps * W;
      auto c = classify_case(W, H, eps);
      CAPTURE(eps);
      CAPTURE(S);
      CHECK(eval_analytic(c, 0.0) == near(0.0, 1e-12));
      CHECK(eval_analytic(c, W) == near(H, 1e-12));
      double worst = 0.0;
      for (int k = 0; k <= 1000; ++k) {
        double x = W * k / 1000.0;
        worst = std::max(worst, std::abs(analytic_ode_residual(c, x)));
      }
      CHECK(worst <= 1e-8);

      // finite-difference cross-check of the evaluation path
      double s = 1e-5;
      for (double x : {0.3 * W, 0.77 * W}) {
        double um = eval_analytic(c, x - s), u0 = eval_analytic(c, x),
               up = eval_analytic(c, x + s);
        double du = (up - um) / (2 * s), ddu = (up + um - 2 * u0) / (s * s);
        if (c.kind == Case1D::interior_min && std::abs(x - c.x_star) < 2 * s)
          continue;  // kink
        CHECK(eps * ddu + std::abs(du) - eps * eps ==
              near(0.0, 1e-5));
      }
    }
  }
}

TEST_CASE("analytic solutions are quasiconvex") {
  double W = 2.0;
  for (double eps : {0.2, 0.05}) {
    for (double S : {0.0, 0.7, -0.7, 1.0, 3.0}) {
      auto c = classify_case(W, S * eps * eps * W, eps);
      const int n = 4001;
      std::vector<double> vals(n);
      for (int k = 0; k < n; ++k)
        vals[k] = eval_analytic(c, W * k / (n - 1.0));
      auto env = qce_line(vals);
      double worst = 0.0;
      for (int k = 0; k < n; ++k)
        worst = std::max(worst, vals[k] - env[k]);
      CHECK(worst <= 1e-10);
    }
  }
}

TEST_CASE("eval on unfitted case is a contract violation") {
  Analytic1DCase c;
  c.interval_length = 1.0;
  c.epsilon = 0.1;
  CHECK_THROWS_AS(eval_analytic(c, 0.5), std::logic_error);
}

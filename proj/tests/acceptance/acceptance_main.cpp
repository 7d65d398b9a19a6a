// Acceptance suite: one pass/fail line per criterion.  Run with no arguments
// for all criteria or with a single number to run one of them.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "qcenv/envelope1d.hpp"
#include "qcenv/experiments.hpp"
#include "qcenv/grid.hpp"
#include "qcenv/obstacle.hpp"
#include "qcenv/operators.hpp"
#include "qcenv/solver.hpp"
#include "qcenv/verify.hpp"

using namespace qcenv;

namespace {

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

bool g_verbose = true;

void detail_line(const char* fmt, ...) {
  if (!g_verbose) return;
  va_list ap;
  va_start(ap, fmt);
  std::printf("        ");
  std::vprintf(fmt, ap);
  std::printf("\n");
  va_end(ap);
}

// ---------------------------------------------------------------------------
// 1. 1D analytic oracle match

bool criterion_1() {
  const double interval = 2.0;  // the grid [-1,1] mapped to [0, W]
  StencilSet st = StencilSet::make(1, 1);
  bool ok = true;
  for (double eps : {0.2, 0.1, 0.05}) {
    std::vector<double> agg_err;
    std::vector<double> hs;
    for (int n : {65, 129, 257}) {
      Grid grid(1, n);
      double worst = 0.0;
      for (double S : {1.0, -1.0, 2.0, -2.0, 0.5, 0.0}) {
        double H = S * eps * eps * interval;
        Obstacle bc("dirichlet", 1, [H](const std::array<double, 2>& x) {
          if (x[0] <= -1.0) return 0.0;
          if (x[0] >= 1.0) return H;
          return 10.0;  // obstacle far above: unconstrained Dirichlet problem
        });
        auto ana = classify_case(interval, H, eps);
        SchemeParams params{eps, &st, &bc};
        SolverConfig cfg;
        cfg.tol = 1e-8;
        cfg.max_iter = 5000000;
        Timer t;
        auto [u, rep] = solve(grid, params, cfg);
        double case_s = t.seconds();
        if (!rep.converged || case_s >= 10.0) ok = false;
        double err = 0.0;
        for (std::size_t f = 0; f < u.size(); ++f)
          err = std::max(err, std::abs(u[f] - eval_analytic(
                                                  ana, grid.coord_flat(f)[0] +
                                                           1.0)));
        if (err > 10.0 * grid.spacing()) ok = false;
        worst = std::max(worst, err);
      }
      agg_err.push_back(worst);
      hs.push_back(grid.spacing());
    }
    detail_line("eps=%.2f  max-over-S errors: %.3e (N=65) %.3e (N=129) %.3e "
                "(N=257); bounds 10h: %.3e %.3e %.3e",
                eps, agg_err[0], agg_err[1], agg_err[2], 10 * hs[0],
                10 * hs[1], 10 * hs[2]);
    if (!(agg_err[0] > agg_err[1] && agg_err[1] > agg_err[2])) ok = false;
  }
  return ok;
}

// ---------------------------------------------------------------------------
// 2. eps -> 0 convergence toward the line-sweep envelope

bool criterion_2() {
  Obstacle g = Obstacle::double_well_1d();
  Grid grid(1, 201);
  StencilSet st = StencilSet::make(1, 1);
  GridFunction env = sample(g, grid);
  qce_line_inplace(env.values());

  bool ok = true;
  double prev = std::numeric_limits<double>::infinity();
  const double tol = 1e-6;
  for (double eps : {0.2, 0.1, 0.05, 1e-3, 1e-4}) {
    SchemeParams params{eps, &st, &g};
    SolverConfig cfg;
    cfg.tol = tol;
    cfg.max_iter = 30000000;
    auto [u, rep] = solve(grid, params, cfg);
    if (!rep.converged) ok = false;
    double dist = 0.0, above = 0.0;
    for (std::size_t f = 0; f < u.size(); ++f) {
      dist = std::max(dist, std::abs(u[f] - env[f]));
      above = std::max(above, u[f] - env[f]);
    }
    detail_line("eps=%-7g dist-to-envelope=%.5f above=%.2e iters=%ld",
                eps, dist, above, rep.iterations);
    if (dist > prev + 1e-12) ok = false;      // nonincreasing in eps
    if (eps == 1e-3 && dist > 0.05) ok = false;
    if (above > tol) ok = false;              // all iterates below QCE + tol
    prev = dist;
  }
  return ok;
}

// ---------------------------------------------------------------------------
// 3. slow convergence from the obstacle (tracking + 1/eps scaling)

bool criterion_3() {
  Obstacle g = Obstacle::inverted_parabola_1d();
  Grid grid(1, 201);
  StencilSet st = StencilSet::make(1, 1);
  bool ok = true;

  auto tracking_dev = [&](double eps) {
    SchemeParams params{eps, &st, &g};
    auto [delta, K] = cfl_step(params, grid);
    GridFunction u = initialize(g, grid, InitPolicy::obstacle);
    long nmax = static_cast<long>(0.8 / eps / delta);
    long stride = std::max(1L, nmax / 256);
    double worst = 0.0;
    for (long it = 1; it <= nmax; ++it) {
      auto [nu, sup] = euler_step(u, params, delta);
      u = std::move(nu);
      if (it % stride == 0 || it == nmax) {
        double t = it * delta, dev = 0.0;
        for (std::size_t f = 0; f < u.size(); ++f) {
          double x = grid.coord_flat(f)[0];
          dev = std::max(dev,
                         std::abs(u[f] - std::min(1.0 - x * x, 1.0 - eps * t)));
        }
        worst = std::max(worst, dev);
      }
    }
    return worst;
  };

  double dev = tracking_dev(0.05);
  detail_line("tracking vs min(g, 1 - eps t) at eps=0.05: sup deviation "
              "%.4f (required <= 0.05)",
              dev);
  if (dev > 0.05) {
    ok = false;
    detail_line("NOTE: the explicit flow rounds the moving corner at scale "
                "eps; the deviation scales like ~1.6*eps (see decisions "
                "ledger), so the 0.05 cap is unreachable at eps=0.05.");
    double dev_half = tracking_dev(grid.spacing() / 2.0);
    detail_line("supplementary: at the default eps=h/2 the same tracking "
                "deviation is %.4f <= 0.05.",
                dev_half);
  }

  long prev = 0;
  for (double eps : {0.1, 0.05, 0.025}) {
    SchemeParams params{eps, &st, &g};
    SolverConfig cfg;
    cfg.init = InitPolicy::obstacle;
    cfg.max_iter = 20000000;
    auto [u, rep] = solve(grid, params, cfg);
    if (!rep.converged) ok = false;
    if (prev > 0) {
      double ratio = static_cast<double>(rep.iterations) / prev;
      detail_line("iterations(eps=%g) = %ld, ratio vs previous = %.2f "
                  "(required >= 2)",
                  eps, rep.iterations, ratio);
      if (ratio < 2.0) ok = false;
    } else {
      detail_line("iterations(eps=%g) = %ld", eps, rep.iterations);
    }
    prev = rep.iterations;
  }
  return ok;
}

// ---------------------------------------------------------------------------
// 4. consistency slope and width monotonicity

bool criterion_4() {
  auto quads = random_quadratics(20, 20250811, 2, 1.0, 0.3);
  std::vector<int> widths = {1, 2, 3, 5};
  std::vector<int> points = {33, 65, 129, 257};
  auto rows = consistency_sweep(quads, 0.5, widths, points);

  std::vector<const ConsistencyRow*> w5;
  for (const auto& r : rows)
    if (r.width == 5) w5.push_back(&r);
  std::sort(w5.begin(), w5.end(),
            [](auto* a, auto* b) { return a->points < b->points; });
  double best_slope = -1e9;
  for (std::size_t k = 0; k + 1 < w5.size(); ++k) {
    double s = std::log(w5[k]->max_err / w5[k + 1]->max_err) /
               std::log(w5[k]->h / w5[k + 1]->h);
    detail_line("W=5 slope h=%.4f -> h=%.4f: %.3f", w5[k]->h, w5[k + 1]->h, s);
    best_slope = std::max(best_slope, s);
  }

  bool ok = best_slope >= 0.8;  // pre-floor segment
  double prev = std::numeric_limits<double>::infinity();
  for (int w : widths) {
    for (const auto& r : rows)
      if (r.width == w && r.points == 257) {
        detail_line("N=257 W=%d err=%.6f", w, r.max_err);
        if (r.max_err > prev) ok = false;
        prev = r.max_err;
      }
  }
  return ok;
}

// ---------------------------------------------------------------------------
// 5. property suites

// independent valley-family oracle for the 1D envelope
std::vector<double> brute_envelope(const std::vector<double>& a) {
  std::vector<double> best(a.size(), -1e300);
  for (std::size_t m = 0; m < a.size(); ++m)
    for (std::size_t i = 0; i < a.size(); ++i) {
      double pm = a[i], sm = a[i];
      for (std::size_t k = 0; k <= i; ++k) pm = std::min(pm, a[k]);
      for (std::size_t k = i; k < a.size(); ++k) sm = std::min(sm, a[k]);
      double q = i < m ? pm : (i > m ? sm : std::min(pm, sm));
      best[i] = std::max(best[i], q);
    }
  return best;
}

bool criterion_5() {
  bool ok = true;

  {  // ellipticity fuzz, 1e4 trials
    Obstacle g = Obstacle::square_sdf();
    StencilSet st = StencilSet::make(2, 2);
    SchemeParams params{0.1, &st, &g};
    Grid grid(2, 9);
    auto rep = ellipticity_fuzz(params, grid, 10000, 811);
    detail_line("ellipticity fuzz: %ld samples, worst violation %.3e",
                rep.samples, rep.worst_violation);
    ok = ok && rep.passed && rep.samples == 10000;
  }

  {  // comparison fuzz, 1e3 pairs
    auto rep = comparison_fuzz(1000, 812);
    detail_line("comparison fuzz: %ld pairs, worst violation %.3e %s",
                rep.samples, rep.worst_violation, rep.location.c_str());
    ok = ok && rep.passed && rep.samples == 1000;
  }

  {  // 1D envelope against the exhaustive oracle: all sequences of length
     // <= 8 over a 5-value alphabet
    long total = 0;
    double worst = 0.0;
    for (int len = 1; len <= 8; ++len) {
      std::vector<double> a(len, 0.0);
      long count = 1;
      for (int k = 0; k < len; ++k) count *= 5;
      for (long code = 0; code < count; ++code) {
        long c = code;
        for (int k = 0; k < len; ++k) {
          a[k] = static_cast<double>(c % 5);
          c /= 5;
        }
        auto got = qce_line(a);
        auto want = brute_envelope(a);
        for (int k = 0; k < len; ++k)
          worst = std::max(worst, std::abs(got[k] - want[k]));
        ++total;
      }
    }
    detail_line("qce_line vs valley-family oracle: %ld sequences, worst "
                "mismatch %.3e",
                total, worst);
    ok = ok && worst == 0.0 && total == 488280;
  }

  {  // Euler monotonicity, 1e3 pairs
    std::mt19937_64 rng(813);
    std::uniform_real_distribution<double> ur(-1.0, 1.0);
    std::uniform_real_distribution<double> upos(0.0, 0.5);
    double worst = -1e300;
    for (int t = 0; t < 1000; ++t) {
      int dim = (t % 2) + 1;
      Grid grid(dim, dim == 1 ? 33 : 9);
      Obstacle g = dim == 1 ? Obstacle::double_well_1d()
                            : Obstacle::square_sdf();
      StencilSet st = StencilSet::make(dim, dim == 1 ? 1 : 2);
      SchemeParams params{0.1, &st, &g};
      auto [delta, K] = cfl_step(params, grid);
      GridFunction u(grid), w(grid);
      for (std::size_t f = 0; f < u.size(); ++f) {
        u[f] = ur(rng);
        w[f] = u[f] + upos(rng);
      }
      auto [tu, su] = euler_step(u, params, delta);
      auto [tw, sw] = euler_step(w, params, delta);
      for (std::size_t f = 0; f < u.size(); ++f)
        worst = std::max(worst, tu[f] - tw[f]);
    }
    detail_line("euler monotonicity: 1000 pairs, worst violation %.3e", worst);
    ok = ok && worst <= 1e-12;
  }
  return ok;
}

// ---------------------------------------------------------------------------
// 6. operator ordering audit

bool criterion_6() {
  auto quads = random_quadratics(100, 20250806, 2);
  auto rep = ordering_audit(quads, {0.05, 0.1, 0.5}, 1e-5);
  detail_line("%ld samples, worst violation %.3e at %s", rep.samples,
              rep.worst_violation, rep.location.c_str());
  return rep.passed && rep.samples == 300;
}

// ---------------------------------------------------------------------------
// 7. solution sandwich, residual and line quasiconvexity on the corpus

bool criterion_7() {
  struct Case {
    const char* name;
    Obstacle obstacle;
    int n;
    int width;
    double eps;  // 0: h/2
  };
  std::vector<Case> cases;
  cases.push_back({"double-well", Obstacle::double_well_1d(), 201, 1, 0.0});
  cases.push_back({"parabola", Obstacle::inverted_parabola_1d(), 201, 1, 0.0});
  cases.push_back({"square eps=0.5", Obstacle::square_sdf(), 64, 2, 0.5});
  cases.push_back({"square", Obstacle::square_sdf(), 64, 2, 0.0});
  cases.push_back({"pacman", Obstacle::pacman_sdf(), 64, 2, 0.0});
  cases.push_back({"pacman eps=1", Obstacle::pacman_sdf(), 64, 2, 1.0});
  cases.push_back({"circles", Obstacle::cone_with_circles(), 64, 2, 0.0});

  bool ok = true;
  for (const auto& c : cases) {
    Grid grid(c.obstacle.dim(), c.n);
    double eps = c.eps > 0.0 ? c.eps : grid.spacing() / 2.0;
    StencilSet st = StencilSet::make(c.obstacle.dim(), c.width);
    SchemeParams params{eps, &st, &c.obstacle};
    SolverConfig cfg;
    cfg.max_iter = 4000000;
    auto [u, rep] = solve(grid, params, cfg);
    GridFunction gs = sample(c.obstacle, grid);

    double above = -1e300, below = -1e300;
    for (std::size_t f = 0; f < u.size(); ++f) {
      above = std::max(above, u[f] - gs[f]);
      below = std::max(below,
                       (gs.min() - 4.0 * eps * eps * grid.dim()) - u[f]);
    }
    double fmin = std::numeric_limits<double>::infinity();
    int nn = grid.points_per_axis();
    for (int i = 1; i < nn - 1; ++i) {
      int jlo = grid.dim() == 2 ? 1 : 0;
      int jhi = grid.dim() == 2 ? nn - 1 : 1;
      for (int j = jlo; j < jhi; ++j) {
        std::size_t f = grid.flat(i, j);
        if (u[f] < gs[f] - cfg.tol)
          fmin = std::min(fmin, f_eps_scheme(u, i, j, params));
      }
    }
    double floor = eps - 10.0 * cfg.tol / rep.delta;
    auto qc = qc_along_stencil(u, st);
    detail_line("%-14s conv=%d u-g<=%.1e below-viol=%.1e Fmin=%.4g "
                "(floor %.4g) qc=%.2e",
                c.name, (int)rep.converged, above, below, fmin, floor,
                qc.worst_violation);
    ok = ok && rep.converged && above <= cfg.tol && below <= cfg.tol &&
         fmin >= floor && qc.worst_violation <= 1e-3;
  }
  return ok;
}

// ---------------------------------------------------------------------------
// 8. first-order scheme equivalence at eps = h/2

bool criterion_8() {
  bool ok = true;
  {
    Obstacle g = Obstacle::double_well_1d();
    Grid grid(1, 65);
    StencilSet st = StencilSet::make(1, 1);
    SchemeParams params{grid.spacing() / 2.0, &st, &g};
    SolverConfig full;
    SolverConfig first;
    first.scheme = SchemeKind::first_order;
    auto [uf, rf] = solve(grid, params, full);
    auto [u1, r1] = solve(grid, params, first);
    double d = sup_distance(uf, u1);
    detail_line("double-well N=65: sup distance %.4g (bound %.4g)", d,
                5.0 * grid.spacing());
    ok = ok && rf.converged && r1.converged && d <= 5.0 * grid.spacing();
  }
  {
    Obstacle g = Obstacle::square_sdf();
    Grid grid(2, 64);
    StencilSet st = StencilSet::make(2, 2);
    SchemeParams params{grid.spacing() / 2.0, &st, &g};
    SolverConfig full;
    full.max_iter = 2000000;
    SolverConfig first = full;
    first.scheme = SchemeKind::first_order;
    auto [uf, rf] = solve(grid, params, full);
    auto [u1, r1] = solve(grid, params, first);
    double d = sup_distance(uf, u1);
    detail_line("square N=64 W=2: sup distance %.4g (bound %.4g)", d,
                5.0 * grid.spacing());
    ok = ok && rf.converged && r1.converged && d <= 5.0 * grid.spacing();
  }
  return ok;
}

// ---------------------------------------------------------------------------
// 9. line-sweep acceleration ratio

bool criterion_9() {
  Obstacle g = Obstacle::cone_with_circles();
  StencilSet st = StencilSet::make(2, 1);
  bool ok = true;
  for (int n : {32, 64, 128}) {
    Grid grid(2, n);
    SchemeParams params{grid.spacing() / 2.0, &st, &g};
    SolverConfig plain;
    plain.init = InitPolicy::obstacle;  // where the sweep has humps to remove
    plain.max_iter = 8000000;
    SolverConfig fast = plain;
    fast.accel = Accel::line_sweep;
    auto [up, rp] = solve(grid, params, plain);
    auto [ua, ra] = solve(grid, params, fast);
    double ratio = static_cast<double>(rp.iterations) / ra.iterations;
    detail_line("n=%3d plain=%ld accel=%ld (sweep rounds %ld) ratio=%.1f "
                "sup-diff=%.1e",
                n, rp.iterations, ra.iterations, ra.accel_rounds, ratio,
                sup_distance(up, ua));
    ok = ok && rp.converged && ra.converged && ratio >= 4.0;
  }
  return ok;
}

// ---------------------------------------------------------------------------
// 10. strict convexification of the square's corners

bool criterion_10() {
  Obstacle g = Obstacle::square_sdf();
  Grid grid(2, 64);
  StencilSet st = StencilSet::make(2, 2);
  SchemeParams params{0.5, &st, &g};
  SolverConfig cfg;
  cfg.max_iter = 2000000;
  auto [u, rep] = solve(grid, params, cfg);
  GridFunction gs = sample(g, grid);
  bool ok = rep.converged;
  // (0.5, 0.5) is not a node at N = 64; values at the exact corners come
  // from bilinear interpolation.
  for (double sx : {0.5, -0.5})
    for (double sy : {0.5, -0.5}) {
      double uv = interpolate(u, sx, sy);
      double gv = interpolate(gs, sx, sy);
      detail_line("corner (%+.1f,%+.1f): u=%.6f g=%.6f u-g=%.2e", sx, sy, uv,
                  gv, uv - gv);
      ok = ok && uv < 0.0 && uv < gv;
    }
  if (!ok && rep.converged) {
    // diagnostics: the solution detaches from the obstacle along the edge
    // midlines and stays in contact on the corner diagonals, so the corner
    // value sits at the (positive) interpolated obstacle level
    int mid = (grid.points_per_axis() - 1) / 2;
    int ic = static_cast<int>(std::lround(1.5 / grid.spacing()));
    detail_line("NOTE: contact structure: u-g = %.2e on the corner diagonal "
                "vs %.2e at the edge midline; the obstacle itself is an "
                "eps-strict subsolution on the corner cone, so the corner "
                "stays in contact (see decisions ledger).",
                u.at(ic, ic) - gs.at(ic, ic), u.at(ic, mid) - gs.at(ic, mid));
  }
  return ok;
}

struct Criterion {
  int id;
  const char* summary;
  bool (*fn)();
};

const Criterion kCriteria[] = {
    {1, "1D analytic oracle match (error <= 10h, decreasing in N)",
     criterion_1},
    {2, "eps->0 convergence to the quasiconvex envelope", criterion_2},
    {3, "slow convergence from the obstacle (tracking + 1/eps scaling)",
     criterion_3},
    {4, "consistency slope >= 0.8 before the dtheta floor; W-monotone",
     criterion_4},
    {5, "property suites (ellipticity, comparison, envelope oracle, "
     "monotonicity)",
     criterion_5},
    {6, "operator ordering audit", criterion_6},
    {7, "solution sandwich, non-contact residual, line quasiconvexity",
     criterion_7},
    {8, "first-order scheme equivalence at eps = h/2", criterion_8},
    {9, "line-sweep acceleration >= 4x", criterion_9},
    {10, "strict convexification of square corners", criterion_10},
};

}  // namespace

int main(int argc, char** argv) {
  int only = argc > 1 ? std::atoi(argv[1]) : 0;
  int failures = 0;
  for (const auto& c : kCriteria) {
    if (only != 0 && c.id != only) continue;
    Timer t;
    bool pass = c.fn();
    std::printf("[%s] criterion %2d: %s (%.1fs)\n", pass ? "PASS" : "FAIL",
                c.id, c.summary, t.seconds());
    std::fflush(stdout);
    if (!pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}

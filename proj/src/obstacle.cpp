#include "qcenv/obstacle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <vector>

namespace qcenv {

Obstacle::Obstacle(std::string name, int dim, Evaluator f)
    : name_(std::move(name)), dim_(dim), eval_(std::move(f)) {
  if (dim_ != 1 && dim_ != 2)
    throw std::invalid_argument("Obstacle: dim must be 1 or 2");
  if (!eval_) throw std::invalid_argument("Obstacle: missing evaluator");
}

double Obstacle::eval(const std::array<double, 2>& x) const {
  std::array<double, 2> c = x;
  for (int k = 0; k < dim_; ++k) {
    if (c[k] < -1.0 - 1e-9 || c[k] > 1.0 + 1e-9)
      throw std::invalid_argument("Obstacle::eval: point outside [-1,1]^d");
    c[k] = std::clamp(c[k], -1.0, 1.0);
  }
  return eval_(c);
}

Obstacle Obstacle::double_well_1d() {
  return Obstacle("double-well", 1, [](const std::array<double, 2>& x) {
    return std::min(std::abs(x[0] - 0.5), std::abs(x[0] + 0.5) - 0.3);
  });
}

Obstacle Obstacle::inverted_parabola_1d() {
  return Obstacle("parabola", 1, [](const std::array<double, 2>& x) {
    return 1.0 - x[0] * x[0];
  });
}

Obstacle Obstacle::square_sdf() {
  return Obstacle("square", 2, [](const std::array<double, 2>& x) {
    double qx = std::abs(x[0]) - 0.5;
    double qy = std::abs(x[1]) - 0.5;
    double inside = std::min(std::max(qx, qy), 0.0);
    double outside = std::hypot(std::max(qx, 0.0), std::max(qy, 0.0));
    return inside + outside;
  });
}

namespace {

using Poly = std::vector<std::array<double, 2>>;

double point_segment_distance(const std::array<double, 2>& p,
                              const std::array<double, 2>& a,
                              const std::array<double, 2>& b) {
  double vx = b[0] - a[0], vy = b[1] - a[1];
  double wx = p[0] - a[0], wy = p[1] - a[1];
  double vv = vx * vx + vy * vy;
  double t = vv > 0.0 ? std::clamp((wx * vx + wy * vy) / vv, 0.0, 1.0) : 0.0;
  return std::hypot(wx - t * vx, wy - t * vy);
}

bool point_in_polygon(const std::array<double, 2>& p, const Poly& poly) {
  bool inside = false;
  std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const auto& a = poly[j];
    const auto& b = poly[i];
    if ((a[1] > p[1]) != (b[1] > p[1])) {
      double t = (p[1] - a[1]) / (b[1] - a[1]);
      if (p[0] < a[0] + t * (b[0] - a[0])) inside = !inside;
    }
  }
  return inside;
}

// Closed notched-disk curve: three-quarter circle of radius 1/2 covering
// polar angles [-pi/2, pi] plus the two radial segments through the origin
// closing the missing quadrant.
std::shared_ptr<const Poly> pacman_polyline() {
  auto poly = std::make_shared<Poly>();
  const int arc_samples = 3456;
  const int seg_samples = 384;
  poly->reserve(arc_samples + 2 * seg_samples + 3);
  for (int i = 0; i <= arc_samples; ++i) {
    double th = -M_PI / 2.0 + (3.0 * M_PI / 2.0) * i / arc_samples;
    poly->push_back({0.5 * std::cos(th), 0.5 * std::sin(th)});
  }
  // (-1/2, 0) -> (0, 0)
  for (int i = 1; i <= seg_samples; ++i)
    poly->push_back({-0.5 + 0.5 * i / seg_samples, 0.0});
  // (0, 0) -> (0, -1/2); the last point closes back to the arc start
  for (int i = 1; i < seg_samples; ++i)
    poly->push_back({0.0, -0.5 * i / seg_samples});
  return poly;
}

}  // namespace

Obstacle Obstacle::pacman_sdf() {
  auto poly = pacman_polyline();
  return Obstacle("pacman", 2, [poly](const std::array<double, 2>& x) {
    double d = std::numeric_limits<double>::infinity();
    const Poly& pl = *poly;
    for (std::size_t i = 0, j = pl.size() - 1; i < pl.size(); j = i++)
      d = std::min(d, point_segment_distance(x, pl[j], pl[i]));
    return point_in_polygon(x, pl) ? -d : d;
  });
}

Obstacle Obstacle::cone_with_circles() {
  return Obstacle("circles", 2, [](const std::array<double, 2>& x) {
    auto in_disk = [&](double cx, double cy) {
      double dx = x[0] - cx, dy = x[1] - cy;
      return dx * dx + dy * dy <= 1.0 / 16.0;
    };
    if (in_disk(0.5, 0.0) || in_disk(-0.5, 0.0) || in_disk(0.0, 0.5) ||
        in_disk(0.0, -0.5))
      return 1.0;
    return std::hypot(x[0], x[1]) - 0.5;
  });
}

Obstacle Obstacle::from_grid_csv(const std::string& path) {
  auto u = std::make_shared<GridFunction>(read_csv_file(path));
  int dim = u->grid().dim();
  return Obstacle("csv:" + path, dim, [u](const std::array<double, 2>& x) {
    const Grid& g = u->grid();
    int n = g.points_per_axis();
    auto nearest = [&](double c) {
      int i = static_cast<int>(std::lround((c + 1.0) / g.spacing()));
      return std::clamp(i, 0, n - 1);
    };
    return g.dim() == 1 ? u->at(nearest(x[0]))
                        : u->at(nearest(x[0]), nearest(x[1]));
  });
}

Obstacle Obstacle::by_cli_name(const std::string& name) {
  if (name == "double-well") return double_well_1d();
  if (name == "parabola") return inverted_parabola_1d();
  if (name == "square") return square_sdf();
  if (name == "pacman") return pacman_sdf();
  if (name == "circles") return cone_with_circles();
  throw std::invalid_argument("unknown example obstacle: " + name);
}

GridFunction sample(const Obstacle& g, const Grid& grid) {
  if (g.dim() != grid.dim())
    throw std::invalid_argument("sample: obstacle/grid dimension mismatch");
  GridFunction u(grid);
  for (std::size_t f = 0; f < u.size(); ++f) u[f] = g.eval(grid.coord_flat(f));
  return u;
}

}  // namespace qcenv

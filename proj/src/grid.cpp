#include "qcenv/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qcenv {

Grid::Grid(int dim, int points_per_axis) : dim_(dim), n_(points_per_axis) {
  if (dim != 1 && dim != 2)
    throw std::invalid_argument("Grid: dim must be 1 or 2");
  if (points_per_axis < 3)
    throw std::invalid_argument("Grid: points_per_axis must be >= 3");
  h_ = 2.0 / (n_ - 1);
  count_ = dim_ == 1 ? static_cast<std::size_t>(n_)
                     : static_cast<std::size_t>(n_) * n_;
}

std::array<int, 2> Grid::index_of(const std::array<double, 2>& x) const {
  std::array<int, 2> idx{0, 0};
  for (int k = 0; k < dim_; ++k) {
    double fi = (x[k] + 1.0) / h_;
    int i = static_cast<int>(std::lround(fi));
    if (i < 0 || i >= n_ || std::abs(axis_coord(i) - x[k]) > 1e-12)
      throw std::invalid_argument("Grid::index_of: coordinate off lattice");
    idx[k] = i;
  }
  return idx;
}

Grid::ClipResult Grid::ray_clip(const std::array<double, 2>& x,
                                const std::array<double, 2>& w) const {
  double norm = 0.0;
  for (int k = 0; k < dim_; ++k) norm += w[k] * w[k];
  if (norm == 0.0)
    throw std::invalid_argument("Grid::ray_clip: zero direction vector");
  for (int k = 0; k < dim_; ++k)
    if (x[k] < -1.0 - 1e-12 || x[k] > 1.0 + 1e-12)
      throw std::invalid_argument("Grid::ray_clip: point outside the cube");

  auto exit_param = [&](double sign) {
    double t = std::numeric_limits<double>::infinity();
    for (int k = 0; k < dim_; ++k) {
      double wk = sign * w[k];
      if (wk == 0.0) continue;
      double face = wk > 0.0 ? 1.0 : -1.0;
      t = std::min(t, (face - x[k]) / wk);
    }
    return std::max(t, 0.0);
  };
  return {exit_param(+1.0), exit_param(-1.0)};
}

double GridFunction::max() const {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : values_) m = std::max(m, v);
  return m;
}

double GridFunction::min() const {
  double m = std::numeric_limits<double>::infinity();
  for (double v : values_) m = std::min(m, v);
  return m;
}

bool GridFunction::all_finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

double sup_distance(const GridFunction& a, const GridFunction& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("sup_distance: grid size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double interpolate(const GridFunction& u, double x, double y) {
  const Grid& g = u.grid();
  const double h = g.spacing();
  const int n = g.points_per_axis();
  auto cell = [&](double c, int& i0, double& s) {
    c = std::clamp(c, -1.0, 1.0);
    double fi = (c + 1.0) / h;
    i0 = std::min(static_cast<int>(fi), n - 2);
    i0 = std::max(i0, 0);
    s = fi - i0;
  };
  int i0;
  double sx;
  cell(x, i0, sx);
  if (g.dim() == 1)
    return (1.0 - sx) * u.at(i0) + sx * u.at(i0 + 1);
  int j0;
  double sy;
  cell(y, j0, sy);
  return (1.0 - sx) * ((1.0 - sy) * u.at(i0, j0) + sy * u.at(i0, j0 + 1)) +
         sx * ((1.0 - sy) * u.at(i0 + 1, j0) + sy * u.at(i0 + 1, j0 + 1));
}

namespace {
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace

void write_csv(const GridFunction& u, std::ostream& os,
               const std::vector<std::string>& metadata) {
  const Grid& g = u.grid();
  os << "# dim=" << g.dim() << " N=" << g.points_per_axis()
     << " h=" << fmt(g.spacing()) << "\n";
  for (const auto& line : metadata) os << "# " << line << "\n";
  for (std::size_t f = 0; f < u.size(); ++f) {
    auto x = g.coord_flat(f);
    os << fmt(x[0]);
    if (g.dim() == 2) os << ',' << fmt(x[1]);
    os << ',' << fmt(u[f]) << "\n";
  }
}

void write_csv_file(const GridFunction& u, const std::string& path,
                    const std::vector<std::string>& metadata) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_csv_file: cannot open " + path);
  write_csv(u, os, metadata);
}

GridFunction read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line))
    throw std::runtime_error("read_csv: empty input");
  int dim = 0, n = 0;
  if (std::sscanf(line.c_str(), "# dim=%d N=%d", &dim, &n) != 2)
    throw std::runtime_error("read_csv: malformed header: " + line);
  Grid grid(dim, n);
  GridFunction u(grid);
  std::size_t f = 0;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    double v = 0.0;
    std::string tok;
    for (int k = 0; k <= dim; ++k) {
      if (!std::getline(row, tok, ','))
        throw std::runtime_error("read_csv: short row: " + line);
      v = std::stod(tok);
    }
    if (f >= u.size()) throw std::runtime_error("read_csv: too many rows");
    u[f++] = v;
  }
  if (f != u.size()) throw std::runtime_error("read_csv: missing rows");
  return u;
}

GridFunction read_csv_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("read_csv_file: cannot open " + path);
  return read_csv(is);
}

}  // namespace qcenv

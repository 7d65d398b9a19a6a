#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace qcenv {

// Uniform node-centered lattice on [-1,1]^dim, dim in {1,2}.  Faces carry
// nodes: coordinate(i) = -1 + h*i with h = 2/(N-1), so the N-th node per axis
// sits exactly at +1.
class Grid {
public:
  Grid(int dim, int points_per_axis);

  int dim() const { return dim_; }
  int points_per_axis() const { return n_; }
  double spacing() const { return h_; }
  std::size_t node_count() const { return count_; }

  std::size_t flat(int i, int j = 0) const {
    return dim_ == 1 ? static_cast<std::size_t>(i)
                     : static_cast<std::size_t>(i) * n_ + j;
  }
  std::array<int, 2> multi(std::size_t flat) const {
    if (dim_ == 1) return {static_cast<int>(flat), 0};
    return {static_cast<int>(flat / n_), static_cast<int>(flat % n_)};
  }

  double axis_coord(int i) const { return -1.0 + h_ * i; }
  std::array<double, 2> coord(int i, int j = 0) const {
    return {axis_coord(i), dim_ == 2 ? axis_coord(j) : 0.0};
  }
  std::array<double, 2> coord_flat(std::size_t f) const {
    auto m = multi(f);
    return coord(m[0], m[1]);
  }

  bool on_lattice(int i, int j = 0) const {
    if (i < 0 || i >= n_) return false;
    if (dim_ == 2 && (j < 0 || j >= n_)) return false;
    return dim_ == 1 ? j == 0 : true;
  }
  bool is_boundary(int i, int j = 0) const {
    bool b = i == 0 || i == n_ - 1;
    if (dim_ == 2) b = b || j == 0 || j == n_ - 1;
    return b;
  }
  bool is_boundary_flat(std::size_t f) const {
    auto m = multi(f);
    return is_boundary(m[0], m[1]);
  }

  // Exact index of a node coordinate; throws if x is not a lattice node.
  std::array<int, 2> index_of(const std::array<double, 2>& x) const;

  struct ClipResult {
    double t_plus;
    double t_minus;
  };
  // Largest parameters t >= 0 with x + t*w (resp. x - t*w) still inside the
  // closed cube.  w is not normalized; t is in units of w.
  ClipResult ray_clip(const std::array<double, 2>& x,
                      const std::array<double, 2>& w) const;

private:
  int dim_;
  int n_;
  double h_;
  std::size_t count_;
};

// Real values on the nodes of a Grid, dense row-major in lexicographic
// index order (x1-major).
class GridFunction {
public:
  explicit GridFunction(const Grid& grid, double fill = 0.0)
      : grid_(grid), values_(grid.node_count(), fill) {}

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  double& operator[](std::size_t f) { return values_[f]; }
  double operator[](std::size_t f) const { return values_[f]; }
  double& at(int i, int j = 0) { return values_[grid_.flat(i, j)]; }
  double at(int i, int j = 0) const { return values_[grid_.flat(i, j)]; }

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  double max() const;
  double min() const;
  bool all_finite() const;

private:
  Grid grid_;
  std::vector<double> values_;
};

// sup-norm distance between two functions on the same grid
double sup_distance(const GridFunction& a, const GridFunction& b);

// Piecewise-(bi)linear interpolation; x is clamped to the closed cube.
double interpolate(const GridFunction& u, double x, double y = 0.0);

// CSV node dump: first line "# dim=<d> N=<N> h=<h>", optional extra metadata
// comment lines, then one row "x1[,x2],value" per node in index order.
void write_csv(const GridFunction& u, std::ostream& os,
               const std::vector<std::string>& metadata = {});
void write_csv_file(const GridFunction& u, const std::string& path,
                    const std::vector<std::string>& metadata = {});
GridFunction read_csv(std::istream& is);
GridFunction read_csv_file(const std::string& path);

}  // namespace qcenv

#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace qcenv {

// Symmetric set of gcd-reduced integer grid vectors with ||v||_inf <= W,
// plus its directional resolution dtheta (worst angle from an arbitrary
// unit vector to the nearest stencil direction).
class StencilSet {
public:
  static StencilSet make(int dim, int width);

  int dim() const { return dim_; }
  int width() const { return width_; }
  double dtheta() const { return dtheta_; }

  const std::vector<std::array<int, 2>>& vectors() const { return vectors_; }
  // one representative per antipodal pair {v, -v}
  const std::vector<std::array<int, 2>>& half() const { return half_; }

private:
  StencilSet() = default;
  int dim_ = 0;
  int width_ = 0;
  double dtheta_ = 0.0;
  std::vector<std::array<int, 2>> vectors_;
  std::vector<std::array<int, 2>> half_;
};

// Exact directional resolution: 0 in 1D; in 2D half the largest angular gap
// between consecutive normalized directions.
double directional_resolution(const std::vector<std::array<int, 2>>& vectors,
                              int dim);

}  // namespace qcenv

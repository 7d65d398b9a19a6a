#include "qcenv/stencil.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace qcenv {

StencilSet StencilSet::make(int dim, int width) {
  if (dim != 1 && dim != 2)
    throw std::invalid_argument("StencilSet: dim must be 1 or 2");
  if (width < 1) throw std::invalid_argument("StencilSet: width must be >= 1");

  StencilSet s;
  s.dim_ = dim;
  s.width_ = width;

  std::set<std::array<int, 2>> reduced;
  if (dim == 1) {
    reduced.insert({1, 0});
    reduced.insert({-1, 0});
  } else {
    for (int a = -width; a <= width; ++a) {
      for (int b = -width; b <= width; ++b) {
        if (a == 0 && b == 0) continue;
        int g = std::gcd(std::abs(a), std::abs(b));
        reduced.insert({a / g, b / g});
      }
    }
  }
  s.vectors_.assign(reduced.begin(), reduced.end());
  for (const auto& v : s.vectors_) {
    // keep the half-space representative: first nonzero component positive
    if (v[0] > 0 || (v[0] == 0 && v[1] > 0)) s.half_.push_back(v);
  }
  s.dtheta_ = directional_resolution(s.vectors_, dim);
  return s;
}

double directional_resolution(const std::vector<std::array<int, 2>>& vectors,
                              int dim) {
  if (vectors.empty())
    throw std::invalid_argument("directional_resolution: empty vector set");
  if (dim == 1) return 0.0;

  std::vector<double> angles;
  angles.reserve(vectors.size());
  for (const auto& v : vectors) {
    double a = std::atan2(static_cast<double>(v[1]), static_cast<double>(v[0]));
    if (a < 0) a += 2.0 * M_PI;
    angles.push_back(a);
  }
  std::sort(angles.begin(), angles.end());
  double max_gap = 2.0 * M_PI - angles.back() + angles.front();
  for (std::size_t i = 1; i < angles.size(); ++i)
    max_gap = std::max(max_gap, angles[i] - angles[i - 1]);
  return max_gap / 2.0;
}

}  // namespace qcenv

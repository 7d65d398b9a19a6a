#pragma once

#include <array>
#include <functional>
#include <string>

#include "qcenv/grid.hpp"

namespace qcenv {

// An obstacle g evaluable on the whole closed cube, not only at lattice
// nodes: stencil arms clipped at the domain boundary sample g off-lattice.
class Obstacle {
public:
  using Evaluator = std::function<double(const std::array<double, 2>&)>;

  Obstacle(std::string name, int dim, Evaluator f);

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }

  // Throws std::invalid_argument when x lies outside the closed cube.
  double eval(const std::array<double, 2>& x) const;
  double operator()(double x) const { return eval({x, 0.0}); }
  double operator()(double x, double y) const { return eval({x, y}); }

  // corpus
  static Obstacle double_well_1d();       // min(|x-0.5|, |x+0.5|-0.3)
  static Obstacle inverted_parabola_1d(); // 1 - x^2
  static Obstacle square_sdf();           // signed distance to max_i|x_i|=1/2
  static Obstacle pacman_sdf();           // signed distance to a notched disk
  static Obstacle cone_with_circles();    // |x|-1/2 with four disks raised to 1

  // node dump + nearest-node evaluation off lattice (lower fidelity)
  static Obstacle from_grid_csv(const std::string& path);

  // CLI names: double-well | parabola | square | pacman | circles
  static Obstacle by_cli_name(const std::string& name);

private:
  std::string name_;
  int dim_;
  Evaluator eval_;
};

GridFunction sample(const Obstacle& g, const Grid& grid);

}  // namespace qcenv

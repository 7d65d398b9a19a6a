#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qcenv/solver.hpp"

namespace qcenv {

// One experiment per process invocation; `run` writes all artifacts under
// out_dir and returns a process exit code (0 ok, 2 usage, 3 non-convergence,
// 1 internal/io failure).
struct ExperimentConfig {
  std::string command;  // solve | eps-sweep | accel-table |
                        // consistency-report | verify | compare-robust |
                        // compare-first-order
  std::string example;  // double-well | parabola | square | pacman | circles
                        // | csv:<path>
  int n = 0;            // 0: per-command default
  std::vector<int> n_list;
  int width = 0;  // 0: 1 in 1D, 2 in 2D
  double eps = 0.0;  // 0: h/2
  std::vector<double> eps_list;
  double tol = 1e-6;
  long max_iter = 0;
  std::string init = "min";    // min | obstacle
  std::string accel = "none";  // none | line
  double step = 0.0;
  std::string out_dir = ".";
  std::uint64_t seed = 12345;
};

ExperimentConfig config_from_json(const std::string& json_text);
std::string config_to_json(const ExperimentConfig& cfg);

int run(const ExperimentConfig& cfg);

// report serialization shared with the C API
std::string report_to_json(const SolveReport& rep,
                           const ExperimentConfig* cfg = nullptr);

}  // namespace qcenv

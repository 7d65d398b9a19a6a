#include "qcenv/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include <json.hpp>

#include "qcenv/envelope1d.hpp"
#include "qcenv/obstacle.hpp"
#include "qcenv/verify.hpp"

namespace qcenv {

using nlohmann::json;

namespace {

constexpr const char* kNormalizationNote =
    "normalization=unit-direction first/second differences; clipped arms use "
    "exact boundary distances; K=1/(eps*h)+2/h^2";

InitPolicy parse_init(const std::string& s) {
  if (s == "min") return InitPolicy::constant_min;
  if (s == "obstacle") return InitPolicy::obstacle;
  throw std::invalid_argument("init must be 'min' or 'obstacle'");
}

Accel parse_accel(const std::string& s) {
  if (s == "none") return Accel::none;
  if (s == "line") return Accel::line_sweep;
  throw std::invalid_argument("accel must be 'none' or 'line'");
}

Obstacle make_example(const std::string& name) {
  if (name.rfind("csv:", 0) == 0)
    return Obstacle::from_grid_csv(name.substr(4));
  return Obstacle::by_cli_name(name);
}

struct Problem {
  Obstacle obstacle;
  Grid grid;
  StencilSet stencil;
  double eps;

  SchemeParams params() const { return {eps, &stencil, &obstacle}; }
};

Problem setup(const ExperimentConfig& cfg, const std::string& fallback,
              int fallback_n1 = 201, int fallback_n2 = 64) {
  std::string name = cfg.example.empty() ? fallback : cfg.example;
  if (name.empty()) throw std::invalid_argument("missing --example");
  Obstacle g = make_example(name);
  int n = cfg.n > 0 ? cfg.n : (g.dim() == 1 ? fallback_n1 : fallback_n2);
  Grid grid(g.dim(), n);
  int w = cfg.width > 0 ? cfg.width : (g.dim() == 1 ? 1 : 2);
  StencilSet stencil = StencilSet::make(g.dim(), w);
  double eps = cfg.eps > 0.0 ? cfg.eps : grid.spacing() / 2.0;
  return Problem{std::move(g), grid, std::move(stencil), eps};
}

SolverConfig solver_config(const ExperimentConfig& cfg) {
  SolverConfig sc;
  sc.tol = cfg.tol;
  sc.max_iter = cfg.max_iter;
  sc.init = parse_init(cfg.init);
  sc.accel = parse_accel(cfg.accel);
  sc.step_override = cfg.step;
  return sc;
}

std::vector<std::string> artifact_metadata(const ExperimentConfig& cfg) {
  return {"config=" + config_to_json(cfg), kNormalizationNote};
}

std::filesystem::path out_path(const ExperimentConfig& cfg,
                               const std::string& file) {
  std::filesystem::path dir(cfg.out_dir.empty() ? "." : cfg.out_dir);
  std::filesystem::create_directories(dir);
  return dir / file;
}

void write_json_file(const std::filesystem::path& p, const json& j) {
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot open " + p.string());
  os << j.dump(2) << "\n";
}

json report_json(const SolveReport& rep) {
  return json{{"iterations", rep.iterations},
              {"delta", rep.delta},
              {"lipschitz_K", rep.lipschitz_k},
              {"converged", rep.converged},
              {"residual_final", rep.residual_final},
              {"wall_time_s", rep.wall_time_s},
              {"accel_rounds", rep.accel_rounds}};
}

json check_json(const CheckReport& c) {
  return json{{"name", c.name},
              {"passed", c.passed},
              {"worst_violation", c.worst_violation},
              {"tolerance", c.tolerance},
              {"location", c.location},
              {"samples", c.samples}};
}

std::string eps_tag(double eps) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", eps);
  return buf;
}

// line-sweep fixed point from the sampled obstacle: the envelope reference
GridFunction sweep_envelope(const Obstacle& g, const Grid& grid,
                            const StencilSet& stencil) {
  GridFunction u = sample(g, grid);
  for (int round = 0; round < 256; ++round) {
    GridFunction next = line_sweep_round(u, stencil);
    double change = sup_distance(u, next);
    u = std::move(next);
    if (change <= 1e-13) break;
  }
  return u;
}

int cmd_solve(const ExperimentConfig& cfg) {
  Problem pb = setup(cfg, "");
  auto [u, rep] = solve(pb.grid, pb.params(), solver_config(cfg));
  write_csv_file(u, out_path(cfg, "solution.csv").string(),
                 artifact_metadata(cfg));
  json j = report_json(rep);
  j["config"] = json::parse(config_to_json(cfg));
  j["epsilon"] = pb.eps;
  write_json_file(out_path(cfg, "report.json"), j);
  return rep.converged ? 0 : 3;
}

int cmd_eps_sweep(const ExperimentConfig& cfg) {
  if (cfg.eps_list.empty())
    throw std::invalid_argument("eps-sweep needs --eps v1,v2,...");
  Problem pb = setup(cfg, "double-well");
  GridFunction envelope = sweep_envelope(pb.obstacle, pb.grid, pb.stencil);
  write_csv_file(envelope, out_path(cfg, "envelope.csv").string(),
                 artifact_metadata(cfg));

  json summary = json::array();
  bool all_converged = true;
  for (double eps : cfg.eps_list) {
    SchemeParams params = pb.params();
    params.epsilon = eps;
    auto [u, rep] = solve(pb.grid, params, solver_config(cfg));
    all_converged = all_converged && rep.converged;
    write_csv_file(u,
                   out_path(cfg, "solution_eps_" + eps_tag(eps) + ".csv")
                       .string(),
                   artifact_metadata(cfg));
    double above = 0.0, dist = 0.0;
    for (std::size_t f = 0; f < u.size(); ++f) {
      above = std::max(above, u[f] - envelope[f]);
      dist = std::max(dist, std::abs(u[f] - envelope[f]));
    }
    json row = report_json(rep);
    row["eps"] = eps;
    row["sup_distance_to_envelope"] = dist;
    row["max_above_envelope"] = above;
    summary.push_back(row);
  }
  json j{{"config", json::parse(config_to_json(cfg))}, {"sweep", summary}};
  write_json_file(out_path(cfg, "sweep_summary.json"), j);
  return all_converged ? 0 : 3;
}

int cmd_accel_table(const ExperimentConfig& cfg) {
  std::vector<int> ns = cfg.n_list;
  if (ns.empty()) ns = cfg.n > 0 ? std::vector<int>{cfg.n}
                                 : std::vector<int>{32, 64, 128};
  std::string name = cfg.example.empty() ? "circles" : cfg.example;
  Obstacle g = make_example(name);
  int w = cfg.width > 0 ? cfg.width : 1;
  StencilSet stencil = StencilSet::make(g.dim(), w);

  auto table = out_path(cfg, "accel_table.csv");
  std::ofstream os(table);
  for (const auto& line : artifact_metadata(cfg)) os << "# " << line << "\n";
  os << "n,iterations_plain,iterations_accelerated,ratio\n";

  bool all_converged = true;
  for (int n : ns) {
    Grid grid(g.dim(), n);
    double eps = cfg.eps > 0.0 ? cfg.eps : grid.spacing() / 2.0;
    SchemeParams params{eps, &stencil, &g};
    SolverConfig plain = solver_config(cfg);
    plain.accel = Accel::none;
    SolverConfig fast = plain;
    fast.accel = Accel::line_sweep;
    auto [up, rp] = solve(grid, params, plain);
    auto [ua, ra] = solve(grid, params, fast);
    all_converged = all_converged && rp.converged && ra.converged;
    double ratio = ra.iterations > 0
                       ? static_cast<double>(rp.iterations) / ra.iterations
                       : 0.0;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%d,%ld,%ld,%.6g\n", n, rp.iterations,
                  ra.iterations, ratio);
    os << buf;
  }
  return all_converged ? 0 : 3;
}

int cmd_consistency(const ExperimentConfig& cfg) {
  double eps = cfg.eps > 0.0 ? cfg.eps : 0.5;
  auto quads = random_quadratics(20, cfg.seed, 2, 1.0, 0.3);
  std::vector<int> widths = {1, 2, 3, 5};
  std::vector<int> points = cfg.n_list.empty()
                                ? std::vector<int>{33, 65, 129, 257}
                                : cfg.n_list;
  auto rows = consistency_sweep(quads, eps, widths, points);

  auto table = out_path(cfg, "consistency.csv");
  std::ofstream os(table);
  for (const auto& line : artifact_metadata(cfg)) os << "# " << line << "\n";
  os << "W,N,h,dtheta,max_err\n";
  for (const auto& r : rows) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%.17g,%.17g\n", r.width,
                  r.points, r.h, r.dtheta, r.max_err);
    os << buf;
  }

  // log-log slopes in h between consecutive grids at fixed W
  json slopes = json::array();
  for (int w : widths) {
    std::vector<const ConsistencyRow*> sel;
    for (const auto& r : rows)
      if (r.width == w) sel.push_back(&r);
    std::sort(sel.begin(), sel.end(),
              [](auto* a, auto* b) { return a->points < b->points; });
    json srow{{"W", w}, {"slopes", json::array()}};
    for (std::size_t k = 0; k + 1 < sel.size(); ++k) {
      double s = std::log(sel[k]->max_err / sel[k + 1]->max_err) /
                 std::log(sel[k]->h / sel[k + 1]->h);
      srow["slopes"].push_back(s);
    }
    slopes.push_back(srow);
  }
  json j{{"config", json::parse(config_to_json(cfg))},
         {"eps", eps},
         {"slopes", slopes}};
  write_json_file(out_path(cfg, "consistency_slopes.json"), j);
  return 0;
}

int cmd_verify(const ExperimentConfig& cfg) {
  Problem pb = setup(cfg, "square");
  auto [u, rep] = solve(pb.grid, pb.params(), solver_config(cfg));

  json arr = json::array();
  arr.push_back(check_json(qc_along_stencil(u, pb.stencil)));
  if (pb.grid.dim() == 2)
    arr.push_back(check_json(approx_qc_offgrid(u, pb.stencil.dtheta())));
  Grid fuzz_grid(pb.grid.dim(), 9);
  arr.push_back(check_json(ellipticity_fuzz(pb.params(), fuzz_grid, 10000,
                                            cfg.seed)));
  arr.push_back(check_json(comparison_fuzz(100, cfg.seed + 1)));
  arr.push_back(check_json(ordering_audit(
      random_quadratics(100, cfg.seed + 2), {0.05, 0.1, 0.5})));

  std::cout << arr.dump(2) << std::endl;
  write_json_file(out_path(cfg, "verify.json"), arr);
  bool ok = rep.converged;
  for (const auto& c : arr) ok = ok && c["passed"].get<bool>();
  return ok ? 0 : 3;
}

int cmd_compare_robust(const ExperimentConfig& cfg) {
  ExperimentConfig c2 = cfg;
  if (c2.example.empty()) c2.example = "circles";  // default comparison case
  if (c2.eps <= 0.0) c2.eps = 0.02;
  if (c2.width == 0) c2.width = 5;
  Problem pb = setup(c2, "circles");

  SolverConfig sc = solver_config(cfg);
  auto [up, rp] = solve(pb.grid, pb.params(), sc);
  SolverConfig rc = sc;
  rc.scheme = SchemeKind::robust;
  rc.accel = Accel::none;
  auto [ur, rr] = solve(pb.grid, pb.params(), rc);

  auto meta = artifact_metadata(c2);
  write_csv_file(up, out_path(cfg, "penalized.csv").string(), meta);
  write_csv_file(ur, out_path(cfg, "robust.csv").string(), meta);
  GridFunction diff = up;
  for (std::size_t f = 0; f < diff.size(); ++f) diff[f] -= ur[f];
  write_csv_file(diff, out_path(cfg, "difference.csv").string(), meta);

  json j{{"config", json::parse(config_to_json(c2))},
         {"penalized", report_json(rp)},
         {"robust", report_json(rr)},
         {"sup_difference", sup_distance(up, ur)}};
  write_json_file(out_path(cfg, "compare_robust.json"), j);
  return (rp.converged && rr.converged) ? 0 : 3;
}

int cmd_compare_first_order(const ExperimentConfig& cfg) {
  Problem pb = setup(cfg, "double-well", 65, 64);

  SolverConfig sc = solver_config(cfg);
  auto [uf, rf] = solve(pb.grid, pb.params(), sc);
  SolverConfig fc = sc;
  fc.scheme = SchemeKind::first_order;
  auto [u1, r1] = solve(pb.grid, pb.params(), fc);

  auto meta = artifact_metadata(cfg);
  write_csv_file(uf, out_path(cfg, "full.csv").string(), meta);
  write_csv_file(u1, out_path(cfg, "first_order.csv").string(), meta);
  json j{{"config", json::parse(config_to_json(cfg))},
         {"epsilon", pb.eps},
         {"full", report_json(rf)},
         {"first_order", report_json(r1)},
         {"sup_distance", sup_distance(uf, u1)}};
  write_json_file(out_path(cfg, "compare_first_order.json"), j);
  return (rf.converged && r1.converged) ? 0 : 3;
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
  json j = json::parse(text);
  ExperimentConfig cfg;
  cfg.command = j.value("command", "");
  cfg.example = j.value("example", "");
  if (j.contains("n")) {
    if (j["n"].is_array())
      cfg.n_list = j["n"].get<std::vector<int>>();
    else
      cfg.n = j["n"].get<int>();
  }
  cfg.width = j.value("width", 0);
  if (j.contains("eps")) {
    if (j["eps"].is_array())
      cfg.eps_list = j["eps"].get<std::vector<double>>();
    else
      cfg.eps = j["eps"].get<double>();
  }
  cfg.tol = j.value("tol", 1e-6);
  cfg.max_iter = j.value("max_iter", 0L);
  cfg.init = j.value("init", "min");
  cfg.accel = j.value("accel", "none");
  cfg.step = j.value("step", 0.0);
  cfg.out_dir = j.value("out", ".");
  cfg.seed = j.value("seed", 12345ULL);
  return cfg;
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j{{"command", cfg.command}, {"example", cfg.example},
         {"width", cfg.width},     {"tol", cfg.tol},
         {"max_iter", cfg.max_iter}, {"init", cfg.init},
         {"accel", cfg.accel},     {"step", cfg.step},
         {"out", cfg.out_dir},     {"seed", cfg.seed}};
  if (!cfg.n_list.empty())
    j["n"] = cfg.n_list;
  else
    j["n"] = cfg.n;
  if (!cfg.eps_list.empty())
    j["eps"] = cfg.eps_list;
  else
    j["eps"] = cfg.eps;
  return j.dump();
}

std::string report_to_json(const SolveReport& rep,
                           const ExperimentConfig* cfg) {
  json j = report_json(rep);
  if (cfg) j["config"] = json::parse(config_to_json(*cfg));
  return j.dump(2);
}

int run(const ExperimentConfig& cfg) {
  try {
    if (cfg.command == "solve") return cmd_solve(cfg);
    if (cfg.command == "eps-sweep") return cmd_eps_sweep(cfg);
    if (cfg.command == "accel-table") return cmd_accel_table(cfg);
    if (cfg.command == "consistency-report") return cmd_consistency(cfg);
    if (cfg.command == "verify") return cmd_verify(cfg);
    if (cfg.command == "compare-robust") return cmd_compare_robust(cfg);
    if (cfg.command == "compare-first-order")
      return cmd_compare_first_order(cfg);
    std::cerr << "unknown command: " << cfg.command << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace qcenv

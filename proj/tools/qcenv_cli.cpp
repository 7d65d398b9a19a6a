// Experiment runner over the qcenv C API.  Parses flags, assembles the JSON
// experiment config and hands it to the shared library.
//
// Exit codes: 0 success, 2 usage error, 3 non-convergence.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qcenv/qcenv.h"

using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t end = s.find(sep, start);
    if (end == std::string::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

struct Flags {
  std::string example;
  std::string n;
  int width = 0;
  std::string eps;
  double tol = 1e-6;
  long max_iter = 0;
  std::string init = "min";
  std::string accel = "none";
  double step = 0.0;
  std::string out = ".";
  unsigned long long seed = 12345;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--example", f.example,
                  "double-well | parabola | square | pacman | circles | "
                  "csv:<path>");
  cmd->add_option("--n", f.n, "grid points per axis (comma list allowed)");
  cmd->add_option("--width", f.width, "stencil width W");
  cmd->add_option("--eps", f.eps,
                  "penalty parameter (comma list for eps-sweep); default h/2");
  cmd->add_option("--tol", f.tol, "fixed-point tolerance");
  cmd->add_option("--max-iter", f.max_iter, "iteration cap");
  cmd->add_option("--init", f.init, "min | obstacle")
      ->check(CLI::IsMember({"min", "obstacle"}));
  cmd->add_option("--accel", f.accel, "none | line")
      ->check(CLI::IsMember({"none", "line"}));
  cmd->add_option("--step", f.step, "explicit time step (must satisfy CFL)");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--seed", f.seed, "seed for randomized checks");
}

int to_config_and_run(const std::string& command, const Flags& f) {
  json j;
  j["command"] = command;
  if (!f.example.empty()) j["example"] = f.example;
  if (!f.n.empty()) {
    auto parts = split(f.n, ',');
    if (parts.size() == 1) {
      j["n"] = std::stoi(parts[0]);
    } else {
      std::vector<int> ns;
      for (const auto& p : parts) ns.push_back(std::stoi(p));
      j["n"] = ns;
    }
  }
  if (f.width > 0) j["width"] = f.width;
  if (!f.eps.empty()) {
    auto parts = split(f.eps, ',');
    if (parts.size() == 1) {
      j["eps"] = std::stod(parts[0]);
    } else {
      std::vector<double> es;
      for (const auto& p : parts) es.push_back(std::stod(p));
      j["eps"] = es;
    }
  }
  j["tol"] = f.tol;
  j["max_iter"] = f.max_iter;
  j["init"] = f.init;
  j["accel"] = f.accel;
  if (f.step > 0.0) j["step"] = f.step;
  j["out"] = f.out;
  j["seed"] = f.seed;

  int code = qcenv_run_experiment(j.dump().c_str());
  if (code != 0 && qcenv_last_error()[0] != '\0')
    std::fprintf(stderr, "qcenv: %s\n", qcenv_last_error());
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"strictly quasiconvex envelopes on [-1,1]^d"};
  app.set_version_flag("--version", qcenv_version());
  app.require_subcommand(1);

  Flags flags;
  const char* commands[] = {"solve",
                            "eps-sweep",
                            "accel-table",
                            "consistency-report",
                            "verify",
                            "compare-robust",
                            "compare-first-order"};
  const char* notes[] = {
      "solve one obstacle problem and write solution.csv + report.json",
      "solve a list of penalty values and compare to the line-sweep envelope",
      "iterations with and without the line-sweep acceleration",
      "scheme-vs-exact-operator error table over (W, N)",
      "run the structural checks and emit a JSON array of reports",
      "penalized vs inequality-constrained scheme at matched parameters",
      "full vs pure-Eikonal scheme at eps = h/2"};
  std::vector<CLI::App*> subs;
  for (int k = 0; k < 7; ++k) {
    CLI::App* sub = app.add_subcommand(commands[k], notes[k]);
    add_common(sub, flags);
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  for (int k = 0; k < 7; ++k)
    if (subs[k]->parsed()) return to_config_and_run(commands[k], flags);
  return 2;
}

// lattice: batch experiments on stretched lattice counts.
//
// Exit status: 0 success, 1 an invariant was violated, 2 usage error.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lattice/experiments.hpp"

using namespace lattice;

namespace {

struct Flags {
  std::string config;
  std::string p;
  std::string curve;
  std::vector<double> r;
  double r_start = 0;
  std::int64_t r_count = 0;
  double r_step = 0;
  std::vector<double> s;
  std::vector<std::int64_t> n;
  std::vector<std::string> problems;
  std::string objective;
  std::int64_t max_m = 0;
  std::int64_t draws = 0;
  std::uint64_t seed = 0;
  std::string out;
  unsigned jobs = 0;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "experiment config JSON; flags override it");
  cmd->add_option("--out", f.out, "output CSV path (default stdout)");
  cmd->add_option("--jobs", f.jobs, "worker threads (default: all cores)")->check(CLI::PositiveNumber);
}

void add_curve(CLI::App* cmd, Flags& f) {
  cmd->add_option("--p", f.p, "curve exponent, 1 <= p, or inf");
  cmd->add_option("--curve", f.curve, "curve JSON file (overrides --p)");
}

void add_grid(CLI::App* cmd, Flags& f) {
  cmd->add_option("--r", f.r, "explicit radius (repeatable)");
  cmd->add_option("--r-start", f.r_start, "first grid radius, rounded up to a multiple of the step");
  cmd->add_option("--r-count", f.r_count, "number of grid radii");
  cmd->add_option("--r-step", f.r_step, "grid step (default sqrt(3)/10)");
}

ExperimentConfig build_config(Experiment kind, CLI::App* cmd, const Flags& f) {
  ExperimentConfig c;
  if (!f.config.empty()) {
    c = config_from_json(read_json_file(f.config));
    // figure2 / figure5 configs run under the scan subcommand.
    const bool scan_like = c.experiment == Experiment::figure2 || c.experiment == Experiment::figure5 ||
                           c.experiment == Experiment::scan;
    if (kind == Experiment::scan ? !scan_like : c.experiment != kind) {
      throw UsageError(std::string("config experiment '") + experiment_name(c.experiment) +
                       "' does not match subcommand '" + cmd->get_name() + "'");
    }
  } else {
    c = ExperimentConfig::preset(kind);
  }
  auto given = [&](const char* name) { return cmd->get_option_no_throw(name) && cmd->count(name) > 0; };
  if (given("--p")) {
    c.p = parse_exponent(f.p);
    c.curve.reset();
  }
  if (given("--curve")) c.curve = curve_from_json(read_json_file(f.curve));
  if (given("--r-step")) c.r_grid.step = f.r_step;
  if (given("--r-start")) c.r_grid = RGrid::from_start(f.r_start, c.r_grid.count, c.r_grid.step);
  if (given("--r-count")) c.r_grid.count = f.r_count;
  if (given("--r")) c.r_values = f.r;
  if (given("--s")) c.s_values = f.s;
  if (given("--n")) c.n_values = f.n;
  if (given("--problem")) {
    c.problems.clear();
    for (const auto& name : f.problems) c.problems.push_back(parse_problem(name));
  }
  if (given("--objective")) c.minimize = f.objective == "min";
  if (given("--max-m")) c.max_m = f.max_m;
  if (given("--draws")) c.draws = f.draws;
  if (given("--seed")) c.seed = f.seed;
  if (given("--out")) c.output_path = f.out;
  if (given("--jobs")) c.parallelism = f.jobs;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal stretching of lattice counts under concave curves"};
  app.require_subcommand(1);
  Flags f;

  auto* scan = app.add_subcommand("scan", "optimal stretch sets over a grid of radii");
  add_common(scan, f);
  add_curve(scan, f);
  add_grid(scan, f);
  scan->add_option("--objective", f.objective, "max (positive quadrant) or min (closed quadrant)")
      ->check(CLI::IsMember({"max", "min"}));

  auto* counter = app.add_subcommand("counterexample", "counts at one radius for several stretches");
  add_common(counter, f);
  add_curve(counter, f);
  counter->add_option("--r", f.r, "radius");
  counter->add_option("--s", f.s, "stretch factor (repeatable)");

  auto* cluster = app.add_subcommand("cluster", "the sqrt(2) sequence for the triangle");
  add_common(cluster, f);
  cluster->add_option("--max-m", f.max_m, "largest m");

  auto* audit = app.add_subcommand("audit", "randomized audit of the counting bounds");
  add_common(audit, f);
  audit->add_option("--seed", f.seed, "random seed");
  audit->add_option("--draws", f.draws, "number of random (p, r, s) draws");

  auto* eigen = app.add_subcommand("eigen", "optimal Dirichlet / Neumann eigenvalues");
  add_common(eigen, f);
  eigen->add_option("--n", f.n, "eigenvalue index (repeatable)");
  eigen->add_option("--problem", f.problems, "dirichlet and/or neumann (repeatable)")
      ->check(CLI::IsMember({"dirichlet", "neumann"}));

  auto* osc = app.add_subcommand("oscillator", "optimal harmonic-oscillator levels");
  add_common(osc, f);
  osc->add_option("--n", f.n, "level index (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    CLI::App* cmd = app.get_subcommands().front();
    const std::string name = cmd->get_name();
    Experiment kind = Experiment::scan;
    if (name == "counterexample") kind = Experiment::counterexample;
    if (name == "cluster") kind = Experiment::cluster;
    if (name == "audit") kind = Experiment::audit;
    if (name == "eigen") kind = Experiment::eigen_asymptotics;
    if (name == "oscillator") kind = Experiment::oscillator;
    const ExperimentConfig config = build_config(kind, cmd, f);
    const Table table = run_experiment(config);
    write_csv(table, config.output_path);
    if (table.violations > 0) {
      std::cerr << "lattice: " << table.violations << " violation(s)\n";
      return 1;
    }
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "lattice: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "lattice: error: " << e.what() << "\n";
    return 2;
  }
}

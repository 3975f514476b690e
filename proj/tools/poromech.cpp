// Command-line driver: convergence studies, the pattern scenario, single runs and
// the oracle checks.

#include "poromech/checks.hpp"
#include "poromech/io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace poromech;

namespace {

struct Overrides {
  std::string config;
  std::string out;
  int refinements = 0;
  std::vector<double> dt_list;
  std::optional<std::uint64_t> seed;
};

RunConfig resolve(const Overrides& o, Experiment e) {
  RunConfig c = o.config.empty() ? parse_config("") : load_config(o.config);
  c.experiment = e;
  if (!o.out.empty()) c.output = o.out;
  if (o.refinements > 0) c.refinements = o.refinements;
  if (!o.dt_list.empty()) c.dt_list = o.dt_list;
  if (o.seed) c.seed = *o.seed;
  // re-validate the merged configuration
  return parse_config(serialize_config(c));
}

std::string path_in(const RunConfig& c, const std::string& name) {
  fs::create_directories(c.output);
  return (fs::path(c.output) / name).string();
}

void print_table(const ErrorTable& t) {
  std::printf("%10s", t.size_label.c_str());
  for (const auto& c : t.columns) std::printf(" %10s", c.c_str());
  std::printf("\n");
  for (const auto& r : t.rows) {
    std::printf("%10.4g", r.size);
    for (double e : r.errors) std::printf(" %10.3e", e);
    std::printf("\n");
    if (!r.rates.empty()) {
      std::printf("%10s", "rate");
      for (double q : r.rates) std::printf(" %10.3f", q);
      std::printf("\n");
    }
  }
}

int finish_table(const ErrorTable& t, const std::string& path) {
  write_csv_table(t, path);
  print_table(t);
  std::printf("wrote %s\n", path.c_str());
  for (const auto& r : t.rows) {
    if (!r.failure.empty()) {
      std::printf("poromech: error: run at %s=%g failed: %s\n", t.size_label.c_str(), r.size, r.failure.c_str());
      return 1;
    }
  }
  return 0;
}

int converge_space(const RunConfig& c) {
  SpatialStudySpec s;
  s.params = c.params;
  s.base_cells = c.cells;
  s.n_refinements = c.refinements;
  s.dt = c.dt;
  s.t_final = c.t_final;
  s.options = c.solver;
  return finish_table(convergence_study_spatial(s), path_in(c, "converge_space.csv"));
}

int converge_time(const RunConfig& c) {
  TemporalStudySpec s;
  s.params = c.params;
  s.cells = c.temporal_cells;
  s.dt_list = c.dt_list;
  s.t_final = c.temporal_t_final;
  s.options = c.solver;
  return finish_table(convergence_study_temporal(s), path_in(c, "converge_time.csv"));
}

std::string gamma_tag(double g) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", g);
  return buf;
}

int pattern(const RunConfig& c) {
  int status = 0;
  for (double g : c.pattern_gammas) {
    PatternRunSpec s = c.pattern;
    s.params = c.params;
    s.params.tau = c.pattern_tau;
    s.params.gamma = g;
    s.options = c.solver;
    const PatternResult r = run_pattern(s);
    const std::string tag = "gamma_" + gamma_tag(g);
    write_csv_series(r.series, path_in(c, "pattern_" + tag + ".csv"));
    const Mesh mesh = pattern_mesh(s);
    for (const State& snap : r.snapshots) {
      char name[64];
      std::snprintf(name, sizeof name, "pattern_%s_t%.4f.vtk", tag.c_str(), snap.t);
      write_vtk(mesh, snap, path_in(c, name));
    }
    std::printf("gamma=%g steps=%zu threshold=%.3e steady_time=%s peak_u=%.3e min_w=%.4f periodicity=%.3e\n", g,
                r.series.values.size(), r.threshold,
                r.steady_time ? gamma_tag(*r.steady_time).c_str() : "none", r.peak_displacement,
                r.min_concentration, r.periodicity_defect);
    if (!r.failure.empty()) {
      std::printf("poromech: error: pattern run gamma=%g failed: %s\n", g, r.failure.c_str());
      status = 1;
    }
  }
  return status;
}

int single_run(const RunConfig& c) {
  const auto exact = mms_spatial_family<double>(c.params);
  const Discretization disc(example1_mesh(c.cells));
  const Problem problem = mms_problem(exact, c.params);
  const State s0 = initial_state(disc, {}, {});
  const Trajectory tr = run_transient(disc, problem, s0, c.dt, c.t_final, {}, c.solver);
  const FieldErrors e = error_norms(disc, tr.final_state, exact, tr.final_state.t);
  const std::string path = path_in(c, "single_run.vtk");
  write_vtk(disc.mesh(), tr.final_state, path);
  int iterations = 0;
  for (const auto& r : tr.reports) iterations += r.newton_iterations;
  std::printf("t=%g steps=%zu newton=%d u_H1=%.6e p_H1=%.6e psi_L2=%.6e w1_H1=%.6e w2_H1=%.6e\n",
              tr.final_state.t, tr.reports.size(), iterations, e.u_h1, e.p_h1, e.psi_l2, e.w1_h1, e.w2_h1);
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int check(const RunConfig& c) {
  int failed = 0;
  for (const auto& r : run_all_checks(c.seed)) {
    std::printf("%s  %s: %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
    failed += r.passed ? 0 : 1;
  }
  if (failed) {
    std::printf("poromech: error: %d check(s) failed\n", failed);
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"poromech: poroelasticity with active-stress chemistry"};
  app.require_subcommand(0, 1);
  Overrides o;
  app.add_option("--config", o.config, "configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", o.out, "output directory");
  app.add_option("--refinements", o.refinements, "number of meshes in converge-space")->check(CLI::PositiveNumber);
  app.add_option("--dt-list", o.dt_list, "time steps for converge-time")->delimiter(',');
  app.add_option("--seed", o.seed, "random seed");
  app.fallthrough();

  struct Cmd {
    const char* name;
    const char* help;
    Experiment experiment;
    int (*run)(const RunConfig&);
  };
  const Cmd cmds[] = {
      {"converge-space", "spatial convergence study", Experiment::ConvergeSpace, converge_space},
      {"converge-time", "temporal convergence study", Experiment::ConvergeTime, converge_time},
      {"pattern", "pattern formation under periodic traction", Experiment::Pattern, pattern},
      {"single-run", "one manufactured-solution run", Experiment::SingleRun, single_run},
      {"check", "run the oracle and property checks", Experiment::SingleRun, check},
  };
  std::vector<CLI::App*> subs;
  for (const auto& c : cmds) subs.push_back(app.add_subcommand(c.name, c.help));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cout << app.help();
    std::printf("poromech: error: usage: %s\n", e.what());
    return 2;
  }
  if (argc < 2 || app.get_subcommands().empty()) {
    std::cout << app.help();
    return 2;
  }

  try {
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (subs[i]->parsed()) return cmds[i].run(resolve(o, cmds[i].experiment));
    }
  } catch (const ConfigError& e) {
    std::printf("poromech: error: config: %s\n", e.what());
  } catch (const std::invalid_argument& e) {
    std::printf("poromech: error: invalid: %s\n", e.what());
  } catch (const std::exception& e) {
    std::printf("poromech: error: %s\n", e.what());
  }
  return 1;
}

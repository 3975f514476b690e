#pragma once

#include "poromech/scenarios.hpp"
#include "poromech/verification.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace poromech {

enum class Experiment { ConvergeSpace, ConvergeTime, Pattern, SingleRun };

std::string to_string(Experiment e);
/// Throws InvalidArgument on an unknown name.
Experiment parse_experiment(const std::string& name);

std::string to_string(LinearSolverKind k);
LinearSolverKind parse_linear_solver(const std::string& name);

/// Everything a CLI run needs. Defaults reproduce the verification and pattern setups.
struct RunConfig {
  Experiment experiment = Experiment::ConvergeSpace;
  std::string output = "out";
  std::uint64_t seed = 20240521;
  ModelParams params;

  // [mesh] converge-space and single-run
  int cells = 8;
  int refinements = 5;
  // [time]
  double dt = 0.01;
  double t_final = 0.04;
  // [temporal]
  int temporal_cells = 45;
  std::vector<double> dt_list{0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625};
  double temporal_t_final = 1.0;
  // [pattern]; the pattern runs use [params] with tau and gamma replaced
  PatternRunSpec pattern;
  double pattern_tau = 100.0;
  std::vector<double> pattern_gammas{0.0, 0.05};
  // [solver]
  StepOptions solver;
};

/// Strict sectioned key = value text ('#' starts a comment). Unknown sections or keys
/// and malformed values throw ConfigError with the line number; out-of-range
/// physical values throw InvalidArgument naming the key. D2 defaults to rho * I
/// unless given.
RunConfig parse_config(const std::string& text);

/// Canonical text listing every key; parse_config(serialize_config(c)) reproduces c.
std::string serialize_config(const RunConfig& config);

/// Reads a file and parses it; I/O errors name the path.
RunConfig load_config(const std::string& path);

/// Legacy-VTK ASCII unstructured grid: vertex values of u (z = 0), p, psi, w1, w2.
void write_vtk(const Mesh& mesh, const State& state, const std::string& path);

/// Header plus one row per entry: size, errors, then rates (empty on the first row).
void write_csv_table(const ErrorTable& table, const std::string& path);
void write_csv_series(const VariationSeries& series, const std::string& path);

std::string format_csv_table(const ErrorTable& table);
std::string format_csv_series(const VariationSeries& series);

}  // namespace poromech

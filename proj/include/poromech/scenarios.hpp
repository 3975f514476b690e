#pragma once

#include "poromech/solver.hpp"

#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace poromech {

/// Spatially homogeneous steady state of the kinetics, (beta2 + beta3, beta3 / (beta2 + beta3)^2).
Eigen::Vector2d kinetic_steady_state(const ModelParams& p);

struct PatternRunSpec {
  ModelParams params = default_pattern_params();
  double width = 1.0;
  double height = 0.6;
  int nx = 64;
  int ny = 38;
  double dt = 0.01;
  double t_final = 10.0;
  /// Traction on the right side: sin(omega t) * amplitude.
  Vec2 amplitude{20000.0, 0.0};
  double omega = 2.0 * std::numbers::pi;
  /// Initial concentrations are the steady state times (1 + perturbation * U(-1, 1)).
  double perturbation = 0.01;
  std::uint64_t seed = 20240521;
  std::vector<double> snapshot_times;
  double threshold_factor = 1e-4;
  int persistence = 10;
  StepOptions options{};

  static ModelParams default_pattern_params();
};

struct VariationSeries {
  std::vector<double> times;
  std::vector<double> values;  ///< ||w1^n - w1^{n-1}||/dt + ||w2^n - w2^{n-1}||/dt
};

struct PatternResult {
  VariationSeries series;
  std::vector<State> snapshots;
  std::optional<double> steady_time;
  double threshold = 0.0;
  double min_concentration = 0.0;  ///< smallest nodal w1 or w2 seen
  double peak_displacement = 0.0;  ///< max nodal |u| seen
  /// ||u(t_final) - u(t_final - T)|| / ||u(t_final)|| for the traction period T; NaN if undefined.
  double periodicity_defect = 0.0;
  std::vector<int> newton_iterations;
  std::string failure;  ///< nonempty if a step failed; the series is then partial
};

/// Validates the spec; throws InvalidArgument naming the offending field.
void validate(const PatternRunSpec& spec);

Mesh pattern_mesh(const PatternRunSpec& spec);

/// Zero sources, Gamma = left, bottom and top, periodic traction and p = 0 on the right side.
Problem pattern_problem(const PatternRunSpec& spec);

/// Seeded initial concentrations on the vertices of `disc`.
State pattern_initial_state(const Discretization& disc, const PatternRunSpec& spec);

PatternResult run_pattern(const PatternRunSpec& spec);

/// First time at which `values` has stayed below `threshold` for `persistence`
/// consecutive entries (the time of the last of them).
std::optional<double> steady_state_time(const VariationSeries& series, double threshold, int persistence = 10);

/// L2 norm of a P1 coefficient vector (exact P1 mass matrix).
double p1_l2_norm(const Discretization& disc, const Vector& v);

}  // namespace poromech

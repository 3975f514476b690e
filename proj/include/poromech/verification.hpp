#pragma once

#include "poromech/manufactured.hpp"
#include "poromech/solver.hpp"

#include <optional>
#include <string>
#include <vector>

namespace poromech {

/// Errors of a discrete state against the exact closures at one time.
/// H1 entries are full norms (L2 part included).
struct FieldErrors {
  double u_h1 = 0.0;
  double u_l2 = 0.0;
  double p_h1 = 0.0;
  double p_l2 = 0.0;
  double psi_l2 = 0.0;
  double w1_h1 = 0.0;
  double w1_l2 = 0.0;
  double w2_h1 = 0.0;
  double w2_l2 = 0.0;
};

/// Degree-6 quadrature against the closures; bubbles included in u.
FieldErrors error_norms(const Discretization& disc, const State& state, const ExactSolution<double>& exact,
                        double t);

/// (dt sum_n ||s_h^n - s(t^n)||_{L2}^2)^{1/2} for each field.
struct CumulativeErrors {
  double u = 0.0;
  double p = 0.0;
  double psi = 0.0;
  double w1 = 0.0;
  double w2 = 0.0;
};

/// `trajectory` holds the states after each step (the initial state excluded).
CumulativeErrors cumulative_time_error(const Discretization& disc, const std::vector<State>& trajectory,
                                       const ExactSolution<double>& exact, double dt);

struct ErrorRow {
  double size = 0.0;              ///< h or dt
  std::vector<double> errors;     ///< one per column
  std::vector<double> rates;      ///< empty on the first row
  std::vector<int> newton_iterations;
  std::string failure;            ///< nonempty if the run aborted
};

struct ErrorTable {
  std::string size_label;            ///< "h" or "dt"
  std::vector<std::string> columns;  ///< error column names
  std::vector<ErrorRow> rows;

  /// log(e_i / e_{i+1}) / log(size_i / size_{i+1}), filled into rows[1..].
  void compute_rates();
  /// Minimum and maximum rate of column `c` over the last `pairs` rows.
  std::pair<double, double> rate_range(std::size_t c, std::size_t pairs) const;
  std::size_t column(const std::string& name) const;
};

struct SpatialStudySpec {
  ModelParams params;
  int base_cells = 8;
  int n_refinements = 5;  ///< number of meshes
  double dt = 0.01;
  double t_final = 0.04;
  StepOptions options{};
};

/// Example-1 setup with the spatial family; columns u_H1, u_L2, p_H1, p_L2, psi_L2,
/// w1_H1, w1_L2, w2_H1, w2_L2 at t_final.
ErrorTable convergence_study_spatial(const SpatialStudySpec& spec);

struct TemporalStudySpec {
  ModelParams params;
  int cells = 45;
  std::vector<double> dt_list{0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625};
  double t_final = 1.0;
  StepOptions options{};
};

/// sin(t) family on a fixed mesh; columns u, p, psi, w1, w2 hold cumulative errors.
ErrorTable convergence_study_temporal(const TemporalStudySpec& spec);

/// Example-1 mesh: unit square, Gamma = left and bottom.
Mesh example1_mesh(int cells);

/// Sources and boundary data of a manufactured solution bundled as a problem.
Problem mms_problem(const ExactSolution<double>& exact, const ModelParams& params);

}  // namespace poromech

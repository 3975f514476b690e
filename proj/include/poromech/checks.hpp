#pragma once

#include "poromech/manufactured.hpp"
#include "poromech/solver.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace poromech {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Largest strong-form residual over the sample points for one finite-difference step.
struct OracleLevel {
  double step = 0.0;
  double max_abs = 0.0;     ///< raw residual, any equation
  /// per equation: largest residual over the samples divided by the largest term of that equation
  double max_scaled = 0.0;
};

struct OracleSample {
  Eigen::Vector2d x;
  double t;
};

/// Evaluates the strong form on `exact` with nested central differences in long
/// double (values only, no closed-form derivatives) and subtracts `sources`.
/// The kinetics are re-implemented here, independently of the solver.
std::vector<OracleLevel> strong_form_oracle(const ExactSolution<long double>& exact, const Sources& sources,
                                            const ModelParams& params, const std::vector<OracleSample>& samples,
                                            const std::vector<double>& steps);

std::vector<OracleSample> random_samples(int n, double t_min, double t_max, std::uint64_t seed);

/// Observed order between levels i and i + 1, from the scaled residuals.
double oracle_order(const std::vector<OracleLevel>& levels, std::size_t i);

/// Source oracle for both manufactured families plus a negative control.
std::vector<CheckResult> check_forcing_oracle(std::uint64_t seed);

struct JacobianCheck {
  std::vector<double> block_errors;  ///< worst relative error per direction (over field blocks)
  double worst = 0.0;
};

/// Central differences of newton_residual against J*d in random directions.
JacobianCheck jacobian_fd_check(const Discretization& disc, const Problem& problem, const State& state_new,
                                const State& state_old, double dt, int directions, std::uint64_t seed);

CheckResult check_jacobian(std::uint64_t seed);

/// Smallest inf-sup constant of B1 on the MINI/P1 pair: H1 (strain energy) norm on
/// the Gamma-clamped displacements, L2 on psi. Dense generalized eigenproblem.
double discrete_inf_sup(const Discretization& disc);

/// |sum_q w_q m(x_q) - exact| over all monomials up to the rule's degree, on the
/// reference triangle.
double quadrature_monomial_error(int degree);

std::vector<CheckResult> check_assembly_properties(std::uint64_t seed);

/// Every oracle suite above.
std::vector<CheckResult> run_all_checks(std::uint64_t seed);

}  // namespace poromech

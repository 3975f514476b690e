#pragma once

#include "poromech/assembly.hpp"
#include "poromech/discretization.hpp"
#include "poromech/errors.hpp"
#include "poromech/linalg.hpp"
#include "poromech/physics.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace poromech {

/// Coefficient vectors of the five fields at one time level.
struct State {
  Vector u;
  Vector p;
  Vector psi;
  Vector w1;
  Vector w2;
  double t = 0.0;
};

/// Monolithic vector in BlockLayout order (u, p, psi, w1, w2).
Vector pack(const BlockLayout& layout, const State& s);
State unpack(const BlockLayout& layout, const Vector& x, double t);

/// Everything that defines one physical run besides the mesh.
struct Problem {
  ModelParams params;
  Sources sources;
  BoundaryData bdata;
};

struct StepReport {
  int newton_iterations = 0;
  std::vector<double> residual_history;  ///< weighted norm before each update and at exit
  std::vector<SolveReport> linear_reports;
  /// Number of sub-steps used to build the Newton starting guess (0: the old state).
  int continuation_substeps = 0;
  /// Newton iterations spent inside those sub-steps.
  int continuation_newton_iterations = 0;
};

/// GmresLu: GMRES preconditioned by a sparse LU of an earlier Jacobian, refreshed
/// when GMRES slows down. GmresIlu0: GMRES with ILU(0) in the vertex-interleaved
/// ordering. Direct: sparse LU of every Jacobian.
enum class LinearSolverKind { GmresLu, GmresIlu0, Direct };

struct StepOptions {
  double newton_tol = 1e-5;
  int max_newton = 12;
  int max_halvings = 5;
  LinearSolverKind linear_solver = LinearSolverKind::GmresLu;
  GmresOptions gmres{};
  /// GmresLu refactorises once a solve needs more iterations than this.
  int refactor_iterations = 20;
  /// If Newton fails from the old state, retry from the end of 2, 4, ... 2^levels
  /// backward-Euler sub-steps. The accepted state still solves the full-dt system.
  int continuation_levels = 3;
};

/// Preconditioner kept between Newton iterations and time steps.
struct LinearSolverCache {
  std::unique_ptr<Preconditioner> preconditioner;
  bool stale = true;
  int factorizations = 0;
};

/// Mechanics at rest, concentrations interpolated at the vertices.
State initial_state(const Discretization& disc, const ScalarField& w1_init,
                    const ScalarField& w2_init, double t0 = 0.0);

/// Residual of the fully discrete backward-Euler system at state_new.t; rows of
/// Dirichlet unknowns hold x_i - g_i.
Vector newton_residual(const Discretization& disc, const Problem& problem, const State& state_new,
                       const State& state_old, double dt);

/// Exact derivative of `newton_residual` with respect to state_new (Dirichlet rows
/// are identity rows).
SparseMatrix newton_jacobian(const Discretization& disc, const Problem& problem,
                             const State& state_new, const State& state_old, double dt);

/// Integral of each basis function (ones on Dirichlet rows); dividing a residual by
/// it turns integrated equation residuals into pointwise ones.
Vector residual_weights(const Discretization& disc);

/// ||R / weights||_2 / sqrt(ndof).
double weighted_norm(const Vector& r, const Vector& weights);

/// One backward-Euler step by monolithic Newton. At least one Newton update is
/// always performed. Throws StepFailure on non-convergence (after continuation).
std::pair<State, StepReport> solve_time_step(const Discretization& disc, const Problem& problem,
                                             const State& state_old, double dt,
                                             const StepOptions& options = {},
                                             const std::optional<State>& initial_guess = std::nullopt,
                                             LinearSolverCache* cache = nullptr);

using StepObserver = std::function<void(const State& state, const StepReport& report)>;

struct Trajectory {
  State final_state;
  std::vector<StepReport> reports;
};

class TransientFailure : public StepFailure {
 public:
  TransientFailure(const StepFailure& cause, std::vector<StepReport> partial)
      : StepFailure(cause), reports(std::move(partial)) {}
  std::vector<StepReport> reports;
};

/// round(t_final / dt) steps; the observer sees every accepted state.
Trajectory run_transient(const Discretization& disc, const Problem& problem, const State& initial,
                         double dt, double t_final, const StepObserver& observer = {},
                         const StepOptions& options = {});

}  // namespace poromech

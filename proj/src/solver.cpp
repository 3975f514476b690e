#include "poromech/solver.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <memory>
#include <string>
#include <tuple>

namespace poromech {

namespace {

constexpr int kVolumeDegree = 4;
constexpr double kLinearSlack = 1e-2;

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

using LocalVector = Eigen::Matrix<double, kLocalDofs, 1>;
using LocalMatrix = Eigen::Matrix<double, kLocalDofs, kLocalDofs>;

/// Residual (and optionally Jacobian) contribution of one element, without loads.
void element_kernel(const ElementGeometry& g, const QuadRule& rule, const ModelParams& p, double dt,
                    const LocalVector& xn, const LocalVector& xo, LocalVector& res,
                    LocalMatrix* jac) {
  res.setZero();
  if (jac) jac->setZero();
  const Eigen::Matrix2d kappa_eta = p.kappa / p.eta;
  const Vec2 k = p.k_dir;
  const double inv_dt = 1.0 / dt;
  const auto& gb = g.grad_bary;

  const Eigen::Vector3d pn = xn.segment<3>(kLocalP), po = xo.segment<3>(kLocalP);
  const Eigen::Vector3d sn = xn.segment<3>(kLocalPsi), so = xo.segment<3>(kLocalPsi);
  const Eigen::Vector3d an = xn.segment<3>(kLocalW1), ao = xo.segment<3>(kLocalW1);
  const Eigen::Vector3d bn = xn.segment<3>(kLocalW2), bo = xo.segment<3>(kLocalW2);
  const Vec2 grad_p = gb * pn;
  const Vec2 grad_w1 = gb * an;
  const Vec2 grad_w2 = gb * bn;

  Eigen::Matrix<double, 2, 4> un, ud;  // column j: coefficients (x, y) of shape j
  for (int j = 0; j < 4; ++j) {
    un.col(j) = xn.segment<2>(kLocalU + 2 * j);
    ud.col(j) = (xn.segment<2>(kLocalU + 2 * j) - xo.segment<2>(kLocalU + 2 * j)) * inv_dt;
  }

  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const ShapeValues s = g.shape(rule.points[q]);
    const double w = rule.weights[q] * g.area;
    const Eigen::Vector3d phi = s.value.head<3>();

    const Mat2 grad_u = un * s.grad.transpose();  // (a, b) = d u_a / d x_b
    const Mat2 eps = 0.5 * (grad_u + grad_u.transpose());
    const double div_u = grad_u.trace();
    const Vec2 vel = ud * s.value;
    const double div_rate = (ud * s.grad.transpose()).trace();

    const double p_val = phi.dot(pn), p_old = phi.dot(po);
    const double psi_val = phi.dot(sn), psi_old = phi.dot(so);
    const double w1 = phi.dot(an), w1_old = phi.dot(ao);
    const double w2 = phi.dot(bn), w2_old = phi.dot(bo);
    const double r = r_field(w1, w2);
    const double f = reaction_f(w1, w2, div_rate, p);
    const double gr = reaction_g(w1, w2, div_rate, p);

    for (int j = 0; j < 4; ++j) {
      const double k_grad = k.dot(s.grad.col(j));
      for (int c = 0; c < 2; ++c) {
        res(kLocalU + 2 * j + c) += w * (2.0 * p.mu * eps.row(c).dot(s.grad.col(j)) -
                                         psi_val * s.grad(c, j) - p.tau * r * k(c) * k_grad);
      }
    }
    const double p_rate = (p_val - p_old) * inv_dt, psi_rate = (psi_val - psi_old) * inv_dt;
    const Eigen::Vector3d flux_p = gb.transpose() * (kappa_eta * grad_p);
    const Eigen::Vector3d flux_w1 = gb.transpose() * (p.D1 * grad_w1);
    const Eigen::Vector3d flux_w2 = gb.transpose() * (p.D2 * grad_w2);
    res.segment<3>(kLocalP) +=
        w * ((p.storage() * p_rate - p.alpha / p.lambda * psi_rate) * phi + flux_p);
    res.segment<3>(kLocalPsi) += w * (-div_u + p.alpha / p.lambda * p_val - psi_val / p.lambda) * phi;
    res.segment<3>(kLocalW1) +=
        w * (((w1 - w1_old) * inv_dt + vel.dot(grad_w1) - f) * phi + flux_w1);
    res.segment<3>(kLocalW2) +=
        w * (((w2 - w2_old) * inv_dt + vel.dot(grad_w2) - gr) * phi + flux_w2);

    if (!jac) continue;
    LocalMatrix& J = *jac;
    const ReactionJacobian rj = reaction_jacobian(w1, w2, div_rate, p);
    const Eigen::Matrix3d mass = w * phi * phi.transpose();
    const Eigen::Vector4d k_grads = s.grad.transpose() * k;

    for (int j = 0; j < 4; ++j) {
      for (int c = 0; c < 2; ++c) {
        const int row = kLocalU + 2 * j + c;
        for (int l = 0; l < 4; ++l) {
          for (int d = 0; d < 2; ++d) {
            double v = s.grad(d, j) * s.grad(c, l);
            if (c == d) v += s.grad.col(j).dot(s.grad.col(l));
            J(row, kLocalU + 2 * l + d) += w * p.mu * v;
          }
        }
        for (int m = 0; m < 3; ++m) {
          J(row, kLocalPsi + m) -= w * phi(m) * s.grad(c, j);
          const double act = w * p.tau * phi(m) * k(c) * k_grads(j);
          J(row, kLocalW1 + m) -= act;
          J(row, kLocalW2 + m) -= act;
        }
      }
    }
    J.block<3, 3>(kLocalP, kLocalP) +=
        p.storage() * inv_dt * mass + w * gb.transpose() * kappa_eta * gb;
    J.block<3, 3>(kLocalP, kLocalPsi) -= p.alpha / p.lambda * inv_dt * mass;
    for (int l = 0; l < 4; ++l) {
      for (int d = 0; d < 2; ++d) {
        J.block<3, 1>(kLocalPsi, kLocalU + 2 * l + d) -= w * s.grad(d, l) * phi;
        // d(vel)/d(u_ld) = N_l e_d / dt,  d(div_rate)/d(u_ld) = dN_l/dx_d / dt
        const double dvel1 = s.value(l) * grad_w1(d) * inv_dt;
        const double dvel2 = s.value(l) * grad_w2(d) * inv_dt;
        const double ddiv = s.grad(d, l) * inv_dt;
        J.block<3, 1>(kLocalW1, kLocalU + 2 * l + d) += w * (dvel1 - rj.ddiv_rate(0) * ddiv) * phi;
        J.block<3, 1>(kLocalW2, kLocalU + 2 * l + d) += w * (dvel2 - rj.ddiv_rate(1) * ddiv) * phi;
      }
    }
    J.block<3, 3>(kLocalPsi, kLocalP) += p.alpha / p.lambda * mass;
    J.block<3, 3>(kLocalPsi, kLocalPsi) -= mass / p.lambda;

    const Eigen::RowVector3d adv1 = vel.transpose() * gb;
    const Eigen::RowVector3d adv2 = adv1;
    J.block<3, 3>(kLocalW1, kLocalW1) += inv_dt * mass + w * gb.transpose() * p.D1 * gb +
                                         w * phi * adv1 - rj.dw(0, 0) * mass;
    J.block<3, 3>(kLocalW1, kLocalW2) -= rj.dw(0, 1) * mass;
    J.block<3, 3>(kLocalW2, kLocalW1) -= rj.dw(1, 0) * mass;
    J.block<3, 3>(kLocalW2, kLocalW2) += inv_dt * mass + w * gb.transpose() * p.D2 * gb +
                                         w * phi * adv2 - rj.dw(1, 1) * mass;
  }
}

struct SystemCache {
  Loads loads;
  Constraints constraints;
};

SystemCache make_cache(const Discretization& disc, const Problem& problem, double t) {
  return {assemble_loads(disc, problem.params, t, problem.sources, problem.bdata),
          dirichlet_constraints(disc, problem.bdata, t)};
}

/// Residual and (optionally) Jacobian in monolithic layout.
void assemble_system(const Discretization& disc, const Problem& problem, const SystemCache& cache,
                     const Vector& xn, const Vector& xo, double dt, Vector& res, SparseMatrix* jac) {
  const BlockLayout& l = disc.layout();
  const QuadRule rule = quadrature_rule(kVolumeDegree);
  res = Vector::Zero(l.total);
  if (jac) *jac = disc.pattern();
  double* jv = jac ? jac->valuePtr() : nullptr;

  LocalVector ln, lo, lr;
  LocalMatrix lj;
  for (int e = 0; e < disc.num_elements(); ++e) {
    const auto dofs = disc.element_dofs(e);
    for (int i = 0; i < kLocalDofs; ++i) {
      ln(i) = xn[dofs[i]];
      lo(i) = xo[dofs[i]];
    }
    element_kernel(disc.element(e), rule, problem.params, dt, ln, lo, lr, jac ? &lj : nullptr);
    for (int i = 0; i < kLocalDofs; ++i) {
      res[dofs[i]] += lr(i);
      if (!jac) continue;
      for (int j = 0; j < kLocalDofs; ++j) jv[find_entry(*jac, dofs[i], dofs[j])] += lj(i, j);
    }
  }

  res.segment(l.offset(Field::U), l.size(Field::U)) -= cache.loads.F_u;
  res.segment(l.offset(Field::P), l.size(Field::P)) -= cache.loads.G_p;
  res.segment(l.offset(Field::Psi), l.size(Field::Psi)) -= cache.loads.H_psi;
  res.segment(l.offset(Field::W1), l.size(Field::W1)) -= cache.loads.J_w1;
  res.segment(l.offset(Field::W2), l.size(Field::W2)) -= cache.loads.J_w2;

  for (const auto& [dof, g] : cache.constraints) {
    res[dof] = xn[dof] - g;
    if (!jac) continue;
    const int* outer = jac->outerIndexPtr();
    const int* inner = jac->innerIndexPtr();
    for (int k = outer[dof]; k < outer[dof + 1]; ++k) jv[k] = inner[k] == dof ? 1.0 : 0.0;
  }
}

SolveReport direct_solve(const SparseMatrix& a, const Vector& rhs, const GmresOptions& go, Vector& x) {
  const SparseLuPreconditioner lu(a);
  lu.apply(rhs, x);
  SolveReport rep;
  rep.iterations = 1;
  const double bn = rhs.norm();
  rep.final_residual = bn > 0.0 ? (rhs - spmv(a, x)).norm() / bn : 0.0;
  rep.converged = rep.final_residual <= go.tol;
  return rep;
}

SolveReport solve_scaled(const Discretization& disc, const SparseMatrix& a, const Vector& rhs,
                         const StepOptions& options, LinearSolverCache& cache, Vector& x);

/// Dirichlet elimination, equilibration, then the configured solver. `residual`
/// receives rhs - A x of the eliminated, unscaled system.
SolveReport solve_linear(const Discretization& disc, SparseMatrix& a, Vector& rhs,
                         const Constraints& constraints, const StepOptions& options,
                         LinearSolverCache& cache, Vector& x, Vector& residual) {
  apply_dirichlet(a, rhs, constraints);
  const Equilibration eq = equilibrate(a);
  apply_scaling(a, eq);
  rhs = rhs.cwiseProduct(eq.row);
  SolveReport rep = solve_scaled(disc, a, rhs, options, cache, x);
  residual = (rhs - spmv(a, x)).cwiseQuotient(eq.row);
  x = x.cwiseProduct(eq.col);
  return rep;
}

SolveReport solve_scaled(const Discretization& disc, const SparseMatrix& a, const Vector& rhs,
                         const StepOptions& options, LinearSolverCache& cache, Vector& x) {
  switch (options.linear_solver) {
    case LinearSolverKind::Direct:
      return direct_solve(a, rhs, options.gmres, x);
    case LinearSolverKind::GmresIlu0: {
      std::unique_ptr<Preconditioner> m;
      try {
        m = std::make_unique<PermutedIlu0>(a, disc.solver_ordering());
      } catch (const FactorizationBreakdown&) {
        m = std::make_unique<JacobiPreconditioner>(a);
      }
      x = Vector::Zero(rhs.size());
      return gmres(a, rhs, *m, x, options.gmres);
    }
    case LinearSolverKind::GmresLu:
      break;
  }
  const auto refresh = [&] {
    cache.preconditioner = std::make_unique<SparseLuPreconditioner>(a);
    cache.stale = false;
    ++cache.factorizations;
  };
  const bool fresh = cache.stale || !cache.preconditioner;
  if (fresh) refresh();
  x = Vector::Zero(rhs.size());
  SolveReport rep = gmres(a, rhs, *cache.preconditioner, x, options.gmres);
  if (!rep.converged && !fresh) {
    refresh();
    x = Vector::Zero(rhs.size());
    const int spent = rep.iterations;
    rep = gmres(a, rhs, *cache.preconditioner, x, options.gmres);
    rep.iterations += spent;
  } else if (rep.iterations > options.refactor_iterations) {
    cache.stale = true;
  }
  return rep;
}

}  // namespace

Vector pack(const BlockLayout& layout, const State& s) {
  Vector x(layout.total);
  x.segment(layout.offset(Field::U), layout.size(Field::U)) = s.u;
  x.segment(layout.offset(Field::P), layout.size(Field::P)) = s.p;
  x.segment(layout.offset(Field::Psi), layout.size(Field::Psi)) = s.psi;
  x.segment(layout.offset(Field::W1), layout.size(Field::W1)) = s.w1;
  x.segment(layout.offset(Field::W2), layout.size(Field::W2)) = s.w2;
  return x;
}

State unpack(const BlockLayout& layout, const Vector& x, double t) {
  if (x.size() != layout.total) throw InvalidArgument("unpack: vector size mismatch");
  return {x.segment(layout.offset(Field::U), layout.size(Field::U)),
          x.segment(layout.offset(Field::P), layout.size(Field::P)),
          x.segment(layout.offset(Field::Psi), layout.size(Field::Psi)),
          x.segment(layout.offset(Field::W1), layout.size(Field::W1)),
          x.segment(layout.offset(Field::W2), layout.size(Field::W2)),
          t};
}

State initial_state(const Discretization& disc, const ScalarField& w1_init,
                    const ScalarField& w2_init, double t0) {
  const auto& sp = disc.spaces();
  State s{Vector::Zero(sp.u.ndof), Vector::Zero(sp.p.ndof), Vector::Zero(sp.psi.ndof),
          Vector::Zero(sp.w.ndof), Vector::Zero(sp.w.ndof), t0};
  const auto& xy = disc.mesh().vertices();
  for (int v = 0; v < disc.mesh().num_vertices(); ++v) {
    if (w1_init) s.w1[v] = w1_init(xy[v], t0);
    if (w2_init) s.w2[v] = w2_init(xy[v], t0);
  }
  return s;
}

Vector newton_residual(const Discretization& disc, const Problem& problem, const State& state_new,
                       const State& state_old, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("newton_residual: dt must be positive");
  const auto cache = make_cache(disc, problem, state_new.t);
  Vector r;
  assemble_system(disc, problem, cache, pack(disc.layout(), state_new), pack(disc.layout(), state_old),
                  dt, r, nullptr);
  return r;
}

SparseMatrix newton_jacobian(const Discretization& disc, const Problem& problem,
                             const State& state_new, const State& state_old, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("newton_jacobian: dt must be positive");
  SystemCache cache{Loads{Vector::Zero(disc.layout().size(Field::U)),
                          Vector::Zero(disc.layout().size(Field::P)),
                          Vector::Zero(disc.layout().size(Field::Psi)),
                          Vector::Zero(disc.layout().size(Field::W1)),
                          Vector::Zero(disc.layout().size(Field::W2))},
                    dirichlet_constraints(disc, problem.bdata, state_new.t)};
  Vector r;
  SparseMatrix j;
  assemble_system(disc, problem, cache, pack(disc.layout(), state_new), pack(disc.layout(), state_old),
                  dt, r, &j);
  return j;
}

Vector residual_weights(const Discretization& disc) {
  const BlockLayout& l = disc.layout();
  const auto& sp = disc.spaces();
  Vector w = Vector::Zero(l.total);
  // integral of a hat over a triangle is area/3, of the cubic bubble area/60
  for (int e = 0; e < disc.num_elements(); ++e) {
    const double a = disc.element(e).area;
    const auto dofs = disc.element_dofs(e);
    for (int i = 0; i < kLocalDofs; ++i) {
      const bool bubble = i == kLocalU + 6 || i == kLocalU + 7;
      w[dofs[i]] += bubble ? a / 60.0 : a / 3.0;
    }
  }
  for (int d : sp.u.constrained_dofs) w[l.offset(Field::U) + d] = 1.0;
  for (int d : sp.p.constrained_dofs) w[l.offset(Field::P) + d] = 1.0;
  return w;
}

double weighted_norm(const Vector& r, const Vector& weights) {
  if (r.size() != weights.size()) throw InvalidArgument("weighted_norm: size mismatch");
  return r.size() == 0 ? 0.0 : r.cwiseQuotient(weights).norm() / std::sqrt(static_cast<double>(r.size()));
}

namespace {

std::pair<State, StepReport> newton_solve(const Discretization& disc, const Problem& problem,
                                          const State& state_old, double dt, const StepOptions& options,
                                          const std::optional<State>& initial_guess,
                                          LinearSolverCache* lin_cache_in) {
  const double t_new = state_old.t + dt;
  const auto sys = make_cache(disc, problem, t_new);
  const BlockLayout& layout = disc.layout();
  const Vector xo = pack(layout, state_old);
  Vector x = initial_guess ? pack(layout, *initial_guess) : xo;
  const double tol = std::max(options.newton_tol, 1e-12);
  const Vector weights = residual_weights(disc);
  LinearSolverCache local_cache;
  LinearSolverCache& lin_cache = lin_cache_in ? *lin_cache_in : local_cache;

  StepReport report;
  Vector res;
  SparseMatrix jac;
  assemble_system(disc, problem, sys, x, xo, dt, res, &jac);
  double norm = weighted_norm(res, weights);
  report.residual_history.push_back(norm);

  while (true) {
    if (report.newton_iterations >= options.max_newton) {
      throw StepFailure("Newton did not converge in " + std::to_string(options.max_newton) +
                            " iterations at t=" + sci(t_new),
                        report.residual_history);
    }
    Constraints lift;
    lift.reserve(sys.constraints.size());
    for (const auto& c : sys.constraints) lift.emplace_back(c.first, -res[c.first]);
    Vector rhs = -res;
    Vector delta, lin_residual;
    const SolveReport lin = solve_linear(disc, jac, rhs, lift, options, lin_cache, delta, lin_residual);
    report.linear_reports.push_back(lin);
    ++report.newton_iterations;
    // A solve that stalls short of its relative tolerance is still usable when its
    // residual is negligible on the Newton scale.
    if (!lin.converged && !(weighted_norm(lin_residual, weights) <= kLinearSlack * tol)) {
      throw LinearSolveFailure("linear solve did not converge (relative residual " +
                               sci(lin.final_residual) + ") at t=" + sci(t_new));
    }

    double step = 1.0;
    Vector trial = x + delta;
    Vector trial_res;
    assemble_system(disc, problem, sys, trial, xo, dt, trial_res, nullptr);
    double trial_norm = weighted_norm(trial_res, weights);
    for (int h = 0; h < options.max_halvings && !(trial_norm <= norm); ++h) {
      step *= 0.5;
      trial = x + step * delta;
      assemble_system(disc, problem, sys, trial, xo, dt, trial_res, nullptr);
      trial_norm = weighted_norm(trial_res, weights);
    }
    x = std::move(trial);
    norm = trial_norm;
    report.residual_history.push_back(norm);
    if (!std::isfinite(norm)) {
      throw StepFailure("non-finite residual at t=" + sci(t_new), report.residual_history);
    }
    if (norm <= tol) break;
    assemble_system(disc, problem, sys, x, xo, dt, res, &jac);
  }
  return {unpack(layout, x, t_new), report};
}

}  // namespace

std::pair<State, StepReport> solve_time_step(const Discretization& disc, const Problem& problem,
                                             const State& state_old, double dt,
                                             const StepOptions& options,
                                             const std::optional<State>& initial_guess,
                                             LinearSolverCache* cache) {
  if (!(dt > 0.0)) throw InvalidArgument("solve_time_step: dt must be positive");
  std::exception_ptr first;
  try {
    return newton_solve(disc, problem, state_old, dt, options, initial_guess, cache);
  } catch (const StepFailure&) {
    first = std::current_exception();
  } catch (const LinearSolveFailure&) {
    first = std::current_exception();
  }
  if (options.continuation_levels <= 0) std::rethrow_exception(first);
  StepOptions sub = options;
  sub.continuation_levels = 0;
  for (int level = 1, k = 2; level <= options.continuation_levels; ++level, k *= 2) {
    try {
      State guess = state_old;
      int work = 0;
      for (int i = 0; i < k; ++i) {
        auto [next, rep] = newton_solve(disc, problem, guess, dt / k, sub, std::nullopt, nullptr);
        work += rep.newton_iterations;
        guess = std::move(next);
      }
      auto result = newton_solve(disc, problem, state_old, dt, sub, guess, cache);
      result.second.continuation_substeps = k;
      result.second.continuation_newton_iterations = work;
      return result;
    } catch (const StepFailure&) {
    } catch (const LinearSolveFailure&) {
    }
  }
  std::rethrow_exception(first);
}

Trajectory run_transient(const Discretization& disc, const Problem& problem, const State& initial,
                         double dt, double t_final, const StepObserver& observer,
                         const StepOptions& options) {
  if (!(dt > 0.0)) throw InvalidArgument("run_transient: dt must be positive");
  const double span = t_final - initial.t;
  if (span < dt * (1.0 - 1e-12)) throw InvalidArgument("run_transient: t_final must be >= dt");
  const long steps = std::lround(span / dt);
  Trajectory traj{initial, {}};
  LinearSolverCache cache;
  traj.reports.reserve(steps);
  for (long n = 1; n <= steps; ++n) {
    State next;
    StepReport rep;
    try {
      std::tie(next, rep) = solve_time_step(disc, problem, traj.final_state, dt, options, std::nullopt, &cache);
    } catch (const StepFailure& f) {
      throw TransientFailure(f, traj.reports);
    }
    next.t = initial.t + static_cast<double>(n) * dt;
    traj.final_state = std::move(next);
    traj.reports.push_back(rep);
    if (observer) observer(traj.final_state, traj.reports.back());
  }
  return traj;
}

}  // namespace poromech

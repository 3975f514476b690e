#include "poromech/verification.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace poromech {

namespace {

constexpr int kErrorDegree = 6;

struct Squares {
  double u_l2 = 0, u_semi = 0, p_l2 = 0, p_semi = 0, psi_l2 = 0, w1_l2 = 0, w1_semi = 0, w2_l2 = 0,
         w2_semi = 0;
};

Squares squared_errors(const Discretization& disc, const State& s, const ExactSolution<double>& ex, double t) {
  const QuadRule rule = quadrature_rule(kErrorDegree);
  const auto& sp = disc.spaces();
  Squares acc;
  for (int e = 0; e < disc.num_elements(); ++e) {
    const ElementGeometry& g = disc.element(e);
    Eigen::Matrix<double, 2, 4> uc;
    for (int j = 0; j < 3; ++j) uc.col(j) = s.u.segment<2>(sp.u.vertex_dof(g.vertices[j], 0));
    uc.col(3) = Vec2(s.u[sp.u.bubble_dof(e, 0)], s.u[sp.u.bubble_dof(e, 1)]);
    Eigen::Vector3d pc, sc, ac, bc;
    for (int j = 0; j < 3; ++j) {
      const int v = g.vertices[j];
      pc(j) = s.p[v];
      sc(j) = s.psi[v];
      ac(j) = s.w1[v];
      bc(j) = s.w2[v];
    }
    const Vec2 grad_p = g.grad_bary * pc, grad_a = g.grad_bary * ac, grad_b = g.grad_bary * bc;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const ShapeValues sv = g.shape(rule.points[q]);
      const double w = rule.weights[q] * g.area;
      const Vec2 x = g.map.to_physical(rule.points[q]);
      const Eigen::Vector3d phi = sv.value.head<3>();
      acc.u_l2 += w * (uc * sv.value - ex.u(x, t)).squaredNorm();
      acc.u_semi += w * (uc * sv.grad.transpose() - ex.grad_u(x, t)).squaredNorm();
      acc.p_l2 += w * std::pow(phi.dot(pc) - ex.p.value(x, t), 2);
      acc.p_semi += w * (grad_p - ex.p.grad(x, t)).squaredNorm();
      acc.psi_l2 += w * std::pow(phi.dot(sc) - ex.psi.value(x, t), 2);
      acc.w1_l2 += w * std::pow(phi.dot(ac) - ex.w1.value(x, t), 2);
      acc.w1_semi += w * (grad_a - ex.w1.grad(x, t)).squaredNorm();
      acc.w2_l2 += w * std::pow(phi.dot(bc) - ex.w2.value(x, t), 2);
      acc.w2_semi += w * (grad_b - ex.w2.grad(x, t)).squaredNorm();
    }
  }
  return acc;
}

}  // namespace

FieldErrors error_norms(const Discretization& disc, const State& state, const ExactSolution<double>& exact,
                        double t) {
  const Squares s = squared_errors(disc, state, exact, t);
  FieldErrors e;
  e.u_l2 = std::sqrt(s.u_l2);
  e.u_h1 = std::sqrt(s.u_l2 + s.u_semi);
  e.p_l2 = std::sqrt(s.p_l2);
  e.p_h1 = std::sqrt(s.p_l2 + s.p_semi);
  e.psi_l2 = std::sqrt(s.psi_l2);
  e.w1_l2 = std::sqrt(s.w1_l2);
  e.w1_h1 = std::sqrt(s.w1_l2 + s.w1_semi);
  e.w2_l2 = std::sqrt(s.w2_l2);
  e.w2_h1 = std::sqrt(s.w2_l2 + s.w2_semi);
  return e;
}

CumulativeErrors cumulative_time_error(const Discretization& disc, const std::vector<State>& trajectory,
                                       const ExactSolution<double>& exact, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("cumulative_time_error: dt must be positive");
  CumulativeErrors c;
  for (const State& s : trajectory) {
    const Squares q = squared_errors(disc, s, exact, s.t);
    c.u += q.u_l2;
    c.p += q.p_l2;
    c.psi += q.psi_l2;
    c.w1 += q.w1_l2;
    c.w2 += q.w2_l2;
  }
  for (double* v : {&c.u, &c.p, &c.psi, &c.w1, &c.w2}) *v = std::sqrt(dt * *v);
  return c;
}

void ErrorTable::compute_rates() {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].rates.clear();
    if (i == 0) continue;
    const ErrorRow& a = rows[i - 1];
    const ErrorRow& b = rows[i];
    for (std::size_t c = 0; c < b.errors.size(); ++c) {
      rows[i].rates.push_back(std::log(a.errors[c] / b.errors[c]) / std::log(a.size / b.size));
    }
  }
}

std::pair<double, double> ErrorTable::rate_range(std::size_t c, std::size_t pairs) const {
  if (pairs == 0 || pairs >= rows.size()) throw InvalidArgument("rate_range: not enough rows");
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = rows.size() - pairs; i < rows.size(); ++i) {
    const double r = c < rows[i].rates.size() ? rows[i].rates[c] : std::nan("");
    if (std::isnan(r)) return {std::nan(""), std::nan("")};
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return {lo, hi};
}

std::size_t ErrorTable::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw InvalidArgument("unknown error column '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

Mesh example1_mesh(int cells) {
  return build_rect_mesh(0.0, 0.0, 1.0, 1.0, cells, cells, {Side::Left, Side::Bottom});
}

Problem mms_problem(const ExactSolution<double>& exact, const ModelParams& params) {
  return {params, synthesize_sources(exact, params), boundary_data_from_exact(exact, params)};
}

ErrorTable convergence_study_spatial(const SpatialStudySpec& spec) {
  if (spec.n_refinements < 2) throw InvalidArgument("convergence_study_spatial: need at least 2 meshes");
  validate(spec.params);
  const auto exact = mms_spatial_family<double>(spec.params);
  const Problem problem = mms_problem(exact, spec.params);
  ErrorTable table;
  table.size_label = "h";
  table.columns = {"u_H1", "u_L2", "p_H1", "p_L2", "psi_L2", "w1_H1", "w1_L2", "w2_H1", "w2_L2"};
  Mesh mesh = example1_mesh(spec.base_cells);
  for (int level = 0; level < spec.n_refinements; ++level) {
    if (level > 0) mesh = refine_uniform(mesh);
    ErrorRow row;
    row.size = mesh.h_max();
    const Discretization disc(mesh);
    const State s0 = initial_state(disc, {}, {});
    try {
      const Trajectory tr = run_transient(disc, problem, s0, spec.dt, spec.t_final, {}, spec.options);
      for (const auto& r : tr.reports) row.newton_iterations.push_back(r.newton_iterations);
      const FieldErrors e = error_norms(disc, tr.final_state, exact, tr.final_state.t);
      row.errors = {e.u_h1, e.u_l2, e.p_h1, e.p_l2, e.psi_l2, e.w1_h1, e.w1_l2, e.w2_h1, e.w2_l2};
    } catch (const std::runtime_error& err) {
      row.failure = err.what();
      row.errors.assign(table.columns.size(), std::nan(""));
    }
    table.rows.push_back(std::move(row));
  }
  table.compute_rates();
  return table;
}

ErrorTable convergence_study_temporal(const TemporalStudySpec& spec) {
  if (spec.dt_list.empty()) throw InvalidArgument("convergence_study_temporal: empty dt list");
  for (std::size_t i = 0; i < spec.dt_list.size(); ++i) {
    if (!(spec.dt_list[i] > 0.0) || (i > 0 && !(spec.dt_list[i] < spec.dt_list[i - 1]))) {
      throw InvalidArgument("convergence_study_temporal: dt list must be positive and decreasing");
    }
  }
  validate(spec.params);
  const auto exact = mms_temporal_family<double>(spec.params);
  const Problem problem = mms_problem(exact, spec.params);
  ErrorTable table;
  table.size_label = "dt";
  table.columns = {"u", "p", "psi", "w1", "w2"};
  const Discretization disc(example1_mesh(spec.cells));
  for (double dt : spec.dt_list) {
    ErrorRow row;
    row.size = dt;
    Squares sum;
    const auto observer = [&](const State& s, const StepReport& rep) {
      const Squares q = squared_errors(disc, s, exact, s.t);
      sum.u_l2 += q.u_l2;
      sum.p_l2 += q.p_l2;
      sum.psi_l2 += q.psi_l2;
      sum.w1_l2 += q.w1_l2;
      sum.w2_l2 += q.w2_l2;
      row.newton_iterations.push_back(rep.newton_iterations);
    };
    try {
      run_transient(disc, problem, initial_state(disc, {}, {}), dt, spec.t_final, observer, spec.options);
      row.errors = {std::sqrt(dt * sum.u_l2), std::sqrt(dt * sum.p_l2), std::sqrt(dt * sum.psi_l2),
                    std::sqrt(dt * sum.w1_l2), std::sqrt(dt * sum.w2_l2)};
    } catch (const std::runtime_error& err) {
      row.failure = err.what();
      row.errors.assign(table.columns.size(), std::nan(""));
    }
    table.rows.push_back(std::move(row));
  }
  table.compute_rates();
  return table;
}

}  // namespace poromech

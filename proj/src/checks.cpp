#include "poromech/checks.hpp"

#include "poromech/verification.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>

namespace poromech {

namespace {

using LD = long double;
using V = Vec2T<LD>;
using M = Mat2T<LD>;

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

/// Uniform on [0, 1) from 53 random bits.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct FieldValues {
  const ExactSolution<LD>& e;

  V u(const V& x, LD t) const { return {e.u1.value(x, t), e.u2.value(x, t)}; }

  template <typename F>
  V grad(const F& f, const V& x, LD t, LD h) const {
    return V((f(x + V(h, 0), t) - f(x - V(h, 0), t)) / (2 * h), (f(x + V(0, h), t) - f(x - V(0, h), t)) / (2 * h));
  }

  template <typename F>
  M hess(const F& f, const V& x, LD t, LD h) const {
    const LD f0 = f(x, t);
    M m;
    m(0, 0) = (f(x + V(h, 0), t) - 2 * f0 + f(x - V(h, 0), t)) / (h * h);
    m(1, 1) = (f(x + V(0, h), t) - 2 * f0 + f(x - V(0, h), t)) / (h * h);
    m(0, 1) = m(1, 0) =
        (f(x + V(h, h), t) - f(x + V(h, -h), t) - f(x + V(-h, h), t) + f(x + V(-h, -h), t)) / (4 * h * h);
    return m;
  }

  template <typename F>
  LD dt(const F& f, const V& x, LD t, LD h) const {
    return (f(x, t + h) - f(x, t - h)) / (2 * h);
  }

  /// (a, b) = d u_a / d x_b by central differences.
  M grad_u(const V& x, LD t, LD h) const {
    M g;
    g.row(0) = grad(e.u1.value, x, t, h).transpose();
    g.row(1) = grad(e.u2.value, x, t, h).transpose();
    return g;
  }
};

LD kinetic_f(LD w1, LD w2, LD rate, const ModelParams& p) {
  if (w1 <= 0 || w2 <= 0) return LD(p.beta1) * LD(p.beta2);
  return LD(p.beta1) * (LD(p.beta2) - w1 + w1 * w1 * w2) + LD(p.gamma) * w1 * rate;
}

LD kinetic_g(LD w1, LD w2, LD rate, const ModelParams& p) {
  if (w1 <= 0 || w2 <= 0) return LD(p.beta1) * LD(p.beta3);
  return LD(p.beta1) * (LD(p.beta3) - w1 * w1 * w2) + LD(p.gamma) * w2 * rate;
}

}  // namespace

std::vector<OracleSample> random_samples(int n, double t_min, double t_max, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<OracleSample> s;
  for (int i = 0; i < n; ++i) {
    const double x = unit(rng), y = unit(rng);
    // t in (t_min, t_max]
    const double t = t_max - (t_max - t_min) * unit(rng);
    s.push_back({Eigen::Vector2d(x, y), t});
  }
  return s;
}

std::vector<OracleLevel> strong_form_oracle(const ExactSolution<LD>& exact, const Sources& sources,
                                            const ModelParams& params, const std::vector<OracleSample>& samples,
                                            const std::vector<double>& steps) {
  const FieldValues f{exact};
  const ModelParams& p = params;
  const LD mu = p.mu, lam = p.lambda, alpha = p.alpha, tau = p.tau, rho = p.rho;
  const V k = p.k_dir.cast<LD>();
  const M kappa = p.kappa.cast<LD>() / LD(p.eta);
  const M D1 = p.D1.cast<LD>(), D2 = p.D2.cast<LD>();
  const auto r = [&](const V& x, LD t) { return exact.w1.value(x, t) + exact.w2.value(x, t); };
  const auto div_u = [&](const V& x, LD t, LD h) { return f.grad_u(x, t, h).trace(); };

  std::vector<OracleLevel> levels;
  for (double step : steps) {
    const LD h = step;
    OracleLevel lv{step, 0.0, 0.0};
    // per equation: momentum, mass, total pressure, species 1, species 2
    std::array<double, 5> worst{}, magnitude{};
    const auto record = [&](int eq, LD residual, LD scale) {
      const double a = static_cast<double>(std::fabs(residual));
      lv.max_abs = std::max(lv.max_abs, a);
      worst[eq] = std::max(worst[eq], a);
      magnitude[eq] = std::max(magnitude[eq], static_cast<double>(scale));
    };
    for (const auto& s : samples) {
      const V x = s.x.cast<LD>();
      const LD t = s.t;
      const Vec2 xd = s.x;

      // momentum: -div(sigma) = rho b with sigma = 2 mu eps(u) - psi I - tau r k k^T
      const auto elastic = [&](const V& y) {
        const M g = f.grad_u(y, t, h);
        return M(mu * (g + g.transpose()));
      };
      const auto pressure_part = [&](const V& y) { return M(-exact.psi.value(y, t) * M::Identity()); };
      const auto active_part = [&](const V& y) { return M(-tau * r(y, t) * (k * k.transpose())); };
      V div_el = V::Zero(), div_pr = V::Zero(), div_ac = V::Zero();
      for (int j = 0; j < 2; ++j) {
        V e = V::Zero();
        e(j) = h;
        div_el += (elastic(x + e).col(j) - elastic(x - e).col(j)) / (2 * h);
        div_pr += (pressure_part(x + e).col(j) - pressure_part(x - e).col(j)) / (2 * h);
        div_ac += (active_part(x + e).col(j) - active_part(x - e).col(j)) / (2 * h);
      }
      const Vec2 b = sources.b ? sources.b(xd, s.t) : Vec2::Zero();
      const V mom = -(div_el + div_pr + div_ac) - rho * b.cast<LD>();
      const LD mom_scale = std::max({div_el.cwiseAbs().maxCoeff(), div_pr.cwiseAbs().maxCoeff(),
                                     div_ac.cwiseAbs().maxCoeff()});
      record(0, mom(0), mom_scale);
      record(0, mom(1), mom_scale);

      // mass: d/dt((c0 + alpha^2/lambda) p - alpha/lambda psi) - div(kappa/eta grad p) = ell
      const auto stored = [&](const V& y, LD tt) {
        return (LD(p.c0) + alpha * alpha / lam) * exact.p.value(y, tt) - alpha / lam * exact.psi.value(y, tt);
      };
      const LD storage_rate = f.dt(stored, x, t, h);
      const LD diffusion = (kappa.cwiseProduct(f.hess(exact.p.value, x, t, h))).sum();
      const LD ell = sources.ell ? sources.ell(xd, s.t) : 0.0;
      record(1, storage_rate - diffusion - ell, std::max(std::fabs(storage_rate), std::fabs(diffusion)));

      // total pressure: psi = alpha p - lambda div u, written as -div u + (alpha p - psi)/lambda = S_psi
      const LD du = div_u(x, t, h);
      const LD rel = (alpha * exact.p.value(x, t) - exact.psi.value(x, t)) / lam;
      const LD s_psi = sources.S_psi ? sources.S_psi(xd, s.t) : 0.0;
      record(2, -du + rel - s_psi, std::max(std::fabs(du), std::fabs(rel)));

      // species: dw/dt + du/dt . grad w - div(D grad w) - kinetics = S
      const V u_rate = (f.u(x, t + h) - f.u(x, t - h)) / (2 * h);
      const LD div_rate = (div_u(x, t + h, h) - div_u(x, t - h, h)) / (2 * h);
      const LD w1 = exact.w1.value(x, t), w2 = exact.w2.value(x, t);
      const auto species = [&](int eq, const ScalarClosures<LD>& w, const M& D, LD kinetic, const ScalarField& src) {
        const LD rate = f.dt(w.value, x, t, h);
        const LD adv = u_rate.dot(f.grad(w.value, x, t, h));
        const LD diff = (D.cwiseProduct(f.hess(w.value, x, t, h))).sum();
        const LD s_w = src ? src(xd, s.t) : 0.0;
        record(eq, rate + adv - diff - kinetic - s_w,
               std::max({std::fabs(rate), std::fabs(adv), std::fabs(diff), std::fabs(kinetic)}));
      };
      species(3, exact.w1, D1, kinetic_f(w1, w2, div_rate, p), sources.S1);
      species(4, exact.w2, D2, kinetic_g(w1, w2, div_rate, p), sources.S2);
    }
    for (int eq = 0; eq < 5; ++eq) {
      if (worst[eq] > 0.0) lv.max_scaled = std::max(lv.max_scaled, worst[eq] / std::max(magnitude[eq], 1e-300));
    }
    levels.push_back(lv);
  }
  return levels;
}

double oracle_order(const std::vector<OracleLevel>& levels, std::size_t i) {
  if (i + 1 >= levels.size()) throw InvalidArgument("oracle_order: level index out of range");
  const auto& a = levels[i];
  const auto& b = levels[i + 1];
  return std::log(a.max_scaled / b.max_scaled) / std::log(a.step / b.step);
}

std::vector<CheckResult> check_forcing_oracle(std::uint64_t seed) {
  const ModelParams params;
  const std::vector<double> steps{1e-2, 1e-3, 1e-4};
  std::vector<CheckResult> out;

  const auto judge = [&](const std::string& name, const std::vector<OracleLevel>& lv) {
    // The first decade is truncation dominated; the last may reach long-double round-off.
    const double order = oracle_order(lv, 0);
    CheckResult c;
    c.name = name;
    c.passed = lv.back().max_scaled <= 1e-6 && order >= 1.8 && order <= 2.2;
    c.detail = "scaled residual";
    for (const auto& l : lv) c.detail += " " + sci(l.max_scaled);
    c.detail += ", orders " + fixed(order) + " " + fixed(oracle_order(lv, 1)) + ", abs residual at 1e-4 " +
                sci(lv.back().max_abs);
    return c;
  };

  const auto spatial_samples = random_samples(100, 0.0, 0.04, seed);
  const auto temporal_samples = random_samples(100, 0.0, 1.0, seed + 1);
  const auto spatial = mms_spatial_family<LD>(params);
  const auto temporal = mms_temporal_family<LD>(params);
  const Sources spatial_src = synthesize_sources(mms_spatial_family<double>(params), params);
  const Sources temporal_src = synthesize_sources(mms_temporal_family<double>(params), params);

  out.push_back(judge("forcing oracle, spatial family",
                      strong_form_oracle(spatial, spatial_src, params, spatial_samples, steps)));
  out.push_back(judge("forcing oracle, temporal family",
                      strong_form_oracle(temporal, temporal_src, params, temporal_samples, steps)));

  // Negative control: a source missing the active-stress term must be caught.
  ModelParams no_active = params;
  no_active.tau = 0.0;
  Sources broken = temporal_src;
  broken.b = synthesize_sources(mms_temporal_family<double>(no_active), no_active).b;
  const auto lv = strong_form_oracle(temporal, broken, params, temporal_samples, steps);
  CheckResult neg;
  neg.name = "forcing oracle, negative control";
  neg.passed = lv.back().max_scaled > 1e-3;
  neg.detail = "scaled residual with a wrong source " + sci(lv.back().max_scaled);
  out.push_back(neg);
  return out;
}

JacobianCheck jacobian_fd_check(const Discretization& disc, const Problem& problem, const State& state_new,
                                const State& state_old, double dt, int directions, std::uint64_t seed) {
  const BlockLayout& layout = disc.layout();
  const Vector x0 = pack(layout, state_new);
  const SparseMatrix jac = newton_jacobian(disc, problem, state_new, state_old, dt);
  std::mt19937_64 rng(seed);
  JacobianCheck res;
  for (int k = 0; k < directions; ++k) {
    Vector d(x0.size());
    for (int f = 0; f < 5; ++f) {
      const int off = layout.offsets[f], n = layout.sizes[f];
      const double scale = std::max(x0.segment(off, n).cwiseAbs().maxCoeff(), 1e-12);
      for (int i = 0; i < n; ++i) d[off + i] = scale * (2.0 * unit(rng) - 1.0);
    }
    const double eps = 1e-6;
    const Vector rp = newton_residual(disc, problem, unpack(layout, x0 + eps * d, state_new.t), state_old, dt);
    const Vector rm = newton_residual(disc, problem, unpack(layout, x0 - eps * d, state_new.t), state_old, dt);
    const Vector fd = (rp - rm) / (2.0 * eps);
    const Vector jd = jac * d;
    double worst = 0.0;
    for (int f = 0; f < 5; ++f) {
      const int off = layout.offsets[f], n = layout.sizes[f];
      const double ref = jd.segment(off, n).norm();
      worst = std::max(worst, (jd.segment(off, n) - fd.segment(off, n)).norm() / std::max(ref, 1e-300));
    }
    res.block_errors.push_back(worst);
    res.worst = std::max(res.worst, worst);
  }
  return res;
}

CheckResult check_jacobian(std::uint64_t seed) {
  const ModelParams params;
  const Discretization disc(refine_uniform(refine_uniform(example1_mesh(8))));
  const auto exact = mms_spatial_family<double>(params);
  const Problem problem = mms_problem(exact, params);
  const double dt = 0.01;
  const BlockLayout& layout = disc.layout();

  // Random states away from the kinetic clamp; displacement comparable to the exact one.
  std::mt19937_64 rng(seed);
  const auto random_state = [&](double t) {
    Vector x(layout.total);
    const std::array<std::pair<double, double>, 5> ranges{
        {{-1e-3, 1e-3}, {-1.0, 1.0}, {-1.0, 1.0}, {0.5, 1.5}, {0.5, 1.5}}};
    for (int f = 0; f < 5; ++f) {
      for (int i = 0; i < layout.sizes[f]; ++i) {
        x[layout.offsets[f] + i] = ranges[f].first + (ranges[f].second - ranges[f].first) * unit(rng);
      }
    }
    return unpack(layout, x, t);
  };
  const State old_state = random_state(0.01);
  const State new_state = random_state(0.02);
  const JacobianCheck jc = jacobian_fd_check(disc, problem, new_state, old_state, dt, 10, seed + 7);
  CheckResult c;
  c.name = "Jacobian vs finite differences";
  c.passed = jc.worst < 1e-5 && jc.block_errors.size() == 10;
  c.detail = "worst relative error over 10 directions " + sci(jc.worst) + " (32x32 mesh)";
  return c;
}

double discrete_inf_sup(const Discretization& disc) {
  ModelParams p;
  p.mu = 0.5;  // 2 mu (eps, eps) = (eps, eps)
  p.lambda = 1.0;
  const PoroBlocks blocks = assemble_poro_blocks(disc, p, 1.0);
  const auto& constrained = disc.spaces().u.constrained_dofs;
  const std::set<int> fixed_dofs(constrained.begin(), constrained.end());
  std::vector<int> free_dofs;
  for (int i = 0; i < blocks.A1.rows(); ++i) {
    if (!fixed_dofs.count(i)) free_dofs.push_back(i);
  }
  const int nf = static_cast<int>(free_dofs.size());
  const DenseMatrix a_full(blocks.A1);
  const DenseMatrix b_full(blocks.B1);
  DenseMatrix a(nf, nf), b(nf, b_full.cols());
  for (int i = 0; i < nf; ++i) {
    b.row(i) = b_full.row(free_dofs[i]);
    for (int j = 0; j < nf; ++j) a(i, j) = a_full(free_dofs[i], free_dofs[j]);
  }
  const DenseMatrix mass(blocks.A3);
  const DenseMatrix schur = b.transpose() * a.llt().solve(b);
  Eigen::GeneralizedSelfAdjointEigenSolver<DenseMatrix> es(schur, mass);
  if (es.info() != Eigen::Success) throw NumericalDegeneracy("discrete_inf_sup: eigensolver failed");
  return std::sqrt(std::max(es.eigenvalues().minCoeff(), 0.0));
}

double quadrature_monomial_error(int degree) {
  const QuadRule rule = quadrature_rule(degree);
  double worst = 0.0;
  for (int a = 0; a <= degree; ++a) {
    for (int b = 0; a + b <= degree; ++b) {
      // integral of x^a y^b over the reference triangle = a! b! / (a + b + 2)!
      long double exact = 1.0L;
      for (int i = 1; i <= a; ++i) exact *= i;
      for (int i = 1; i <= b; ++i) exact *= i;
      for (int i = 1; i <= a + b + 2; ++i) exact /= i;
      long double q = 0.0L;
      for (std::size_t k = 0; k < rule.points.size(); ++k) {
        const double x = rule.points[k](1), y = rule.points[k](2);
        q += rule.weights[k] * std::pow(x, a) * std::pow(y, b);
      }
      q *= 0.5L;
      worst = std::max(worst, static_cast<double>(std::fabs(q - exact) / exact));
    }
  }
  return worst;
}

namespace {

double max_abs(const SparseMatrix& a) {
  double m = 0.0;
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) m = std::max(m, std::fabs(it.value()));
  }
  return m;
}

double asymmetry(const SparseMatrix& a) {
  const SparseMatrix at = a.transpose();
  return max_abs(SparseMatrix(a - at)) / std::max(max_abs(a), 1e-300);
}

/// Extracts a sub-block of the monolithic matrix.
DenseMatrix block(const SparseMatrix& a, int r0, int nr, int c0, int nc) {
  return DenseMatrix(a).block(r0, c0, nr, nc);
}

}  // namespace

std::vector<CheckResult> check_assembly_properties(std::uint64_t seed) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(seed);
  ModelParams params;
  params.kappa << 2e-4, 5e-5, 5e-5, 1e-4;
  params.D1 << 0.05, 0.01, 0.01, 0.08;
  const Discretization disc(example1_mesh(6));
  const PoroBlocks pb = assemble_poro_blocks(disc, params, 0.01);

  {
    const double s = std::max({asymmetry(pb.A1), asymmetry(pb.A2), asymmetry(pb.A3)});
    out.push_back({"A1/A2/A3 symmetry", s < 1e-12, "max relative asymmetry " + sci(s)});
  }

  {
    // The psi rows of the monolithic Jacobian carry -(div u, phi): exactly B1^T.
    Problem problem;
    problem.params = params;
    problem.params.tau = 0.0;
    problem.params.gamma = 0.0;
    const State zero = initial_state(disc, {}, {});
    const BlockLayout& L = disc.layout();
    const int nu = L.size(Field::U), npsi = L.size(Field::Psi);
    const SparseMatrix jac = newton_jacobian(disc, problem, zero, zero, 0.01);
    const DenseMatrix psi_u = block(jac, L.offset(Field::Psi), npsi, L.offset(Field::U), nu);
    const DenseMatrix u_psi = block(jac, L.offset(Field::U), nu, L.offset(Field::Psi), npsi);
    const DenseMatrix b1 = DenseMatrix(pb.B1);
    double worst = (psi_u - b1.transpose()).cwiseAbs().maxCoeff();
    const auto& fixed_u = disc.spaces().u.constrained_dofs;
    const std::set<int> fixed(fixed_u.begin(), fixed_u.end());
    for (int i = 0; i < nu; ++i) {
      if (fixed.count(i)) continue;  // Dirichlet rows are identity rows
      worst = std::max(worst, (u_psi.row(i) - b1.row(i)).cwiseAbs().maxCoeff());
    }
    worst /= std::max(b1.cwiseAbs().maxCoeff(), 1e-300);
    out.push_back({"B1 transpose pairing", worst <= 1e-15, "max relative mismatch " + sci(worst)});
  }

  {
    // wT C w = -1/2 int div(du/dt) w^2 for displacements vanishing on the whole boundary.
    const Mesh& mesh = disc.mesh();
    std::set<int> boundary;
    for (Tag tag : {Tag::Gamma, Tag::Sigma}) {
      for (int v : boundary_vertices(mesh, tag)) boundary.insert(v);
    }
    const int nu = disc.layout().size(Field::U);
    const int nv = mesh.num_vertices();
    const auto& space = disc.spaces().u;
    Vector u_new = Vector::Zero(nu), u_old = Vector::Zero(nu);
    for (int i = 0; i < nu; ++i) {
      const bool on_boundary = i < 2 * nv && boundary.count(i / 2);
      if (!on_boundary) {
        u_new[i] = 2.0 * unit(rng) - 1.0;
        u_old[i] = 2.0 * unit(rng) - 1.0;
      }
    }
    Vector w(nv);
    for (int i = 0; i < nv; ++i) w[i] = 2.0 * unit(rng) - 1.0;
    const double dt = 0.1;
    const AdrBlocks adr = assemble_adr_blocks(disc, params, dt, u_new, u_old);
    const double lhs = w.dot(adr.C * w);
    const QuadRule rule = quadrature_rule(6);
    long double rhs = 0.0L;
    const Vector rate = (u_new - u_old) / dt;
    for (int e = 0; e < disc.num_elements(); ++e) {
      const auto& geo = disc.element(e);
      for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const ShapeValues sv = geo.shape(rule.points[q]);
        double div = 0.0, wq = 0.0;
        for (int k = 0; k < 3; ++k) {
          const int v = geo.vertices[k];
          div += sv.grad(0, k) * rate[space.vertex_dof(v, 0)] + sv.grad(1, k) * rate[space.vertex_dof(v, 1)];
          wq += sv.value(k) * w[v];
        }
        div += sv.grad(0, 3) * rate[space.bubble_dof(e, 0)] + sv.grad(1, 3) * rate[space.bubble_dof(e, 1)];
        rhs += -0.5L * geo.area * rule.weights[q] * div * wq * wq;
      }
    }
    const double diff = std::fabs(lhs - static_cast<double>(rhs));
    out.push_back({"skew convection identity", diff <= 1e-10,
                   "wT C w = " + sci(lhs) + ", -1/2 int div(du) w^2 = " + sci(static_cast<double>(rhs)) +
                       ", difference " + sci(diff)});
  }

  {
    std::vector<double> beta;
    for (int n : {2, 4, 8}) beta.push_back(discrete_inf_sup(Discretization(example1_mesh(n))));
    const double floor = 0.1;
    const bool ok = std::all_of(beta.begin(), beta.end(), [floor](double b) { return b > floor; }) &&
                    beta.back() >= 0.5 * beta.front();
    out.push_back({"discrete inf-sup floor", ok,
                   "beta on 2x2, 4x4, 8x8: " + fixed(beta[0]) + ", " + fixed(beta[1]) + ", " + fixed(beta[2]) +
                       " (floor " + fixed(floor) + ", no drop below half the coarse value)"});
  }

  {
    double worst = 0.0;
    for (int d = 1; d <= 6; ++d) worst = std::max(worst, quadrature_monomial_error(d));
    out.push_back({"quadrature monomial exactness", worst < 1e-13,
                   "max relative error over degrees 1..6 " + sci(worst)});
  }
  return out;
}

std::vector<CheckResult> run_all_checks(std::uint64_t seed) {
  std::vector<CheckResult> all = check_forcing_oracle(seed);
  all.push_back(check_jacobian(seed));
  for (auto& c : check_assembly_properties(seed)) all.push_back(std::move(c));
  return all;
}

}  // namespace poromech

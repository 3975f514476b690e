#include "poromech/checks.hpp"
#include "poromech/verification.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace poromech;

namespace {

State interpolant(const Discretization& disc, const ExactSolution<double>& e, double t) {
  State s = initial_state(disc, {}, {}, t);
  const auto& sp = disc.spaces();
  for (int v = 0; v < disc.mesh().num_vertices(); ++v) {
    const Vec2& x = disc.mesh().vertices()[v];
    const Vec2 u = e.u(x, t);
    s.u[sp.u.vertex_dof(v, 0)] = u(0);
    s.u[sp.u.vertex_dof(v, 1)] = u(1);
    s.p[v] = e.p.value(x, t);
    s.psi[v] = e.psi.value(x, t);
    s.w1[v] = e.w1.value(x, t);
    s.w2[v] = e.w2.value(x, t);
  }
  return s;
}

ExactSolution<double> zero_solution() {
  const auto z = detail::sum_of<double>({});
  return {z, z, z, z, z, z};
}

/// Closed-form derivatives of one scalar field against central differences.
void expect_closures_consistent(const ScalarClosures<double>& c, const Vec2& x, double t) {
  const double h = 1e-5;
  const auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
  const Vec2 ex(h, 0), ey(0, h);
  EXPECT_LT(rel((c.value(x, t + h) - c.value(x, t - h)) / (2 * h), c.dt(x, t)), 1e-7);
  const Vec2 g((c.value(x + ex, t) - c.value(x - ex, t)) / (2 * h), (c.value(x + ey, t) - c.value(x - ey, t)) / (2 * h));
  EXPECT_LT(rel(g(0), c.grad(x, t)(0)), 1e-7);
  EXPECT_LT(rel(g(1), c.grad(x, t)(1)), 1e-7);
  const Vec2 gt = (c.grad(x, t + h) - c.grad(x, t - h)) / (2 * h);
  EXPECT_LT(rel(gt(0), c.grad_dt(x, t)(0)), 1e-7);
  EXPECT_LT(rel(gt(1), c.grad_dt(x, t)(1)), 1e-7);
  const Mat2 hs = c.hess(x, t);
  const Vec2 hx = (c.grad(x + ex, t) - c.grad(x - ex, t)) / (2 * h);
  const Vec2 hy = (c.grad(x + ey, t) - c.grad(x - ey, t)) / (2 * h);
  EXPECT_LT(rel(hx(0), hs(0, 0)), 1e-6);
  EXPECT_LT(rel(hx(1), hs(1, 0)), 1e-6);
  EXPECT_LT(rel(hy(0), hs(0, 1)), 1e-6);
  EXPECT_LT(rel(hy(1), hs(1, 1)), 1e-6);
}

}  // namespace

TEST(Manufactured, SpatialFamilyValues) {
  const ModelParams p;
  const auto e = mms_spatial_family<double>(p);
  EXPECT_NEAR(p.lambda * e.div_u(Vec2(0.3, 0.7), 1.0), p.u_inf * 1.0, 1e-9);
  const Vec2 x(0.41, 0.27);
  EXPECT_EQ(e.u(x, 0.0).norm() + std::abs(e.p.value(x, 0.0)) + std::abs(e.psi.value(x, 0.0)), 0.0);
  EXPECT_EQ(e.w1.value(x, 0.0) + e.w2.value(x, 0.0), 0.0);
  EXPECT_NEAR(e.w1.value(Vec2(0, 0), 0.37), 2 * 0.37, 1e-15);
  // psi = p - lambda div u
  EXPECT_NEAR(e.psi.value(x, 0.3), e.p.value(x, 0.3) - p.lambda * e.div_u(x, 0.3), 1e-9);
}

TEST(Manufactured, TemporalFamilyValues) {
  const ModelParams p;
  const auto e = mms_temporal_family<double>(p);
  const Vec2 x(0.6, 0.2);
  EXPECT_EQ(e.u(x, 0.0).norm() + std::abs(e.p.value(x, 0.0)) + std::abs(e.psi.value(x, 0.0)), 0.0);
  EXPECT_NEAR(e.w1.value(x, 0.8) + e.w2.value(x, 0.8), 2 * std::sin(0.8) * 0.36, 1e-15);
  const Vec2 profile(0.36 / (2 * p.lambda) + 0.04, 0.36 + 0.04 / (2 * p.lambda));
  EXPECT_LT((e.u_dt(x, 0.0) - p.u_inf * profile).norm(), 1e-16);
}

TEST(Manufactured, ClosuresMatchFiniteDifferences) {
  const ModelParams p;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (const auto& e : {mms_spatial_family<double>(p), mms_temporal_family<double>(p)}) {
    for (int k = 0; k < 5; ++k) {
      const Vec2 x(u(rng), u(rng));
      const double t = u(rng);
      for (const auto* c : {&e.u1, &e.u2, &e.p, &e.psi, &e.w1, &e.w2}) expect_closures_consistent(*c, x, t);
    }
  }
}

TEST(Sources, TemporalFamilyHasNoPsiSource) {
  const ModelParams p;
  const Sources s = synthesize_sources(mms_temporal_family<double>(p), p);
  for (const auto& pt : random_samples(50, 0.0, 1.0, 13)) EXPECT_LT(std::abs(s.S_psi(pt.x, pt.t)), 1e-12);
}

TEST(Sources, ZeroSolutionGivesZeroSourcesAndData) {
  ModelParams p;
  p.beta1 = 1.0;
  p.beta2 = p.beta3 = 0.0;  // zero concentrations sit on the clamp, where f = beta1 beta2
  const auto z = zero_solution();
  const Sources s = synthesize_sources(z, p);
  const BoundaryData b = boundary_data_from_exact(z, p);
  const Vec2 x(0.3, 0.4), n(1, 0);
  EXPECT_EQ(s.b(x, 0.5).norm(), 0.0);
  EXPECT_EQ(s.ell(x, 0.5), 0.0);
  EXPECT_EQ(s.S_psi(x, 0.5), 0.0);
  EXPECT_EQ(s.S1(x, 0.5), 0.0);
  EXPECT_EQ(s.S2(x, 0.5), 0.0);
  EXPECT_EQ(b.displacement(x, 0.5).norm() + b.traction(x, 0.5, n).norm() + std::abs(b.pressure(x, 0.5)) +
                std::abs(b.fluid_flux(x, 0.5, n)),
            0.0);
}

TEST(Sources, StrongFormOracle) {
  for (const auto& c : check_forcing_oracle(2024)) EXPECT_TRUE(c.passed) << c.name << ": " << c.detail;
}

TEST(BoundaryData, TractionIsStressTimesNormal) {
  const ModelParams p;
  const auto e = mms_spatial_family<double>(p);
  const BoundaryData b = boundary_data_from_exact(e, p);
  const Vec2 x(1.0, 0.35);
  const double t = 0.02;
  const Mat2 sigma = exact_total_stress(e, p, x, t);
  EXPECT_LT((b.traction(x, t, Vec2(1, 0)) - sigma.col(0)).norm(), 1e-12 * sigma.norm());
}

TEST(BoundaryData, FluxDivergenceTheoremOnOneElement) {
  const ModelParams p;
  const auto e = mms_spatial_family<double>(p);
  const BoundaryData b = boundary_data_from_exact(e, p);
  const Vec2 v[3] = {Vec2(0.2, 0.1), Vec2(0.9, 0.3), Vec2(0.4, 0.8)};
  const double t = 0.7;
  // boundary integral of the outward flux with 5-point Gauss-Legendre per edge
  const double gx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831, 0.9061798459386640};
  const double gw[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
                        0.2369268850561891};
  double boundary = 0.0;
  for (int k = 0; k < 3; ++k) {
    const Vec2 a = v[k], c = v[(k + 1) % 3];
    const Vec2 d = c - a;
    const Vec2 n = Vec2(d.y(), -d.x()).normalized();  // counter-clockwise, so outward
    for (int q = 0; q < 5; ++q) boundary += 0.5 * d.norm() * gw[q] * b.fluid_flux(a + 0.5 * (1 + gx[q]) * d, t, n);
  }
  // area integral of div((kappa/eta) grad p)
  const QuadRule r = quadrature_rule(6);
  const double area = 0.5 * std::abs((v[1] - v[0]).x() * (v[2] - v[0]).y() - (v[1] - v[0]).y() * (v[2] - v[0]).x());
  double volume = 0.0;
  for (std::size_t q = 0; q < r.points.size(); ++q) {
    const Vec2 x = r.points[q](0) * v[0] + r.points[q](1) * v[1] + r.points[q](2) * v[2];
    volume += area * r.weights[q] * (p.kappa.cwiseProduct(e.p.hess(x, t))).sum() / p.eta;
  }
  EXPECT_NEAR(boundary, volume, 1e-12);
}

TEST(ErrorNorms, InterpolantRates) {
  const ModelParams p;
  const auto e = mms_spatial_family<double>(p);
  std::vector<FieldErrors> errs;
  for (int n : {8, 16, 32}) {
    const Discretization disc(example1_mesh(n));
    errs.push_back(error_norms(disc, interpolant(disc, e, 0.5), e, 0.5));
  }
  for (int k = 0; k < 2; ++k) {
    EXPECT_NEAR(std::log2(errs[k].w1_l2 / errs[k + 1].w1_l2), 2.0, 0.1);
    EXPECT_NEAR(std::log2(errs[k].w1_h1 / errs[k + 1].w1_h1), 1.0, 0.1);
    EXPECT_NEAR(std::log2(errs[k].u_l2 / errs[k + 1].u_l2), 2.0, 0.1);
    EXPECT_NEAR(std::log2(errs[k].u_h1 / errs[k + 1].u_h1), 1.0, 0.1);
  }
}

TEST(ErrorNorms, ZeroAndHomogeneity) {
  const Discretization disc(example1_mesh(4));
  const FieldErrors z = error_norms(disc, initial_state(disc, {}, {}), zero_solution(), 0.0);
  EXPECT_EQ(z.u_h1 + z.p_h1 + z.psi_l2 + z.w1_h1 + z.w2_h1, 0.0);
  const ModelParams p;
  const auto e = mms_temporal_family<double>(p);
  State s = initial_state(disc, {}, {});
  s.w1.setConstant(0.3);
  s.p.setConstant(-0.1);
  const FieldErrors one = error_norms(disc, s, e, 0.0);  // exact is zero at t = 0
  s.w1 *= 2.0;
  s.p *= 2.0;
  const FieldErrors two = error_norms(disc, s, e, 0.0);
  EXPECT_NEAR(two.w1_l2, 2.0 * one.w1_l2, 1e-14);
  EXPECT_NEAR(two.p_h1, 2.0 * one.p_h1, 1e-14);
}

TEST(CumulativeError, Formula) {
  const Discretization disc(example1_mesh(4));
  const auto z = zero_solution();
  std::vector<State> traj{initial_state(disc, {}, {}, 0.1), initial_state(disc, {}, {}, 0.2)};
  EXPECT_EQ(cumulative_time_error(disc, traj, z, 0.1).w1, 0.0);
  State g = initial_state(disc, {}, {}, 0.1);
  g.w1.setConstant(2.0);  // ||g||_L2 = 2 on the unit square
  EXPECT_NEAR(cumulative_time_error(disc, {g}, z, 0.1).w1, std::sqrt(0.1) * 2.0, 1e-13);
  State g2 = g;
  g2.t = 0.05;
  const double e1 = cumulative_time_error(disc, {g}, z, 0.1).w1;
  const double e2 = cumulative_time_error(disc, {g2}, z, 0.05).w1;
  EXPECT_NEAR(e2, e1 / std::sqrt(2.0), 1e-13);
}

TEST(ErrorTable, RatesAndShape) {
  SpatialStudySpec s;
  s.n_refinements = 2;
  const ErrorTable t = convergence_study_spatial(s);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_TRUE(t.rows[0].rates.empty());
  ASSERT_EQ(t.rows[1].rates.size(), t.columns.size());
  const std::size_t c = t.column("p_H1");
  EXPECT_NEAR(t.rows[1].rates[c],
              std::log(t.rows[0].errors[c] / t.rows[1].errors[c]) / std::log(t.rows[0].size / t.rows[1].size), 1e-14);
  EXPECT_NEAR(t.rows[1].rates[c], 1.0, 0.15);
}

TEST(TemporalStudy, Deterministic) {
  TemporalStudySpec s;
  s.cells = 4;
  s.dt_list = {0.5, 0.25};
  const ErrorTable a = convergence_study_temporal(s);
  const ErrorTable b = convergence_study_temporal(s);
  ASSERT_EQ(a.rows.size(), 2u);
  for (std::size_t i = 0; i < a.rows.size(); ++i) EXPECT_EQ(a.rows[i].errors, b.rows[i].errors);
}

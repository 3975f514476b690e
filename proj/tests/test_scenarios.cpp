#include "poromech/scenarios.hpp"

#include <gtest/gtest.h>

using namespace poromech;

TEST(SteadyState, Kinetics) {
  const Eigen::Vector2d w = kinetic_steady_state(ModelParams{});
  EXPECT_NEAR(w(0), 0.9, 1e-15);
  EXPECT_NEAR(w(1), 0.7695 / 0.81, 1e-15);
}

TEST(SteadyStateTime, Rules) {
  VariationSeries zero;
  for (int i = 1; i <= 30; ++i) {
    zero.times.push_back(0.01 * i);
    zero.values.push_back(0.0);
  }
  EXPECT_DOUBLE_EQ(*steady_state_time(zero, 1e-3), 0.10);

  VariationSeries up;
  for (int i = 1; i <= 30; ++i) {
    up.times.push_back(i);
    up.values.push_back(i);
  }
  EXPECT_FALSE(steady_state_time(up, 0.5).has_value());

  VariationSeries cross;
  for (int i = 1; i <= 60; ++i) {
    cross.times.push_back(i);
    cross.values.push_back(i < 37 ? 1.0 : 1e-6);
  }
  EXPECT_DOUBLE_EQ(*steady_state_time(cross, 1e-3), 46.0);
  EXPECT_THROW(steady_state_time(cross, 0.0), InvalidArgument);
}

TEST(PatternSpec, Validation) {
  PatternRunSpec s;
  EXPECT_NO_THROW(validate(s));
  s.t_final = 0.5;
  EXPECT_THROW(validate(s), InvalidArgument);
  s = PatternRunSpec{};
  s.amplitude(0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(validate(s), InvalidArgument);
}

TEST(PatternSpec, MeshLayout) {
  PatternRunSpec s;
  const Mesh m = pattern_mesh(s);
  EXPECT_EQ(m.num_triangles(), 2 * 64 * 38);
  for (int v : boundary_vertices(m, Tag::Sigma)) EXPECT_DOUBLE_EQ(m.vertices()[v].x(), 1.0);
}

TEST(PatternInit, SeededPerturbation) {
  PatternRunSpec s;
  s.nx = 8;
  s.ny = 5;
  const Discretization disc(pattern_mesh(s));
  const State a = pattern_initial_state(disc, s), b = pattern_initial_state(disc, s);
  EXPECT_EQ(a.w1, b.w1);
  EXPECT_TRUE(((a.w1.array() / 0.9 - 1.0).abs() <= 0.01).all());
  EXPECT_GT((a.w1.array() - 0.9).abs().maxCoeff(), 0.0);
  s.seed += 1;
  EXPECT_NE(pattern_initial_state(disc, s).w1, a.w1);
}

TEST(PatternRun, NothingMovesAtRest) {
  PatternRunSpec s;
  s.nx = 8;
  s.ny = 5;
  s.t_final = 1.0;
  s.dt = 0.05;
  s.params.tau = 0.0;
  s.params.gamma = 0.0;
  s.amplitude.setZero();
  s.perturbation = 0.0;
  const PatternResult r = run_pattern(s);
  ASSERT_TRUE(r.failure.empty()) << r.failure;
  ASSERT_EQ(r.series.values.size(), 20u);
  for (double v : r.series.values) EXPECT_LT(v, 1e-8);
  EXPECT_LT(r.peak_displacement, 1e-12);
}

TEST(PatternRun, MechanicsDecouplesWithoutTractionAndActiveStress) {
  PatternRunSpec s;
  s.nx = 8;
  s.ny = 5;
  s.t_final = 1.0;
  s.dt = 0.01;
  s.params.tau = 0.0;
  s.params.gamma = 0.0;
  s.amplitude.setZero();
  s.snapshot_times = {0.5, 1.0};
  const PatternResult r = run_pattern(s);
  ASSERT_TRUE(r.failure.empty()) << r.failure;
  EXPECT_LT(r.peak_displacement, 1e-12);
  EXPECT_GT(r.series.values.front(), 0.0);
  ASSERT_EQ(r.snapshots.size(), 2u);
  EXPECT_NEAR(r.snapshots[1].t, 1.0, 1e-12);
  EXPECT_EQ(r.series.values.size(), 100u);
}

TEST(P1Norm, MassMatrix) {
  const Discretization disc(build_rect_mesh(0, 0, 2, 1, 3, 3, {Side::Left}));
  EXPECT_NEAR(p1_l2_norm(disc, Vector::Constant(disc.mesh().num_vertices(), 3.0)), 3.0 * std::sqrt(2.0), 1e-13);
}

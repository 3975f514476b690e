#include "poromech/discretization.hpp"
#include "poromech/errors.hpp"

#include <Eigen/LU>
#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

using namespace poromech;

namespace {

Mesh reference_triangle() { return Mesh({Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)}, {{0, 1, 2}}, {}); }

int count_tag(const Mesh& m, Tag tag) {
  int n = 0;
  for (const auto& e : m.boundary_edges()) n += e.tag == tag;
  return n;
}

}  // namespace

TEST(Mesh, SingleCell) {
  const Mesh m = build_rect_mesh(0, 0, 1, 1, 1, 1, {Side::Left, Side::Bottom});
  EXPECT_EQ(m.num_vertices(), 4);
  EXPECT_EQ(m.num_triangles(), 2);
  EXPECT_EQ(count_tag(m, Tag::Gamma), 2);
  EXPECT_EQ(count_tag(m, Tag::Sigma), 2);
}

TEST(Mesh, TwoByTwo) {
  const Mesh m = build_rect_mesh(0, 0, 1, 1, 2, 2, {Side::Left});
  EXPECT_EQ(m.num_vertices(), 9);
  EXPECT_EQ(m.num_triangles(), 8);
  EXPECT_NEAR(m.h_max(), std::sqrt(2.0) / 2.0, 1e-15);
}

TEST(Mesh, PatternLayoutSigmaIsRightSide) {
  const Mesh m = build_rect_mesh(0, 0, 1, 0.6, 10, 6, {Side::Left, Side::Bottom, Side::Top});
  EXPECT_EQ(count_tag(m, Tag::Sigma), 6);
  for (const auto& e : m.boundary_edges()) {
    if (e.tag == Tag::Sigma) {
      EXPECT_DOUBLE_EQ(m.vertices()[e.v[0]].x(), 1.0);
      EXPECT_DOUBLE_EQ(m.vertices()[e.v[1]].x(), 1.0);
    }
  }
}

TEST(Mesh, Invariants) {
  const Mesh m = refine_uniform(build_rect_mesh(0, 0, 2, 1, 3, 2, {Side::Left, Side::Bottom}));
  std::map<std::pair<int, int>, int> edge_count;
  double hmax = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) {
    EXPECT_GT(m.signed_area(t), 0.0);
    const auto& tri = m.triangles()[t];
    for (int k = 0; k < 3; ++k) {
      int a = tri[k], b = tri[(k + 1) % 3];
      if (a > b) std::swap(a, b);
      if (edge_count[{a, b}]++ == 0) hmax = std::max(hmax, (m.vertices()[a] - m.vertices()[b]).norm());
    }
  }
  std::map<std::pair<int, int>, int> tagged;
  for (const auto& e : m.boundary_edges()) {
    tagged[{std::min(e.v[0], e.v[1]), std::max(e.v[0], e.v[1])}]++;
  }
  for (const auto& [edge, n] : edge_count) {
    EXPECT_TRUE(n == 1 || n == 2);
    EXPECT_EQ(tagged.count(edge) ? 1 : 2, n);
    if (tagged.count(edge)) {
      EXPECT_EQ(tagged[edge], 1);
    }
  }
  EXPECT_DOUBLE_EQ(m.h_max(), hmax);
  EXPECT_NEAR(m.total_area(), 2.0, 1e-14);
}

TEST(Mesh, RefinementCounts) {
  Mesh m = build_rect_mesh(0, 0, 1, 1, 1, 1, {Side::Left});
  const double h0 = m.h_max();
  m = refine_uniform(m);
  EXPECT_EQ(m.num_triangles(), 8);
  EXPECT_NEAR(m.h_max(), h0 / 2.0, 1e-15);
  for (int k = 1; k < 7; ++k) m = refine_uniform(m);
  EXPECT_EQ(m.num_triangles(), 2 * 16384);
}

TEST(Mesh, BoundaryVertices) {
  const Mesh m = build_rect_mesh(0, 0, 1, 1, 1, 1, {Side::Left, Side::Bottom});
  EXPECT_EQ(boundary_vertices(m, Tag::Gamma).size(), 3u);
  EXPECT_EQ(boundary_vertices(build_rect_mesh(0, 0, 1, 1, 2, 2, {Side::Left, Side::Bottom}), Tag::Gamma).size(), 5u);
  const Mesh all = build_rect_mesh(0, 0, 1, 1, 2, 2, {Side::Left, Side::Right, Side::Bottom, Side::Top}, true);
  EXPECT_TRUE(boundary_vertices(all, Tag::Sigma).empty());
}

TEST(Mesh, RejectsBadInput) {
  EXPECT_THROW(build_rect_mesh(0, 0, 1, 1, 0, 1, {Side::Left}), InvalidArgument);
  EXPECT_THROW(build_rect_mesh(0, 0, -1, 1, 1, 1, {Side::Left}), InvalidArgument);
  EXPECT_THROW(Mesh({Vec2(0, 0), Vec2(0, 1), Vec2(1, 0)}, {{0, 1, 2}}, {}), NumericalDegeneracy);
}

TEST(Basis, P1Values) {
  const auto v0 = eval_p1<double>(Bary<double>(1, 0, 0));
  EXPECT_EQ(v0.values, Eigen::Vector3d(1, 0, 0));
  const auto c = eval_p1<double>(Bary<double>(1.0 / 3, 1.0 / 3, 1.0 / 3));
  EXPECT_NEAR(c.values.sum(), 1.0, 1e-15);
  EXPECT_NEAR(c.values(1), 1.0 / 3, 1e-15);
}

TEST(Basis, Bubble) {
  EXPECT_NEAR(eval_bubble<double>(Bary<double>(1.0 / 3, 1.0 / 3, 1.0 / 3)).value, 1.0 / 27, 1e-16);
  EXPECT_EQ(eval_bubble<double>(Bary<double>(0.5, 0.5, 0)).value, 0.0);
  // integral over the reference triangle = area / 60
  const QuadRule q = quadrature_rule(3);
  double s = 0.0;
  for (std::size_t i = 0; i < q.points.size(); ++i) s += 0.5 * q.weights[i] * eval_bubble<double>(q.points[i]).value;
  EXPECT_NEAR(s, 0.5 / 60.0, 1e-16);
}

TEST(Quadrature, HandValues) {
  const auto integrate = [](int degree, auto f) {
    const QuadRule q = quadrature_rule(degree);
    double s = 0.0;
    for (std::size_t i = 0; i < q.points.size(); ++i) s += 0.5 * q.weights[i] * f(q.points[i]);
    return s;
  };
  EXPECT_NEAR(integrate(1, [](const Bary<double>&) { return 1.0; }), 0.5, 1e-15);
  EXPECT_NEAR(integrate(2, [](const Bary<double>& b) { return b(1) * b(1); }), 1.0 / 12.0, 1e-15);
  // (phi0 phi1 phi2)^2 over the reference triangle: 2 * area * 2! 2! 2! / 8! = 8 / 40320
  EXPECT_NEAR(integrate(6, [](const Bary<double>& b) { return std::pow(b(0) * b(1) * b(2), 2); }), 8.0 / 40320.0,
              1e-17);
  EXPECT_THROW(quadrature_rule(7), InvalidArgument);
}

TEST(AffineMap, ReferenceAndScaled) {
  const AffineMap r = affine_map(reference_triangle(), 0);
  EXPECT_TRUE(r.jacobian.isIdentity(1e-15));
  EXPECT_DOUBLE_EQ(r.abs_det, 1.0);
  const Mesh s({Vec2(0, 0), Vec2(3, 0), Vec2(0, 3)}, {{0, 1, 2}}, {});
  EXPECT_DOUBLE_EQ(affine_map(s, 0).abs_det, 9.0);
}

TEST(AffineMap, PhysicalGradientMatchesFiniteDifferences) {
  const Mesh m({Vec2(0.1, 0.2), Vec2(1.3, 0.5), Vec2(0.4, 1.7)}, {{0, 1, 2}}, {});
  const AffineMap a = affine_map(m, 0);
  const Eigen::Matrix<double, 2, 3> grads = a.inv_transpose * p1_reference_gradients();
  // hat function k evaluated at a physical point through the inverse map
  const auto hat = [&](int k, const Vec2& x) {
    const Vec2 xi = a.jacobian.inverse() * (x - a.origin);
    const Eigen::Vector3d b(1 - xi(0) - xi(1), xi(0), xi(1));
    return b(k);
  };
  const Vec2 x(0.6, 0.8);
  const double h = 1e-6;
  for (int k = 0; k < 3; ++k) {
    const Vec2 fd((hat(k, x + Vec2(h, 0)) - hat(k, x - Vec2(h, 0))) / (2 * h),
                  (hat(k, x + Vec2(0, h)) - hat(k, x - Vec2(0, h))) / (2 * h));
    EXPECT_LT((fd - grads.col(k)).norm(), 1e-8);
  }
}

TEST(Spaces, Counting) {
  const Mesh m = build_rect_mesh(0, 0, 1, 1, 1, 1, {Side::Left, Side::Bottom});
  EXPECT_EQ(build_space(m, SpaceKind::ScalarP1, std::nullopt).ndof, 4);
  EXPECT_EQ(build_space(m, SpaceKind::VectorMini, std::nullopt).ndof, 12);
}

TEST(Spaces, PressureConstrainedOnSigma) {
  const Mesh m = build_rect_mesh(0, 0, 1, 1, 4, 4, {Side::Left, Side::Bottom});
  const Space q = build_space(m, SpaceKind::ScalarP1, Tag::Sigma);
  for (int v = 0; v < m.num_vertices(); ++v) {
    const Vec2& x = m.vertices()[v];
    const bool on_sigma = x.x() == 1.0 || x.y() == 1.0;
    EXPECT_EQ(std::binary_search(q.constrained_dofs.begin(), q.constrained_dofs.end(), v), on_sigma);
  }
}

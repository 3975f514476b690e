#pragma once

#include "poromech/mesh.hpp"

#include <Eigen/Core>

#include <optional>
#include <vector>

namespace poromech {

template <typename Scalar>
using Bary = Eigen::Matrix<Scalar, 3, 1>;

/// Points in barycentric coordinates; weights sum to one, so integrals over a
/// triangle T are |T| * sum_q w_q f(x_q).
struct QuadRule {
  std::vector<Bary<double>> points;
  std::vector<double> weights;
  int degree = 0;
};

/// Rule exact for bivariate polynomials of total degree <= `degree` (1..6).
QuadRule quadrature_rule(int degree);

/// Two-point Gauss rule on [0,1] (exact to degree 3), used for edge integrals.
struct EdgeRule {
  std::array<double, 2> points;
  std::array<double, 2> weights;
};
EdgeRule edge_gauss2();

/// Reference gradients of the barycentric coordinates on the reference triangle
/// (0,0),(1,0),(0,1); columns are d(phi_k)/d(xi).
inline Eigen::Matrix<double, 2, 3> p1_reference_gradients() {
  Eigen::Matrix<double, 2, 3> g;
  g << -1.0, 1.0, 0.0,
       -1.0, 0.0, 1.0;
  return g;
}

template <typename Scalar>
struct P1Eval {
  Eigen::Matrix<Scalar, 3, 1> values;
  Eigen::Matrix<Scalar, 2, 3> ref_gradients;
};

template <typename Scalar>
P1Eval<Scalar> eval_p1(const Bary<Scalar>& b) {
  return {b, p1_reference_gradients().cast<Scalar>()};
}

template <typename Scalar>
struct BubbleEval {
  Scalar value;
  Eigen::Matrix<Scalar, 2, 1> ref_gradient;
};

/// Cubic bubble phi_0 * phi_1 * phi_2 and its reference gradient.
template <typename Scalar>
BubbleEval<Scalar> eval_bubble(const Bary<Scalar>& b) {
  const Eigen::Matrix<Scalar, 2, 3> g = p1_reference_gradients().cast<Scalar>();
  const Eigen::Matrix<Scalar, 2, 1> grad =
      b(1) * b(2) * g.col(0) + b(0) * b(2) * g.col(1) + b(0) * b(1) * g.col(2);
  return {b(0) * b(1) * b(2), grad};
}

struct AffineMap {
  Mat2 jacobian;       ///< d(x)/d(xi)
  Mat2 inv_transpose;  ///< maps reference gradients to physical gradients
  double abs_det;      ///< 2 * area
  Vec2 origin;         ///< image of the reference origin

  Vec2 to_physical(const Bary<double>& b) const {
    return origin + jacobian * Vec2(b(1), b(2));
  }
};

/// Throws NumericalDegeneracy when |det J| < 1e-14.
AffineMap affine_map(const Mesh& mesh, int tri);

enum class SpaceKind { VectorMini, ScalarP1 };

/// Degree-of-freedom map for one field. VectorMini numbers vertex dofs 2v+c and
/// appends bubble dofs 2(nV+t)+c; ScalarP1 numbers dofs by vertex index.
struct Space {
  SpaceKind kind;
  std::optional<Tag> constrained_tag;
  int ndof = 0;
  int num_vertices = 0;
  int num_triangles = 0;
  std::vector<int> constrained_dofs;  ///< sorted

  int vertex_dof(int v, int comp = 0) const {
    return kind == SpaceKind::VectorMini ? 2 * v + comp : v;
  }
  int bubble_dof(int tri, int comp) const { return 2 * (num_vertices + tri) + comp; }
};

Space build_space(const Mesh& mesh, SpaceKind kind, std::optional<Tag> constrained_tag);

enum class Field { U = 0, P = 1, Psi = 2, W1 = 3, W2 = 4 };

/// Offsets of the five fields inside one monolithic vector (u, p, psi, w1, w2).
struct BlockLayout {
  std::array<int, 5> offsets{};
  std::array<int, 5> sizes{};
  int total = 0;

  int offset(Field f) const { return offsets[static_cast<int>(f)]; }
  int size(Field f) const { return sizes[static_cast<int>(f)]; }
};

BlockLayout make_block_layout(int n_u, int n_p, int n_psi, int n_w1, int n_w2);

/// V_h (MINI, clamped on Gamma), Q_h (P1, drained on Sigma), Z_h and W_h (P1).
struct FieldSpaces {
  Space u;
  Space p;
  Space psi;
  Space w;
  BlockLayout layout;
};

FieldSpaces build_field_spaces(const Mesh& mesh);

}  // namespace poromech

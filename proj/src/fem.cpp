#include "poromech/fem.hpp"

#include <Eigen/LU>

#include "poromech/errors.hpp"

#include <cmath>
#include <string>

namespace poromech {

namespace {

void add_orbit3(QuadRule& r, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  r.points.emplace_back(a, a, b);
  r.points.emplace_back(a, b, a);
  r.points.emplace_back(b, a, a);
  for (int i = 0; i < 3; ++i) r.weights.push_back(w);
}

void add_orbit6(QuadRule& r, double a, double b, double w) {
  const double c = 1.0 - a - b;
  r.points.emplace_back(a, b, c);
  r.points.emplace_back(a, c, b);
  r.points.emplace_back(b, a, c);
  r.points.emplace_back(b, c, a);
  r.points.emplace_back(c, a, b);
  r.points.emplace_back(c, b, a);
  for (int i = 0; i < 6; ++i) r.weights.push_back(w);
}

}  // namespace

// Symmetric rules with positive weights (Strang-Fix / Dunavant).
QuadRule quadrature_rule(int degree) {
  QuadRule r;
  r.degree = degree;
  switch (degree) {
    case 1:
      r.points.emplace_back(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0);
      r.weights.push_back(1.0);
      break;
    case 2:
      add_orbit3(r, 1.0 / 6.0, 1.0 / 3.0);
      break;
    case 3:  // no positive 6-point degree-3 rule is cheaper than the degree-4 one
    case 4:
      add_orbit3(r, 0.445948490915965, 0.223381589678011);
      add_orbit3(r, 0.091576213509771, 0.109951743655322);
      break;
    case 5:
      r.points.emplace_back(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0);
      r.weights.push_back(0.225);
      add_orbit3(r, (6.0 - std::sqrt(15.0)) / 21.0, (155.0 - std::sqrt(15.0)) / 1200.0);
      add_orbit3(r, (6.0 + std::sqrt(15.0)) / 21.0, (155.0 + std::sqrt(15.0)) / 1200.0);
      break;
    case 6:
      add_orbit3(r, 0.249286745170910, 0.116786275726379);
      add_orbit3(r, 0.063089014491502, 0.050844906370207);
      add_orbit6(r, 0.053145049844817, 0.310352451033784, 0.082851075618374);
      break;
    default:
      throw InvalidArgument("quadrature_rule: unsupported degree " + std::to_string(degree));
  }
  return r;
}

EdgeRule edge_gauss2() {
  const double d = 0.5 / std::sqrt(3.0);
  return {{0.5 - d, 0.5 + d}, {0.5, 0.5}};
}

AffineMap affine_map(const Mesh& mesh, int tri) {
  const auto& t = mesh.triangles()[tri];
  const auto& v = mesh.vertices();
  AffineMap m;
  m.origin = v[t[0]];
  m.jacobian.col(0) = v[t[1]] - v[t[0]];
  m.jacobian.col(1) = v[t[2]] - v[t[0]];
  const double det = m.jacobian.determinant();
  if (std::abs(det) < 1e-14) {
    throw NumericalDegeneracy("affine_map: degenerate triangle " + std::to_string(tri));
  }
  m.abs_det = std::abs(det);
  m.inv_transpose = m.jacobian.inverse().transpose();
  return m;
}

Space build_space(const Mesh& mesh, SpaceKind kind, std::optional<Tag> constrained_tag) {
  Space s;
  s.kind = kind;
  s.constrained_tag = constrained_tag;
  s.num_vertices = mesh.num_vertices();
  s.num_triangles = mesh.num_triangles();
  s.ndof = kind == SpaceKind::VectorMini ? 2 * (s.num_vertices + s.num_triangles) : s.num_vertices;
  if (constrained_tag) {
    for (int v : boundary_vertices(mesh, *constrained_tag)) {
      if (kind == SpaceKind::VectorMini) {
        s.constrained_dofs.push_back(2 * v);
        s.constrained_dofs.push_back(2 * v + 1);
      } else {
        s.constrained_dofs.push_back(v);
      }
    }
  }
  return s;
}

BlockLayout make_block_layout(int n_u, int n_p, int n_psi, int n_w1, int n_w2) {
  BlockLayout l;
  l.sizes = {n_u, n_p, n_psi, n_w1, n_w2};
  int off = 0;
  for (int i = 0; i < 5; ++i) {
    l.offsets[i] = off;
    off += l.sizes[i];
  }
  l.total = off;
  return l;
}

FieldSpaces build_field_spaces(const Mesh& mesh) {
  FieldSpaces fs{build_space(mesh, SpaceKind::VectorMini, Tag::Gamma),
                 build_space(mesh, SpaceKind::ScalarP1, Tag::Sigma),
                 build_space(mesh, SpaceKind::ScalarP1, std::nullopt),
                 build_space(mesh, SpaceKind::ScalarP1, std::nullopt),
                 {}};
  fs.layout = make_block_layout(fs.u.ndof, fs.p.ndof, fs.psi.ndof, fs.w.ndof, fs.w.ndof);
  return fs;
}

}  // namespace poromech

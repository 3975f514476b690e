#include "poromech/discretization.hpp"

#include <algorithm>
#include <numeric>

namespace poromech {

ShapeValues ElementGeometry::shape(const Bary<double>& b) const {
  ShapeValues s;
  s.value << b(0), b(1), b(2), b(0) * b(1) * b(2);
  s.grad.leftCols<3>() = grad_bary;
  s.grad.col(3) =
      b(1) * b(2) * grad_bary.col(0) + b(0) * b(2) * grad_bary.col(1) + b(0) * b(1) * grad_bary.col(2);
  return s;
}

Discretization::Discretization(Mesh mesh) : mesh_(std::move(mesh)), spaces_(build_field_spaces(mesh_)) {
  const int nt = mesh_.num_triangles();
  elements_.reserve(nt);
  const Eigen::Matrix<double, 2, 3> ref = p1_reference_gradients();
  for (int t = 0; t < nt; ++t) {
    ElementGeometry g;
    g.vertices = mesh_.triangles()[t];
    g.map = affine_map(mesh_, t);
    g.grad_bary = g.map.inv_transpose * ref;
    g.area = 0.5 * g.map.abs_det;
    elements_.push_back(g);
  }

  const int n = layout().total;
  std::vector<std::vector<int>> cols(n);
  for (int t = 0; t < nt; ++t) {
    const auto dofs = element_dofs(t);
    for (int r : dofs) cols[r].insert(cols[r].end(), dofs.begin(), dofs.end());
  }
  std::vector<int> outer(n + 1, 0);
  for (int r = 0; r < n; ++r) {
    auto& c = cols[r];
    c.push_back(r);
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    outer[r + 1] = outer[r] + static_cast<int>(c.size());
  }
  pattern_.resize(n, n);
  pattern_.makeCompressed();
  pattern_.resizeNonZeros(outer[n]);
  std::copy(outer.begin(), outer.end(), pattern_.outerIndexPtr());
  for (int r = 0; r < n; ++r) {
    std::copy(cols[r].begin(), cols[r].end(), pattern_.innerIndexPtr() + outer[r]);
    std::vector<int>().swap(cols[r]);
  }
  std::fill_n(pattern_.valuePtr(), outer[n], 0.0);

  const auto& l = layout();
  const int nv = mesh_.num_vertices();
  ordering_.reserve(n);
  for (int t = 0; t < nt; ++t) {
    ordering_.push_back(l.offset(Field::U) + spaces_.u.bubble_dof(t, 0));
    ordering_.push_back(l.offset(Field::U) + spaces_.u.bubble_dof(t, 1));
  }
  std::vector<int> vorder(nv);
  std::iota(vorder.begin(), vorder.end(), 0);
  const auto& xy = mesh_.vertices();
  std::stable_sort(vorder.begin(), vorder.end(), [&](int a, int b) {
    return xy[a].y() < xy[b].y() || (xy[a].y() == xy[b].y() && xy[a].x() < xy[b].x());
  });
  for (int v : vorder) {
    ordering_.push_back(l.offset(Field::U) + 2 * v);
    ordering_.push_back(l.offset(Field::U) + 2 * v + 1);
    ordering_.push_back(l.offset(Field::P) + v);
    ordering_.push_back(l.offset(Field::Psi) + v);
    ordering_.push_back(l.offset(Field::W1) + v);
    ordering_.push_back(l.offset(Field::W2) + v);
  }
}

std::array<int, kLocalDofs> Discretization::element_dofs(int t) const {
  const auto& l = layout();
  const auto& v = mesh_.triangles()[t];
  std::array<int, kLocalDofs> d{};
  for (int k = 0; k < 3; ++k) {
    d[kLocalU + 2 * k] = l.offset(Field::U) + 2 * v[k];
    d[kLocalU + 2 * k + 1] = l.offset(Field::U) + 2 * v[k] + 1;
    d[kLocalP + k] = l.offset(Field::P) + v[k];
    d[kLocalPsi + k] = l.offset(Field::Psi) + v[k];
    d[kLocalW1 + k] = l.offset(Field::W1) + v[k];
    d[kLocalW2 + k] = l.offset(Field::W2) + v[k];
  }
  d[kLocalU + 6] = l.offset(Field::U) + spaces_.u.bubble_dof(t, 0);
  d[kLocalU + 7] = l.offset(Field::U) + spaces_.u.bubble_dof(t, 1);
  return d;
}

}  // namespace poromech

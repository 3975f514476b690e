#pragma once

#include "poromech/fem.hpp"
#include "poromech/linalg.hpp"
#include "poromech/mesh.hpp"

#include <array>
#include <vector>

namespace poromech {

/// Number of element-local unknowns: 8 displacement (3 vertices + bubble, two
/// components each) followed by 3 each for p, psi, w1, w2.
inline constexpr int kLocalDofs = 20;
inline constexpr int kLocalU = 0;
inline constexpr int kLocalP = 8;
inline constexpr int kLocalPsi = 11;
inline constexpr int kLocalW1 = 14;
inline constexpr int kLocalW2 = 17;

/// Shape functions of one element at one point: the three hat functions followed
/// by the cubic bubble, with physical gradients.
struct ShapeValues {
  Eigen::Vector4d value;
  Eigen::Matrix<double, 2, 4> grad;
};

struct ElementGeometry {
  std::array<int, 3> vertices;
  AffineMap map;
  Eigen::Matrix<double, 2, 3> grad_bary;  ///< physical gradients of the hat functions
  double area;

  ShapeValues shape(const Bary<double>& b) const;
};

/// Mesh plus the MINI / P1 spaces, the monolithic layout, cached element geometry
/// and the monolithic sparsity pattern (full element coupling).
class Discretization {
 public:
  explicit Discretization(Mesh mesh);

  const Mesh& mesh() const { return mesh_; }
  const FieldSpaces& spaces() const { return spaces_; }
  const BlockLayout& layout() const { return spaces_.layout; }
  int num_elements() const { return mesh_.num_triangles(); }
  const ElementGeometry& element(int t) const { return elements_[t]; }

  /// Global monolithic indices of the 20 element-local unknowns.
  std::array<int, kLocalDofs> element_dofs(int t) const;

  /// Zero-valued matrix carrying the monolithic pattern.
  const SparseMatrix& pattern() const { return pattern_; }

  /// Ordering used to factorise the monolithic matrix: bubble unknowns first,
  /// then vertex by vertex (ux, uy, p, psi, w1, w2). With the full element
  /// pattern, zero-fill ILU then eliminates the bubbles exactly.
  const std::vector<int>& solver_ordering() const { return ordering_; }

 private:
  Mesh mesh_;
  FieldSpaces spaces_;
  std::vector<ElementGeometry> elements_;
  SparseMatrix pattern_;
  std::vector<int> ordering_;
};

}  // namespace poromech

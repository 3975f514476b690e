#pragma once

#include <Eigen/Core>

#include <array>
#include <set>
#include <vector>

namespace poromech {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Boundary classification: Gamma is clamped / no-flux, Sigma is traction / drained.
enum class Tag { Gamma, Sigma };

enum class Side { Left, Right, Bottom, Top };

struct BoundaryEdge {
  std::array<int, 2> v;
  Tag tag;
  Side side;
};

/// Triangulation of an axis-aligned rectangle. Immutable after construction.
class Mesh {
 public:
  Mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
       std::vector<BoundaryEdge> boundary_edges);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_edges_; }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }
  int num_edges() const { return num_edges_; }

  /// Longest edge length over the whole mesh.
  double h_max() const { return h_max_; }

  double signed_area(int tri) const;
  double total_area() const;

 private:
  std::vector<Vec2> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<BoundaryEdge> boundary_edges_;
  int num_edges_ = 0;
  double h_max_ = 0.0;
};

/// Structured mesh of [x0,x1]x[y0,y1]: each of the nx*ny cells is split along the
/// bottom-left to top-right diagonal. Edges on `gamma_sides` are tagged Gamma, the
/// rest Sigma.
Mesh build_rect_mesh(double x0, double y0, double x1, double y1, int nx, int ny,
                     const std::set<Side>& gamma_sides, bool allow_all_gamma = false);

/// Red refinement: every triangle is split into four by its edge midpoints.
Mesh refine_uniform(const Mesh& mesh);

std::set<int> boundary_vertices(const Mesh& mesh, Tag tag);

}  // namespace poromech

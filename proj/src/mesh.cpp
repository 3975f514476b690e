#include "poromech/mesh.hpp"

#include "poromech/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

namespace poromech {

namespace {

std::pair<int, int> edge_key(int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

}  // namespace

Mesh::Mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
           std::vector<BoundaryEdge> boundary_edges)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      boundary_edges_(std::move(boundary_edges)) {
  const int nv = num_vertices();
  std::map<std::pair<int, int>, int> edges;
  for (int t = 0; t < num_triangles(); ++t) {
    const auto& tri = triangles_[t];
    for (int k = 0; k < 3; ++k) {
      if (tri[k] < 0 || tri[k] >= nv) {
        throw InvalidArgument("triangle " + std::to_string(t) + " references vertex out of range");
      }
    }
    if (signed_area(t) <= 0.0) {
      throw NumericalDegeneracy("triangle " + std::to_string(t) + " is not counter-clockwise");
    }
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k];
      const int b = tri[(k + 1) % 3];
      if (edges.emplace(edge_key(a, b), 0).second) {
        h_max_ = std::max(h_max_, (vertices_[a] - vertices_[b]).norm());
      }
    }
  }
  num_edges_ = static_cast<int>(edges.size());
}

double Mesh::signed_area(int tri) const {
  const auto& t = triangles_[tri];
  const Vec2 e1 = vertices_[t[1]] - vertices_[t[0]];
  const Vec2 e2 = vertices_[t[2]] - vertices_[t[0]];
  return 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
}

double Mesh::total_area() const {
  double a = 0.0;
  for (int t = 0; t < num_triangles(); ++t) a += signed_area(t);
  return a;
}

Mesh build_rect_mesh(double x0, double y0, double x1, double y1, int nx, int ny,
                     const std::set<Side>& gamma_sides, bool allow_all_gamma) {
  if (!(x1 > x0) || !(y1 > y0)) throw InvalidArgument("build_rect_mesh: non-positive extent");
  if (nx <= 0 || ny <= 0) throw InvalidArgument("build_rect_mesh: subdivisions must be positive");
  if (gamma_sides.empty()) throw InvalidArgument("build_rect_mesh: gamma_sides must be nonempty");
  if (gamma_sides.size() == 4 && !allow_all_gamma) {
    throw InvalidArgument("build_rect_mesh: all four sides tagged Gamma");
  }

  std::vector<Vec2> vertices;
  vertices.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      vertices.emplace_back(x0 + (x1 - x0) * i / nx, y0 + (y1 - y0) * j / ny);
    }
  }
  const auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };

  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(static_cast<std::size_t>(2) * nx * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j), v11 = vid(i + 1, j + 1), v01 = vid(i, j + 1);
      triangles.push_back({v00, v10, v11});
      triangles.push_back({v00, v11, v01});
    }
  }

  const auto tag_of = [&](Side s) { return gamma_sides.count(s) ? Tag::Gamma : Tag::Sigma; };
  std::vector<BoundaryEdge> edges;
  for (int i = 0; i < nx; ++i) {
    edges.push_back({{vid(i, 0), vid(i + 1, 0)}, tag_of(Side::Bottom), Side::Bottom});
  }
  for (int j = 0; j < ny; ++j) {
    edges.push_back({{vid(nx, j), vid(nx, j + 1)}, tag_of(Side::Right), Side::Right});
  }
  for (int i = nx; i > 0; --i) {
    edges.push_back({{vid(i, ny), vid(i - 1, ny)}, tag_of(Side::Top), Side::Top});
  }
  for (int j = ny; j > 0; --j) {
    edges.push_back({{vid(0, j), vid(0, j - 1)}, tag_of(Side::Left), Side::Left});
  }
  return Mesh(std::move(vertices), std::move(triangles), std::move(edges));
}

Mesh refine_uniform(const Mesh& mesh) {
  std::vector<Vec2> vertices = mesh.vertices();
  std::map<std::pair<int, int>, int> midpoint;
  const auto mid = [&](int a, int b) {
    const auto key = edge_key(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const int id = static_cast<int>(vertices.size());
    vertices.push_back(0.5 * (vertices[a] + vertices[b]));
    midpoint.emplace(key, id);
    return id;
  };

  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(4 * mesh.triangles().size());
  for (const auto& t : mesh.triangles()) {
    const int a = t[0], b = t[1], c = t[2];
    const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
    triangles.push_back({a, ab, ca});
    triangles.push_back({ab, b, bc});
    triangles.push_back({ca, bc, c});
    triangles.push_back({ab, bc, ca});
  }

  std::vector<BoundaryEdge> edges;
  edges.reserve(2 * mesh.boundary_edges().size());
  for (const auto& e : mesh.boundary_edges()) {
    const int m = midpoint.at(edge_key(e.v[0], e.v[1]));
    edges.push_back({{e.v[0], m}, e.tag, e.side});
    edges.push_back({{m, e.v[1]}, e.tag, e.side});
  }
  return Mesh(std::move(vertices), std::move(triangles), std::move(edges));
}

std::set<int> boundary_vertices(const Mesh& mesh, Tag tag) {
  std::set<int> out;
  for (const auto& e : mesh.boundary_edges()) {
    if (e.tag == tag) out.insert({e.v[0], e.v[1]});
  }
  return out;
}

}  // namespace poromech

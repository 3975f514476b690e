#include "poromech/assembly.hpp"

#include "poromech/errors.hpp"

#include <map>
#include <string>

namespace poromech {

namespace {

constexpr int kVolumeDegree = 4;

int u_space_dof(const Space& u, const ElementGeometry& g, int tri, int j, int c) {
  return j < 3 ? u.vertex_dof(g.vertices[j], c) : u.bubble_dof(tri, c);
}

Vec2 outward_normal(const Vec2& a, const Vec2& b) {
  const Vec2 d = b - a;
  return Vec2(d.y(), -d.x()) / d.norm();
}

/// Loops every boundary edge with the 2-point Gauss rule; `visit(edge, x, n, w, phi_a, phi_b)`
/// where w already includes the edge length.
template <typename Visit>
void for_each_edge_point(const Mesh& mesh, Visit&& visit) {
  const EdgeRule rule = edge_gauss2();
  for (const auto& e : mesh.boundary_edges()) {
    const Vec2& a = mesh.vertices()[e.v[0]];
    const Vec2& b = mesh.vertices()[e.v[1]];
    const Vec2 n = outward_normal(a, b);
    const double len = (b - a).norm();
    for (int q = 0; q < 2; ++q) {
      const double s = rule.points[q];
      visit(e, Vec2((1.0 - s) * a + s * b), n, rule.weights[q] * len, 1.0 - s, s);
    }
  }
}

}  // namespace

PoroBlocks assemble_poro_blocks(const Discretization& disc, const ModelParams& p, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("assemble_poro_blocks: dt must be positive");
  const auto& sp = disc.spaces();
  const QuadRule rule = quadrature_rule(kVolumeDegree);
  std::vector<Triplet> a1, b1, b2, a2, mp, mpsi, a3;
  const Eigen::Matrix2d kappa_eta = p.kappa / p.eta;

  for (int t = 0; t < disc.num_elements(); ++t) {
    const ElementGeometry& g = disc.element(t);
    Eigen::Matrix<double, 8, 8> ka = Eigen::Matrix<double, 8, 8>::Zero();
    Eigen::Matrix<double, 8, 3> kb = Eigen::Matrix<double, 8, 3>::Zero();
    Eigen::Matrix3d mass = Eigen::Matrix3d::Zero();
    Eigen::Matrix3d stiff = Eigen::Matrix3d::Zero();
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const ShapeValues s = g.shape(rule.points[q]);
      const double w = rule.weights[q] * g.area;
      const Eigen::Vector3d phi = s.value.head<3>();
      mass += w * phi * phi.transpose();
      for (int j = 0; j < 4; ++j) {
        for (int c = 0; c < 2; ++c) {
          const int row = 2 * j + c;
          for (int l = 0; l < 4; ++l) {
            for (int d = 0; d < 2; ++d) {
              double v = s.grad(d, j) * s.grad(c, l);
              if (c == d) v += s.grad.col(j).dot(s.grad.col(l));
              ka(row, 2 * l + d) += w * p.mu * v;
            }
          }
          for (int m = 0; m < 3; ++m) kb(row, m) -= w * phi(m) * s.grad(c, j);
        }
      }
    }
    const auto& gb = g.grad_bary;
    stiff = g.area * gb.transpose() * kappa_eta * gb;

    for (int r = 0; r < 8; ++r) {
      const int gr = u_space_dof(sp.u, g, t, r / 2, r % 2);
      for (int c = 0; c < 8; ++c) a1.emplace_back(gr, u_space_dof(sp.u, g, t, c / 2, c % 2), ka(r, c));
      for (int m = 0; m < 3; ++m) b1.emplace_back(gr, g.vertices[m], kb(r, m));
    }
    for (int i = 0; i < 3; ++i) {
      for (int m = 0; m < 3; ++m) {
        const int gi = g.vertices[i], gm = g.vertices[m];
        b2.emplace_back(gi, gm, p.alpha / p.lambda * mass(i, m));
        a2.emplace_back(gi, gm, stiff(i, m));
        mp.emplace_back(gi, gm, p.storage() / dt * mass(i, m));
        mpsi.emplace_back(gi, gm, p.alpha / (p.lambda * dt) * mass(i, m));
        a3.emplace_back(gi, gm, mass(i, m) / p.lambda);
      }
    }
  }
  const int nu = sp.u.ndof, np = sp.p.ndof, npsi = sp.psi.ndof;
  return {assemble_from_triplets(a1, nu, nu),     assemble_from_triplets(b1, nu, npsi),
          assemble_from_triplets(b2, npsi, np),   assemble_from_triplets(a2, np, np),
          assemble_from_triplets(mp, np, np),     assemble_from_triplets(mpsi, np, npsi),
          assemble_from_triplets(a3, npsi, npsi)};
}

AdrBlocks assemble_adr_blocks(const Discretization& disc, const ModelParams& p, double dt,
                              const Vector& u_new, const Vector& u_old) {
  if (!(dt > 0.0)) throw InvalidArgument("assemble_adr_blocks: dt must be positive");
  const auto& sp = disc.spaces();
  if (u_new.size() != sp.u.ndof || u_old.size() != sp.u.ndof) {
    throw InvalidArgument("assemble_adr_blocks: displacement vector size mismatch");
  }
  const QuadRule rule = quadrature_rule(kVolumeDegree);
  std::vector<Triplet> a4, a5, mw, cc;
  for (int t = 0; t < disc.num_elements(); ++t) {
    const ElementGeometry& g = disc.element(t);
    Eigen::Matrix<double, 8, 1> du;
    for (int r = 0; r < 8; ++r) {
      const int d = u_space_dof(sp.u, g, t, r / 2, r % 2);
      du(r) = (u_new[d] - u_old[d]) / dt;
    }
    Eigen::Matrix3d mass = Eigen::Matrix3d::Zero(), conv = Eigen::Matrix3d::Zero();
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const ShapeValues s = g.shape(rule.points[q]);
      const double w = rule.weights[q] * g.area;
      const Eigen::Vector3d phi = s.value.head<3>();
      Vec2 vel = Vec2::Zero();
      for (int j = 0; j < 4; ++j) vel += s.value(j) * Vec2(du(2 * j), du(2 * j + 1));
      mass += w * phi * phi.transpose();
      // row i: test phi_i, column m: trial with gradient grad_bary.col(m)
      conv += w * phi * (vel.transpose() * g.grad_bary);
    }
    const auto& gb = g.grad_bary;
    const Eigen::Matrix3d k4 = g.area * gb.transpose() * p.D1 * gb;
    const Eigen::Matrix3d k5 = g.area * gb.transpose() * p.D2 * gb;
    for (int i = 0; i < 3; ++i) {
      for (int m = 0; m < 3; ++m) {
        const int gi = g.vertices[i], gm = g.vertices[m];
        a4.emplace_back(gi, gm, k4(i, m));
        a5.emplace_back(gi, gm, k5(i, m));
        mw.emplace_back(gi, gm, mass(i, m) / dt);
        cc.emplace_back(gi, gm, conv(i, m));
      }
    }
  }
  const int n = sp.w.ndof;
  return {assemble_from_triplets(a4, n, n), assemble_from_triplets(a5, n, n),
          assemble_from_triplets(mw, n, n), assemble_from_triplets(cc, n, n)};
}

Loads assemble_loads(const Discretization& disc, const ModelParams& p, double t,
                     const Sources& sources, const BoundaryData& bdata,
                     const std::optional<Vector>& r_coeffs) {
  const auto& sp = disc.spaces();
  const Mesh& mesh = disc.mesh();
  Loads out{Vector::Zero(sp.u.ndof), Vector::Zero(sp.p.ndof), Vector::Zero(sp.psi.ndof),
            Vector::Zero(sp.w.ndof), Vector::Zero(sp.w.ndof)};
  if (r_coeffs && r_coeffs->size() != mesh.num_vertices()) {
    throw InvalidArgument("assemble_loads: r coefficient vector size mismatch");
  }
  const bool volume = sources.b || sources.ell || sources.S1 || sources.S2 || sources.S_psi ||
                      (r_coeffs && p.tau != 0.0);
  if (volume) {
    const QuadRule rule = quadrature_rule(kVolumeDegree);
    const Vec2 k = p.k_dir;
    for (int e = 0; e < disc.num_elements(); ++e) {
      const ElementGeometry& g = disc.element(e);
      for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const ShapeValues s = g.shape(rule.points[q]);
        const double w = rule.weights[q] * g.area;
        const Vec2 x = g.map.to_physical(rule.points[q]);
        const Eigen::Vector3d phi = s.value.head<3>();
        if (sources.b || (r_coeffs && p.tau != 0.0)) {
          const Vec2 force = sources.b ? Vec2(p.rho * sources.b(x, t)) : Vec2::Zero();
          double r = 0.0;
          if (r_coeffs) {
            for (int j = 0; j < 3; ++j) r += phi(j) * (*r_coeffs)[g.vertices[j]];
          }
          for (int j = 0; j < 4; ++j) {
            const double k_grad = k.dot(s.grad.col(j));
            for (int c = 0; c < 2; ++c) {
              out.F_u[u_space_dof(sp.u, g, e, j, c)] +=
                  w * (force(c) * s.value(j) + p.tau * r * k(c) * k_grad);
            }
          }
        }
        const double ell = sources.ell ? sources.ell(x, t) : 0.0;
        const double spsi = sources.S_psi ? sources.S_psi(x, t) : 0.0;
        const double s1 = sources.S1 ? sources.S1(x, t) : 0.0;
        const double s2 = sources.S2 ? sources.S2(x, t) : 0.0;
        for (int i = 0; i < 3; ++i) {
          const int v = g.vertices[i];
          out.G_p[v] += w * ell * phi(i);
          out.H_psi[v] += w * spsi * phi(i);
          out.J_w1[v] += w * s1 * phi(i);
          out.J_w2[v] += w * s2 * phi(i);
        }
      }
    }
  }

  if (bdata.traction || bdata.fluid_flux || bdata.species_flux1 || bdata.species_flux2) {
    for_each_edge_point(mesh, [&](const BoundaryEdge& e, const Vec2& x, const Vec2& n, double w,
                                  double pa, double pb) {
      const std::array<double, 2> phi{pa, pb};
      if (e.tag == Tag::Sigma && bdata.traction) {
        const Vec2 tr = bdata.traction(x, t, n);
        for (int k = 0; k < 2; ++k) {
          for (int c = 0; c < 2; ++c) out.F_u[sp.u.vertex_dof(e.v[k], c)] += w * tr(c) * phi[k];
        }
      }
      if (e.tag == Tag::Gamma && bdata.fluid_flux) {
        const double g = bdata.fluid_flux(x, t, n);
        for (int k = 0; k < 2; ++k) out.G_p[e.v[k]] += w * g * phi[k];
      }
      if (bdata.species_flux1) {
        const double g = bdata.species_flux1(x, t, n);
        for (int k = 0; k < 2; ++k) out.J_w1[e.v[k]] += w * g * phi[k];
      }
      if (bdata.species_flux2) {
        const double g = bdata.species_flux2(x, t, n);
        for (int k = 0; k < 2; ++k) out.J_w2[e.v[k]] += w * g * phi[k];
      }
    });
  }
  return out;
}

Constraints dirichlet_constraints(const Discretization& disc, const BoundaryData& bdata, double t) {
  const auto& l = disc.layout();
  const auto& xy = disc.mesh().vertices();
  Constraints out;
  for (int v : boundary_vertices(disc.mesh(), Tag::Gamma)) {
    const Vec2 u = bdata.displacement ? bdata.displacement(xy[v], t) : Vec2::Zero();
    out.emplace_back(l.offset(Field::U) + 2 * v, u.x());
    out.emplace_back(l.offset(Field::U) + 2 * v + 1, u.y());
  }
  for (int v : boundary_vertices(disc.mesh(), Tag::Sigma)) {
    out.emplace_back(l.offset(Field::P) + v, bdata.pressure ? bdata.pressure(xy[v], t) : 0.0);
  }
  return out;
}

void apply_dirichlet(SparseMatrix& a, Vector& rhs, const Constraints& constraints) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n || rhs.size() != n) throw InvalidArgument("apply_dirichlet: dimension mismatch");
  std::vector<char> fixed(n, 0);
  Vector value = Vector::Zero(n);
  for (const auto& [dof, g] : constraints) {
    if (dof < 0 || dof >= n) throw InvalidArgument("apply_dirichlet: dof out of range");
    if (fixed[dof] && value[dof] != g) {
      throw InvalidArgument("apply_dirichlet: conflicting constraints on dof " + std::to_string(dof));
    }
    fixed[dof] = 1;
    value[dof] = g;
  }
  a.makeCompressed();
  const int* outer = a.outerIndexPtr();
  const int* inner = a.innerIndexPtr();
  double* val = a.valuePtr();
  for (int i = 0; i < n; ++i) {
    if (fixed[i]) continue;
    for (int k = outer[i]; k < outer[i + 1]; ++k) {
      if (fixed[inner[k]]) {
        rhs[i] -= val[k] * value[inner[k]];
        val[k] = 0.0;
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    if (!fixed[i]) continue;
    bool has_diag = false;
    for (int k = outer[i]; k < outer[i + 1]; ++k) {
      val[k] = inner[k] == i ? 1.0 : 0.0;
      has_diag |= inner[k] == i;
    }
    if (!has_diag) {
      throw InvalidArgument("apply_dirichlet: diagonal entry missing in row " + std::to_string(i));
    }
    rhs[i] = value[i];
  }
}

}  // namespace poromech

#pragma once

#include "poromech/discretization.hpp"
#include "poromech/linalg.hpp"
#include "poromech/physics.hpp"

#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace poromech {

using ScalarField = std::function<double(const Vec2& x, double t)>;
using VectorField = std::function<Vec2(const Vec2& x, double t)>;
/// Boundary data that depends on the outward unit normal.
using NormalScalarField = std::function<double(const Vec2& x, double t, const Vec2& n)>;
using NormalVectorField = std::function<Vec2(const Vec2& x, double t, const Vec2& n)>;

/// Volume sources. An empty function stands for zero.
struct Sources {
  VectorField b;       ///< body force per unit mass
  ScalarField ell;     ///< fluid source
  ScalarField S1;      ///< additional source of species 1
  ScalarField S2;      ///< additional source of species 2
  ScalarField S_psi;   ///< residual source of the total-pressure relation
};

/// Boundary prescriptions. Empty functions give the homogeneous conditions:
/// clamped and no-flux on Gamma, traction-free and drained on Sigma, no species flux.
struct BoundaryData {
  VectorField displacement;         ///< u on Gamma
  NormalVectorField traction;       ///< total traction on Sigma
  ScalarField pressure;             ///< p on Sigma
  NormalScalarField fluid_flux;     ///< (kappa/eta) grad p . n on Gamma
  NormalScalarField species_flux1;  ///< D1 grad w1 . n on the whole boundary
  NormalScalarField species_flux2;  ///< D2 grad w2 . n on the whole boundary
};

/// Linear poroelastic blocks. Rows index test functions, columns trial functions.
struct PoroBlocks {
  SparseMatrix A1;      ///< 2 mu (eps(u), eps(v))                 [u x u]
  SparseMatrix B1;      ///< -(psi, div v)                          [u x psi]
  SparseMatrix B2;      ///< (alpha/lambda)(p, phi)                 [psi x p]
  SparseMatrix A2;      ///< (1/eta)(kappa grad p, grad q)          [p x p]
  SparseMatrix M_p;     ///< (c0 + alpha^2/lambda)/dt (p, q)        [p x p]
  SparseMatrix M_psi;   ///< alpha/(lambda dt) (psi, q)             [p x psi]
  SparseMatrix A3;      ///< (1/lambda)(psi, phi)                   [psi x psi]
};

PoroBlocks assemble_poro_blocks(const Discretization& disc, const ModelParams& p, double dt);

struct AdrBlocks {
  SparseMatrix A4;   ///< (D1 grad w, grad s)
  SparseMatrix A5;   ///< (D2 grad w, grad s)
  SparseMatrix M_w;  ///< (w, s) / dt
  SparseMatrix C;    ///< ((u_new - u_old)/dt . grad w, s)
};

/// `u_new`, `u_old` are coefficient vectors of the displacement space.
AdrBlocks assemble_adr_blocks(const Discretization& disc, const ModelParams& p, double dt,
                              const Vector& u_new, const Vector& u_old);

struct Loads {
  Vector F_u;
  Vector G_p;
  Vector H_psi;
  Vector J_w1;
  Vector J_w2;
};

/// Right-hand sides at time t: body force, Sigma traction, fluid source and Gamma
/// flux, total-pressure source, species sources and boundary fluxes. When
/// `r_coeffs` (nodal values of r) is given, the active-stress term
/// tau (r k x k, eps(v)) is added to F_u.
Loads assemble_loads(const Discretization& disc, const ModelParams& p, double t,
                     const Sources& sources, const BoundaryData& bdata,
                     const std::optional<Vector>& r_coeffs = std::nullopt);

/// (global dof, value) pairs.
using Constraints = std::vector<std::pair<int, double>>;

/// Displacement values at Gamma vertices and pressure values at Sigma vertices,
/// indexed in the monolithic layout.
Constraints dirichlet_constraints(const Discretization& disc, const BoundaryData& bdata, double t);

/// Symmetric elimination: constrained rows and columns are zeroed (pattern kept),
/// the diagonal set to one, the rhs lifted. Conflicting duplicates throw.
void apply_dirichlet(SparseMatrix& a, Vector& rhs, const Constraints& constraints);

}  // namespace poromech

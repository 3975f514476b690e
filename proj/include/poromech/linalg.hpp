#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <memory>
#include <vector>

namespace poromech {

using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;

/// Compressed-row matrix. After `assemble_from_triplets` it is compressed with
/// strictly increasing column indices per row; explicit zeros are kept so the
/// sparsity pattern is stable across reassembly.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;
using Triplet = Eigen::Triplet<double, int>;

/// Duplicate (row, col) contributions are summed. Throws on out-of-range indices.
SparseMatrix assemble_from_triplets(const std::vector<Triplet>& triplets, int nrows, int ncols);

/// y = A x. Throws on dimension mismatch.
Vector spmv(const SparseMatrix& a, const Vector& x);

/// Position of entry (row, col) in the value array, or -1 if outside the pattern.
int find_entry(const SparseMatrix& a, int row, int col);

/// B = P A P^T where new index i holds old index perm[i].
SparseMatrix symmetric_permute(const SparseMatrix& a, const std::vector<int>& perm);

/// Row and column scalings with max |entry| = 1 in every row, then every column.
struct Equilibration {
  Vector row;
  Vector col;
};

Equilibration equilibrate(const SparseMatrix& a);

/// a <- diag(row) a diag(col).
void apply_scaling(SparseMatrix& a, const Equilibration& e);

class Preconditioner {
 public:
  virtual ~Preconditioner() = default;
  /// z = M^{-1} r
  virtual void apply(const Vector& r, Vector& z) const = 0;
};

class IdentityPreconditioner final : public Preconditioner {
 public:
  void apply(const Vector& r, Vector& z) const override { z = r; }
};

/// Diagonal scaling; zero diagonal entries are treated as one.
class JacobiPreconditioner final : public Preconditioner {
 public:
  explicit JacobiPreconditioner(const SparseMatrix& a);
  void apply(const Vector& r, Vector& z) const override;

 private:
  Vector inv_diag_;
};

struct IluOptions {
  /// Entries of L and U below drop_tolerance * ||row of A||_inf are discarded.
  /// Fill stays restricted to the pattern of A.
  double drop_tolerance = 0.0;
};

/// Zero-fill incomplete LU. L (unit lower) and U share the pattern of A.
class Ilu0 final : public Preconditioner {
 public:
  /// Throws FactorizationBreakdown on a zero or absent pivot.
  explicit Ilu0(const SparseMatrix& a, IluOptions options = {});
  void apply(const Vector& r, Vector& z) const override;

  const SparseMatrix& factors() const { return lu_; }

 private:
  SparseMatrix lu_;
  std::vector<int> diag_;
};

/// ILU(0) preconditioner built in a permuted ordering: M^{-1} = P^T ILU(PAP^T)^{-1} P.
class PermutedIlu0 final : public Preconditioner {
 public:
  PermutedIlu0(const SparseMatrix& a, std::vector<int> perm, IluOptions options = {});
  void apply(const Vector& r, Vector& z) const override;

 private:
  std::vector<int> perm_;
  std::unique_ptr<Ilu0> ilu_;
};

/// Complete sparse LU (Eigen SparseLU, COLAMD ordering). Used as an exact
/// preconditioner that may be reused for nearby matrices.
class SparseLuPreconditioner final : public Preconditioner {
 public:
  /// Throws SingularMatrix if the factorisation fails.
  explicit SparseLuPreconditioner(const SparseMatrix& a);
  ~SparseLuPreconditioner() override;
  void apply(const Vector& r, Vector& z) const override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct SolveReport {
  int iterations = 0;
  double final_residual = 0.0;  ///< relative true residual ||b - Ax|| / ||b||
  bool converged = false;
};

struct GmresOptions {
  double tol = 1e-10;
  int restart = 100;
  int max_iterations = 2000;
};

/// Restarted GMRES with right preconditioning, so the monitored residual of the
/// preconditioned system is the true residual. `x` is the initial guess on entry.
SolveReport gmres(const SparseMatrix& a, const Vector& b, const Preconditioner& m, Vector& x,
                  const GmresOptions& options = {});

/// Partial-pivoting LU solve; throws SingularMatrix if a pivot falls below
/// 1e-14 * max|A|.
Vector dense_lu_solve(const DenseMatrix& a, const Vector& b);

}  // namespace poromech

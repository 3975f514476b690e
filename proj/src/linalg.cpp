#include "poromech/linalg.hpp"

#include "poromech/errors.hpp"

#include <Eigen/LU>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <string>

namespace poromech {

SparseMatrix assemble_from_triplets(const std::vector<Triplet>& triplets, int nrows, int ncols) {
  if (nrows < 0 || ncols < 0) throw InvalidArgument("assemble_from_triplets: negative dimension");
  for (const auto& t : triplets) {
    if (t.row() < 0 || t.row() >= nrows || t.col() < 0 || t.col() >= ncols) {
      throw InvalidArgument("assemble_from_triplets: index (" + std::to_string(t.row()) + "," +
                            std::to_string(t.col()) + ") out of range");
    }
  }
  SparseMatrix a(nrows, ncols);
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();
  return a;
}

Vector spmv(const SparseMatrix& a, const Vector& x) {
  if (a.cols() != x.size()) throw InvalidArgument("spmv: dimension mismatch");
  Vector y(a.rows());
  const int* outer = a.outerIndexPtr();
  const int* inner = a.innerIndexPtr();
  const double* val = a.valuePtr();
  for (int i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (int k = outer[i]; k < outer[i + 1]; ++k) s += val[k] * x[inner[k]];
    y[i] = s;
  }
  return y;
}

int find_entry(const SparseMatrix& a, int row, int col) {
  const int* inner = a.innerIndexPtr();
  const int* begin = inner + a.outerIndexPtr()[row];
  const int* end = inner + a.outerIndexPtr()[row + 1];
  const int* it = std::lower_bound(begin, end, col);
  return (it != end && *it == col) ? static_cast<int>(it - inner) : -1;
}

SparseMatrix symmetric_permute(const SparseMatrix& a, const std::vector<int>& perm) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n || static_cast<int>(perm.size()) != n) {
    throw InvalidArgument("symmetric_permute: dimension mismatch");
  }
  std::vector<int> inverse(n, -1);
  for (int i = 0; i < n; ++i) inverse[perm[i]] = i;
  std::vector<Triplet> t;
  t.reserve(a.nonZeros());
  for (int i = 0; i < n; ++i) {
    for (SparseMatrix::InnerIterator it(a, perm[i]); it; ++it) {
      t.emplace_back(i, inverse[it.col()], it.value());
    }
  }
  SparseMatrix b(n, n);
  b.setFromTriplets(t.begin(), t.end());
  b.makeCompressed();
  return b;
}

Equilibration equilibrate(const SparseMatrix& a) {
  Equilibration e{Vector::Ones(a.rows()), Vector::Zero(a.cols())};
  const int* outer = a.outerIndexPtr();
  const int* inner = a.innerIndexPtr();
  const double* val = a.valuePtr();
  for (int i = 0; i < a.rows(); ++i) {
    double m = 0.0;
    for (int k = outer[i]; k < outer[i + 1]; ++k) m = std::max(m, std::abs(val[k]));
    if (m > 0.0) e.row[i] = 1.0 / m;
  }
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = outer[i]; k < outer[i + 1]; ++k) {
      e.col[inner[k]] = std::max(e.col[inner[k]], std::abs(val[k]) * e.row[i]);
    }
  }
  for (int j = 0; j < a.cols(); ++j) e.col[j] = e.col[j] > 0.0 ? 1.0 / e.col[j] : 1.0;
  return e;
}

void apply_scaling(SparseMatrix& a, const Equilibration& e) {
  if (e.row.size() != a.rows() || e.col.size() != a.cols()) {
    throw InvalidArgument("apply_scaling: dimension mismatch");
  }
  const int* outer = a.outerIndexPtr();
  const int* inner = a.innerIndexPtr();
  double* val = a.valuePtr();
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = outer[i]; k < outer[i + 1]; ++k) val[k] *= e.row[i] * e.col[inner[k]];
  }
}

JacobiPreconditioner::JacobiPreconditioner(const SparseMatrix& a) : inv_diag_(a.rows()) {
  for (int i = 0; i < a.rows(); ++i) {
    const int k = find_entry(a, i, i);
    const double d = k >= 0 ? a.valuePtr()[k] : 0.0;
    inv_diag_[i] = d != 0.0 ? 1.0 / d : 1.0;
  }
}

void JacobiPreconditioner::apply(const Vector& r, Vector& z) const {
  z = inv_diag_.cwiseProduct(r);
}

Ilu0::Ilu0(const SparseMatrix& a, IluOptions options) : lu_(a) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n) throw InvalidArgument("Ilu0: matrix must be square");
  lu_.makeCompressed();
  const int* outer = lu_.outerIndexPtr();
  const int* inner = lu_.innerIndexPtr();
  double* val = lu_.valuePtr();

  diag_.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    diag_[i] = find_entry(lu_, i, i);
    if (diag_[i] < 0) {
      throw FactorizationBreakdown("Ilu0: structurally absent pivot in row " + std::to_string(i));
    }
  }

  std::vector<int> pos(n, -1);
  for (int i = 0; i < n; ++i) {
    double row_norm = 0.0;
    for (int k = outer[i]; k < outer[i + 1]; ++k) {
      pos[inner[k]] = k;
      row_norm = std::max(row_norm, std::abs(val[k]));
    }
    const double drop = options.drop_tolerance * row_norm;
    for (int kk = outer[i]; kk < diag_[i]; ++kk) {
      const int k = inner[kk];
      double l = val[kk] / val[diag_[k]];
      if (std::abs(l) * std::abs(val[diag_[k]]) < drop) l = 0.0;
      val[kk] = l;
      if (l == 0.0) continue;
      for (int kj = diag_[k] + 1; kj < outer[k + 1]; ++kj) {
        const int p = pos[inner[kj]];
        if (p >= 0) val[p] -= l * val[kj];
      }
    }
    if (drop > 0.0) {
      for (int k = diag_[i] + 1; k < outer[i + 1]; ++k) {
        if (std::abs(val[k]) < drop) val[k] = 0.0;
      }
    }
    const double d = val[diag_[i]];
    if (d == 0.0 || !std::isfinite(d)) {
      throw FactorizationBreakdown("Ilu0: zero pivot in row " + std::to_string(i));
    }
    for (int k = outer[i]; k < outer[i + 1]; ++k) pos[inner[k]] = -1;
  }
}

void Ilu0::apply(const Vector& r, Vector& z) const {
  const int n = static_cast<int>(lu_.rows());
  const int* outer = lu_.outerIndexPtr();
  const int* inner = lu_.innerIndexPtr();
  const double* val = lu_.valuePtr();
  z = r;
  for (int i = 0; i < n; ++i) {
    double s = z[i];
    for (int k = outer[i]; k < diag_[i]; ++k) s -= val[k] * z[inner[k]];
    z[i] = s;
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = z[i];
    for (int k = diag_[i] + 1; k < outer[i + 1]; ++k) s -= val[k] * z[inner[k]];
    z[i] = s / val[diag_[i]];
  }
}

PermutedIlu0::PermutedIlu0(const SparseMatrix& a, std::vector<int> perm, IluOptions options)
    : perm_(std::move(perm)),
      ilu_(std::make_unique<Ilu0>(symmetric_permute(a, perm_), options)) {}

void PermutedIlu0::apply(const Vector& r, Vector& z) const {
  const int n = static_cast<int>(perm_.size());
  Vector rp(n);
  for (int i = 0; i < n; ++i) rp[i] = r[perm_[i]];
  Vector zp;
  ilu_->apply(rp, zp);
  z.resize(n);
  for (int i = 0; i < n; ++i) z[perm_[i]] = zp[i];
}

SolveReport gmres(const SparseMatrix& a, const Vector& b, const Preconditioner& m, Vector& x,
                  const GmresOptions& options) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n || b.size() != n) throw InvalidArgument("gmres: dimension mismatch");
  if (!(options.tol > 0.0)) throw InvalidArgument("gmres: tolerance must be positive");
  if (x.size() != n) x = Vector::Zero(n);

  SolveReport report;
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    x.setZero();
    report.converged = true;
    return report;
  }

  const int restart = std::max(1, options.restart);
  DenseMatrix v(n, restart + 1);
  DenseMatrix h = DenseMatrix::Zero(restart + 1, restart);
  Vector cs(restart), sn(restart), g(restart + 1);
  Vector w(n), z(n);

  Vector r = b - spmv(a, x);
  double rel = r.norm() / bnorm;
  while (true) {
    if (rel <= options.tol || report.iterations >= options.max_iterations) break;
    const double beta = r.norm();
    v.col(0) = r / beta;
    g.setZero();
    g[0] = beta;
    h.setZero();
    int j = 0;
    for (; j < restart && report.iterations < options.max_iterations; ++j) {
      ++report.iterations;
      m.apply(v.col(j), z);
      w = spmv(a, z);
      for (int i = 0; i <= j; ++i) {
        h(i, j) = v.col(i).dot(w);
        w -= h(i, j) * v.col(i);
      }
      h(j + 1, j) = w.norm();
      const bool breakdown = h(j + 1, j) <= 1e-14 * std::abs(h(j, j)) || h(j + 1, j) == 0.0;
      if (!breakdown) v.col(j + 1) = w / h(j + 1, j);
      for (int i = 0; i < j; ++i) {
        const double tmp = cs[i] * h(i, j) + sn[i] * h(i + 1, j);
        h(i + 1, j) = -sn[i] * h(i, j) + cs[i] * h(i + 1, j);
        h(i, j) = tmp;
      }
      const double denom = std::hypot(h(j, j), h(j + 1, j));
      cs[j] = h(j, j) / denom;
      sn[j] = h(j + 1, j) / denom;
      h(j, j) = denom;
      h(j + 1, j) = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];
      if (std::abs(g[j + 1]) / bnorm <= options.tol || breakdown) {
        ++j;
        break;
      }
    }
    // x += M^{-1} V y with H y = g
    Vector y = h.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(g.head(j));
    Vector update = v.leftCols(j) * y;
    m.apply(update, z);
    x += z;
    r = b - spmv(a, x);
    rel = r.norm() / bnorm;
  }
  report.final_residual = rel;
  report.converged = rel <= options.tol;
  return report;
}

Vector dense_lu_solve(const DenseMatrix& a, const Vector& b) {
  if (a.rows() != a.cols() || a.rows() != b.size()) {
    throw InvalidArgument("dense_lu_solve: dimension mismatch");
  }
  if (a.rows() == 0) return Vector();
  const double scale = a.cwiseAbs().maxCoeff();
  Eigen::PartialPivLU<DenseMatrix> lu(a);
  if (scale == 0.0 || lu.matrixLU().diagonal().cwiseAbs().minCoeff() < 1e-14 * scale) {
    throw SingularMatrix("dense_lu_solve: singular pivot");
  }
  return lu.solve(b);
}

struct SparseLuPreconditioner::Impl {
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
};

SparseLuPreconditioner::SparseLuPreconditioner(const SparseMatrix& a) : impl_(std::make_unique<Impl>()) {
  if (a.rows() != a.cols()) throw InvalidArgument("SparseLuPreconditioner: matrix must be square");
  const Eigen::SparseMatrix<double> col(a);
  impl_->lu.compute(col);
  if (impl_->lu.info() != Eigen::Success) {
    throw SingularMatrix("sparse LU factorisation failed: " + impl_->lu.lastErrorMessage());
  }
}

SparseLuPreconditioner::~SparseLuPreconditioner() = default;

void SparseLuPreconditioner::apply(const Vector& r, Vector& z) const { z = impl_->lu.solve(r); }

}  // namespace poromech

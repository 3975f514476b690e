#include "poromech/errors.hpp"
#include "poromech/linalg.hpp"

#include <gtest/gtest.h>

#include <Eigen/LU>

#include <random>

using namespace poromech;

namespace {

SparseMatrix laplacian_1d(int n) {
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i) {
    t.emplace_back(i, i, 2.0);
    if (i > 0) t.emplace_back(i, i - 1, -1.0);
    if (i + 1 < n) t.emplace_back(i, i + 1, -1.0);
  }
  return assemble_from_triplets(t, n, n);
}

SparseMatrix random_sparse(int n, double density, std::mt19937_64& rng, double diag) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), coin(0.0, 1.0);
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i) {
    t.emplace_back(i, i, diag);
    for (int j = 0; j < n; ++j) {
      if (coin(rng) < density) t.emplace_back(i, j, u(rng));
    }
  }
  return assemble_from_triplets(t, n, n);
}

}  // namespace

TEST(Triplets, DuplicatesSum) {
  const SparseMatrix a = assemble_from_triplets({{0, 0, 1.0}, {0, 0, 2.0}}, 1, 1);
  EXPECT_EQ(a.nonZeros(), 1);
  EXPECT_EQ(a.coeff(0, 0), 3.0);
}

TEST(Triplets, EmptyAndRange) {
  const SparseMatrix a = assemble_from_triplets({}, 3, 3);
  EXPECT_EQ(a.nonZeros(), 0);
  EXPECT_EQ(spmv(a, Vector::Ones(3)), Vector::Zero(3));
  EXPECT_THROW(assemble_from_triplets({{3, 0, 1.0}}, 3, 3), InvalidArgument);
}

TEST(Triplets, DenseOracle) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> idx(0, 49);
  std::uniform_real_distribution<double> val(-1, 1);
  std::vector<Triplet> t;
  DenseMatrix oracle = DenseMatrix::Zero(50, 50);
  for (int k = 0; k < 600; ++k) {
    const int i = idx(rng), j = idx(rng);
    const double v = val(rng);
    t.emplace_back(i, j, v);
    oracle(i, j) += v;
  }
  EXPECT_EQ(DenseMatrix(assemble_from_triplets(t, 50, 50)), oracle);
}

TEST(Spmv, IdentityAndDense) {
  std::mt19937_64 rng(2);
  const Vector x = Vector::Random(30);
  SparseMatrix id(30, 30);
  id.setIdentity();
  EXPECT_EQ(spmv(id, x), x);
  const SparseMatrix a = random_sparse(30, 0.2, rng, 1.0);
  const Vector y = spmv(a, x);
  EXPECT_LT((y - DenseMatrix(a) * x).norm() / y.norm(), 1e-13);
  EXPECT_THROW(spmv(a, Vector::Ones(29)), InvalidArgument);
}

TEST(Ilu0, ExactOnDiagonalAndTriangular) {
  const SparseMatrix d = assemble_from_triplets({{0, 0, 2.0}, {1, 1, 4.0}, {2, 2, -1.0}}, 3, 3);
  Vector z;
  Ilu0(d).apply(Vector::Ones(3), z);
  EXPECT_TRUE(z.isApprox(Vector((Vector(3) << 0.5, 0.25, -1.0).finished())));
  const SparseMatrix l = assemble_from_triplets({{0, 0, 2.0}, {1, 0, 1.0}, {1, 1, 3.0}, {2, 1, -1.0}, {2, 2, 1.0}}, 3, 3);
  const Vector b(Vector::Random(3));
  Ilu0(l).apply(b, z);
  EXPECT_LT((DenseMatrix(l) * z - b).norm(), 1e-14);
}

TEST(Ilu0, ZeroPivotBreaksDown) {
  const SparseMatrix a = assemble_from_triplets({{0, 1, 1.0}, {1, 0, 1.0}}, 2, 2);
  EXPECT_THROW(Ilu0{a}, FactorizationBreakdown);
}

TEST(Gmres, IdentityOneIteration) {
  SparseMatrix id(5, 5);
  id.setIdentity();
  const Vector b = Vector::Random(5);
  Vector x = Vector::Zero(5);
  const SolveReport r = gmres(id, b, IdentityPreconditioner{}, x);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations, 1);
  EXPECT_LT((x - b).norm(), 1e-14);
}

TEST(Gmres, TwoByTwo) {
  const SparseMatrix a = assemble_from_triplets({{0, 0, 4.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 3.0}}, 2, 2);
  Vector x = Vector::Zero(2);
  gmres(a, Vector((Vector(2) << 1, 2).finished()), IdentityPreconditioner{}, x);
  EXPECT_NEAR(x(0), 1.0 / 11.0, 1e-12);
  EXPECT_NEAR(x(1), 7.0 / 11.0, 1e-12);
}

TEST(Gmres, LaplacianMatchesDense) {
  const SparseMatrix a = laplacian_1d(100);
  const Vector b = Vector::Ones(100);
  Vector x = Vector::Zero(100);
  GmresOptions o;
  o.tol = 1e-12;
  o.restart = 100;
  const SolveReport r = gmres(a, b, IdentityPreconditioner{}, x, o);
  EXPECT_TRUE(r.converged);
  const Vector ref = DenseMatrix(a).lu().solve(b);
  // tol * 10, amplified by cond(A) ~ 4e3
  EXPECT_LT((x - ref).norm() / ref.norm(), 1e-12 * 10 * 4e3);
}

TEST(Gmres, PreconditioningHelps) {
  std::mt19937_64 rng(3);
  const SparseMatrix a = random_sparse(200, 0.02, rng, 3.0);
  const Vector b = Vector::Ones(200);
  Vector x1 = Vector::Zero(200), x2 = Vector::Zero(200);
  const SolveReport plain = gmres(a, b, IdentityPreconditioner{}, x1);
  const SolveReport ilu = gmres(a, b, Ilu0(a), x2);
  EXPECT_TRUE(plain.converged && ilu.converged);
  EXPECT_LT(ilu.iterations, plain.iterations);
}

TEST(SparseLu, ExactPreconditioner) {
  std::mt19937_64 rng(4);
  const SparseMatrix a = random_sparse(60, 0.1, rng, 2.0);
  const Vector b = Vector::Random(60);
  Vector x = Vector::Zero(60);
  const SolveReport r = gmres(a, b, SparseLuPreconditioner(a), x);
  EXPECT_LE(r.iterations, 2);
  EXPECT_LT((DenseMatrix(a) * x - b).norm() / b.norm(), 1e-10);
}

TEST(DenseLu, IdentityPermutationRandom) {
  const Vector b = Vector::Random(4);
  EXPECT_EQ(dense_lu_solve(DenseMatrix::Identity(4, 4), b), b);
  DenseMatrix p = DenseMatrix::Zero(3, 3);
  p(0, 2) = p(1, 0) = p(2, 1) = 1.0;
  const Vector c(Vector::Random(3));
  EXPECT_LT((p * dense_lu_solve(p, c) - c).norm(), 1e-15);
  const DenseMatrix r = DenseMatrix::Random(20, 20) + 5.0 * DenseMatrix::Identity(20, 20);
  const Vector d = Vector::Random(20);
  EXPECT_LT((r * dense_lu_solve(r, d) - d).norm(), 1e-12);
  EXPECT_THROW(dense_lu_solve(DenseMatrix::Zero(2, 2), Vector::Ones(2)), SingularMatrix);
}

TEST(Equilibrate, UnitMaxima) {
  const SparseMatrix a = assemble_from_triplets({{0, 0, 1e6}, {0, 1, 3.0}, {1, 0, 2e-3}, {1, 1, 5e-4}}, 2, 2);
  SparseMatrix s = a;
  apply_scaling(s, equilibrate(a));
  const DenseMatrix d = DenseMatrix(s).cwiseAbs();
  EXPECT_NEAR(d.colwise().maxCoeff().maxCoeff(), 1.0, 1e-15);
  for (int j = 0; j < 2; ++j) EXPECT_NEAR(d.col(j).maxCoeff(), 1.0, 1e-15);
  for (int i = 0; i < 2; ++i) EXPECT_LE(d.row(i).maxCoeff(), 1.0 + 1e-15);
}

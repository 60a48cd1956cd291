#include "mdfc/errors.hpp"
#include "mdfc/linalg.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace mdfc;
using namespace mdfc::linalg;

namespace {

DenseMatrix random_symmetric(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DenseMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = u(rng);
  return m;
}

// cyclic Jacobi rotations, eigenvalues only
std::vector<double> jacobi_eigenvalues(DenseMatrix a) {
  const int n = static_cast<int>(a.rows());
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) ev[static_cast<size_t>(i)] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace

TEST(SparseMatrix, TripletsSumDuplicatesAndSortColumns) {
  const SparseMatrix m = from_triplets(2, 3, {{0, 2, 1.0}, {0, 0, 2.0}, {0, 2, 3.0}, {1, 1, -1.0}});
  EXPECT_EQ(m.nonZeros(), 3);
  EXPECT_DOUBLE_EQ(m.coeff(0, 2), 4.0);
  const int* inner = m.innerIndexPtr();
  const int* outer = m.outerIndexPtr();
  for (int r = 0; r < 2; ++r)
    for (int k = outer[r] + 1; k < outer[r + 1]; ++k) EXPECT_LT(inner[k - 1], inner[k]);
  EXPECT_DOUBLE_EQ(max_abs(m), 4.0);
}

TEST(FactorSolve, Identity) {
  const DenseMatrix eye = DenseMatrix::Identity(4, 4);
  Vector e1 = Vector::Zero(4);
  e1(0) = 1.0;
  EXPECT_EQ(factor_solve(eye, e1), e1);
  SparseMatrix s(4, 4);
  s.setIdentity();
  EXPECT_LT((factor_solve(s, e1) - e1).norm(), 1e-15);
}

TEST(FactorSolve, TwoByTwo) {
  DenseMatrix a(2, 2);
  a << 2, 1, 1, 2;
  const Vector x = factor_solve(a, Vector::Constant(2, 3.0));
  EXPECT_NEAR(x(0), 1.0, 1e-15);
  EXPECT_NEAR(x(1), 1.0, 1e-15);
}

TEST(FactorSolve, RandomSpdResidual) {
  std::mt19937 rng(42);
  std::normal_distribution<double> g;
  DenseMatrix b(50, 50);
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j < 50; ++j) b(i, j) = g(rng);
  const DenseMatrix a = b * b.transpose() + 50.0 * DenseMatrix::Identity(50, 50);
  Vector rhs(50);
  for (int i = 0; i < 50; ++i) rhs(i) = g(rng);
  const Vector x = factor_solve(a, rhs);
  EXPECT_LE(relative_residual(a, x, rhs), 1e-10);

  std::vector<Triplet> t;
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j < 50; ++j) t.emplace_back(i, j, a(i, j));
  const SparseMatrix s = from_triplets(50, 50, t);
  const Vector xs = factor_solve(s, rhs);
  EXPECT_LE(relative_residual(s, xs, rhs), 1e-10);
}

TEST(FactorSolve, RecoversKnownSolution) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int n = 80;
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i) {
    t.emplace_back(i, i, 4.0);
    if (i + 1 < n) t.emplace_back(i, i + 1, u(rng));
    if (i > 0) t.emplace_back(i, i - 1, u(rng));
    t.emplace_back(i, (i * 7) % n, 0.5 * u(rng));
  }
  const SparseMatrix a = from_triplets(n, n, t);
  Vector x(n);
  for (int i = 0; i < n; ++i) x(i) = u(rng);
  const Vector y = factor_solve(a, Vector(a * x));
  EXPECT_LE((y - x).norm() / x.norm(), 1e-10);
}

TEST(FactorSolve, SingularThrows) {
  DenseMatrix a(2, 2);
  a << 1, 1, 1, 1;
  EXPECT_THROW(factor_solve(a, Vector::Ones(2)), SingularMatrix);
  const SparseMatrix s = from_triplets(3, 3, {{0, 0, 1.0}, {1, 1, 1.0}});
  EXPECT_THROW(factor_solve(s, Vector::Ones(3)), SingularMatrix);
}

TEST(DenseSym, RejectsAsymmetry) {
  DenseMatrix a(2, 2);
  a << 1, 2, 2.1, 1;
  EXPECT_THROW(DenseSymMatrix{a}, std::invalid_argument);
  EXPECT_NO_THROW(DenseSymMatrix(a, false));
  EXPECT_THROW(DenseSymMatrix(DenseMatrix::Zero(2, 3)), std::invalid_argument);
  a(1, 0) = 2.0 + 1e-15;
  const DenseSymMatrix s(a);
  EXPECT_EQ(s(0, 1), s(1, 0));
}

TEST(MinEigen, IdentityAndDiagonal) {
  EXPECT_NEAR(min_eigenvalue_sym(DenseSymMatrix(DenseMatrix::Identity(3, 3))).value, 1.0, 1e-14);
  DenseMatrix d = DenseMatrix::Zero(3, 3);
  d.diagonal() << 5, 2, 7;
  const EigenPair e = min_eigenvalue_sym(DenseSymMatrix(d));
  EXPECT_NEAR(e.value, 2.0, 1e-14);
  EXPECT_NEAR(std::abs(e.vector(1)), 1.0, 1e-12);
}

TEST(MinEigen, MatchesJacobiOracle) {
  const DenseMatrix m = random_symmetric(20, 2024);
  const EigenPair e = min_eigenvalue_sym(DenseSymMatrix(m));
  EXPECT_NEAR(e.value, jacobi_eigenvalues(m).front(), 1e-8);
  EXPECT_LE((m * e.vector - e.value * e.vector).norm(), 1e-10 * m.norm());
}

TEST(MinEigen, InverseIterationPathMatchesDense) {
  const DenseMatrix m = random_symmetric(40, 99);
  const double dense = min_eigenvalue_sym(DenseSymMatrix(m)).value;
  const EigenPair it = min_eigenvalue_sym(DenseSymMatrix(m), 1e-10, 10);
  EXPECT_NEAR(it.value, dense, 1e-8);
  EXPECT_LE((m * it.vector - it.value * it.vector).norm(), 1e-9 * m.norm());
}

TEST(MinEigen, PermutationInvariant) {
  const DenseMatrix m = random_symmetric(25, 5);
  std::vector<int> perm(25);
  for (int i = 0; i < 25; ++i) perm[static_cast<size_t>(i)] = i;
  std::shuffle(perm.begin(), perm.end(), std::mt19937(3));
  DenseMatrix p(25, 25);
  for (int i = 0; i < 25; ++i)
    for (int j = 0; j < 25; ++j) p(i, j) = m(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(j)]);
  EXPECT_NEAR(min_eigenvalue_sym(DenseSymMatrix(p)).value, min_eigenvalue_sym(DenseSymMatrix(m)).value, 1e-10);
}

#include <gtest/gtest.h>

#include <random>

#include "nangle/exactla.hpp"

using namespace nangle;

namespace {

Matrix random_matrix(std::mt19937& rng, std::uint32_t p, std::size_t r, std::size_t c) {
  Matrix m(p, r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m.at(i, j) = rng() % p;
  return m;
}

// Brute force: all vectors of F_p^n.
std::vector<std::vector<Residue>> all_vectors(std::uint32_t p, std::size_t n) {
  std::vector<std::vector<Residue>> out;
  std::vector<Residue> v(n, 0);
  while (true) {
    out.push_back(v);
    std::size_t i = 0;
    while (i < n && ++v[i] == p) v[i++] = 0;
    if (i == n) break;
  }
  return out;
}

}  // namespace

TEST(PrimeField, RejectsComposite) {
  EXPECT_THROW(PrimeField(4), InputError);
  EXPECT_THROW(PrimeField(1), InputError);
  EXPECT_NO_THROW(PrimeField(2147483647u));
}

TEST(PrimeField, InverseRoundTrip) {
  PrimeField f(101);
  for (Residue a = 1; a < 101; ++a) EXPECT_EQ(f.mul(a, f.inv(a)), 1u);
}

TEST(Rref, IdentityOverF3) {
  auto r = rref(Matrix::identity(3, 2));
  EXPECT_EQ(r.reduced, Matrix::identity(3, 2));
  EXPECT_EQ(r.rank, 2u);
  EXPECT_EQ(r.pivots, (std::vector<std::size_t>{0, 1}));
}

TEST(Rref, AllOnesOverF2) {
  auto r = rref(Matrix::from_rows(2, {{1, 1}, {1, 1}}));
  EXPECT_EQ(r.reduced, Matrix::from_rows(2, {{1, 1}, {0, 0}}));
  EXPECT_EQ(r.rank, 1u);
  EXPECT_EQ(r.pivots, (std::vector<std::size_t>{0}));
}

TEST(Rref, ZeroMatrix) {
  auto r = rref(Matrix(2, 3, 4));
  EXPECT_TRUE(r.reduced.is_zero());
  EXPECT_EQ(r.rank, 0u);
  EXPECT_TRUE(r.pivots.empty());
}

TEST(Solve, Identity) {
  Matrix b = Matrix::from_rows(5, {{3}, {4}});
  auto s = solve(Matrix::identity(5, 2), b);
  ASSERT_TRUE(s.particular);
  EXPECT_EQ(*s.particular, b);
  EXPECT_EQ(s.kernel.cols(), 0u);
}

TEST(Solve, ZeroSystem) {
  auto s = solve(Matrix(2, 2, 2), Matrix(2, 2, 1));
  ASSERT_TRUE(s.particular);
  EXPECT_TRUE(s.particular->is_zero());
  EXPECT_EQ(s.kernel.cols(), 2u);
}

TEST(Solve, MatchesEnumeration) {
  Matrix a = Matrix::from_rows(2, {{1, 1}, {0, 0}});
  Matrix b = Matrix::from_rows(2, {{1}, {0}});
  auto s = solve(a, b);
  ASSERT_TRUE(s.particular);
  EXPECT_EQ(*s.particular, Matrix::from_rows(2, {{1}, {0}}));
  ASSERT_EQ(s.kernel.cols(), 1u);
  EXPECT_EQ(s.kernel.col(0), (std::vector<Residue>{1, 1}));
  // oracle: count solutions by enumeration
  std::size_t sols = 0;
  for (auto& v : all_vectors(2, 2))
    if (a * Matrix::column(2, v) == b) ++sols;
  EXPECT_EQ(sols, 2u);
}

TEST(Solve, Inconsistent) {
  auto s = solve(Matrix::from_rows(3, {{1, 0}, {1, 0}}), Matrix::from_rows(3, {{1}, {2}}));
  EXPECT_FALSE(s.particular);
}

TEST(Solve, DimensionMismatch) {
  EXPECT_THROW(solve(Matrix(2, 2, 2), Matrix(2, 3, 1)), InputError);
}

TEST(Kernel, Basic) {
  EXPECT_EQ(kernel_basis(Matrix::identity(3, 3)).cols(), 0u);
  EXPECT_EQ(kernel_basis(Matrix(3, 3, 3)).cols(), 3u);
  Matrix k = kernel_basis(Matrix::from_rows(5, {{1, 2}}));
  ASSERT_EQ(k.cols(), 1u);
  // oracle: nonzero kernel vectors of [[1,2]] over F_5 are multiples of [3,1]
  std::size_t count = 0;
  for (auto& v : all_vectors(5, 2)) {
    if ((v[0] + 2 * v[1]) % 5 == 0 && (v[0] || v[1])) {
      ++count;
      EXPECT_EQ(v[0], (3 * v[1]) % 5);
    }
  }
  EXPECT_EQ(count, 4u);
  EXPECT_EQ(k(0, 0), (3 * k(1, 0)) % 5);
}

TEST(Invert, Cases) {
  EXPECT_EQ(*invert(Matrix::identity(7, 3)), Matrix::identity(7, 3));
  Matrix s = Matrix::from_rows(2, {{0, 1}, {1, 0}});
  EXPECT_EQ(*invert(s), s);
  EXPECT_FALSE(invert(Matrix::from_rows(2, {{1, 1}, {1, 1}})));
  EXPECT_THROW(invert(Matrix(2, 2, 3)), InputError);
}

TEST(Properties, RankNullityRrefIdempotentSolve) {
  std::mt19937 rng(7);
  for (std::uint32_t p : {2u, 3u}) {
    for (int trial = 0; trial < 200; ++trial) {
      std::size_t r = 1 + rng() % 8, c = 1 + rng() % 8;
      Matrix m = random_matrix(rng, p, r, c);
      auto rr = rref(m);
      Matrix k = kernel_basis(m);
      EXPECT_EQ(rr.rank + k.cols(), c);
      EXPECT_TRUE((m * k).is_zero());
      EXPECT_EQ(rank(k), k.cols());
      EXPECT_EQ(rref(rr.reduced).reduced, rr.reduced);
      Matrix x0 = random_matrix(rng, p, c, 1);
      Matrix b = m * x0;
      auto s = solve(m, b);
      ASSERT_TRUE(s.particular);
      Matrix comb = random_matrix(rng, p, k.cols(), 1);
      EXPECT_EQ(m * (*s.particular + k * comb), b);
    }
  }
}

TEST(Charpoly, MatchesBruteForceDeterminant) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    std::uint32_t p = 5;
    std::size_t n = 1 + rng() % 5;
    Matrix m = random_matrix(rng, p, n, n);
    Poly cp = charpoly(m);
    ASSERT_EQ(cp.size(), n + 1);
    // oracle: c is a root iff m - c is singular
    std::vector<Residue> roots;
    for (Residue c = 0; c < p; ++c) {
      Matrix d = m - Matrix::identity(p, n).scaled(c);
      if (rank(d) < n) roots.push_back(c);
      Residue v = 0;
      PrimeField f(p);
      for (std::size_t i = cp.size(); i-- > 0;) v = f.add(f.mul(v, c), cp[i]);
      EXPECT_EQ(v == 0, rank(d) < n);
    }
    EXPECT_EQ(poly_roots(cp, p), roots);
  }
}

TEST(Charpoly, LargePrimeRoots) {
  std::uint32_t p = 1000003;
  Matrix m = Matrix::from_rows(p, {{5, 0, 0}, {1, 77, 0}, {3, 4, 999999}});
  EXPECT_EQ(poly_roots(charpoly(m), p), (std::vector<Residue>{5, 77, 999999}));
}

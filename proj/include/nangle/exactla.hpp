#pragma once

// Dense linear algebra over a prime field F_p.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nangle {

using Residue = std::uint32_t;

class NangleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input (files, dimensions, unknown names).
class InputError : public NangleError {
 public:
  using NangleError::NangleError;
};

class PrimeField {
 public:
  PrimeField() = default;
  explicit PrimeField(std::uint32_t p);

  std::uint32_t p() const { return p_; }

  Residue reduce(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    return static_cast<Residue>(r < 0 ? r + p_ : r);
  }
  Residue add(Residue a, Residue b) const {
    std::uint32_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Residue sub(Residue a, Residue b) const { return a >= b ? a - b : a + p_ - b; }
  Residue neg(Residue a) const { return a == 0 ? 0 : p_ - a; }
  Residue mul(Residue a, Residue b) const {
    return static_cast<Residue>((static_cast<std::uint64_t>(a) * b) % p_);
  }
  Residue inv(Residue a) const;
  Residue pow(Residue a, std::uint64_t e) const;

  bool operator==(const PrimeField&) const = default;

 private:
  std::uint32_t p_ = 2;
};

bool is_prime(std::uint32_t p);

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::uint32_t p, std::size_t rows, std::size_t cols);

  static Matrix zero(std::uint32_t p, std::size_t rows, std::size_t cols) {
    return Matrix(p, rows, cols);
  }
  static Matrix identity(std::uint32_t p, std::size_t n);
  /// Row-major entries, reduced mod p.
  static Matrix from_rows(std::uint32_t p, const std::vector<std::vector<std::int64_t>>& rows);
  static Matrix column(std::uint32_t p, const std::vector<Residue>& v);

  std::uint32_t p() const { return p_; }
  PrimeField field() const { return PrimeField(p_); }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Residue operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  Residue& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, std::int64_t v);
  const std::vector<Residue>& data() const { return data_; }
  Residue* row_ptr(std::size_t r) { return data_.data() + r * cols_; }
  const Residue* row_ptr(std::size_t r) const { return data_.data() + r * cols_; }

  bool is_zero() const;
  bool operator==(const Matrix& o) const {
    return p_ == o.p_ && rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  Matrix operator*(const Matrix& o) const;
  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix operator-() const;
  Matrix scaled(Residue s) const;
  Matrix& operator+=(const Matrix& o);
  /// this += s * o
  void add_scaled(const Matrix& o, Residue s);

  Matrix transpose() const;
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const Matrix& b);
  Matrix select_columns(const std::vector<std::size_t>& idx) const;
  Matrix select_rows(const std::vector<std::size_t>& idx) const;
  std::vector<Residue> col(std::size_t c) const;
  /// Entries flattened column-major (used for vectorising maps).
  std::vector<Residue> vec() const;
  static Matrix unvec(std::uint32_t p, const std::vector<Residue>& v, std::size_t rows,
                      std::size_t cols, std::size_t offset = 0);

  std::string str() const;

 private:
  std::uint32_t p_ = 2;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Residue> data_;
};

Matrix hstack(const Matrix& a, const Matrix& b);
Matrix vstack(const Matrix& a, const Matrix& b);
Matrix hstack(const std::vector<Matrix>& parts, std::uint32_t p, std::size_t rows);
Matrix vstack(const std::vector<Matrix>& parts, std::uint32_t p, std::size_t cols);
Matrix direct_sum(const Matrix& a, const Matrix& b);

struct RrefResult {
  Matrix reduced;
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;
};

RrefResult rref(const Matrix& m);
std::size_t rank(const Matrix& m);

/// Columns form a basis of {x : m x = 0}.
Matrix kernel_basis(const Matrix& m);

struct SolveResult {
  /// One particular solution per column of b, if the system is consistent.
  std::optional<Matrix> particular;
  Matrix kernel;
};

/// Solves a x = b. Throws InputError when a.rows != b.rows.
SolveResult solve(const Matrix& a, const Matrix& b);

/// Inverse of a square matrix, or nullopt when singular. Throws on non-square input.
std::optional<Matrix> invert(const Matrix& m);

/// Columns of a basis of the column space, taken from the pivot columns of m.
Matrix column_basis(const Matrix& m);

/// True iff some power of the square matrix m vanishes.
bool is_nilpotent(const Matrix& m);

/// m^k for square m.
Matrix power(const Matrix& m, std::size_t k);

/// Polynomials over F_p, coefficients from the constant term upwards, no trailing zeros.
using Poly = std::vector<Residue>;

/// Characteristic polynomial det(t - m) of a square matrix (monic).
Poly charpoly(const Matrix& m);

/// Distinct roots in F_p, ascending.
std::vector<Residue> poly_roots(const Poly& f, std::uint32_t p);

Poly poly_mod(const Poly& a, const Poly& m, std::uint32_t p);
Poly poly_mul(const Poly& a, const Poly& b, std::uint32_t p);
Poly poly_gcd(Poly a, Poly b, std::uint32_t p);

}  // namespace nangle

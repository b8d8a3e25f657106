#include "nangle/exactla.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace nangle {

bool is_prime(std::uint32_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

PrimeField::PrimeField(std::uint32_t p) : p_(p) {
  if (p >= (1u << 31) || !is_prime(p)) {
    throw InputError("field modulus " + std::to_string(p) + " is not a prime below 2^31");
  }
}

Residue PrimeField::pow(Residue a, std::uint64_t e) const {
  Residue r = 1 % p_;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

Residue PrimeField::inv(Residue a) const {
  if (a == 0) throw NangleError("inverse of zero in F_" + std::to_string(p_));
  return pow(a, p_ - 2);
}

Matrix::Matrix(std::uint32_t p, std::size_t rows, std::size_t cols)
    : p_(p), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

Matrix Matrix::identity(std::uint32_t p, std::size_t n) {
  Matrix m(p, n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1 % p;
  return m;
}

Matrix Matrix::from_rows(std::uint32_t p, const std::vector<std::vector<std::int64_t>>& rows) {
  std::size_t r = rows.size();
  std::size_t c = r ? rows[0].size() : 0;
  Matrix m(p, r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw InputError("ragged matrix rows");
    for (std::size_t j = 0; j < c; ++j) m.set(i, j, rows[i][j]);
  }
  return m;
}

Matrix Matrix::column(std::uint32_t p, const std::vector<Residue>& v) {
  Matrix m(p, v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m.at(i, 0) = v[i] % p;
  return m;
}

void Matrix::set(std::size_t r, std::size_t c, std::int64_t v) {
  data_[r * cols_ + c] = PrimeField(p_).reduce(v);
}

bool Matrix::is_zero() const {
  for (Residue v : data_)
    if (v) return false;
  return true;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (cols_ != o.rows_) {
    throw InputError("matrix product dimension mismatch: " + std::to_string(rows_) + "x" +
                     std::to_string(cols_) + " * " + std::to_string(o.rows_) + "x" +
                     std::to_string(o.cols_));
  }
  Matrix r(p_, rows_, o.cols_);
  if (rows_ == 0 || o.cols_ == 0 || cols_ == 0) return r;
  std::vector<std::uint64_t> acc(o.cols_);
  // Accumulate in 64 bits and reduce when close to overflow.
  const std::uint64_t pp = static_cast<std::uint64_t>(p_ - 1) * (p_ - 1);
  const std::uint64_t limit = pp == 0 ? ~0ull : (~0ull - pp);
  for (std::size_t i = 0; i < rows_; ++i) {
    std::fill(acc.begin(), acc.end(), 0);
    const Residue* a = row_ptr(i);
    for (std::size_t k = 0; k < cols_; ++k) {
      Residue av = a[k];
      if (!av) continue;
      const Residue* b = o.row_ptr(k);
      for (std::size_t j = 0; j < o.cols_; ++j) {
        acc[j] += static_cast<std::uint64_t>(av) * b[j];
        if (acc[j] > limit) acc[j] %= p_;
      }
    }
    Residue* out = r.row_ptr(i);
    for (std::size_t j = 0; j < o.cols_; ++j) out[j] = static_cast<Residue>(acc[j] % p_);
  }
  return r;
}

Matrix Matrix::operator+(const Matrix& o) const {
  Matrix r = *this;
  r += o;
  return r;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw InputError("matrix sum dimension mismatch");
  PrimeField f(p_);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] = f.add(data_[i], o.data_[i]);
  return *this;
}

void Matrix::add_scaled(const Matrix& o, Residue s) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw InputError("matrix sum dimension mismatch");
  if (s == 0) return;
  PrimeField f(p_);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] = f.add(data_[i], f.mul(s, o.data_[i]));
}

Matrix Matrix::operator-(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw InputError("matrix difference dimension mismatch");
  Matrix r = *this;
  PrimeField f(p_);
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = f.sub(data_[i], o.data_[i]);
  return r;
}

Matrix Matrix::operator-() const { return scaled(p_ - 1); }

Matrix Matrix::scaled(Residue s) const {
  Matrix r = *this;
  PrimeField f(p_);
  for (auto& v : r.data_) v = f.mul(v, s);
  return r;
}

Matrix Matrix::transpose() const {
  Matrix r(p_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = (*this)(i, j);
  return r;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw InputError("block out of range");
  Matrix r(p_, nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) r.at(i, j) = (*this)(r0 + i, c0 + j);
  return r;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
  if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw InputError("set_block out of range");
  for (std::size_t i = 0; i < b.rows_; ++i)
    for (std::size_t j = 0; j < b.cols_; ++j) at(r0 + i, c0 + j) = b(i, j);
}

Matrix Matrix::select_columns(const std::vector<std::size_t>& idx) const {
  Matrix r(p_, rows_, idx.size());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) r.at(i, j) = (*this)(i, idx[j]);
  return r;
}

Matrix Matrix::select_rows(const std::vector<std::size_t>& idx) const {
  Matrix r(p_, idx.size(), cols_);
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < cols_; ++j) r.at(i, j) = (*this)(idx[i], j);
  return r;
}

std::vector<Residue> Matrix::col(std::size_t c) const {
  std::vector<Residue> v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, c);
  return v;
}

std::vector<Residue> Matrix::vec() const {
  std::vector<Residue> v;
  v.reserve(data_.size());
  for (std::size_t j = 0; j < cols_; ++j)
    for (std::size_t i = 0; i < rows_; ++i) v.push_back((*this)(i, j));
  return v;
}

Matrix Matrix::unvec(std::uint32_t p, const std::vector<Residue>& v, std::size_t rows,
                     std::size_t cols, std::size_t offset) {
  Matrix m(p, rows, cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i) m.at(i, j) = v[offset + j * rows + i];
  return m;
}

std::string Matrix::str() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << (*this)(i, j);
    os << "]";
  }
  os << "]";
  return os.str();
}

Matrix hstack(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw InputError("hstack row mismatch");
  Matrix r(a.p(), a.rows(), a.cols() + b.cols());
  r.set_block(0, 0, a);
  r.set_block(0, a.cols(), b);
  return r;
}

Matrix vstack(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw InputError("vstack column mismatch");
  Matrix r(a.p(), a.rows() + b.rows(), a.cols());
  r.set_block(0, 0, a);
  r.set_block(a.rows(), 0, b);
  return r;
}

Matrix hstack(const std::vector<Matrix>& parts, std::uint32_t p, std::size_t rows) {
  std::size_t c = 0;
  for (const auto& m : parts) {
    if (m.rows() != rows) throw InputError("hstack row mismatch");
    c += m.cols();
  }
  Matrix r(p, rows, c);
  c = 0;
  for (const auto& m : parts) {
    r.set_block(0, c, m);
    c += m.cols();
  }
  return r;
}

Matrix vstack(const std::vector<Matrix>& parts, std::uint32_t p, std::size_t cols) {
  std::size_t rr = 0;
  for (const auto& m : parts) {
    if (m.cols() != cols) throw InputError("vstack column mismatch");
    rr += m.rows();
  }
  Matrix r(p, rr, cols);
  rr = 0;
  for (const auto& m : parts) {
    r.set_block(rr, 0, m);
    rr += m.rows();
  }
  return r;
}

Matrix direct_sum(const Matrix& a, const Matrix& b) {
  Matrix r(a.p(), a.rows() + b.rows(), a.cols() + b.cols());
  r.set_block(0, 0, a);
  r.set_block(a.rows(), a.cols(), b);
  return r;
}

RrefResult rref(const Matrix& m) {
  RrefResult res;
  res.reduced = m;
  Matrix& a = res.reduced;
  PrimeField f(m.p());
  const std::size_t rows = a.rows(), cols = a.cols();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t i = r; i < rows; ++i) {
      if (a(i, c)) {
        piv = i;
        break;
      }
    }
    if (piv == rows) continue;
    if (piv != r) {
      for (std::size_t j = 0; j < cols; ++j) std::swap(a.at(r, j), a.at(piv, j));
    }
    Residue iv = f.inv(a(r, c));
    Residue* rowr = a.row_ptr(r);
    if (iv != 1)
      for (std::size_t j = c; j < cols; ++j) rowr[j] = f.mul(rowr[j], iv);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r) continue;
      Residue fac = a(i, c);
      if (!fac) continue;
      Residue* rowi = a.row_ptr(i);
      Residue nf = f.neg(fac);
      for (std::size_t j = c; j < cols; ++j) {
        if (rowr[j]) rowi[j] = f.add(rowi[j], f.mul(nf, rowr[j]));
      }
    }
    res.pivots.push_back(c);
    ++r;
  }
  res.rank = r;
  return res;
}

std::size_t rank(const Matrix& m) { return rref(m).rank; }

Matrix kernel_basis(const Matrix& m) {
  const std::size_t n = m.cols();
  RrefResult rr = rref(m);
  std::vector<bool> is_piv(n, false);
  for (auto c : rr.pivots) is_piv[c] = true;
  PrimeField f(m.p());
  Matrix k(m.p(), n, n - rr.rank);
  std::size_t col = 0;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_piv[free]) continue;
    k.at(free, col) = 1 % m.p();
    for (std::size_t i = 0; i < rr.rank; ++i) {
      k.at(rr.pivots[i], col) = f.neg(rr.reduced(i, free));
    }
    ++col;
  }
  return k;
}

SolveResult solve(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw InputError("solve: a has " + std::to_string(a.rows()) + " rows, b has " +
                     std::to_string(b.rows()));
  }
  SolveResult out;
  out.kernel = kernel_basis(a);
  const std::size_t n = a.cols();
  RrefResult rr = rref(hstack(a, b));
  Matrix x(a.p(), n, b.cols());
  for (std::size_t i = 0; i < rr.rank; ++i) {
    std::size_t c = rr.pivots[i];
    if (c >= n) return out;  // pivot in the augmented part: inconsistent
    for (std::size_t j = 0; j < b.cols(); ++j) x.at(c, j) = rr.reduced(i, n + j);
  }
  out.particular = std::move(x);
  return out;
}

std::optional<Matrix> invert(const Matrix& m) {
  if (m.rows() != m.cols()) throw InputError("invert: matrix is not square");
  const std::size_t n = m.rows();
  RrefResult rr = rref(hstack(m, Matrix::identity(m.p(), n)));
  if (rr.rank < n || (n > 0 && rr.pivots[n - 1] != n - 1)) return std::nullopt;
  return rr.reduced.block(0, n, n, n);
}

Matrix column_basis(const Matrix& m) { return m.select_columns(rref(m).pivots); }

Matrix power(const Matrix& m, std::size_t k) {
  Matrix r = Matrix::identity(m.p(), m.rows());
  Matrix b = m;
  while (k) {
    if (k & 1) r = r * b;
    k >>= 1;
    if (k) b = b * b;
  }
  return r;
}

bool is_nilpotent(const Matrix& m) {
  if (m.rows() == 0) return true;
  return power(m, m.rows()).is_zero();
}

}  // namespace nangle

namespace nangle {

namespace {

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly poly_sub(Poly a, const Poly& b, std::uint32_t p) {
  PrimeField f(p);
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = f.sub(a[i], b[i]);
  trim(a);
  return a;
}

Poly poly_powmod(Poly base, std::uint64_t e, const Poly& m, std::uint32_t p) {
  Poly r{1};
  base = poly_mod(base, m, p);
  while (e) {
    if (e & 1) r = poly_mod(poly_mul(r, base, p), m, p);
    e >>= 1;
    if (e) base = poly_mod(poly_mul(base, base, p), m, p);
  }
  return r;
}

Poly make_monic(Poly f, std::uint32_t p) {
  trim(f);
  if (f.empty()) return f;
  PrimeField fld(p);
  Residue iv = fld.inv(f.back());
  for (auto& c : f) c = fld.mul(c, iv);
  return f;
}

void split_roots(const Poly& g, std::uint32_t p, std::uint64_t& seed, std::vector<Residue>& out) {
  // g is monic, squarefree, and a product of linear factors.
  if (g.size() <= 1) return;
  PrimeField f(p);
  if (g.size() == 2) {
    out.push_back(f.neg(g[0]));
    return;
  }
  if (p <= 512) {
    for (std::uint32_t c = 0; c < p; ++c) {
      Residue v = 0;
      for (std::size_t i = g.size(); i-- > 0;) v = f.add(f.mul(v, c), g[i]);
      if (v == 0) out.push_back(c);
    }
    return;
  }
  while (true) {
    seed = seed * 6364136223846793005ull + 1442695040888963407ull;
    Residue a = static_cast<Residue>((seed >> 17) % p);
    Poly h = poly_powmod(Poly{a, 1}, (p - 1) / 2, g, p);
    h = poly_sub(h, Poly{1}, p);
    Poly d = make_monic(poly_gcd(g, h, p), p);
    if (d.size() > 1 && d.size() < g.size()) {
      split_roots(d, p, seed, out);
      // g / d by long division
      Poly q(g.size() - d.size() + 1, 0), rem = g;
      for (std::size_t i = q.size(); i-- > 0;) {
        Residue c = rem[i + d.size() - 1];
        q[i] = c;
        for (std::size_t j = 0; j < d.size(); ++j) rem[i + j] = f.sub(rem[i + j], f.mul(c, d[j]));
      }
      split_roots(make_monic(q, p), p, seed, out);
      return;
    }
  }
}

}  // namespace

Poly poly_mul(const Poly& a, const Poly& b, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  PrimeField f(p);
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = f.add(r[i + j], f.mul(a[i], b[j]));
  }
  trim(r);
  return r;
}

Poly poly_mod(const Poly& a, const Poly& m, std::uint32_t p) {
  Poly r = a;
  trim(r);
  Poly mm = m;
  trim(mm);
  if (mm.empty()) throw NangleError("polynomial division by zero");
  PrimeField f(p);
  Residue iv = f.inv(mm.back());
  while (r.size() >= mm.size()) {
    Residue c = f.mul(r.back(), iv);
    std::size_t shift = r.size() - mm.size();
    for (std::size_t j = 0; j < mm.size(); ++j) r[shift + j] = f.sub(r[shift + j], f.mul(c, mm[j]));
    trim(r);
  }
  return r;
}

Poly poly_gcd(Poly a, Poly b, std::uint32_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(a, p);
}

Poly charpoly(const Matrix& m) {
  if (m.rows() != m.cols()) throw InputError("charpoly: matrix is not square");
  const std::size_t n = m.rows();
  const std::uint32_t p = m.p();
  PrimeField f(p);
  Matrix h = m;
  // Reduce to upper Hessenberg form by similarity transforms.
  for (std::size_t j = 0; j + 2 < n; ++j) {
    std::size_t piv = n;
    for (std::size_t r = j + 1; r < n; ++r)
      if (h(r, j)) {
        piv = r;
        break;
      }
    if (piv == n) continue;
    if (piv != j + 1) {
      for (std::size_t c = 0; c < n; ++c) std::swap(h.at(piv, c), h.at(j + 1, c));
      for (std::size_t r = 0; r < n; ++r) std::swap(h.at(r, piv), h.at(r, j + 1));
    }
    Residue iv = f.inv(h(j + 1, j));
    for (std::size_t i = j + 2; i < n; ++i) {
      Residue fac = f.mul(h(i, j), iv);
      if (!fac) continue;
      for (std::size_t c = 0; c < n; ++c) h.at(i, c) = f.sub(h(i, c), f.mul(fac, h(j + 1, c)));
      for (std::size_t r = 0; r < n; ++r) h.at(r, j + 1) = f.add(h(r, j + 1), f.mul(fac, h(r, i)));
    }
  }
  std::vector<Poly> ps(n + 1);
  ps[0] = Poly{1};
  for (std::size_t mi = 1; mi <= n; ++mi) {
    Poly cur = poly_mul(Poly{f.neg(h(mi - 1, mi - 1)), 1}, ps[mi - 1], p);
    Residue prod = 1;
    for (std::size_t i = mi - 1; i >= 1; --i) {
      prod = f.mul(prod, h(i, i - 1));
      Residue coef = f.mul(h(i - 1, mi - 1), prod);
      if (coef) {
        Poly term = ps[i - 1];
        for (auto& c : term) c = f.mul(c, coef);
        cur = poly_sub(cur, term, p);
      }
    }
    trim(cur);
    ps[mi] = cur;
  }
  return ps[n];
}

std::vector<Residue> poly_roots(const Poly& fpoly, std::uint32_t p) {
  Poly fm = make_monic(fpoly, p);
  std::vector<Residue> out;
  if (fm.size() <= 1) return out;
  Poly xp = poly_powmod(Poly{0, 1}, p, fm, p);
  Poly g = poly_gcd(fm, poly_sub(xp, Poly{0, 1}, p), p);
  std::uint64_t seed = 0x9e3779b97f4a7c15ull;
  split_roots(g, p, seed, out);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace nangle

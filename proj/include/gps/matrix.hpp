#pragma once

#include "gps/scalar.hpp"

#include <cassert>
#include <optional>
#include <sstream>

namespace gps {

// Dense row-major matrix over Scalar. Vectors are columns.
class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  static Matrix identity(size_t n) {
    Matrix m(n, n);
    for (size_t k = 0; k < n; ++k) m(k, k) = 1;
    return m;
  }

  static Matrix from_columns(const std::vector<Vec>& cols, size_t rows) {
    Matrix m(rows, cols.size());
    for (size_t j = 0; j < cols.size(); ++j)
      for (size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    return m;
  }

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Scalar& operator()(size_t i, size_t j) { return a_[i * cols_ + j]; }
  const Scalar& operator()(size_t i, size_t j) const { return a_[i * cols_ + j]; }

  Vec col(size_t j) const {
    Vec v(rows_);
    for (size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }
  Vec row(size_t i) const { return Vec(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_); }
  void set_col(size_t j, const Vec& v) {
    for (size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

  bool is_zero() const {
    for (const auto& s : a_)
      if (!s.is_zero()) return false;
    return true;
  }

  // Entries as one long vector (row-major), used for linear-dependence tests.
  const Vec& flat() const { return a_; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (size_t i = 0; i < rows_; ++i)
      for (size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o);
    for (size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
  }
  Matrix& operator*=(const Scalar& c) {
    for (auto& s : a_) s *= c;
    return *this;
  }
  void add_scaled(const Scalar& c, const Matrix& o) {
    check_same(o);
    if (c.is_zero()) return;
    for (size_t k = 0; k < a_.size(); ++k)
      if (!o.a_[k].is_zero()) a_[k] += c * o.a_[k];
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(const Scalar& c, Matrix a) { return a *= c; }
  friend Matrix operator-(Matrix a) { return a *= Scalar(-1); }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product: shape mismatch");
    Matrix c(a.rows_, b.cols_);
    for (size_t i = 0; i < a.rows_; ++i)
      for (size_t k = 0; k < a.cols_; ++k) {
        const Scalar& aik = a(i, k);
        if (aik.is_zero()) continue;
        for (size_t j = 0; j < b.cols_; ++j) {
          const Scalar& bkj = b(k, j);
          if (!bkj.is_zero()) c(i, j) += aik * bkj;
        }
      }
    return c;
  }

  friend Vec operator*(const Matrix& a, const Vec& x) {
    if (a.cols_ != x.size()) throw std::invalid_argument("matrix-vector product: shape mismatch");
    Vec y(a.rows_);
    for (size_t i = 0; i < a.rows_; ++i)
      for (size_t k = 0; k < a.cols_; ++k) {
        const Scalar& aik = a(i, k);
        if (!aik.is_zero() && !x[k].is_zero()) y[i] += aik * x[k];
      }
    return y;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  Matrix pow(unsigned k) const {
    Matrix r = identity(rows_), base = *this;
    while (k) {
      if (k & 1) r = r * base;
      k >>= 1;
      if (k) base = base * base;
    }
    return r;
  }

  std::string str() const {
    std::ostringstream os;
    for (size_t i = 0; i < rows_; ++i) {
      os << "[";
      for (size_t j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j);
      os << "]\n";
    }
    return os.str();
  }

 private:
  void check_same(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch");
  }

  size_t rows_ = 0, cols_ = 0;
  Vec a_;
};

// Reduced row echelon form in place; returns pivot columns.
inline std::vector<size_t> rref(Matrix& m) {
  std::vector<size_t> pivots;
  size_t r = 0;
  for (size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    size_t p = r;
    while (p < m.rows() && m(p, c).is_zero()) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    Scalar inv = m(r, c).inv();
    for (size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      Scalar f = m(i, c);
      for (size_t j = c; j < m.cols(); ++j)
        if (!m(r, j).is_zero()) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline size_t rank(Matrix m) { return rref(m).size(); }

// Basis of the null space, one vector per free column.
inline std::vector<Vec> kernel(const Matrix& a) {
  Matrix m = a;
  auto piv = rref(m);
  std::vector<bool> is_piv(m.cols(), false);
  for (size_t c : piv) is_piv[c] = true;
  std::vector<Vec> basis;
  for (size_t f = 0; f < m.cols(); ++f) {
    if (is_piv[f]) continue;
    Vec v(m.cols());
    v[f] = 1;
    for (size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -m(r, f);
    basis.push_back(std::move(v));
  }
#ifndef NDEBUG
  assert(piv.size() + basis.size() == a.cols());
#endif
  return basis;
}

// Some solution of a x = b, or nullopt when inconsistent.
inline std::optional<Vec> solve(const Matrix& a, const Vec& b) {
  Matrix aug(a.rows(), a.cols() + 1);
  for (size_t i = 0; i < a.rows(); ++i) {
    for (size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  auto piv = rref(aug);
  if (!piv.empty() && piv.back() == a.cols()) return std::nullopt;
  Vec x(a.cols());
  for (size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug(r, a.cols());
  return x;
}

inline Scalar det(Matrix m) {
  if (!m.square()) throw std::invalid_argument("determinant of non-square matrix");
  Scalar d = 1;
  size_t n = m.rows();
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && m(p, c).is_zero()) ++p;
    if (p == n) return 0;
    if (p != c) {
      for (size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      d = -d;
    }
    d *= m(c, c);
    Scalar inv = m(c, c).inv();
    for (size_t i = c + 1; i < n; ++i) {
      if (m(i, c).is_zero()) continue;
      Scalar f = m(i, c) * inv;
      for (size_t j = c; j < n; ++j)
        if (!m(c, j).is_zero()) m(i, j) -= f * m(c, j);
    }
  }
  return d;
}

inline std::optional<Matrix> inverse(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("inverse: matrix is not square");
  size_t n = a.rows();
  Matrix aug(n, 2 * n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = 1;
  }
  auto piv = rref(aug);
  if (piv.size() < n || piv[n - 1] != n - 1) return std::nullopt;
  Matrix inv(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

// Linearly independent subset basis of the span of the given vectors (reduced rows).
inline std::vector<Vec> span_basis(const std::vector<Vec>& vs, size_t dim) {
  if (vs.empty()) return {};
  Matrix m(vs.size(), dim);
  for (size_t i = 0; i < vs.size(); ++i)
    for (size_t j = 0; j < dim; ++j) m(i, j) = vs[i][j];
  auto piv = rref(m);
  std::vector<Vec> out;
  for (size_t r = 0; r < piv.size(); ++r) out.push_back(m.row(r));
  return out;
}

// True iff v lies in the span of the given vectors.
inline bool in_span(const std::vector<Vec>& basis, const Vec& v) {
  if (is_zero(v)) return true;
  if (basis.empty()) return false;
  return solve(Matrix::from_columns(basis, v.size()), v).has_value();
}

}  // namespace gps

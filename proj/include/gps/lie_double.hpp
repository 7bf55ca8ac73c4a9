#pragma once

#include "gps/poly.hpp"

#include <array>
#include <optional>
#include <variant>

namespace gps {

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotSkew : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Structure constants of a Lie algebra: [v_i, v_j] = sum_k c(i,j)[k] v_k, stored for i < j (0-based).
class LiePresentation {
 public:
  LiePresentation() = default;
  explicit LiePresentation(size_t n) : n_(n) {}

  size_t dim() const { return n_; }

  void set(size_t i, size_t j, size_t k, const Scalar& c) {
    if (i >= n_ || j >= n_ || k >= n_) throw ValidationError("bracket index out of range");
    if (i == j) throw ValidationError("bracket entry with i == j");
    Scalar v = c;
    if (i > j) {
      std::swap(i, j);
      v = -v;
    }
    auto& slot = c_[{i, j}];
    if (slot.empty()) slot = Vec(n_);
    slot[k] = v;
  }

  Vec bracket_basis(size_t i, size_t j) const {
    if (i == j) return Vec(n_);
    bool flip = i > j;
    auto it = c_.find({std::min(i, j), std::max(i, j)});
    if (it == c_.end()) return Vec(n_);
    return flip ? Scalar(-1) * it->second : it->second;
  }

  Vec bracket(const Vec& x, const Vec& y) const {
    Vec out(n_);
    for (const auto& [ij, c] : c_) {
      Scalar coef = x[ij.first] * y[ij.second] - x[ij.second] * y[ij.first];
      if (!coef.is_zero()) axpy(out, coef, c);
    }
    return out;
  }

  const std::map<std::pair<size_t, size_t>, Vec>& entries() const { return c_; }

  bool operator==(const LiePresentation&) const = default;

  bool abelian() const {
    for (const auto& [ij, c] : c_)
      if (!is_zero(c)) return false;
    return true;
  }

  // First basis triple violating Jacobi, if any.
  std::optional<std::array<size_t, 3>> jacobi_violation() const {
    for (size_t i = 0; i < n_; ++i)
      for (size_t j = i + 1; j < n_; ++j)
        for (size_t k = j + 1; k < n_; ++k) {
          Vec a = unit(n_, i), b = unit(n_, j), c = unit(n_, k);
          Vec s = bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) + bracket(c, bracket(a, b));
          if (!is_zero(s)) return std::array<size_t, 3>{i, j, k};
        }
    return std::nullopt;
  }

 private:
  size_t n_ = 0;
  std::map<std::pair<size_t, size_t>, Vec> c_;
};

// Elements of the double are vectors of length 2n in the frame (v_1..v_n, a_1..a_n).
using GenVector = Vec;
// Endomorphisms of the double; column j is the image of frame vector j.
using Endo = Matrix;

inline Vec vector_part(const GenVector& x) { return Vec(x.begin(), x.begin() + x.size() / 2); }
inline Vec covector_part(const GenVector& x) { return Vec(x.begin() + x.size() / 2, x.end()); }

inline GenVector join(const Vec& vec, const Vec& cov) {
  GenVector x = vec;
  x.insert(x.end(), cov.begin(), cov.end());
  return x;
}

inline GenVector frame_v(size_t n, size_t i) { return unit(2 * n, i); }
inline GenVector frame_a(size_t n, size_t i) { return unit(2 * n, n + i); }

// <X + xi, Y + eta> = (xi(Y) + eta(X)) / 2
inline Scalar pairing(const GenVector& x, const GenVector& y) {
  if (x.size() != y.size() || x.size() % 2) throw std::invalid_argument("pairing: dimension mismatch");
  size_t n = x.size() / 2;
  Scalar s;
  for (size_t i = 0; i < n; ++i) {
    if (!x[n + i].is_zero() && !y[i].is_zero()) s += x[n + i] * y[i];
    if (!y[n + i].is_zero() && !x[i].is_zero()) s += y[n + i] * x[i];
  }
  return s * Scalar(1, 2);
}

// Gram matrix of the pairing in the standard frame.
inline Matrix pairing_gram(size_t n) {
  Matrix g(2 * n, 2 * n);
  for (size_t i = 0; i < n; ++i) {
    g(i, n + i) = Scalar(1, 2);
    g(n + i, i) = Scalar(1, 2);
  }
  return g;
}

inline Matrix gram(const std::vector<GenVector>& xs, const std::vector<GenVector>& ys) {
  Matrix g(xs.size(), ys.size());
  for (size_t i = 0; i < xs.size(); ++i)
    for (size_t j = 0; j < ys.size(); ++j) g(i, j) = pairing(xs[i], ys[j]);
  return g;
}

inline bool is_skew(const Endo& phi) {
  if (!phi.square() || phi.rows() % 2) return false;
  Matrix g = pairing_gram(phi.rows() / 2);
  return (phi.transpose() * g + g * phi).is_zero();
}

inline void require_skew(const Endo& phi) {
  if (!is_skew(phi)) throw NotSkew("endomorphism is not skew-symmetric for the pairing");
}

// Dorfman bracket on invariant sections:
// [[X + xi, Y + eta]] = [X, Y] + (Z -> -eta([X, Z]) + xi([Y, Z]))
inline GenVector dorfman(const LiePresentation& g, const GenVector& x, const GenVector& y) {
  size_t n = g.dim();
  if (x.size() != 2 * n || y.size() != 2 * n) throw std::invalid_argument("dorfman: dimension mismatch");
  Vec X = vector_part(x), Y = vector_part(y), xi = covector_part(x), eta = covector_part(y);
  Vec cov(n);
  for (size_t k = 0; k < n; ++k) {
    Vec ek = unit(n, k);
    Vec xz = g.bracket(X, ek), yz = g.bracket(Y, ek);
    for (size_t j = 0; j < n; ++j) {
      if (!xz[j].is_zero()) cov[k] -= eta[j] * xz[j];
      if (!yz[j].is_zero()) cov[k] += xi[j] * yz[j];
    }
  }
  return join(g.bracket(X, Y), cov);
}

inline Scalar courant_T(const LiePresentation& g, const GenVector& x, const GenVector& y, const GenVector& z) {
  return pairing(dorfman(g, x, y), z);
}

// phi = f + (-f^T)
inline Endo classical_lift(const Matrix& f) {
  size_t n = f.rows();
  Endo phi(2 * n, 2 * n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      phi(i, j) = f(i, j);
      phi(n + i, n + j) = -f(j, i);
    }
  return phi;
}

// Minimal polynomial of f + (-f^T) predicted from p = minpoly(f): lcm of p(x) and p(-x),
// i.e. +-p(x)p(-x)/q(x) with q = gcd(p(x), p(-x)).
inline Poly classical_lift_minpoly(const Poly& p) {
  Poly pr = p.reflect();
  Poly q = poly_gcd(p, pr);
  return poly_divrem(p * pr, q).first.make_monic();
}

// Generators of pairing-preserving maps used to conjugate structures.
struct BTransform {
  Matrix b;  // skew n x n: X + xi -> X + xi + b X
};
struct BetaTransform {
  Matrix beta;  // skew n x n: X + xi -> X + beta xi + xi
};
struct FrameChange {
  Matrix a;  // invertible n x n: X + xi -> a X + a^{-T} xi
};
using Generator = std::variant<BTransform, BetaTransform, FrameChange>;

inline Matrix generator_matrix(const Generator& gen, size_t n) {
  Matrix m = Matrix::identity(2 * n);
  std::visit(
      [&](const auto& g) {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, BTransform>) {
          if (!(g.b + g.b.transpose()).is_zero()) throw std::invalid_argument("B-transform must be skew");
          for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) m(n + i, j) = g.b(i, j);
        } else if constexpr (std::is_same_v<T, BetaTransform>) {
          if (!(g.beta + g.beta.transpose()).is_zero()) throw std::invalid_argument("beta-transform must be skew");
          for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) m(i, n + j) = g.beta(i, j);
        } else {
          auto inv = inverse(g.a);
          if (!inv) throw std::invalid_argument("frame change is not invertible");
          Matrix it = inv->transpose();
          for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
              m(i, j) = g.a(i, j);
              m(n + i, n + j) = it(i, j);
            }
        }
      },
      gen);
  return m;
}

// g phi g^{-1} for the product g of the generator word.
inline Endo onn_conjugate(const Endo& phi, const std::vector<Generator>& word) {
  size_t n = phi.rows() / 2;
  Matrix g = Matrix::identity(2 * n);
  for (const auto& gen : word) g = generator_matrix(gen, n) * g;
  auto ginv = inverse(g);
  if (!ginv) throw std::logic_error("conjugating map not invertible");
  return g * phi * *ginv;
}

}  // namespace gps

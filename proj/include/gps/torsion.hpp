#pragma once

#include "gps/forms.hpp"
#include "gps/spectral.hpp"

#include <array>
#include <functional>
#include <map>

namespace gps {

// D1-valued bilinear map on the double, tabulated on frame pairs: at(a, b) = B(e_a, e_b).
class Bilinear {
 public:
  Bilinear() = default;
  explicit Bilinear(size_t dim) : dim_(dim), t_(dim * dim, Vec(dim)) {}

  static Bilinear dorfman_table(const LiePresentation& g) {
    size_t d = 2 * g.dim();
    Bilinear b(d);
    for (size_t i = 0; i < d; ++i)
      for (size_t j = 0; j < d; ++j) b.t_[i * d + j] = dorfman(g, unit(d, i), unit(d, j));
    return b;
  }

  size_t dim() const { return dim_; }
  const Vec& at(size_t a, size_t b) const { return t_[a * dim_ + b]; }
  Vec& at(size_t a, size_t b) { return t_[a * dim_ + b]; }

  Vec operator()(const Vec& x, const Vec& y) const {
    Vec out(dim_);
    for (size_t a = 0; a < dim_; ++a) {
      if (x[a].is_zero()) continue;
      for (size_t b = 0; b < dim_; ++b)
        if (!y[b].is_zero()) axpy(out, x[a] * y[b], at(a, b));
    }
    return out;
  }

  // (x, y) -> B(l x, r y)
  Bilinear precompose(const Matrix& l, const Matrix& r) const {
    Bilinear out(dim_);
    for (size_t a = 0; a < dim_; ++a)
      for (size_t b = 0; b < dim_; ++b) out.at(a, b) = (*this)(l.col(a), r.col(b));
    return out;
  }

  // (x, y) -> m B(x, y)
  Bilinear postcompose(const Matrix& m) const {
    Bilinear out(dim_);
    for (size_t k = 0; k < t_.size(); ++k) out.t_[k] = m * t_[k];
    return out;
  }

  Bilinear& operator+=(const Bilinear& o) {
    for (size_t k = 0; k < t_.size(); ++k) t_[k] = t_[k] + o.t_[k];
    return *this;
  }
  Bilinear& operator-=(const Bilinear& o) {
    for (size_t k = 0; k < t_.size(); ++k) t_[k] = t_[k] - o.t_[k];
    return *this;
  }
  void add_scaled(const Scalar& c, const Bilinear& o) {
    if (c.is_zero()) return;
    for (size_t k = 0; k < t_.size(); ++k) axpy(t_[k], c, o.t_[k]);
  }
  friend Bilinear operator+(Bilinear a, const Bilinear& b) { return a += b; }
  friend Bilinear operator-(Bilinear a, const Bilinear& b) { return a -= b; }
  friend bool operator==(const Bilinear& a, const Bilinear& b) { return a.dim_ == b.dim_ && a.t_ == b.t_; }

  bool is_zero() const {
    for (const auto& v : t_)
      if (!gps::is_zero(v)) return false;
    return true;
  }

  // <B(e_a, e_b), e_c>
  Scalar trilinear(size_t a, size_t b, size_t c) const { return pairing(at(a, b), unit(dim_, c)); }

 private:
  size_t dim_ = 0;
  std::vector<Vec> t_;
};

// Element of D1 (x) D1 (x) D1 with sparse coefficients in the frame. Trilinear maps w are stored
// through the hat isomorphism w(x, y, z) = 8 <w^, x (x) y (x) z>, with the product pairing on D3.
class Tensor3 {
 public:
  using Index = std::array<uint16_t, 3>;

  Tensor3() = default;
  explicit Tensor3(size_t dim) : dim_(dim) {}

  size_t dim() const { return dim_; }
  const std::map<Index, Scalar>& entries() const { return e_; }

  Scalar get(size_t a, size_t b, size_t c) const {
    auto it = e_.find(idx(a, b, c));
    return it == e_.end() ? Scalar(0) : it->second;
  }
  void add(size_t a, size_t b, size_t c, const Scalar& s) {
    if (s.is_zero()) return;
    auto& slot = e_[idx(a, b, c)];
    slot += s;
    if (slot.is_zero()) e_.erase(idx(a, b, c));
  }

  bool is_zero() const { return e_.empty(); }
  friend bool operator==(const Tensor3& a, const Tensor3& b) { return a.dim_ == b.dim_ && a.e_ == b.e_; }
  friend bool operator!=(const Tensor3& a, const Tensor3& b) { return !(a == b); }

  Tensor3& operator+=(const Tensor3& o) {
    for (const auto& [k, v] : o.e_) add(k[0], k[1], k[2], v);
    return *this;
  }
  friend Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }
  friend Tensor3 operator*(const Scalar& c, const Tensor3& t) {
    Tensor3 r(t.dim_);
    if (c.is_zero()) return r;
    for (const auto& [k, v] : t.e_) r.e_[k] = c * v;
    return r;
  }
  friend Tensor3 operator-(const Tensor3& a, const Tensor3& b) { return a + Scalar(-1) * b; }

  // Frame-index partner under the pairing: v_i <-> a_i.
  size_t partner(size_t a) const { return a < dim_ / 2 ? a + dim_ / 2 : a - dim_ / 2; }

  static Tensor3 hat(size_t dim, const std::function<Scalar(size_t, size_t, size_t)>& w) {
    Tensor3 t(dim);
    for (size_t a = 0; a < dim; ++a)
      for (size_t b = 0; b < dim; ++b)
        for (size_t c = 0; c < dim; ++c) {
          Scalar s = w(a, b, c);
          if (!s.is_zero()) t.add(t.partner(a), t.partner(b), t.partner(c), s);
        }
    return t;
  }

  // Value of the underlying trilinear map on frame vectors.
  Scalar unhat(size_t a, size_t b, size_t c) const {
    return get(partner(a), partner(b), partner(c));
  }

  // <t, x (x) y (x) z> with the product pairing.
  Scalar inner(const Vec& x, const Vec& y, const Vec& z) const {
    Scalar s;
    size_t h = dim_ / 2;
    auto pe = [&](size_t a, const Vec& v) { return Scalar(1, 2) * v[a < h ? a + h : a - h]; };
    for (const auto& [k, v] : e_) {
      Scalar f = pe(k[0], x);
      if (f.is_zero()) continue;
      f *= pe(k[1], y);
      if (f.is_zero()) continue;
      f *= pe(k[2], z);
      if (!f.is_zero()) s += v * f;
    }
    return s;
  }

  // Same tensor expanded on an arbitrary basis of the double: coefficient of f_a (x) f_b (x) f_c.
  Tensor3 in_basis(const std::vector<Vec>& basis) const {
    Matrix b = Matrix::from_columns(basis, dim_);
    auto binv = inverse(b);
    if (!binv) throw std::invalid_argument("in_basis: not a basis");
    return apply_slots(*binv, *binv, *binv);
  }

  // (A (x) B (x) C) t
  Tensor3 apply_slots(const Matrix& a, const Matrix& b, const Matrix& c) const {
    std::vector<Scalar> d = dense();
    d = apply_dense(d, a, 0);
    d = apply_dense(d, b, 1);
    d = apply_dense(d, c, 2);
    return from_dense(d);
  }

  // Permute slots: out(k[p0], k[p1], k[p2]) = t(k0, k1, k2)
  Tensor3 permuted(std::array<int, 3> p) const {
    Tensor3 r(dim_);
    for (const auto& [k, v] : e_) {
      Index nk{};
      for (int s = 0; s < 3; ++s) nk[p[s]] = k[s];
      r.e_[nk] = v;
    }
    return r;
  }

  std::vector<Scalar> dense() const {
    std::vector<Scalar> d(dim_ * dim_ * dim_);
    for (const auto& [k, v] : e_) d[(k[0] * dim_ + k[1]) * dim_ + k[2]] = v;
    return d;
  }
  Tensor3 from_dense(const std::vector<Scalar>& d) const {
    Tensor3 r(dim_);
    for (size_t a = 0; a < dim_; ++a)
      for (size_t b = 0; b < dim_; ++b)
        for (size_t c = 0; c < dim_; ++c) {
          const Scalar& s = d[(a * dim_ + b) * dim_ + c];
          if (!s.is_zero()) r.e_[idx(a, b, c)] = s;
        }
    return r;
  }

  std::vector<Scalar> apply_dense(const std::vector<Scalar>& d, const Matrix& m, int slot) const {
    size_t n = dim_;
    std::vector<Scalar> out(d.size());
    size_t stride[3] = {n * n, n, 1};
    for (size_t flat = 0; flat < d.size(); ++flat) {
      if (d[flat].is_zero()) continue;
      size_t k = (flat / stride[slot]) % n;
      size_t base = flat - k * stride[slot];
      for (size_t r = 0; r < n; ++r)
        if (!m(r, k).is_zero()) out[base + r * stride[slot]] += m(r, k) * d[flat];
    }
    return out;
  }

  std::string str(const std::function<std::string(size_t)>& name) const {
    std::string s;
    for (const auto& [k, v] : e_) {
      std::string c = v.str();
      if (!s.empty()) s += (c[0] == '-') ? " " : " + ";
      s += c + "*" + name(k[0]) + name(k[1]) + name(k[2]);
    }
    return s.empty() ? "0" : s;
  }

 private:
  static Index idx(size_t a, size_t b, size_t c) {
    return {static_cast<uint16_t>(a), static_cast<uint16_t>(b), static_cast<uint16_t>(c)};
  }

  size_t dim_ = 0;
  std::map<Index, Scalar> e_;
};

inline std::string frame_name(size_t n, size_t a) {
  return a < n ? "v" + std::to_string(a + 1) : "a" + std::to_string(a - n + 1);
}

inline Tensor3 hat_of(const Bilinear& b) {
  return Tensor3::hat(b.dim(), [&](size_t a, size_t c, size_t e) { return b.trilinear(a, c, e); });
}

// Hatted Dorfman tensor <[[x, y]], z>.
inline Tensor3 base_tensor(const LiePresentation& g) { return hat_of(Bilinear::dorfman_table(g)); }

// Polynomials in u, v, w acting on bilinear maps: u through phi on the output, v and w through
// phi on the first and second arguments.
class PolyUVW {
 public:
  using Exp = std::array<unsigned, 3>;

  PolyUVW() = default;
  PolyUVW(const Scalar& c) {
    if (!c.is_zero()) t_[{0, 0, 0}] = c;
  }
  static PolyUVW u() { return mono(1, 0, 0); }
  static PolyUVW v() { return mono(0, 1, 0); }
  static PolyUVW w() { return mono(0, 0, 1); }
  static PolyUVW mono(unsigned i, unsigned j, unsigned k, const Scalar& c = 1) {
    PolyUVW p;
    if (!c.is_zero()) p.t_[{i, j, k}] = c;
    return p;
  }

  const std::map<Exp, Scalar>& terms() const { return t_; }

  PolyUVW& operator+=(const PolyUVW& o) {
    for (const auto& [e, c] : o.t_) {
      auto& s = t_[e];
      s += c;
      if (s.is_zero()) t_.erase(e);
    }
    return *this;
  }
  friend PolyUVW operator+(PolyUVW a, const PolyUVW& b) { return a += b; }
  friend PolyUVW operator-(PolyUVW a, const PolyUVW& b) { return a += Scalar(-1) * b; }
  friend PolyUVW operator*(const Scalar& c, const PolyUVW& p) {
    PolyUVW r;
    if (c.is_zero()) return r;
    for (const auto& [e, s] : p.t_) r.t_[e] = c * s;
    return r;
  }
  friend PolyUVW operator*(const PolyUVW& a, const PolyUVW& b) {
    PolyUVW r;
    for (const auto& [ea, ca] : a.t_)
      for (const auto& [eb, cb] : b.t_) r += mono(ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ca * cb);
    return r;
  }
  PolyUVW pow(unsigned k) const {
    PolyUVW r(1);
    for (unsigned j = 0; j < k; ++j) r = r * *this;
    return r;
  }
  friend bool operator==(const PolyUVW& a, const PolyUVW& b) { return a.t_ == b.t_; }

  // p(s) for a univariate p and s in C[u, v, w]
  static PolyUVW compose(const Poly& p, const PolyUVW& s) {
    PolyUVW r, pw(1);
    for (size_t k = 0; k < p.coeffs().size(); ++k) {
      r += p.coeff(k) * pw;
      if (k + 1 < p.coeffs().size()) pw = pw * s;
    }
    return r;
  }

  unsigned max_exponent() const {
    unsigned m = 0;
    for (const auto& [e, c] : t_) m = std::max({m, e[0], e[1], e[2]});
    return m;
  }

 private:
  std::map<Exp, Scalar> t_;
};

// Action on hatted tensors: u -> phi on the third factor, v -> -phi on the first, w -> -phi on the second.
inline Tensor3 apply(const PolyUVW& p, const Tensor3& zeta, const Endo& phi) {
  size_t d = zeta.dim();
  std::vector<Matrix> pw{Matrix::identity(d)}, npw{Matrix::identity(d)};
  for (unsigned k = 1; k <= p.max_exponent(); ++k) {
    pw.push_back(phi * pw.back());
    npw.push_back(Scalar(-1) * (phi * npw.back()));
  }
  auto dz = zeta.dense();
  std::vector<Scalar> acc(dz.size());
  // Group by (j, k) so the slot-1/slot-2 application is shared across u powers.
  std::map<std::pair<unsigned, unsigned>, std::vector<std::pair<unsigned, Scalar>>> groups;
  for (const auto& [e, c] : p.terms()) groups[{e[1], e[2]}].emplace_back(e[0], c);
  for (const auto& [jk, us] : groups) {
    auto base = zeta.apply_dense(zeta.apply_dense(dz, npw[jk.first], 0), npw[jk.second], 1);
    for (const auto& [i, c] : us) {
      auto t = zeta.apply_dense(base, pw[i], 2);
      for (size_t k = 0; k < t.size(); ++k)
        if (!t[k].is_zero()) acc[k] += c * t[k];
    }
  }
  return zeta.from_dense(acc);
}

inline PolyUVW t_poly() {
  auto u = PolyUVW::u(), v = PolyUVW::v(), w = PolyUVW::w();
  return (u - v) * (u - w);
}
inline PolyUVW nijenhuis_poly(unsigned n) { return t_poly().pow(n); }
inline PolyUVW shifted_poly(unsigned n) { return t_poly().pow(n) * (PolyUVW::v() + PolyUVW::w()); }
inline PolyUVW minimal_poly_uvw(const Poly& p) {
  return PolyUVW::compose(p, PolyUVW::u() - PolyUVW::v() - PolyUVW::w());
}

// ---------------------------------------------------------------------------------------------
// Recursion route

struct TorsionTower {
  std::vector<Bilinear> t;  // t[n] = T^(n)
  std::vector<Bilinear> s;  // s[n] = S^(n)
};

inline Bilinear shift_args(const Bilinear& b, const Endo& phi) {
  Matrix id = Matrix::identity(phi.rows());
  return b.precompose(phi, id) + b.precompose(id, phi);
}

// T^(0) = Dorfman, S^(n)(x,y) = T^(n)(phi x, y) + T^(n)(x, phi y),
// T^(n+1) = phi^2 T^(n) + T^(n)(phi, phi) - phi S^(n).
inline TorsionTower torsion_tower(const LiePresentation& g, const Endo& phi, unsigned nmax) {
  TorsionTower tw;
  Matrix phi2 = phi * phi;
  tw.t.push_back(Bilinear::dorfman_table(g));
  for (unsigned n = 0;; ++n) {
    tw.s.push_back(shift_args(tw.t[n], phi));
    if (n == nmax) break;
    Bilinear next = tw.t[n].postcompose(phi2) + tw.t[n].precompose(phi, phi) - tw.s[n].postcompose(phi);
    tw.t.push_back(std::move(next));
  }
  return tw;
}

inline Bilinear courant_nijenhuis(const LiePresentation& g, const Endo& phi) { return torsion_tower(g, phi, 1).t[1]; }
inline Bilinear shifted_torsion(const LiePresentation& g, const Endo& phi) { return torsion_tower(g, phi, 1).s[1]; }

// Closed forms on hatted tensors.
inline Tensor3 higher_closed(const LiePresentation& g, const Endo& phi, unsigned n) {
  return apply(nijenhuis_poly(n), base_tensor(g), phi);
}
inline Tensor3 shifted_higher_closed(const LiePresentation& g, const Endo& phi, unsigned n) {
  return apply(shifted_poly(n), base_tensor(g), phi);
}

// ---------------------------------------------------------------------------------------------
// Minimal torsion, three routes. All are compared through the hatted Courant tensor.

// Route 1: C(x,y,z) = sum_i a_i (-1)^i sum multinom(i; i1,i2,i3) T(phi^i1 x, phi^i2 y, phi^i3 z).
inline Tensor3 minimal_route_multinomial(const LiePresentation& g, const Endo& phi, const Poly& p) {
  size_t d = phi.rows();
  Bilinear dorf = Bilinear::dorfman_table(g);
  std::vector<Scalar> t(d * d * d);
  for (size_t a = 0; a < d; ++a)
    for (size_t b = 0; b < d; ++b)
      for (size_t c = 0; c < d; ++c) t[(a * d + b) * d + c] = dorf.trilinear(a, b, c);
  long deg = p.degree();
  std::vector<Matrix> pw{Matrix::identity(d)};
  for (long k = 1; k <= deg; ++k) pw.push_back(phi * pw.back());
  std::vector<Scalar> c_out(d * d * d);
  // T(A x, B y, C z) on frame triples = sum A_ia B_jb C_kc T_ijk
  auto contract = [&](const Matrix& A, const Matrix& B, const Matrix& C) {
    std::vector<Scalar> s1(d * d * d), s2(d * d * d), s3(d * d * d);
    for (size_t i = 0; i < d; ++i)
      for (size_t j = 0; j < d; ++j)
        for (size_t k = 0; k < d; ++k) {
          const Scalar& v = t[(i * d + j) * d + k];
          if (v.is_zero()) continue;
          for (size_t a = 0; a < d; ++a)
            if (!A(i, a).is_zero()) s1[(a * d + j) * d + k] += A(i, a) * v;
        }
    for (size_t a = 0; a < d; ++a)
      for (size_t j = 0; j < d; ++j)
        for (size_t k = 0; k < d; ++k) {
          const Scalar& v = s1[(a * d + j) * d + k];
          if (v.is_zero()) continue;
          for (size_t b = 0; b < d; ++b)
            if (!B(j, b).is_zero()) s2[(a * d + b) * d + k] += B(j, b) * v;
        }
    for (size_t a = 0; a < d; ++a)
      for (size_t b = 0; b < d; ++b)
        for (size_t k = 0; k < d; ++k) {
          const Scalar& v = s2[(a * d + b) * d + k];
          if (v.is_zero()) continue;
          for (size_t c = 0; c < d; ++c)
            if (!C(k, c).is_zero()) s3[(a * d + b) * d + c] += C(k, c) * v;
        }
    return s3;
  };
  for (long i = 0; i <= deg; ++i) {
    Scalar ai = p.coeff(static_cast<size_t>(i));
    if (ai.is_zero()) continue;
    for (long i1 = 0; i1 <= i; ++i1)
      for (long i2 = 0; i1 + i2 <= i; ++i2) {
        long i3 = i - i1 - i2;
        Scalar coef = ai * Scalar(mpq_class(multinomial(i1, i2, i3))) * Scalar(i % 2 ? -1 : 1);
        auto s = contract(pw[i1], pw[i2], pw[i3]);
        for (size_t k = 0; k < s.size(); ++k)
          if (!s[k].is_zero()) c_out[k] += coef * s[k];
      }
  }
  return Tensor3::hat(d, [&](size_t a, size_t b, size_t c) { return c_out[(a * d + b) * d + c]; });
}

// Expansion coefficients of the minimal torsion in higher torsions (even P) and shifted higher
// torsions (odd P). The inner sum runs over every q for which both binomials are nonzero.
inline Scalar expansion_coefficient(long n, long m, long r, bool odd) {
  static std::map<std::array<long, 4>, Scalar> memo;
  std::array<long, 4> key{n, m, r, odd ? 1 : 0};
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  long top = odd ? 2 * n + 1 : 2 * n;
  long s = 2 * n - 2 * m - r;
  mpq_class total = 0;
  for (long k = m; k <= n; ++k)
    for (long q = 0; q <= 2 * n - 2 * k; ++q) {
      if (s - q < 0 || s - q > 2 * k - 2 * m) continue;
      mpz_class term = binomial(top, 2 * k) * binomial(k, m) * binomial(2 * k - 2 * m, s - q) * binomial(2 * n - 2 * k, q);
      if ((q + r) % 2) term = -term;
      total += mpq_class(term);
    }
  // 4^(m-n)
  mpz_class four_pow;
  mpz_ui_pow_ui(four_pow.get_mpz_t(), 4, static_cast<unsigned long>(n - m));
  total /= mpq_class(four_pow);
  return memo[key] = Scalar(total);
}

// The same coefficient with the alternative summation bounds read literally (q from 2n-2m-r up to
// 2n-2k-r, empty when the lower bound exceeds the upper one).
inline Scalar expansion_coefficient_literal(long n, long m, long r, bool odd) {
  long top = odd ? 2 * n + 1 : 2 * n;
  mpq_class total = 0;
  for (long k = m; k <= n; ++k)
    for (long q = 2 * n - 2 * m - r; q <= 2 * n - 2 * k - r; ++q) {
      if (q < 0) continue;
      mpz_class term = binomial(top, 2 * k) * binomial(k, m) * binomial(2 * k - 2 * m, 2 * n - 2 * m - q - r) *
                       binomial(2 * n - 2 * k, q);
      if ((q + r) % 2) term = -term;
      total += mpq_class(term);
    }
  mpz_class four_pow;
  mpz_ui_pow_ui(four_pow.get_mpz_t(), 4, static_cast<unsigned long>(n - m));
  return Scalar(total / mpq_class(four_pow));
}

// Route 2: combination of (shifted) higher torsions from the recursion.
inline Bilinear minimal_route_expansion_bilinear(const LiePresentation& g, const Endo& phi, const Poly& p,
                                                 const std::function<Scalar(long, long, long, bool)>& coef =
                                                     expansion_coefficient) {
  bool odd = p.is_odd();
  if (!odd && !p.is_even()) throw std::invalid_argument("minimal torsion expansion needs an even or odd polynomial");
  long deg = p.degree();
  long N = odd ? (deg - 1) / 2 : deg / 2;
  size_t d = phi.rows();
  Bilinear out(d);
  if (N < 1) return out;
  auto tw = torsion_tower(g, phi, static_cast<unsigned>(N));
  std::vector<Matrix> pw{Matrix::identity(d)};
  for (long k = 1; k <= 2 * N; ++k) pw.push_back(phi * pw.back());
  for (long n = 1; n <= N; ++n) {
    Scalar a = p.coeff(static_cast<size_t>(odd ? 2 * n + 1 : 2 * n));
    if (a.is_zero()) continue;
    for (long m = 1; m <= n; ++m)
      for (long r = 0; r <= 2 * n - 2 * m; ++r) {
        Scalar c = coef(n, m, r, odd);
        if (c.is_zero()) continue;
        const Bilinear& base = odd ? tw.s[m] : tw.t[m];
        Scalar w = odd ? Scalar(-1) * a * c : Scalar(2) * a * c;
        out.add_scaled(w, base.precompose(pw[r], pw[2 * n - 2 * m - r]));
      }
  }
  return out;
}

inline Tensor3 minimal_route_expansion(const LiePresentation& g, const Endo& phi, const Poly& p) {
  return hat_of(minimal_route_expansion_bilinear(g, phi, p));
}

// Route 3: derived brackets of the minimal operator on the form space.
inline Bilinear minimal_route_operator_bilinear(const LiePresentation& g, const Endo& phi, const Poly& p) {
  FormOperator delta = minimal_operator(g, phi, p);
  size_t d = phi.rows();
  Bilinear out(d);
  for (size_t a = 0; a < d; ++a)
    for (size_t b = 0; b < d; ++b) out.at(a, b) = as_generalized_vector(derived_bracket_op(delta, unit(d, a), unit(d, b)));
  return out;
}

inline Tensor3 minimal_route_operator(const LiePresentation& g, const Endo& phi, const Poly& p) {
  return hat_of(minimal_route_operator_bilinear(g, phi, p));
}

struct MinimalTorsion {
  Tensor3 multinomial, expansion, operator_route, closed;
  bool routes_agree() const {
    return multinomial == expansion && expansion == operator_route && operator_route == closed;
  }
  bool minimal() const { return multinomial.is_zero(); }
};

inline MinimalTorsion minimal_torsion(const LiePresentation& g, const Endo& phi, const Poly& p) {
  MinimalTorsion m;
  m.multinomial = minimal_route_multinomial(g, phi, p);
  m.expansion = minimal_route_expansion(g, phi, p);
  m.operator_route = minimal_route_operator(g, phi, p);
  m.closed = apply(minimal_poly_uvw(p), base_tensor(g), phi);
  return m;
}

// ---------------------------------------------------------------------------------------------
// Bivariate torsion

struct NonCommuting : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline Bilinear bivariate(const LiePresentation& g, const Endo& p1, const Endo& p2) {
  if (p1 * p2 != p2 * p1) throw NonCommuting("bivariate torsion needs commuting endomorphisms");
  return courant_nijenhuis(g, p1 + p2) - courant_nijenhuis(g, p1) - courant_nijenhuis(g, p2);
}

// (u'-v'-w')(u''-v''-w'') applied to the Dorfman tensor, hatted.
inline Tensor3 bivariate_product(const LiePresentation& g, const Endo& p1, const Endo& p2) {
  Tensor3 z = base_tensor(g);
  PolyUVW s = PolyUVW::u() - PolyUVW::v() - PolyUVW::w();
  return apply(s, apply(s, z, p2), p1);
}

// ---------------------------------------------------------------------------------------------
// Identities along Jordan chains

struct Chain {
  Scalar lambda;
  std::vector<Vec> b;  // phi b_j = lambda b_j + b_{j-1}
};

inline std::vector<Chain> jordan_chains(const Endo& phi, const BlockDecomposition& bd) {
  std::vector<Chain> out;
  for (const auto& blk : bd.blocks)
    for (const auto& c : blk.chains) {
      Vec image = phi * c[0];
      Scalar l;
      for (size_t k = 0; k < c[0].size(); ++k)
        if (!c[0][k].is_zero()) {
          l = image[k] / c[0][k];
          break;
        }
      out.push_back({l, c});
    }
  return out;
}

struct ChainFailure {
  std::string identity;
  std::string where;
};

// Courant tensor along chains: C(x_a, y_b, z_c) = (-1)^N sum_s P^(s)(l+m+n)/s! (S^s T)(x_a, y_b, z_c).
inline std::vector<ChainFailure> courant_chain_failures(const LiePresentation& g, const Poly& p,
                                                        const std::vector<Chain>& chains, const Tensor3& courant_hat) {
  std::vector<ChainFailure> bad;
  Bilinear dorf = Bilinear::dorfman_table(g);
  auto T = [&](const Vec& x, const Vec& y, const Vec& z) { return pairing(dorf(x, y), z); };
  auto C = [&](const Vec& x, const Vec& y, const Vec& z) { return Scalar(8) * courant_hat.inner(x, y, z); };
  std::vector<Poly> deriv{p};
  for (long k = 1; k <= p.degree(); ++k) {
    Vec c;
    const Poly& q = deriv.back();
    for (size_t j = 1; j < q.coeffs().size(); ++j) c.push_back(q.coeff(j) * Scalar(static_cast<long>(j)));
    deriv.push_back(Poly(c));
  }
  Scalar sign = p.degree() % 2 ? Scalar(-1) : Scalar(1);
  std::vector<mpz_class> facts{1};
  for (long s = 1; s <= p.degree(); ++s) facts.push_back(facts.back() * s);
  for (size_t i = 0; i < chains.size(); ++i)
    for (size_t j = 0; j < chains.size(); ++j)
      for (size_t k = 0; k < chains.size(); ++k) {
        const auto &X = chains[i], &Y = chains[j], &Z = chains[k];
        Scalar sigma = X.lambda + Y.lambda + Z.lambda;
        for (size_t a = 0; a < X.b.size(); ++a)
          for (size_t b = 0; b < Y.b.size(); ++b)
            for (size_t c = 0; c < Z.b.size(); ++c) {
              Scalar rhs;
              for (long s = 0; s <= p.degree(); ++s) {
                Scalar ps = deriv[s](sigma);
                if (ps.is_zero()) continue;
                Scalar sum;
                for (long s1 = 0; s1 <= s && s1 <= static_cast<long>(a); ++s1)
                  for (long s2 = 0; s1 + s2 <= s && s2 <= static_cast<long>(b); ++s2) {
                    long s3 = s - s1 - s2;
                    if (s3 > static_cast<long>(c)) continue;
                    Scalar t = T(X.b[a - s1], Y.b[b - s2], Z.b[c - s3]);
                    if (!t.is_zero()) sum += Scalar(mpq_class(multinomial(s1, s2, s3))) * t;
                  }
                rhs += ps * sum / Scalar(mpq_class(facts[s]));
              }
              if (C(X.b[a], Y.b[b], Z.b[c]) != sign * rhs)
                bad.push_back({"courant-chain", "chains (" + std::to_string(i) + "," + std::to_string(j) + "," +
                                                    std::to_string(k) + ") levels (" + std::to_string(a + 1) + "," +
                                                    std::to_string(b + 1) + "," + std::to_string(c + 1) + ")"});
            }
      }
  return bad;
}

// R(phi)^(p+q-1) [[x, y]] = 0 with R(t) = P(l + m - t), x at level p of an l-chain, y at level q of an m-chain.
inline std::vector<ChainFailure> bracket_annihilator_failures(const LiePresentation& g, const Endo& phi, const Poly& p,
                                                              const std::vector<Chain>& chains) {
  std::vector<ChainFailure> bad;
  std::map<std::pair<std::string, size_t>, Matrix> cache;
  for (size_t i = 0; i < chains.size(); ++i)
    for (size_t j = 0; j < chains.size(); ++j) {
      Scalar sum = chains[i].lambda + chains[j].lambda;
      // R(t) = P(sum - t)
      Poly r;
      Poly lin(Vec{sum, Scalar(-1)});
      Poly pw(Scalar(1));
      for (size_t k = 0; k < p.coeffs().size(); ++k) {
        r += Poly(p.coeff(k)) * pw;
        pw = pw * lin;
      }
      Matrix rphi = r(phi);
      for (size_t a = 0; a < chains[i].b.size(); ++a)
        for (size_t b = 0; b < chains[j].b.size(); ++b) {
          size_t e = a + b + 1;  // (a+1) + (b+1) - 1
          auto key = std::make_pair(sum.str(), e);
          auto it = cache.find(key);
          if (it == cache.end()) it = cache.emplace(key, rphi.pow(static_cast<unsigned>(e))).first;
          if (!is_zero(it->second * dorfman(g, chains[i].b[a], chains[j].b[b])))
            bad.push_back({"bracket-annihilator", "chains (" + std::to_string(i) + "," + std::to_string(j) +
                                                      ") levels (" + std::to_string(a + 1) + "," +
                                                      std::to_string(b + 1) + ")"});
        }
    }
  return bad;
}

// ---------------------------------------------------------------------------------------------
// Summary of the tower of torsions

struct TorsionSummary {
  unsigned max_order = 0;
  std::vector<bool> t_zero, s_zero;  // index n = 0..max_order
  std::vector<Tensor3> t_hat, s_hat;
  bool tower_matches_closed = true;
};

inline TorsionSummary torsion_summary(const LiePresentation& g, const Endo& phi, unsigned max_order) {
  TorsionSummary ts;
  ts.max_order = max_order;
  auto tw = torsion_tower(g, phi, max_order);
  Tensor3 base = base_tensor(g);
  for (unsigned n = 0; n <= max_order; ++n) {
    ts.t_hat.push_back(hat_of(tw.t[n]));
    ts.s_hat.push_back(hat_of(tw.s[n]));
    ts.t_zero.push_back(ts.t_hat.back().is_zero());
    ts.s_zero.push_back(ts.s_hat.back().is_zero());
    if (apply(nijenhuis_poly(n), base, phi) != ts.t_hat.back()) ts.tower_matches_closed = false;
    if (apply(shifted_poly(n), base, phi) != ts.s_hat.back()) ts.tower_matches_closed = false;
  }
  return ts;
}

}  // namespace gps

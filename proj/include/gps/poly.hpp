#pragma once

#include "gps/matrix.hpp"

#include <algorithm>
#include <map>
#include <utility>

namespace gps {

struct UnsupportedSpectrum : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Univariate polynomial, coefficients from degree 0 upwards.
class Poly {
 public:
  Poly() = default;
  explicit Poly(Vec coeffs) : c_(std::move(coeffs)) { trim(); }
  Poly(const Scalar& s) : c_{s} { trim(); }

  static Poly x() { return Poly(Vec{0, 1}); }
  static Poly monomial(size_t k, const Scalar& c = 1) {
    Vec v(k + 1);
    v[k] = c;
    return Poly(v);
  }
  // x - r
  static Poly linear(const Scalar& r) { return Poly(Vec{-r, 1}); }

  // Degree, or -1 for the zero polynomial.
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const Vec& coeffs() const { return c_; }
  Scalar coeff(size_t k) const { return k < c_.size() ? c_[k] : Scalar(0); }
  const Scalar& lead() const { return c_.back(); }
  bool monic() const { return !c_.empty() && c_.back().is_one(); }

  Poly& operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    Vec r(a.c_.size() + b.c_.size() - 1);
    for (size_t i = 0; i < a.c_.size(); ++i)
      for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return Poly(r);
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  Poly pow(unsigned k) const {
    Poly r(1);
    for (unsigned j = 0; j < k; ++j) r = r * *this;
    return r;
  }

  Scalar operator()(const Scalar& x) const {
    Scalar r;
    for (size_t k = c_.size(); k-- > 0;) r = r * x + c_[k];
    return r;
  }

  Matrix operator()(const Matrix& m) const {
    Matrix r(m.rows(), m.cols());
    for (size_t k = c_.size(); k-- > 0;) {
      r = r * m;
      for (size_t i = 0; i < m.rows(); ++i) r(i, i) += c_[k];
    }
    return r;
  }

  // p(-x)
  Poly reflect() const {
    Vec v = c_;
    for (size_t k = 1; k < v.size(); k += 2) v[k] = -v[k];
    return Poly(v);
  }

  Poly make_monic() const {
    if (is_zero()) return *this;
    Scalar inv = lead().inv();
    Vec v = c_;
    for (auto& s : v) s *= inv;
    return Poly(v);
  }

  bool is_even() const {
    for (size_t k = 1; k < c_.size(); k += 2)
      if (!c_[k].is_zero()) return false;
    return true;
  }
  bool is_odd() const {
    for (size_t k = 0; k < c_.size(); k += 2)
      if (!c_[k].is_zero()) return false;
    return true;
  }

  std::string str() const {
    if (is_zero()) return "0";
    std::string out;
    for (size_t k = c_.size(); k-- > 0;) {
      const Scalar& s = c_[k];
      if (s.is_zero()) continue;
      std::string cs = s.str();
      if (!s.is_real() && sgn(s.re()) != 0) cs = "(" + cs + ")";
      std::string term;
      if (k == 0) {
        term = cs;
      } else {
        std::string var = k == 1 ? "x" : "x^" + std::to_string(k);
        if (s.is_one())
          term = var;
        else if (s == Scalar(-1))
          term = "-" + var;
        else
          term = cs + "*" + var;
      }
      if (out.empty())
        out = term;
      else if (term[0] == '-')
        out += " - " + term.substr(1);
      else
        out += " + " + term;
    }
    return out;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  Vec c_;
};

inline std::pair<Poly, Poly> poly_divrem(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  Vec r = a.coeffs();
  long db = b.degree();
  long dq = a.degree() - db;
  if (dq < 0) return {Poly(), a};
  Vec q(dq + 1);
  Scalar inv = b.lead().inv();
  for (long k = dq; k >= 0; --k) {
    Scalar c = r[k + db] * inv;
    q[k] = c;
    if (c.is_zero()) continue;
    for (long j = 0; j <= db; ++j) r[k + j] -= c * b.coeff(j);
  }
  r.resize(db);
  return {Poly(q), Poly(r)};
}

inline Poly poly_gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    auto r = poly_divrem(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.make_monic();
}

// Monic minimal polynomial: first linear dependence among I, M, M^2, ...
inline Poly min_poly_of_matrix(const Matrix& m) {
  if (!m.square()) throw std::invalid_argument("minimal polynomial of non-square matrix");
  size_t n = m.rows();
  std::vector<Vec> powers;
  Matrix p = Matrix::identity(n);
  for (size_t k = 0; k <= n; ++k) {
    Vec target = p.flat();
    if (!powers.empty()) {
      auto sol = solve(Matrix::from_columns(powers, n * n), target);
      if (sol) {
        Vec c(k + 1);
        for (size_t j = 0; j < k; ++j) c[j] = -(*sol)[j];
        c[k] = 1;
        return Poly(c);
      }
    }
    powers.push_back(std::move(target));
    p = p * m;
  }
  throw std::logic_error("minimal polynomial search exceeded matrix size");
}

struct Root {
  Scalar lambda;
  int mult;
};

namespace detail {

inline std::vector<mpz_class> divisors(mpz_class v) {
  v = abs(v);
  std::vector<mpz_class> small, large;
  for (mpz_class d = 1; d * d <= v; ++d) {
    if (v % d == 0) {
      small.push_back(d);
      if (d * d != v) large.push_back(v / d);
    }
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

inline bool rational_sqrt(const mpq_class& q, mpq_class& out) {
  if (sgn(q) < 0) return false;
  mpz_class n = q.get_num(), d = q.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return false;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  out = mpq_class(rn, rd);
  out.canonicalize();
  return true;
}

// Rational roots with multiplicity of a real rational polynomial with q(0) != 0.
inline std::vector<std::pair<mpq_class, int>> rational_roots(Poly q, std::string_view what) {
  std::vector<std::pair<mpq_class, int>> out;
  while (q.degree() > 0) {
    mpz_class l = 1;
    for (const auto& c : q.coeffs()) l = lcm(l, c.re().get_den());
    std::vector<mpz_class> ints;
    for (const auto& c : q.coeffs()) ints.push_back(mpz_class(c.re() * l));
    bool found = false;
    for (const auto& p : divisors(ints.front())) {
      for (const auto& d : divisors(ints.back())) {
        for (int s : {1, -1}) {
          mpq_class r(s * p, d);
          r.canonicalize();
          if (!q(Scalar(r)).is_zero()) continue;
          int m = 0;
          Poly lin = Poly::linear(Scalar(r));
          while (true) {
            auto [qq, rr] = poly_divrem(q, lin);
            if (!rr.is_zero()) break;
            q = qq;
            ++m;
          }
          out.emplace_back(r, m);
          found = true;
          break;
        }
        if (found) break;
      }
      if (found) break;
    }
    if (!found)
      throw UnsupportedSpectrum("factor " + q.str() + " of " + std::string(what) +
                                " has roots outside Q(i)");
  }
  return out;
}

}  // namespace detail

// Roots of an even or odd real polynomial P(x) = x^k Q(x^2), all required to lie in Q(i).
inline std::vector<Root> spectrum_extract(const Poly& p) {
  if (p.is_zero() || !p.monic()) throw std::invalid_argument("spectrum_extract: polynomial must be monic");
  for (const auto& c : p.coeffs())
    if (!c.is_real()) throw std::invalid_argument("spectrum_extract: coefficients must be real");
  if (!p.is_even() && !p.is_odd()) throw std::invalid_argument("spectrum_extract: polynomial is neither even nor odd");
  size_t k = 0;
  while (p.coeff(k).is_zero()) ++k;
  Vec qc;
  for (size_t j = k; j < p.coeffs().size(); j += 2) qc.push_back(p.coeff(j));
  Poly q(qc);
  std::vector<Root> roots;
  if (k > 0) roots.push_back({Scalar(0), static_cast<int>(k)});
  for (auto& [y, m] : detail::rational_roots(q, p.str())) {
    mpq_class r;
    if (detail::rational_sqrt(y, r)) {
      roots.push_back({Scalar(r), m});
      roots.push_back({Scalar(-r), m});
    } else if (detail::rational_sqrt(-y, r)) {
      roots.push_back({Scalar(0, r), m});
      roots.push_back({Scalar(0, -r), m});
    } else {
      throw UnsupportedSpectrum("factor x^2 - (" + y.get_str() + ") of " + p.str() +
                                " has roots outside Q(i)");
    }
  }
  std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) { return lex_less(a.lambda, b.lambda); });
  return roots;
}

inline Poly from_roots(const std::vector<Root>& roots) {
  Poly r(1);
  for (const auto& [l, m] : roots) r = r * Poly::linear(l).pow(m);
  return r;
}

// Q_{lambda,i} = P / (x - lambda)^i
inline Poly cofactor(const Poly& p, const Scalar& lambda, int i) {
  auto [q, r] = poly_divrem(p, Poly::linear(lambda).pow(i));
  if (!r.is_zero()) throw std::invalid_argument("cofactor: root multiplicity exceeded");
  return q;
}

// a[{lambda index, i}] with 1/P = sum a / (x - lambda)^i, i = 1..m(lambda).
using PartialFractions = std::map<std::pair<size_t, int>, Scalar>;

inline PartialFractions partial_fractions(const Poly& p, const std::vector<Root>& roots) {
  if (from_roots(roots) != p) throw std::invalid_argument("partial_fractions: roots inconsistent with polynomial");
  PartialFractions out;
  for (size_t r = 0; r < roots.size(); ++r) {
    const auto& [lam, m] = roots[r];
    // R(x) = P/(x-lam)^m, shifted so that t = x - lam.
    Poly rest = cofactor(p, lam, m);
    Vec shifted(rest.coeffs().size());
    {
      Poly acc;
      Poly t_plus = Poly(Vec{lam, 1});
      Poly power(1);
      for (size_t k = 0; k < rest.coeffs().size(); ++k) {
        acc += Poly(rest.coeff(k)) * power;
        power = power * t_plus;
      }
      shifted = acc.coeffs();
    }
    // Power series inverse of R(t + lam) to order m - 1.
    Vec inv(m);
    Scalar r0inv = shifted[0].inv();
    for (int j = 0; j < m; ++j) {
      Scalar s = j == 0 ? Scalar(1) : Scalar(0);
      for (int l = 1; l <= j; ++l)
        if (static_cast<size_t>(l) < shifted.size()) s -= shifted[l] * inv[j - l];
      inv[j] = s * r0inv;
    }
    for (int i = 1; i <= m; ++i) out[{r, i}] = inv[m - i];
  }
  Poly check;
  for (const auto& [key, a] : out) check += Poly(a) * cofactor(p, roots[key.first].lambda, key.second);
  if (check != Poly(1)) throw std::logic_error("partial_fractions: recombination failed");
  return out;
}

}  // namespace gps

#pragma once

#include <gmpxx.h>

#include <cctype>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gps {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exact Gaussian rational re + im*i. Both parts are kept canonical by mpq_class.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long v) : re_(v) {}
  Scalar(const mpq_class& re, const mpq_class& im = 0) : re_(re), im_(im) {
    re_.canonicalize();
    im_.canonicalize();
  }
  Scalar(long num, long den) : re_(num, den) { re_.canonicalize(); }

  static Scalar I() { return Scalar(mpq_class(0), mpq_class(1)); }

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  bool is_one() const { return re_ == 1 && sgn(im_) == 0; }

  Scalar conj() const { return Scalar(re_, -im_); }
  mpq_class norm2() const { return re_ * re_ + im_ * im_; }

  Scalar operator-() const { return Scalar(-re_, -im_); }

  Scalar& operator+=(const Scalar& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  Scalar& operator-=(const Scalar& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  Scalar& operator*=(const Scalar& o) {
    if (sgn(im_) == 0 && sgn(o.im_) == 0) {
      re_ *= o.re_;
      return *this;
    }
    mpq_class r = re_ * o.re_ - im_ * o.im_;
    mpq_class i = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(i);
    return *this;
  }
  Scalar& operator/=(const Scalar& o) {
    if (o.is_zero()) throw std::domain_error("division by zero scalar");
    if (sgn(o.im_) == 0) {
      re_ /= o.re_;
      im_ /= o.re_;
      return *this;
    }
    mpq_class n = o.norm2();
    *this *= o.conj();
    re_ /= n;
    im_ /= n;
    return *this;
  }

  Scalar inv() const { return Scalar(1) / *this; }

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b) { return a.re_ == b.re_ && a.im_ == b.im_; }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  // Total order used only for deterministic sorting: by real part, then imaginary part.
  friend bool lex_less(const Scalar& a, const Scalar& b) {
    if (a.re_ != b.re_) return a.re_ < b.re_;
    return a.im_ < b.im_;
  }

  std::string str() const {
    if (sgn(im_) == 0) return re_.get_str();
    std::string imag;
    mpq_class a = abs(im_);
    if (a != 1) imag = a.get_str();
    imag += "i";
    if (sgn(re_) == 0) return (sgn(im_) < 0 ? "-" : "") + imag;
    return re_.get_str() + (sgn(im_) < 0 ? "-" : "+") + imag;
  }

  static Scalar parse(std::string_view text);

  friend std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

 private:
  mpq_class re_{0};
  mpq_class im_{0};
};

namespace detail {

inline mpq_class parse_rational(std::string_view t, std::string_view whole) {
  auto fail = [&] { throw ParseError("malformed scalar '" + std::string(whole) + "'"); };
  if (t.empty()) fail();
  size_t pos = 0;
  bool neg = false;
  if (t[0] == '+' || t[0] == '-') {
    neg = t[0] == '-';
    pos = 1;
  }
  std::string num, den;
  bool slash = false;
  for (size_t k = pos; k < t.size(); ++k) {
    char c = t[k];
    if (c == '/') {
      if (slash) fail();
      slash = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      (slash ? den : num) += c;
    } else {
      fail();
    }
  }
  if (num.empty() || (slash && den.empty())) fail();
  mpz_class n(num), d(slash ? den : std::string("1"));
  if (d == 0) throw ParseError("zero denominator in scalar '" + std::string(whole) + "'");
  mpq_class q(n, d);
  q.canonicalize();
  return neg ? mpq_class(-q) : q;
}

}  // namespace detail

// Accepts "a", "a/b", "-a/b", "a/b+c/di", "c/di", "i", "-i"; surrounding spaces ignored.
inline Scalar Scalar::parse(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw ParseError("empty scalar");
  if (s.back() != 'i') return Scalar(detail::parse_rational(s, text));
  s.pop_back();
  size_t split = std::string::npos;
  for (size_t k = s.size(); k-- > 1;)
    if (s[k] == '+' || s[k] == '-') {
      split = k;
      break;
    }
  std::string re_part = split == std::string::npos ? "" : s.substr(0, split);
  std::string im_part = split == std::string::npos ? s : s.substr(split);
  mpq_class im;
  if (im_part.empty() || im_part == "+")
    im = 1;
  else if (im_part == "-")
    im = -1;
  else
    im = detail::parse_rational(im_part, text);
  mpq_class re = re_part.empty() ? mpq_class(0) : detail::parse_rational(re_part, text);
  return Scalar(re, im);
}

using Vec = std::vector<Scalar>;

inline Vec zeros(size_t n) { return Vec(n); }

inline Vec unit(size_t n, size_t k) {
  Vec v(n);
  v[k] = 1;
  return v;
}

inline bool is_zero(const Vec& v) {
  for (const auto& s : v)
    if (!s.is_zero()) return false;
  return true;
}

inline Vec operator+(Vec a, const Vec& b) {
  for (size_t k = 0; k < a.size(); ++k) a[k] += b[k];
  return a;
}

inline Vec operator-(Vec a, const Vec& b) {
  for (size_t k = 0; k < a.size(); ++k) a[k] -= b[k];
  return a;
}

inline Vec operator*(const Scalar& c, Vec a) {
  for (auto& s : a) s *= c;
  return a;
}

inline void axpy(Vec& y, const Scalar& c, const Vec& x) {
  if (c.is_zero()) return;
  for (size_t k = 0; k < y.size(); ++k)
    if (!x[k].is_zero()) y[k] += c * x[k];
}

inline mpz_class binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

inline mpz_class multinomial(long a, long b, long c) {
  return binomial(a + b + c, a) * binomial(b + c, b);
}

}  // namespace gps

template <>
struct std::hash<gps::Scalar> {
  size_t operator()(const gps::Scalar& s) const { return std::hash<std::string>()(s.str()); }
};

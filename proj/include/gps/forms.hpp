#pragma once

#include "gps/lie_double.hpp"

#include <bit>

namespace gps {

// Invariant forms: basis alpha_S indexed by the bitmask of S (bit i <-> alpha_{i+1}),
// each monomial written in increasing index order.
struct FormSpace {
  size_t n = 0;
  size_t size() const { return size_t{1} << n; }
  static int degree(size_t mask) { return std::popcount(mask); }
  std::string label(size_t mask) const {
    if (mask == 0) return "1";
    std::string s;
    for (size_t i = 0; i < n; ++i)
      if (mask >> i & 1) s += (s.empty() ? "a" : "^a") + std::to_string(i + 1);
    return s;
  }
};

enum class Parity { Even, Odd, Mixed, Zero };

// Linear operator on the invariant form space.
struct FormOperator {
  Matrix m;

  FormOperator() = default;
  explicit FormOperator(Matrix mat) : m(std::move(mat)) {}
  static FormOperator zero(size_t n) { return FormOperator(Matrix(size_t{1} << n, size_t{1} << n)); }
  static FormOperator identity(size_t n) { return FormOperator(Matrix::identity(size_t{1} << n)); }

  size_t n() const { return static_cast<size_t>(std::countr_zero(m.rows())); }

  Parity parity() const {
    bool even = false, odd = false;
    for (size_t i = 0; i < m.rows(); ++i)
      for (size_t j = 0; j < m.cols(); ++j)
        if (!m(i, j).is_zero()) ((FormSpace::degree(i ^ j) & 1) ? odd : even) = true;
    if (even && odd) return Parity::Mixed;
    if (even) return Parity::Even;
    if (odd) return Parity::Odd;
    return Parity::Zero;
  }

  // Nonzero form-degree shifts present in the operator.
  std::vector<int> degree_shifts() const {
    std::vector<int> out;
    for (size_t i = 0; i < m.rows(); ++i)
      for (size_t j = 0; j < m.cols(); ++j)
        if (!m(i, j).is_zero()) {
          int s = FormSpace::degree(i) - FormSpace::degree(j);
          if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
        }
    std::sort(out.begin(), out.end());
    return out;
  }

  bool is_zero() const { return m.is_zero(); }

  friend FormOperator operator+(const FormOperator& a, const FormOperator& b) { return FormOperator(a.m + b.m); }
  friend FormOperator operator-(const FormOperator& a, const FormOperator& b) { return FormOperator(a.m - b.m); }
  friend FormOperator operator*(const FormOperator& a, const FormOperator& b) { return FormOperator(a.m * b.m); }
  friend FormOperator operator*(const Scalar& c, const FormOperator& a) { return FormOperator(c * a.m); }
  friend bool operator==(const FormOperator& a, const FormOperator& b) { return a.m == b.m; }
  friend bool operator!=(const FormOperator& a, const FormOperator& b) { return !(a == b); }
};

inline bool odd_parity(const FormOperator& a) {
  Parity p = a.parity();
  if (p == Parity::Mixed) throw std::invalid_argument("graded commutator of an operator without parity");
  return p == Parity::Odd;
}

// [a, b] = ab - (-1)^{|a||b|} ba
inline FormOperator gcomm(const FormOperator& a, const FormOperator& b) {
  if (odd_parity(a) && odd_parity(b)) return a * b + b * a;
  return a * b - b * a;
}

// alpha_k ^ .
inline FormOperator wedge_op(size_t n, size_t k) {
  FormOperator op = FormOperator::zero(n);
  for (size_t s = 0; s < (size_t{1} << n); ++s) {
    if (s >> k & 1) continue;
    int sign = std::popcount(s & ((size_t{1} << k) - 1)) & 1 ? -1 : 1;
    op.m(s | size_t{1} << k, s) = sign;
  }
  return op;
}

// contraction with v_k
inline FormOperator contract_op(size_t n, size_t k) {
  FormOperator op = FormOperator::zero(n);
  for (size_t s = 0; s < (size_t{1} << n); ++s) {
    if (!(s >> k & 1)) continue;
    int sign = std::popcount(s & ((size_t{1} << k) - 1)) & 1 ? -1 : 1;
    op.m(s & ~(size_t{1} << k), s) = sign;
  }
  return op;
}

// X + xi acts as i_X + xi ^
inline FormOperator clifford(const GenVector& x) {
  size_t n = x.size() / 2;
  FormOperator op = FormOperator::zero(n);
  for (size_t k = 0; k < n; ++k) {
    if (!x[k].is_zero()) op.m.add_scaled(x[k], contract_op(n, k).m);
    if (!x[n + k].is_zero()) op.m.add_scaled(x[n + k], wedge_op(n, k).m);
  }
  return op;
}

// Chevalley-Eilenberg differential: d = -sum_{i<j,k} c_ij^k a_i a_j i_{v_k}
inline FormOperator ce_differential(const LiePresentation& g) {
  size_t n = g.dim();
  FormOperator d = FormOperator::zero(n);
  for (const auto& [ij, c] : g.entries())
    for (size_t k = 0; k < n; ++k) {
      if (c[k].is_zero()) continue;
      FormOperator t = wedge_op(n, ij.first) * wedge_op(n, ij.second) * contract_op(n, k);
      d.m.add_scaled(-c[k], t.m);
    }
  return d;
}

struct NotAVector : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// x with clifford(x) == delta, read off from delta(1) and the constant part of delta on 1-forms.
inline std::optional<GenVector> try_as_generalized_vector(const FormOperator& delta) {
  size_t n = delta.n();
  GenVector x(2 * n);
  for (size_t k = 0; k < n; ++k) {
    x[n + k] = delta.m(size_t{1} << k, 0);
    x[k] = delta.m(0, size_t{1} << k);
  }
  if (clifford(x) != delta) return std::nullopt;
  return x;
}

inline GenVector as_generalized_vector(const FormOperator& delta) {
  auto x = try_as_generalized_vector(delta);
  if (!x) throw NotAVector("operator is not the Clifford action of a generalized vector");
  return *x;
}

// [[x, y]]_delta = [[x, delta], y], as an operator.
inline FormOperator derived_bracket_op(const FormOperator& delta, const GenVector& x, const GenVector& y) {
  return gcomm(gcomm(clifford(x), delta), clifford(y));
}

// Unique even operator with [lift, clifford(x)] = clifford(phi x) and lift(1) a 2-form.
inline FormOperator lift(const Endo& phi) {
  require_skew(phi);
  size_t n = phi.rows() / 2;
  size_t N = size_t{1} << n;
  FormOperator out = FormOperator::zero(n);
  // lift(1) = eps with i_{v_i} eps = -(covector part of phi v_i)
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      Scalar eij = -phi(n + j, i);
      if (!eij.is_zero()) out.m((size_t{1} << i) | (size_t{1} << j), 0) = eij;
    }
  std::vector<FormOperator> phi_alpha;
  for (size_t k = 0; k < n; ++k) phi_alpha.push_back(clifford(phi.col(n + k)));
  // lift(a_k ^ g) = a_k ^ lift(g) + clifford(phi a_k)(g), with k the lowest index of the monomial.
  for (size_t s = 1; s < N; ++s) {
    size_t k = static_cast<size_t>(std::countr_zero(s));
    size_t rest = s & (s - 1);
    Vec col_rest = out.m.col(rest);
    Vec unit_rest = unit(N, rest);
    Vec v = wedge_op(n, k).m * col_rest + phi_alpha[k].m * unit_rest;
    out.m.set_col(s, v);
  }
  return out;
}

// Residual checks of the defining conditions of the lift; empty when all hold.
inline std::vector<std::string> lift_condition_failures(const FormOperator& lifted, const Endo& phi) {
  std::vector<std::string> bad;
  size_t n = phi.rows() / 2;
  if (lifted.parity() == Parity::Odd || lifted.parity() == Parity::Mixed) bad.push_back("lift is not even");
  for (size_t a = 0; a < 2 * n; ++a) {
    GenVector e = unit(2 * n, a);
    if (gcomm(lifted, clifford(e)) != clifford(phi * e)) bad.push_back("commutator with frame element " + std::to_string(a));
  }
  Vec one = lifted.m.col(0);
  for (size_t s = 0; s < one.size(); ++s)
    if (!one[s].is_zero() && FormSpace::degree(s) != 2) bad.push_back("lift(1) is not a 2-form");
  return bad;
}

// Dimension of the space of even X with [X, clifford(e)] = 0 for all frame e and X(1) in degree 2.
// Zero means any two operators satisfying the lift conditions coincide.
inline size_t lift_ambiguity(size_t n) {
  size_t N = size_t{1} << n;
  std::vector<std::pair<size_t, size_t>> unknowns;
  std::map<std::pair<size_t, size_t>, size_t> col;
  for (size_t i = 0; i < N; ++i)
    for (size_t j = 0; j < N; ++j)
      if (FormSpace::degree(i ^ j) % 2 == 0 && (j != 0 || FormSpace::degree(i) == 2)) {
        col[{i, j}] = unknowns.size();
        unknowns.emplace_back(i, j);
      }
  std::vector<Vec> rows;
  for (size_t a = 0; a < 2 * n; ++a) {
    Matrix c = clifford(unit(2 * n, a)).m;
    for (size_t i = 0; i < N; ++i)
      for (size_t j = 0; j < N; ++j) {
        Vec r(unknowns.size());
        for (size_t k = 0; k < N; ++k) {
          if (!c(k, j).is_zero())
            if (auto it = col.find({i, k}); it != col.end()) r[it->second] += c(k, j);
          if (!c(i, k).is_zero())
            if (auto it = col.find({k, j}); it != col.end()) r[it->second] -= c(i, k);
        }
        if (!is_zero(r)) rows.push_back(std::move(r));
      }
  }
  Matrix sys(rows.size(), unknowns.size());
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < unknowns.size(); ++c) sys(r, c) = rows[r][c];
  return unknowns.size() - rank(sys);
}

inline FormOperator ad_power(const FormOperator& a, const FormOperator& b, unsigned k) {
  FormOperator r = b;
  for (unsigned j = 0; j < k; ++j) r = gcomm(a, r);
  return r;
}

// p(ad_a)(b)
inline FormOperator poly_ad(const Poly& p, const FormOperator& a, const FormOperator& b) {
  FormOperator out = FormOperator::zero(b.n());
  FormOperator term = b;
  for (size_t k = 0; k < p.coeffs().size(); ++k) {
    if (!p.coeff(k).is_zero()) out.m.add_scaled(p.coeff(k), term.m);
    if (k + 1 < p.coeffs().size()) term = gcomm(a, term);
  }
  return out;
}

// delta_phi = P(ad_lift)(d)
inline FormOperator minimal_operator(const LiePresentation& g, const Endo& phi, const Poly& p) {
  return poly_ad(p, lift(phi), ce_differential(g));
}

// Kernel of the Clifford action of an isotropic family: the canonical line bundle K_L.
inline std::vector<Vec> canonical_bundle(const std::vector<GenVector>& l, size_t n) {
  for (const auto& a : l)
    for (const auto& b : l)
      if (!pairing(a, b).is_zero()) throw std::invalid_argument("canonical_bundle: family is not isotropic");
  size_t N = size_t{1} << n;
  Matrix stacked(l.size() * N, N);
  for (size_t t = 0; t < l.size(); ++t) {
    FormOperator c = clifford(l[t]);
    for (size_t i = 0; i < N; ++i)
      for (size_t j = 0; j < N; ++j) stacked(t * N + i, j) = c.m(i, j);
  }
  if (l.empty()) {
    std::vector<Vec> all;
    for (size_t s = 0; s < N; ++s) all.push_back(unit(N, s));
    return all;
  }
  return kernel(stacked);
}

struct Degenerate : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Projectors onto (wedge^r L') . K_L, r = 0..rank L, for isotropic L, L' with L + L' non-degenerate.
inline std::vector<FormOperator> grading_projectors(const std::vector<GenVector>& l, const std::vector<GenVector>& lp,
                                                    size_t n) {
  auto lb = span_basis(l, 2 * n), lpb = span_basis(lp, 2 * n);
  if (lb.size() != lpb.size()) throw Degenerate("grading: L and L' have different ranks");
  if (!lb.empty() && det(gram(lb, lpb)).is_zero()) throw Degenerate("grading: L + L' is degenerate");
  for (const auto& a : lpb)
    for (const auto& b : lpb)
      if (!pairing(a, b).is_zero()) throw std::invalid_argument("grading: L' is not isotropic");
  size_t k = lb.size(), N = size_t{1} << n;
  std::vector<Vec> layer = canonical_bundle(lb, n);
  std::vector<std::vector<Vec>> layers{layer};
  std::vector<FormOperator> raise;
  for (const auto& x : lpb) raise.push_back(clifford(x));
  for (size_t r = 1; r <= k; ++r) {
    std::vector<Vec> next;
    for (const auto& v : layers.back())
      for (const auto& c : raise) next.push_back(c.m * v);
    layers.push_back(span_basis(next, N));
  }
  std::vector<Vec> all;
  for (const auto& ly : layers) all.insert(all.end(), ly.begin(), ly.end());
  if (all.size() != N) throw std::logic_error("grading: layers do not span the form space");
  Matrix b = Matrix::from_columns(all, N);
  auto binv = inverse(b);
  if (!binv) throw std::logic_error("grading: layers are not independent");
  std::vector<FormOperator> proj;
  size_t offset = 0;
  for (const auto& ly : layers) {
    Matrix e(N, N);
    for (size_t t = 0; t < ly.size(); ++t) e(offset + t, offset + t) = 1;
    proj.emplace_back(b * e * *binv);
    offset += ly.size();
  }
  return proj;
}

// Degrees s for which sum_r P_{r+s} A P_r is nonzero.
inline std::vector<int> grading_degrees(const FormOperator& a, const std::vector<FormOperator>& proj) {
  std::vector<int> out;
  int k = static_cast<int>(proj.size());
  for (int s = -(k - 1); s <= k - 1; ++s) {
    bool nz = false;
    for (int r = 0; r < k && !nz; ++r) {
      int t = r + s;
      if (t < 0 || t >= k) continue;
      if (!(proj[t] * a * proj[r]).is_zero()) nz = true;
    }
    if (nz) out.push_back(s);
  }
  return out;
}

}  // namespace gps

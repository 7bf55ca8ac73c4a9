#pragma once

#include "gps/lie_double.hpp"

#include <algorithm>
#include <functional>

namespace gps {

struct EigenSpace {
  Scalar lambda;
  int mult = 0;                // multiplicity in the minimal polynomial
  std::vector<Vec> basis;      // Ker (phi - lambda)^mult
  Matrix projector;
};

struct SpectralData {
  Poly minpoly;
  std::vector<EigenSpace> spaces;  // sorted by (Re, Im)
  std::vector<Scalar> sigma_plus;
  PartialFractions pf;             // keyed by index into spaces
  Endo semisimple, nilpotent;
  std::vector<std::string> failures;

  std::vector<Root> spectrum() const {
    std::vector<Root> r;
    for (const auto& s : spaces) r.push_back({s.lambda, s.mult});
    return r;
  }
  const EigenSpace* space(const Scalar& l) const {
    for (const auto& s : spaces)
      if (s.lambda == l) return &s;
    return nullptr;
  }
  int max_mult() const {
    int m = 0;
    for (const auto& s : spaces) m = std::max(m, s.mult);
    return m;
  }
  bool semisimple_only() const { return max_mult() <= 1; }
};

inline bool in_sigma_plus(const Scalar& l) { return sgn(l.re()) > 0 || (sgn(l.re()) == 0 && sgn(l.im()) > 0); }

inline Vec conj(const Vec& v) {
  Vec r = v;
  for (auto& s : r) s = s.conj();
  return r;
}

inline bool is_real(const Matrix& m) {
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_real()) return false;
  return true;
}

inline std::vector<std::string> spectral_failures(const Endo& phi, const SpectralData& sd) {
  std::vector<std::string> bad;
  size_t dim = phi.rows();
  Matrix id = Matrix::identity(dim);
  Matrix sum(dim, dim);
  for (const auto& a : sd.spaces) {
    const std::string tag = "lambda=" + a.lambda.str() + ": ";
    sum += a.projector;
    if (a.projector * a.projector != a.projector) bad.push_back(tag + "projector not idempotent");
    if (a.projector * phi != phi * a.projector) bad.push_back(tag + "projector does not commute with phi");
    if (sd.semisimple * a.projector != a.lambda * a.projector) bad.push_back(tag + "phi_s P != lambda P");
    for (const auto& b : sd.spaces)
      if (&a != &b && !(a.projector * b.projector).is_zero()) bad.push_back(tag + "projectors not orthogonal");
    Matrix shifted = phi - a.lambda * id;
    for (const auto& v : a.basis)
      if (!is_zero(shifted.pow(a.mult) * v)) bad.push_back(tag + "basis vector not annihilated");
    bool sharp = false;
    for (const auto& v : a.basis)
      if (!is_zero(shifted.pow(a.mult - 1) * v)) sharp = true;
    if (!sharp) bad.push_back(tag + "multiplicity not attained on eigenbundle");
    if (kernel(shifted.pow(static_cast<unsigned>(dim))).size() != a.basis.size())
      bad.push_back(tag + "rank differs from algebraic multiplicity");
    const EigenSpace* neg = sd.space(-a.lambda);
    if (!neg || neg->basis.size() != a.basis.size()) bad.push_back(tag + "rank(L_lambda) != rank(L_-lambda)");
    if (!a.lambda.is_zero() && !gram(a.basis, a.basis).is_zero()) bad.push_back(tag + "L_lambda not isotropic");
    for (const auto& b : sd.spaces)
      if (b.lambda != -a.lambda && !gram(a.basis, b.basis).is_zero())
        bad.push_back(tag + "L_lambda not orthogonal to L_" + b.lambda.str());
    if (neg) {
      std::vector<Vec> e = a.basis;
      if (!a.lambda.is_zero()) e.insert(e.end(), neg->basis.begin(), neg->basis.end());
      if (det(gram(e, e)).is_zero()) bad.push_back(tag + "E_lambda degenerate");
      // (L_lambda)^perp = sum of L_mu, mu != -lambda: containment holds by orthogonality, compare dimensions.
      size_t others = 0;
      for (const auto& b : sd.spaces)
        if (b.lambda != -a.lambda) others += b.basis.size();
      if (others != dim - a.basis.size()) bad.push_back(tag + "orthogonal complement has wrong rank");
    }
  }
  if (sum != id) bad.push_back("projectors do not sum to identity");
  if (sd.semisimple + sd.nilpotent != phi) bad.push_back("phi != phi_s + phi_n");
  if (sd.semisimple * sd.nilpotent != sd.nilpotent * sd.semisimple) bad.push_back("phi_s, phi_n do not commute");
  if (!sd.nilpotent.pow(static_cast<unsigned>(sd.max_mult())).is_zero()) bad.push_back("phi_n^m != 0");
  if (!is_skew(sd.semisimple) || !is_skew(sd.nilpotent)) bad.push_back("phi_s or phi_n not skew");
  size_t total = 0;
  for (const auto& a : sd.spaces) total += a.basis.size();
  if (total != dim) bad.push_back("eigenbundles do not span");
  return bad;
}

// Spectral data from a caller-supplied root list of the minimal polynomial; lets roots outside
// Q + iQ (which spectrum_extract rejects) reach the block machinery.
inline SpectralData analyze_with_roots(const Endo& phi, const std::vector<Root>& roots) {
  require_skew(phi);
  SpectralData sd;
  sd.minpoly = min_poly_of_matrix(phi);
  sd.pf = partial_fractions(sd.minpoly, roots);
  size_t dim = phi.rows();
  Matrix id = Matrix::identity(dim);
  sd.semisimple = Matrix(dim, dim);
  for (size_t r = 0; r < roots.size(); ++r) {
    EigenSpace e;
    e.lambda = roots[r].lambda;
    e.mult = roots[r].mult;
    e.basis = kernel((phi - e.lambda * id).pow(e.mult));
    e.projector = Matrix(dim, dim);
    for (int i = 1; i <= e.mult; ++i)
      e.projector.add_scaled(sd.pf.at({r, i}), cofactor(sd.minpoly, e.lambda, i)(phi));
    sd.semisimple.add_scaled(e.lambda, e.projector);
    if (in_sigma_plus(e.lambda)) sd.sigma_plus.push_back(e.lambda);
    sd.spaces.push_back(std::move(e));
  }
  sd.nilpotent = phi - sd.semisimple;
  sd.failures = spectral_failures(phi, sd);
  return sd;
}

inline SpectralData analyze(const Endo& phi) {
  require_skew(phi);
  return analyze_with_roots(phi, spectrum_extract(min_poly_of_matrix(phi)));
}

// ---------------------------------------------------------------------------------------------
// Block decomposition

enum class BlockKind {
  NilOdd,       // Delta^{+-}_{2h+1}(0)
  NilPair,      // Delta^0_k(0,0), k even
  RealPair,     // Delta^0_k(l,-l), l real nonzero
  ImagPair,     // Delta^{+-}_k(il,-il)
  ComplexQuad,  // Delta^0_k(l,-l,conj l,-conj l); needs roots outside Q + iQ
  ComplexZero,  // complex type Delta_k(0) when phi is not real
  ComplexPair,  // complex type Delta_k(l,-l) when phi is not real
};

struct Block {
  BlockKind kind;
  int degree = 0;
  std::vector<Scalar> eigenvalues;
  int epsilon = 0;
  std::vector<std::vector<Vec>> chains;  // chain[j] = b_{j+1}, phi_n b_{j+1} = b_j, phi_n b_1 = 0
  std::pair<int, int> signature{0, 0};

  std::string label() const {
    std::string s = "Delta_" + std::to_string(degree) + "^";
    switch (kind) {
      case BlockKind::NilOdd:
      case BlockKind::ImagPair:
        s += epsilon > 0 ? "+" : "-";
        break;
      case BlockKind::ComplexZero:
      case BlockKind::ComplexPair:
        s = "Delta_" + std::to_string(degree);
        break;
      default:
        s += "0";
    }
    s += "(";
    for (size_t k = 0; k < eigenvalues.size(); ++k) s += (k ? "," : "") + eigenvalues[k].str();
    return s + ")";
  }

  std::vector<Vec> span() const {
    std::vector<Vec> v;
    for (const auto& c : chains) v.insert(v.end(), c.begin(), c.end());
    return v;
  }
  std::vector<Vec> tops() const {
    std::vector<Vec> v;
    for (const auto& c : chains) v.push_back(c.back());
    return v;
  }
};

struct BlockDecomposition {
  std::vector<Block> blocks;
  std::vector<std::string> failures;

  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    for (const auto& b : blocks) out.push_back(b.label());
    return out;
  }
  std::string type_string() const {
    std::string s;
    for (const auto& b : blocks) s += (s.empty() ? "" : " + ") + b.label();
    return s;
  }
};

// Sorted label multiset in which an odd-degree pair Delta_k^+(0) + Delta_k^-(0) and the
// label Delta_k^0(0,0) are identified (both denote the same hyperbolic block).
inline std::vector<std::string> normalized_types(const std::vector<std::string>& labels) {
  std::vector<std::string> out;
  for (const auto& l : labels) {
    auto pos = l.find("^0(0,0)");
    if (pos != std::string::npos) {
      int k = std::stoi(l.substr(6, pos - 6));
      if (k % 2) {
        out.push_back("Delta_" + std::to_string(k) + "^+(0)");
        out.push_back("Delta_" + std::to_string(k) + "^-(0)");
        continue;
      }
    }
    out.push_back(l);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace detail {

using Form = std::function<Scalar(const Vec&, const Vec&)>;

inline Form bilinear_form() {
  return [](const Vec& x, const Vec& y) { return pairing(x, y); };
}
inline Form sesquilinear_form() {
  return [](const Vec& x, const Vec& y) { return pairing(conj(x), y); };
}

inline Matrix form_gram(const Form& f, const std::vector<Vec>& xs, const std::vector<Vec>& ys) {
  Matrix g(xs.size(), ys.size());
  for (size_t i = 0; i < xs.size(); ++i)
    for (size_t j = 0; j < ys.size(); ++j) g(i, j) = f(xs[i], ys[j]);
  return g;
}

// Vectors of span(u) killed by m.
inline std::vector<Vec> kernel_in(const std::vector<Vec>& u, const Matrix& m) {
  if (u.empty()) return {};
  size_t dim = u[0].size();
  std::vector<Vec> images;
  for (const auto& x : u) images.push_back(m * x);
  auto coords = kernel(Matrix::from_columns(images, dim));
  std::vector<Vec> out;
  for (const auto& c : coords) {
    Vec v(dim);
    for (size_t i = 0; i < u.size(); ++i) axpy(v, c[i], u[i]);
    out.push_back(std::move(v));
  }
  return out;
}

inline int nil_degree(const std::vector<Vec>& u, const Matrix& n) {
  if (u.empty()) return 0;
  std::vector<Vec> cur = u;
  int k = 0;
  while (true) {
    bool all_zero = true;
    for (const auto& v : cur)
      if (!is_zero(v)) all_zero = false;
    if (all_zero) return k;
    for (auto& v : cur) v = n * v;
    ++k;
  }
}

// Complement of span(k) inside span(u), chosen from u.
inline std::vector<Vec> complement_in(const std::vector<Vec>& k, const std::vector<Vec>& u) {
  std::vector<Vec> acc = k, out;
  for (const auto& v : u)
    if (!in_span(acc, v)) {
      acc.push_back(v);
      out.push_back(v);
    }
  return out;
}

inline std::vector<Vec> chain_of(const Vec& top, int k, const Matrix& n) {
  std::vector<Vec> c(k);
  c[k - 1] = top;
  for (int j = k - 1; j > 0; --j) c[j - 1] = n * c[j];
  return c;
}

// Congruence diagonalization of a symmetric (or Hermitian if sesq) form tau on span(w);
// returns new basis vectors and the diagonal values.
inline std::vector<std::pair<Vec, Scalar>> diagonalize(std::vector<Vec> w, const std::function<Scalar(const Vec&, const Vec&)>& tau,
                                                      bool sesq) {
  std::vector<std::pair<Vec, Scalar>> out;
  while (!w.empty()) {
    size_t pick = w.size();
    for (size_t a = 0; a < w.size(); ++a)
      if (!tau(w[a], w[a]).is_zero()) {
        pick = a;
        break;
      }
    if (pick == w.size()) {
      bool fixed = false;
      for (size_t a = 0; a < w.size() && !fixed; ++a)
        for (size_t b = a + 1; b < w.size() && !fixed; ++b) {
          for (const Scalar& c : {Scalar(1), Scalar::I()}) {
            if (!sesq && c != Scalar(1)) continue;
            Vec t = w[a] + c * w[b];
            if (!tau(t, t).is_zero()) {
              w[a] = t;
              pick = a;
              fixed = true;
              break;
            }
          }
        }
      if (!fixed) throw std::logic_error("diagonalize: degenerate form");
    }
    Vec p = w[pick];
    Scalar pp = tau(p, p);
    w.erase(w.begin() + static_cast<long>(pick));
    for (auto& x : w) {
      Scalar c = tau(p, x) / pp;
      axpy(x, -c, p);
    }
    out.emplace_back(p, pp);
  }
  return out;
}

inline int sign_of(const Scalar& s) {
  if (!s.is_real()) throw std::logic_error("sign of non-real value");
  return sgn(s.re()) > 0 ? 1 : -1;
}

// Signature of a real symmetric Gram matrix via exact congruence diagonalization.
inline std::pair<int, int> signature(const Matrix& g) {
  std::vector<Vec> basis;
  for (size_t k = 0; k < g.rows(); ++k) basis.push_back(unit(g.rows(), k));
  auto form = [&](const Vec& x, const Vec& y) {
    Scalar s;
    for (size_t i = 0; i < x.size(); ++i)
      for (size_t j = 0; j < y.size(); ++j)
        if (!x[i].is_zero() && !y[j].is_zero()) s += x[i] * g(i, j) * y[j];
    return s;
  };
  std::pair<int, int> sig{0, 0};
  // Drop a radical if present; blocks are non-degenerate so this never triggers for valid input.
  for (auto& [v, d] : diagonalize(basis, form, false)) (sign_of(d) > 0 ? sig.first : sig.second)++;
  return sig;
}

struct ChainGroup {
  int k;
  std::vector<Vec> tops;
  std::vector<Scalar> diag;  // tau_{k-1} values per top (odd or Hermitian case)
  bool paired = false;       // symplectic pairs (tops[2a], tops[2a+1])
};

// Orthogonal normal form of a nilpotent operator skew for a (bi/sesqui)linear form on span(u).
inline std::vector<ChainGroup> normal_chains(std::vector<Vec> u, const Matrix& n, const Form& form, bool sesq) {
  std::vector<ChainGroup> groups;
  while (!u.empty()) {
    int k = nil_degree(u, n);
    Matrix nk1 = n.pow(static_cast<unsigned>(k - 1));
    auto kk = kernel_in(u, nk1);
    auto w = complement_in(span_basis(kk, u[0].size()), u);
    auto tau = [&](int j) {
      std::vector<Vec> nw;
      Matrix nj = n.pow(static_cast<unsigned>(j));
      for (const auto& x : w) nw.push_back(nj * x);
      return form_gram(form, w, nw);
    };
    for (int j = k - 2; j >= 0; --j) {
      Matrix s = tau(j);
      if (s.is_zero()) continue;
      auto tinv = inverse(tau(k - 1));
      if (!tinv) throw std::logic_error("normal_chains: top form degenerate");
      Matrix a = Scalar(-1, 2) * (*tinv * s);
      Matrix shift = n.pow(static_cast<unsigned>(k - 1 - j));
      std::vector<Vec> nw = w;
      for (size_t b = 0; b < w.size(); ++b) {
        Vec corr(w[b].size());
        for (size_t c = 0; c < w.size(); ++c) axpy(corr, a(c, b), w[c]);
        nw[b] = w[b] + shift * corr;
      }
      w = std::move(nw);
    }
    auto top_form = [&](const Vec& x, const Vec& y) { return form(x, nk1 * y); };
    ChainGroup g{k, {}, {}, false};
    bool symmetric = sesq || (k % 2 == 1);
    if (symmetric) {
      // Hermitian case for even k uses i*tau, which is Hermitian.
      Scalar scale = (sesq && k % 2 == 0) ? Scalar::I() : Scalar(1);
      auto f = [&](const Vec& x, const Vec& y) { return scale * top_form(x, y); };
      for (auto& [v, d] : diagonalize(w, f, sesq)) {
        g.tops.push_back(v);
        g.diag.push_back(d);
      }
    } else {
      g.paired = true;
      while (!w.empty()) {
        Vec w1 = w[0];
        size_t j2 = 1;
        while (j2 < w.size() && top_form(w1, w[j2]).is_zero()) ++j2;
        if (j2 == w.size()) throw std::logic_error("normal_chains: skew form degenerate");
        Vec w2 = w[j2];
        Scalar h12 = top_form(w1, w2), h21 = top_form(w2, w1);
        std::vector<Vec> rest;
        for (size_t t = 1; t < w.size(); ++t) {
          if (t == j2) continue;
          Vec x = w[t];
          Scalar b = -top_form(w1, x) / h12, a = -top_form(w2, x) / h21;
          axpy(x, a, w1);
          axpy(x, b, w2);
          rest.push_back(x);
        }
        g.tops.push_back(w1);
        g.tops.push_back(w2);
        w = std::move(rest);
      }
    }
    // Block generated by the tops, then continue in its orthogonal complement.
    std::vector<Vec> vprime;
    for (const auto& t : g.tops) {
      auto c = chain_of(t, k, n);
      vprime.insert(vprime.end(), c.begin(), c.end());
    }
    groups.push_back(std::move(g));
    Matrix rows(vprime.size(), u.size());
    for (size_t i = 0; i < vprime.size(); ++i)
      for (size_t j = 0; j < u.size(); ++j) rows(i, j) = form(vprime[i], u[j]);
    auto coords = kernel(rows);
    std::vector<Vec> next;
    for (const auto& c : coords) {
      Vec v(u[0].size());
      for (size_t i = 0; i < u.size(); ++i) axpy(v, c[i], u[i]);
      next.push_back(std::move(v));
    }
    if (next.size() + vprime.size() != u.size()) throw std::logic_error("normal_chains: complement has wrong rank");
    u = std::move(next);
  }
  return groups;
}

// Jordan chain tops (with lengths) of a nilpotent operator on an invariant subspace.
inline std::vector<std::pair<Vec, int>> jordan_tops(const std::vector<Vec>& u, const Matrix& n) {
  std::vector<std::pair<Vec, int>> tops;
  if (u.empty()) return tops;
  int kmax = nil_degree(u, n);
  for (int d = kmax; d >= 1; --d) {
    std::vector<Vec> acc = kernel_in(u, n.pow(static_cast<unsigned>(d - 1)));
    for (const auto& [t, l] : tops) acc.push_back(n.pow(static_cast<unsigned>(l - d)) * t);
    for (const auto& v : kernel_in(u, n.pow(static_cast<unsigned>(d)))) {
      if (in_span(acc, v)) continue;
      acc.push_back(v);
      tops.emplace_back(v, d);
    }
  }
  return tops;
}

inline std::pair<int, int> expected_signature(const Block& b) {
  int k = b.degree;
  switch (b.kind) {
    case BlockKind::NilOdd: {
      int h = (k - 1) / 2;
      bool plus_big = (b.epsilon > 0) == (h % 2 == 0);
      return plus_big ? std::pair{h + 1, h} : std::pair{h, h + 1};
    }
    case BlockKind::ImagPair: {
      if (k % 2 == 0) return {k, k};
      int h = (k - 1) / 2;
      bool plus_big = (b.epsilon > 0) == (h % 2 == 0);
      return plus_big ? std::pair{2 * h + 2, 2 * h} : std::pair{2 * h, 2 * h + 2};
    }
    case BlockKind::NilPair:
    case BlockKind::RealPair:
      return {k, k};
    case BlockKind::ComplexQuad:
      return {2 * k, 2 * k};
    default:
      return {-1, -1};
  }
}

// Real basis of the real part of a block (Re and Im parts spanning it).
inline std::vector<Vec> real_basis(const Block& b) {
  std::vector<Vec> parts;
  for (const auto& v : b.span()) {
    Vec re(v.size()), im(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
      re[i] = Scalar(v[i].re());
      im[i] = Scalar(v[i].im());
    }
    parts.push_back(re);
    parts.push_back(im);
  }
  return span_basis(parts, parts.empty() ? 0 : parts[0].size());
}

}  // namespace detail

inline std::vector<std::string> block_failures(const Endo& phi, const SpectralData& sd, const BlockDecomposition& bd) {
  std::vector<std::string> bad;
  const Matrix& n = sd.nilpotent;
  size_t dim = phi.rows();
  std::vector<Vec> all;
  for (size_t a = 0; a < bd.blocks.size(); ++a) {
    const Block& b = bd.blocks[a];
    std::string tag = "block " + std::to_string(a) + " " + b.label() + ": ";
    auto span = b.span();
    all.insert(all.end(), span.begin(), span.end());
    if (det(gram(span, span)).is_zero()) bad.push_back(tag + "pairing degenerate on block");
    for (const auto& c : b.chains) {
      if (static_cast<int>(c.size()) != b.degree) bad.push_back(tag + "chain length differs from degree");
      if (!is_zero(n * c[0])) bad.push_back(tag + "phi_n b_1 != 0");
      for (size_t j = 1; j < c.size(); ++j)
        if (n * c[j] != c[j - 1]) bad.push_back(tag + "chain property fails");
    }
    for (const auto& v : span)
      if (!in_span(span, phi * v)) {
        bad.push_back(tag + "block not phi-invariant");
        break;
      }
    auto w = b.tops();
    for (int j = 0; j < b.degree - 1; ++j) {
      std::vector<Vec> nw;
      for (const auto& x : w) nw.push_back(n.pow(static_cast<unsigned>(j)) * x);
      if (!gram(w, nw).is_zero()) bad.push_back(tag + "tau_" + std::to_string(j) + " does not vanish on W");
    }
    {
      std::vector<Vec> nw;
      for (const auto& x : w) nw.push_back(n.pow(static_cast<unsigned>(b.degree - 1)) * x);
      if (det(gram(w, nw)).is_zero()) bad.push_back(tag + "tau_{k-1} degenerate on W");
    }
    for (size_t c = a + 1; c < bd.blocks.size(); ++c) {
      auto other = bd.blocks[c].span();
      if (!gram(span, other).is_zero()) bad.push_back(tag + "not orthogonal to block " + std::to_string(c));
    }
    auto expect = detail::expected_signature(b);
    if (expect.first >= 0 && is_real(phi)) {
      auto rb = detail::real_basis(b);
      if (rb.size() != span.size()) bad.push_back(tag + "block is not conjugation invariant");
      auto sig = detail::signature(gram(rb, rb));
      if (sig != b.signature || sig != expect)
        bad.push_back(tag + "signature (" + std::to_string(sig.first) + "," + std::to_string(sig.second) +
                      ") does not match table");
    }
  }
  if (all.size() != dim || span_basis(all, dim).size() != dim) bad.push_back("blocks do not span the double");
  return bad;
}

inline BlockDecomposition block_decompose(const Endo& phi, const SpectralData& sd) {
  BlockDecomposition bd;
  const Matrix& n = sd.nilpotent;
  bool real = is_real(phi);
  auto bil = detail::bilinear_form();
  for (const auto& e : sd.spaces) {
    const Scalar& l = e.lambda;
    if (l.is_zero()) {
      for (const auto& g : detail::normal_chains(e.basis, n, bil, false)) {
        if (g.paired) {
          for (size_t t = 0; t + 1 < g.tops.size(); t += 2) {
            Block b{BlockKind::NilPair, g.k, {0, 0}, 0, {}, {}};
            b.chains.push_back(detail::chain_of(g.tops[t], g.k, n));
            b.chains.push_back(detail::chain_of(g.tops[t + 1], g.k, n));
            bd.blocks.push_back(std::move(b));
          }
        } else {
          for (size_t t = 0; t < g.tops.size(); ++t) {
            Block b{real ? BlockKind::NilOdd : BlockKind::ComplexZero, g.k, {0}, 0, {}, {}};
            if (real) b.epsilon = detail::sign_of(g.diag[t]);
            b.chains.push_back(detail::chain_of(g.tops[t], g.k, n));
            bd.blocks.push_back(std::move(b));
          }
        }
      }
      continue;
    }
    if (!in_sigma_plus(l)) continue;
    const EigenSpace* neg = sd.space(-l);
    bool imaginary = sgn(l.re()) == 0;
    if (imaginary && real) {
      auto ses = detail::sesquilinear_form();
      for (const auto& g : detail::normal_chains(e.basis, n, ses, true)) {
        for (size_t t = 0; t < g.tops.size(); ++t) {
          Block b{BlockKind::ImagPair, g.k, {}, detail::sign_of(g.diag[t]), {}, {}};
          b.chains.push_back(detail::chain_of(g.tops[t], g.k, n));
          b.chains.push_back(detail::chain_of(conj(g.tops[t]), g.k, n));
          if (g.k % 2 == 0 && b.epsilon < 0)
            b.eigenvalues = {-l, l};
          else
            b.eigenvalues = {l, -l};
          if (g.k % 2 == 0) b.epsilon = 1;
          bd.blocks.push_back(std::move(b));
        }
      }
      continue;
    }
    bool quad = real && !imaginary && !l.is_real();
    if (quad && sgn(l.im()) < 0) continue;  // built together with the conjugate eigenvalue
    // Real nonzero eigenvalue (or complex phi): Jordan basis on L_l, dual chains on L_-l.
    auto tops = detail::jordan_tops(e.basis, n);
    std::vector<Vec> chain_vecs;
    std::vector<std::pair<size_t, int>> where;
    for (size_t c = 0; c < tops.size(); ++c) {
      auto ch = detail::chain_of(tops[c].first, tops[c].second, n);
      for (int j = 0; j < tops[c].second; ++j) {
        chain_vecs.push_back(ch[j]);
        where.emplace_back(c, j);
      }
    }
    // Dual basis inside L_-l: coefficients solving gram(neg, chain) * X = I.
    Matrix g = gram(neg->basis, chain_vecs);
    auto ginv = inverse(g.transpose());
    if (!ginv) throw std::logic_error("block_decompose: L_l and L_-l not dually paired");
    std::vector<Vec> dual(chain_vecs.size(), Vec(phi.rows()));
    for (size_t a = 0; a < chain_vecs.size(); ++a)
      for (size_t b = 0; b < neg->basis.size(); ++b) axpy(dual[a], (*ginv)(b, a), neg->basis[b]);
    size_t idx = 0;
    for (size_t c = 0; c < tops.size(); ++c) {
      int k = tops[c].second;
      Block b{quad   ? BlockKind::ComplexQuad
              : real ? (imaginary ? BlockKind::ImagPair : BlockKind::RealPair)
                     : BlockKind::ComplexPair,
              k, {l, -l}, 0, {}, {}};
      if (quad) b.eigenvalues = {l, -l, l.conj(), -l.conj()};
      std::vector<Vec> main(chain_vecs.begin() + static_cast<long>(idx), chain_vecs.begin() + static_cast<long>(idx + k));
      std::vector<Vec> dch(k);
      // dual of b_j is b*_j with phi_n b*_j = -b*_{j+1}; reorder into a chain c_j = (-1)^j b*_{k+1-j}.
      for (int j = 1; j <= k; ++j) dch[j - 1] = Scalar(j % 2 ? -1 : 1) * dual[idx + k - j];
      b.chains.push_back(main);
      b.chains.push_back(dch);
      if (quad) {
        std::vector<Vec> cm, cd;
        for (const auto& v : main) cm.push_back(conj(v));
        for (const auto& v : dch) cd.push_back(conj(v));
        b.chains.push_back(cm);
        b.chains.push_back(cd);
      }
      bd.blocks.push_back(std::move(b));
      idx += k;
    }
  }
  // Deterministic order: degree descending, then eigenvalue, then sign (+ first).
  std::stable_sort(bd.blocks.begin(), bd.blocks.end(), [](const Block& a, const Block& b) {
    if (a.degree != b.degree) return a.degree > b.degree;
    const Scalar& la = a.eigenvalues[0];
    const Scalar& lb = b.eigenvalues[0];
    bool za = la.is_zero(), zb = lb.is_zero();
    if (za != zb) return !za;
    if (la != lb) return lex_less(lb, la);
    return a.epsilon > b.epsilon;
  });
  for (auto& b : bd.blocks) {
    if (detail::expected_signature(b).first >= 0 && real) {
      auto rb = detail::real_basis(b);
      b.signature = detail::signature(gram(rb, rb));
    }
  }
  bd.failures = block_failures(phi, sd, bd);
  return bd;
}

// ---------------------------------------------------------------------------------------------
// Verdicts

struct NijenhuisWitness {
  Scalar mu, nu;
  size_t x_index = 0, y_index = 0;
  GenVector bracket;
};

struct WeakNijenhuisResult {
  bool holds = true;
  std::optional<NijenhuisWitness> witness;
};

// (mu + nu) [[L_mu, L_nu]] inside L_mu + L_nu for all eigenvalue pairs.
inline WeakNijenhuisResult weak_nijenhuis_check(const LiePresentation& g, const SpectralData& sd) {
  WeakNijenhuisResult res;
  for (const auto& a : sd.spaces)
    for (const auto& b : sd.spaces) {
      if ((a.lambda + b.lambda).is_zero()) continue;
      std::vector<Vec> target = a.basis;
      if (&a != &b) target.insert(target.end(), b.basis.begin(), b.basis.end());
      for (size_t i = 0; i < a.basis.size(); ++i)
        for (size_t j = 0; j < b.basis.size(); ++j) {
          GenVector br = dorfman(g, a.basis[i], b.basis[j]);
          if (!in_span(target, br)) {
            res.holds = false;
            res.witness = NijenhuisWitness{a.lambda, b.lambda, i, j, br};
            return res;
          }
        }
    }
  return res;
}

struct ResonanceWitness {
  Scalar l, m, n;
};

// First triple with (l+m)(l+n)(m+n) != 0 and P(l+m+n) = 0, if any.
inline std::optional<ResonanceWitness> resonance(const SpectralData& sd) {
  for (const auto& a : sd.spaces)
    for (const auto& b : sd.spaces)
      for (const auto& c : sd.spaces) {
        const Scalar &l = a.lambda, &m = b.lambda, &n = c.lambda;
        if (((l + m) * (l + n) * (m + n)).is_zero()) continue;
        if (sd.minpoly(l + m + n).is_zero()) return ResonanceWitness{l, m, n};
      }
  return std::nullopt;
}

inline bool non_resonant(const SpectralData& sd) { return !resonance(sd).has_value(); }

}  // namespace gps

#pragma once

#include "gps/fuzz.hpp"
#include "gps/io.hpp"

#include <deque>
#include <memory>

namespace gps {

struct Assertion {
  int criterion = 0;  // 0: plain fixture expectations
  std::string subject;
  std::string name;
  bool pass = false;
  std::string detail;  // diff on failure, value summary otherwise
};

struct CriterionLine {
  int id = 0;
  std::string title;
  size_t passed = 0, total = 0;
  bool pass() const { return total > 0 && passed == total; }
};

inline const std::vector<std::string>& criterion_titles() {
  static const std::vector<std::string> t = {
      "fixture expectations",
      "heisenberg_a: x^5, minimal, higher torsions vanish, first torsion in the Jordan frame",
      "heisenberg_b: x^5, not minimal, fourth torsion value, torsions vanish from order 5",
      "heisenberg_c: x(x^2+1)^2, minimal, torsions nonzero, shifted torsions zero",
      "heisenberg_d: x(x^2+1)^2, not minimal, torsions and shifted torsions nonzero",
      "nilpotent4: single x^4 block, minimal, reference first torsions, higher ones vanish",
      "resonance family: Courant tensor on eigenvectors and verdicts",
      "three routes to the minimal torsion agree",
      "quadratic structures: M = 2T; cubic structures: M = -3S",
      "structural invariants on every analyzed structure",
      "d_lambda decomposition, memberships and grading degrees",
  };
  return t;
}

// A tensor written in a named frame: sum of coef * x (x) y (x) z.
struct FrameTerm {
  Scalar coef;
  std::array<std::string, 3> names;
};

namespace detail {

inline std::string poly_diff(const Poly& expected, const Poly& got) {
  std::string s;
  size_t len = std::max(expected.coeffs().size(), got.coeffs().size());
  for (size_t k = 0; k < len; ++k)
    if (expected.coeff(k) != got.coeff(k))
      s += (s.empty() ? "" : "; ") + std::string("coefficient of x^") + std::to_string(k) + ": expected " +
           expected.coeff(k).str() + ", got " + got.coeff(k).str();
  return s;
}

inline std::string tensor_diff(const Tensor3& expected, const Tensor3& got, const std::function<std::string(size_t)>& name) {
  std::string s;
  auto note = [&](const Tensor3::Index& k) {
    Scalar e = expected.get(k[0], k[1], k[2]), g = got.get(k[0], k[1], k[2]);
    if (e == g) return;
    s += (s.empty() ? "" : "; ") + std::string("entry ") + name(k[0]) + name(k[1]) + name(k[2]) + ": expected " +
         e.str() + ", got " + g.str();
  };
  for (const auto& [k, v] : expected.entries()) note(k);
  for (const auto& [k, v] : got.entries())
    if (expected.get(k[0], k[1], k[2]).is_zero()) note(k);
  return s;
}

inline std::string join_list(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
  return s;
}

}  // namespace detail

class AcceptanceSuite {
 public:
  explicit AcceptanceSuite(std::vector<InputDocument> docs, std::string filter = "")
      : docs_(std::move(docs)), filter_(std::move(filter)) {}

  // Runs one criterion (1..10), the fixture expectations (0), or everything (-1).
  std::vector<Assertion> run(int only = -1) {
    out_.clear();
    using Fn = void (AcceptanceSuite::*)();
    const Fn fns[] = {&AcceptanceSuite::expectations, &AcceptanceSuite::c1, &AcceptanceSuite::c2,
                      &AcceptanceSuite::c3,           &AcceptanceSuite::c4, &AcceptanceSuite::c5,
                      &AcceptanceSuite::c6,           &AcceptanceSuite::c7, &AcceptanceSuite::c8,
                      &AcceptanceSuite::c9,           &AcceptanceSuite::c10};
    for (int k = 0; k <= 10; ++k)
      if (only < 0 || only == k) {
        cur_ = k;
        (this->*fns[k])();
      }
    return out_;
  }

  static std::vector<CriterionLine> summarize(const std::vector<Assertion>& as, bool with_expectations = false) {
    std::vector<CriterionLine> lines;
    for (int k = with_expectations ? 0 : 1; k <= 10; ++k) {
      CriterionLine l{k, criterion_titles()[k], 0, 0};
      for (const auto& a : as)
        if (a.criterion == k) {
          ++l.total;
          l.passed += a.pass;
        }
      if (l.total) lines.push_back(l);
    }
    return lines;
  }

  static constexpr unsigned torsion_order = 9;

 private:
  struct Subject {
    std::string name;
    LiePresentation g;
    Endo phi;
    const InputDocument* doc = nullptr;
    std::string seed_blocks;  // fuzz: block types of the seed
    Poly seed_minpoly;        // fuzz: the seed's minimal polynomial
    std::unique_ptr<Analysis> analysis;
    std::string error;
  };

  bool wants(const std::string& subject) const { return filter_.empty() || subject.find(filter_) != std::string::npos; }

  void check(const std::string& subject, const std::string& name, bool pass, const std::string& detail = "") {
    out_.push_back({cur_, subject, name, pass, detail});
  }

  const InputDocument* doc(const std::string& name) {
    for (const auto& d : docs_)
      if (d.name == name) return &d;
    return nullptr;
  }

  Subject* analyzed(Subject& s) {
    if (!s.analysis && s.error.empty()) {
      try {
        std::optional<unsigned> order;
        if (s.doc) order = torsion_order;
        s.analysis = std::make_unique<Analysis>(analyze_structure(s.g, s.phi, order));
      } catch (const std::exception& e) {
        s.error = e.what();
      }
    }
    return s.analysis ? &s : nullptr;
  }

  // Fixture by name, analyzed; records a failing assertion when missing or invalid.
  Subject* fixture(const std::string& name) {
    for (auto& s : fixtures_)
      if (s.name == name) {
        if (!analyzed(s)) check(name, "analysis runs", false, s.error);
        return s.analysis ? &s : nullptr;
      }
    const InputDocument* d = doc(name);
    if (!d) {
      check(name, "fixture present", false, "no fixture named " + name);
      return nullptr;
    }
    fixtures_.push_back({name, d->g, d->phi, d, "", Poly(), nullptr, ""});
    return fixture(name);
  }

  std::vector<Subject*> all_fixtures() {
    std::vector<Subject*> v;
    for (const auto& d : docs_)
      if (wants(d.name))
        if (Subject* s = fixture(d.name)) v.push_back(s);
    return v;
  }

  std::vector<Subject*> fuzz() {
    std::vector<Subject*> v;
    if (!wants("fuzz/")) return v;
    if (fuzz_.empty()) {
      std::map<std::string, std::string> seed_blocks;
      for (const auto& s : fuzz_seeds()) seed_blocks[s.name] = block_decompose(s.phi, analyze(s.phi)).type_string();
      for (auto& c : fuzz_family()) {
        std::string seed = c.name.substr(0, c.name.find('/'));
        fuzz_.push_back({"fuzz/" + c.name, c.g, c.phi, nullptr, seed_blocks[seed], c.minpoly, nullptr, ""});
      }
    }
    for (auto& s : fuzz_) {
      if (!wants(s.name)) continue;
      if (analyzed(s))
        v.push_back(&s);
      else
        check(s.name, "analysis runs", false, s.error);
    }
    return v;
  }

  std::vector<Subject*> everything() {
    auto v = all_fixtures();
    auto f = fuzz();
    v.insert(v.end(), f.begin(), f.end());
    return v;
  }

  // Reference-normalization tensor expressed in the fixture frame.
  Tensor3 in_frame(const Subject& s, const Tensor3& ours) const {
    std::vector<Vec> basis;
    for (const auto& [k, v] : s.doc->expect.frame) basis.push_back(v);
    Scalar pf = s.doc->expect.prefactor.value_or(Scalar(1));
    return (pf.inv() * ours).in_basis(basis);
  }

  Tensor3 frame_tensor(const Subject& s, const std::vector<FrameTerm>& terms) const {
    const auto& fr = s.doc->expect.frame;
    auto index = [&](const std::string& n) -> size_t {
      for (size_t i = 0; i < fr.size(); ++i)
        if (fr[i].first == n) return i;
      throw std::logic_error("frame vector " + n + " missing from fixture");
    };
    Tensor3 t(s.phi.rows());
    for (const auto& term : terms) t.add(index(term.names[0]), index(term.names[1]), index(term.names[2]), term.coef);
    return t;
  }

  std::function<std::string(size_t)> frame_names(const Subject& s) const {
    return [&s](size_t i) { return s.doc->expect.frame[i].first; };
  }

  Vec frame_vec(const Subject& s, const std::string& n) const {
    for (const auto& [k, v] : s.doc->expect.frame)
      if (k == n) return v;
    throw std::logic_error("frame vector " + n + " missing from fixture");
  }

  // minpoly / blocks / minimal against the fixture's expect block.
  void expect_core(Subject& s) {
    const Analysis& a = *s.analysis;
    const Expectations& e = s.doc->expect;
    if (e.minpoly)
      check(s.name, "minimal polynomial", *e.minpoly == a.spectral.minpoly,
            *e.minpoly == a.spectral.minpoly ? a.spectral.minpoly.str() : detail::poly_diff(*e.minpoly, a.spectral.minpoly));
    if (e.blocks) {
      auto want = normalized_types(*e.blocks), got = normalized_types(a.blocks.labels());
      check(s.name, "block types", want == got,
            "expected " + detail::join_list(want) + "; got " + detail::join_list(got));
    }
    if (e.minimal)
      check(s.name, "minimality", *e.minimal == a.verdicts.minimal,
            std::string("expected ") + (*e.minimal ? "minimal" : "not minimal") + ", got " +
                (a.verdicts.minimal ? "minimal" : "not minimal"));
  }

  void vanish_range(Subject& s, const std::string& which, unsigned from, unsigned to, bool zero) {
    const auto& a = *s.analysis;
    for (unsigned k = from; k <= to; ++k) {
      const Tensor3& t = which == "T" ? a.torsions.t_hat[k] : a.torsions.s_hat[k];
      std::string detail = "zero tensor";
      if (!t.is_zero()) {
        TensorEntry e = tensor_entries(t, s.g.dim(), 1)[0];
        detail = "entry " + e.indices[0] + e.indices[1] + e.indices[2] + " = " + e.value;
      }
      check(s.name, which + "^(" + std::to_string(k) + (zero ? ") vanishes" : ") nonzero"), t.is_zero() == zero, detail);
    }
  }

  void frame_expression(Subject& s, const std::string& name, const Tensor3& ours, const std::vector<FrameTerm>& reference,
                        const Scalar& scale = Scalar(1)) {
    Tensor3 got = scale * in_frame(s, ours);
    Tensor3 want = frame_tensor(s, reference);
    check(s.name, name, got == want, got == want ? want.str(frame_names(s)) : detail::tensor_diff(want, got, frame_names(s)));
  }

  // ------------------------------------------------------------------------------------------

  void expectations() {
    for (Subject* s : all_fixtures()) expect_core(*s);
  }

  void c1() {
    if (!wants("heisenberg_a")) return;
    Subject* s = fixture("heisenberg_a");
    if (!s) return;
    expect_core(*s);
    check(s->name, "Courant tensor vanishes", s->analysis->minimal.multinomial.is_zero());
    vanish_range(*s, "T", 2, torsion_order, true);
    vanish_range(*s, "S", 1, torsion_order, true);
    frame_expression(*s, "-8 T^(1) = -b2b1b1 + b1b2b1", s->analysis->torsions.t_hat[1],
                     {{Scalar(-1), {"b2", "b1", "b1"}}, {Scalar(1), {"b1", "b2", "b1"}}}, Scalar(-8));
  }

  void c2() {
    if (!wants("heisenberg_b")) return;
    Subject* s = fixture("heisenberg_b");
    if (!s) return;
    expect_core(*s);
    const Analysis& a = *s->analysis;
    Scalar pf = s->doc->expect.prefactor.value_or(Scalar(1));
    check(s->name, "Courant tensor nonzero", !a.minimal.multinomial.is_zero());
    check(s->name, "witness triple reported", a.verdicts.courant_witness.has_value());
    Scalar c = pf.inv() * a.minimal.multinomial.inner(frame_vec(*s, "b1p"), frame_vec(*s, "b5"), frame_vec(*s, "b3"));
    check(s->name, "<C, b1' b5 b3> nonzero", !c.is_zero(), "value " + c.str());
    Scalar t4 = Scalar(2) * pf.inv() * a.torsions.t_hat[4].inner(frame_vec(*s, "b5"), frame_vec(*s, "b4"), frame_vec(*s, "b5"));
    check(s->name, "<2 T^(4), b5 b4 b5> = 10", t4 == Scalar(10), "expected 10, got " + t4.str());
    vanish_range(*s, "S", 4, 4, true);
    vanish_range(*s, "T", 5, torsion_order, true);
    vanish_range(*s, "S", 5, torsion_order, true);
  }

  void c3() {
    if (!wants("heisenberg_c")) return;
    Subject* s = fixture("heisenberg_c");
    if (!s) return;
    expect_core(*s);
    check(s->name, "Courant tensor vanishes", s->analysis->minimal.multinomial.is_zero());
    vanish_range(*s, "T", 1, 6, false);
    vanish_range(*s, "S", 1, 6, true);
    Scalar mi = -Scalar::I();
    for (unsigned k = 1; k <= 6; ++k)
      frame_expression(*s, "2 T^(" + std::to_string(k) + ") = -i(b1_1 b2_1 b3_1 - b2_1 b1_1 b3_1)",
                       s->analysis->torsions.t_hat[k],
                       {{mi, {"b1_1", "b2_1", "b3_1"}}, {-mi, {"b2_1", "b1_1", "b3_1"}}}, Scalar(2));
  }

  void c4() {
    if (!wants("heisenberg_d")) return;
    Subject* s = fixture("heisenberg_d");
    if (!s) return;
    expect_core(*s);
    const Analysis& a = *s->analysis;
    check(s->name, "Courant tensor nonzero", !a.minimal.multinomial.is_zero());
    Scalar c = a.minimal.multinomial.inner(frame_vec(*s, "b1_1"), frame_vec(*s, "b2_2"), frame_vec(*s, "b4_1"));
    check(s->name, "<C, b1_1 b2_2 b4_1> nonzero", !c.is_zero(), "value " + c.str());
    vanish_range(*s, "T", 1, 4, false);
    vanish_range(*s, "S", 1, 4, false);
  }

  void c5() {
    if (!wants("nilpotent4")) return;
    Subject* s = fixture("nilpotent4");
    if (!s) return;
    expect_core(*s);
    const Analysis& a = *s->analysis;
    check(s->name, "Courant tensor vanishes", a.minimal.multinomial.is_zero());
    // Reference 6-term and 3-term expressions, chain-major names b<chain>_<position>.
    frame_expression(*s, "T^(1) reference 6-term expression", a.torsions.t_hat[1],
                     {{Scalar(1), {"b2_1", "b2_3", "b2_1"}},
                      {Scalar(-1), {"b2_1", "b1_2", "b2_3"}},
                      {Scalar(-1), {"b2_1", "b2_2", "b2_2"}},
                      {Scalar(-1), {"b2_3", "b2_1", "b2_1"}},
                      {Scalar(1), {"b2_1", "b2_1", "b2_3"}},
                      {Scalar(1), {"b2_2", "b2_1", "b2_2"}}});
    frame_expression(*s, "S^(1) reference 3-term expression", a.torsions.s_hat[1],
                     {{Scalar(1), {"b2_1", "b2_2", "b2_1"}},
                      {Scalar(-1), {"b2_1", "b1_1", "b2_3"}},
                      {Scalar(-1), {"b2_2", "b2_1", "b2_1"}}});
    vanish_range(*s, "T", 2, torsion_order, true);
    vanish_range(*s, "S", 2, torsion_order, true);
  }

  void c6() {
    // C(e1, e2, e^3) / T(e1, e2, e^3) against 4 l (3l - m)(l - m)^2 on a grid of (l, m).
    if (wants("resonance(")) {
      const std::pair<Scalar, Scalar> grid[] = {{1, 3}, {1, 2}, {2, 1}, {3, 1}, {1, 5}, {2, 3}, {Scalar(1, 2), 2}, {2, -1}, {3, 7}};
      std::optional<Scalar> constant;
      for (const auto& [l, m] : grid) {
        std::string subj = "resonance(" + l.str() + "," + m.str() + ")";
        if (!wants(subj)) continue;
        LiePresentation g = heisenberg(4);
        Endo phi(8, 8);
        for (size_t i = 0; i < 4; ++i) {
          phi(i, i) = i < 2 ? l : m;
          phi(4 + i, 4 + i) = -(i < 2 ? l : m);
        }
        Poly p = analyze(phi).minpoly;
        Tensor3 c = minimal_route_multinomial(g, phi, p);
        GenVector e1 = frame_v(4, 0), e2 = frame_v(4, 1), a3 = frame_a(4, 2);
        Scalar cval = Scalar(8) * c.inner(e1, e2, a3);
        Scalar tval = courant_T(g, e1, e2, a3);
        Scalar formula = Scalar(4) * l * (Scalar(3) * l - m) * (l - m) * (l - m);
        if (formula.is_zero()) {
          check(subj, "C(e1,e2,e^3) = 0 where 4l(3l-m)(l-m)^2 = 0", cval.is_zero(), "C = " + cval.str());
          continue;
        }
        Scalar ratio = cval / (tval * formula);
        bool ok = !ratio.is_zero() && (!constant || ratio == *constant);
        if (!constant) constant = ratio;
        check(subj, "C(e1,e2,e^3) = k * 4l(3l-m)(l-m)^2 * T(e1,e2,e^3), common k", ok,
              "C = " + cval.str() + ", T = " + tval.str() + ", k = " + ratio.str());
      }
    }
    if (wants("resonance_1_3"))
      if (Subject* s = fixture("resonance_1_3")) {
        const Verdicts& v = s->analysis->verdicts;
        check(s->name, "minimal", v.minimal);
        check(s->name, "resonant", !v.non_resonant);
        check(s->name, "semisimple part not weak Nijenhuis", !v.weak_nijenhuis_semisimple);
      }
    if (wants("resonance_1_2"))
      if (Subject* s = fixture("resonance_1_2")) check(s->name, "not minimal", !s->analysis->verdicts.minimal);
  }

  void c7() {
    size_t fuzz_count = 0;
    for (Subject* s : everything()) {
      const MinimalTorsion& m = s->analysis->minimal;
      std::string d;
      if (m.multinomial != m.expansion) d += "multinomial vs expansion differ; ";
      if (m.multinomial != m.operator_route) d += "multinomial vs operator differ; ";
      if (m.multinomial != m.closed) d += "multinomial vs closed form differ; ";
      check(s->name, "routes agree", d.empty(), d);
      fuzz_count += s->doc == nullptr;
    }
    if (wants("fuzz/")) check("fuzz", "at least 100 fuzzed structures", fuzz_count >= 100, std::to_string(fuzz_count));
  }

  void c8() {
    size_t quad = 0, cubic = 0;
    for (Subject* s : everything()) {
      const Analysis& a = *s->analysis;
      long deg = a.spectral.minpoly.degree();
      if (deg != 2 && deg != 3) continue;
      Tensor3 want = deg == 2 ? Scalar(2) * a.torsions.t_hat[1] : Scalar(-3) * a.torsions.s_hat[1];
      auto name = [n = s->g.dim()](size_t i) { return frame_name(n, i); };
      check(s->name, deg == 2 ? "M = 2T" : "M = -3S", want == a.minimal.multinomial,
            detail::tensor_diff(want, a.minimal.multinomial, name));
      (deg == 2 ? quad : cubic)++;
    }
    if (wants("fuzz/")) check("fuzz", "quadratic and cubic structures present", quad > 0 && cubic > 0,
                              std::to_string(quad) + " quadratic, " + std::to_string(cubic) + " cubic");
  }

  struct FrameChecks {
    LiePresentation g;
    bool leibniz = true, derived = true, clifford = true;
  };

  // Identities that depend only on the Lie algebra, evaluated once per algebra.
  const FrameChecks& frame_checks(const LiePresentation& g) {
    for (const auto& f : frame_checks_)
      if (f.g == g) return f;
    size_t n = g.dim();
    FrameChecks fc{g};
    FormOperator dce = ce_differential(g);
    std::vector<FormOperator> cl;
    for (size_t i = 0; i < 2 * n; ++i) cl.push_back(clifford(unit(2 * n, i)));
    for (size_t i = 0; i < 2 * n; ++i)
      for (size_t j = 0; j < 2 * n; ++j) {
        GenVector x = unit(2 * n, i), y = unit(2 * n, j);
        FormOperator anti = cl[i] * cl[j] + cl[j] * cl[i];
        if (anti != (Scalar(2) * pairing(x, y)) * FormOperator::identity(n)) fc.clifford = false;
        auto v = try_as_generalized_vector(derived_bracket_op(dce, x, y));
        if (!v || *v != dorfman(g, x, y)) fc.derived = false;
        for (size_t k = 0; k < 2 * n && fc.leibniz; ++k) {
          GenVector z = unit(2 * n, k);
          GenVector lhs = dorfman(g, x, dorfman(g, y, z));
          GenVector rhs = dorfman(g, dorfman(g, x, y), z) + dorfman(g, y, dorfman(g, x, z));
          if (lhs != rhs) fc.leibniz = false;
        }
      }
    frame_checks_.push_back(std::move(fc));
    return frame_checks_.back();
  }

  void c9() {
    std::map<size_t, size_t> ambiguity;
    for (Subject* s : everything()) {
      const Analysis& a = *s->analysis;
      size_t n = s->g.dim();
      check(s->name, "projectors, Jordan-Chevalley, eigenbundle isotropy", a.spectral.failures.empty(),
            detail::join_list(a.spectral.failures));
      check(s->name, "block invariants and signatures", a.blocks.failures.empty(), detail::join_list(a.blocks.failures));
      if (!s->seed_blocks.empty()) {
        check(s->name, "block types preserved by conjugation", a.blocks.type_string() == s->seed_blocks,
              "seed " + s->seed_blocks + ", got " + a.blocks.type_string());
        check(s->name, "minimal polynomial preserved by conjugation", a.spectral.minpoly == s->seed_minpoly,
              detail::poly_diff(s->seed_minpoly, a.spectral.minpoly));
      }
      check(s->name, "higher torsions match closed forms", a.torsions.tower_matches_closed);

      auto chains = jordan_chains(a.phi, a.blocks);
      std::string d;
      if (a.verdicts.minimal) {
        for (const auto& f : bracket_annihilator_failures(a.g, a.phi, a.spectral.minpoly, chains)) d += f.where + "; ";
        check(s->name, "bracket annihilator on all chain pairs", d.empty(), d);
        d.clear();
      }
      for (const auto& f : courant_chain_failures(a.g, a.spectral.minpoly, chains, a.minimal.multinomial))
        d += f.where + "; ";
      check(s->name, "Courant tensor along Jordan chains", d.empty(), d);

      const FrameChecks& fc = frame_checks(a.g);
      check(s->name, "Dorfman Leibniz identity on frame triples", fc.leibniz);
      check(s->name, "Clifford relations on frame pairs", fc.clifford);
      check(s->name, "derived bracket of d reproduces the Dorfman bracket", fc.derived);
      auto lf = lift_condition_failures(lift(a.phi), a.phi);
      check(s->name, "lift conditions", lf.empty(), detail::join_list(lf));
      if (!ambiguity.count(n)) ambiguity[n] = lift_ambiguity(n);
      check(s->name, "lift uniqueness", ambiguity[n] == 0, "homogeneous solutions: " + std::to_string(ambiguity[n]));
    }
  }

  void c10() {
    for (Subject* s : all_fixtures()) {
      const Analysis& a = *s->analysis;
      bool minimal = a.verdicts.minimal;
      std::string failed;
      for (const auto& d : a.dlambda)
        if (!d.criterion) failed += (failed.empty() ? "" : ", ") + d.lambda.str();
      if (minimal) {
        check(s->name, "sum of d_lambda is d", a.dlambda_sums_to_d);
        check(s->name, "(ad - lambda)^m d_lambda is a generalized vector for every lambda", failed.empty(),
              failed.empty() ? "" : "fails for lambda = " + failed);
        if (a.verdicts.non_resonant) {
          auto bad = d_lambda_membership_failures(a.spectral, a.dlambda);
          check(s->name, "d_lambda bracket memberships", bad.empty(), detail::join_list(bad));
          std::string gd;
          for (const auto& gc : d_lambda_grading_checks(a.g, a.spectral, a.dlambda))
            if (!gc.ok()) gd += "grading " + gc.grading.str() + (gc.whole ? " d" : " d_" + gc.lambda.str()) + "; ";
          check(s->name, "d_lambda grading degrees", gd.empty(), gd);
        }
      } else if (s->name == "heisenberg_b") {
        check(s->name, "criterion fails for some lambda", !failed.empty());
      }
    }
  }

  std::vector<InputDocument> docs_;
  std::string filter_;
  int cur_ = 0;
  std::vector<Assertion> out_;
  std::deque<Subject> fixtures_;  // deque: pointers stay valid on push_back
  std::deque<Subject> fuzz_;
  std::deque<FrameChecks> frame_checks_;
};

}  // namespace gps

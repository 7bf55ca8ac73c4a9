#pragma once

#include "gps/torsion.hpp"

namespace gps {

// d_lambda = sum_i a_{lambda,i} Q_{lambda,i}(ad_lift)(d), one component per eigenvalue.
struct DLambda {
  Scalar lambda;
  int mult = 0;
  FormOperator d;
  bool criterion = false;  // (ad_lift - lambda)^mult (d_lambda) is a generalized vector
};

inline std::vector<DLambda> d_lambda_decomposition(const LiePresentation& g, const Endo& phi, const SpectralData& sd) {
  FormOperator lifted = lift(phi), d = ce_differential(g);
  size_t n = g.dim();
  std::vector<DLambda> out;
  for (size_t r = 0; r < sd.spaces.size(); ++r) {
    const auto& e = sd.spaces[r];
    DLambda dl{e.lambda, e.mult, FormOperator::zero(n), false};
    for (int i = 1; i <= e.mult; ++i)
      dl.d = dl.d + sd.pf.at({r, i}) * poly_ad(cofactor(sd.minpoly, e.lambda, i), lifted, d);
    FormOperator shifted = poly_ad(Poly::linear(e.lambda).pow(static_cast<unsigned>(e.mult)), lifted, dl.d);
    dl.criterion = try_as_generalized_vector(shifted).has_value();
    out.push_back(std::move(dl));
  }
  return out;
}

inline bool d_lambda_sum_is_d(const LiePresentation& g, const std::vector<DLambda>& parts) {
  FormOperator s = FormOperator::zero(g.dim());
  for (const auto& p : parts) s = s + p.d;
  return s == ce_differential(g);
}

// [[L_mu, L_nu]]_{d_lambda} inside L_{lambda+mu+nu} (zero when the sum is not an eigenvalue).
inline std::vector<std::string> d_lambda_membership_failures(const SpectralData& sd, const std::vector<DLambda>& parts) {
  std::vector<std::string> bad;
  for (const auto& dl : parts)
    for (const auto& mu : sd.spaces)
      for (const auto& nu : sd.spaces) {
        const EigenSpace* target = sd.space(dl.lambda + mu.lambda + nu.lambda);
        std::vector<Vec> span = target ? target->basis : std::vector<Vec>{};
        for (const auto& x : mu.basis)
          for (const auto& y : nu.basis) {
            auto v = try_as_generalized_vector(derived_bracket_op(dl.d, x, y));
            if (!v || !in_span(span, *v)) {
              bad.push_back("d_" + dl.lambda.str() + " on L_" + mu.lambda.str() + " x L_" + nu.lambda.str());
              goto next_pair;
            }
          }
      next_pair:;
      }
  return bad;
}

struct GradingCheck {
  Scalar grading;  // grading induced by (L_grading, L_-grading)
  Scalar lambda;   // component d_lambda (or d itself when whole)
  bool whole = false;
  std::vector<int> degrees;
  std::vector<int> expected;
  bool ok() const {
    for (int s : degrees)
      if (std::find(expected.begin(), expected.end(), s) == expected.end()) return false;
    return true;
  }
};

// Degrees of d and of each d_lambda with respect to the (L_mu, L_-mu) gradings, mu in Sigma_+.
// Expected: d in {-1,0,1}; d_{+-mu} of degree -+1; d_lambda of degree 0 for lambda not in {0, +-mu}.
inline std::vector<GradingCheck> d_lambda_grading_checks(const LiePresentation& g, const SpectralData& sd,
                                                         const std::vector<DLambda>& parts) {
  std::vector<GradingCheck> out;
  size_t n = g.dim();
  FormOperator d = ce_differential(g);
  for (const auto& mu : sd.sigma_plus) {
    auto proj = grading_projectors(sd.space(mu)->basis, sd.space(-mu)->basis, n);
    out.push_back({mu, Scalar(0), true, grading_degrees(d, proj), {-1, 0, 1}});
    for (const auto& dl : parts) {
      if (dl.lambda.is_zero()) continue;
      std::vector<int> expect;
      if (dl.lambda == mu)
        expect = {-1};
      else if (dl.lambda == -mu)
        expect = {1};
      else
        expect = {0};
      out.push_back({mu, dl.lambda, false, grading_degrees(dl.d, proj), expect});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------------------------
// Full pipeline

struct Verdicts {
  bool minimal = false;
  bool non_resonant = false;
  bool weak_nijenhuis_semisimple = false;
  bool generalized_nijenhuis = false;
  std::optional<ResonanceWitness> resonance;
  std::optional<NijenhuisWitness> weak_witness;
  std::optional<std::array<size_t, 3>> courant_witness;  // first nonzero entry of the Courant tensor
};

struct Analysis {
  LiePresentation g;
  Endo phi;
  SpectralData spectral;
  BlockDecomposition blocks;
  MinimalTorsion minimal;
  TorsionSummary torsions;
  std::vector<DLambda> dlambda;
  bool dlambda_sums_to_d = false;
  Verdicts verdicts;
};

inline unsigned default_torsion_order(const Poly& p) { return static_cast<unsigned>(p.degree() + 2); }

inline Analysis analyze_structure(const LiePresentation& g, const Endo& phi, std::optional<unsigned> torsion_max = {}) {
  if (auto bad = g.jacobi_violation())
    throw ValidationError("Jacobi identity fails on basis triple (" + std::to_string((*bad)[0] + 1) + "," +
                          std::to_string((*bad)[1] + 1) + "," + std::to_string((*bad)[2] + 1) + ")");
  if (phi.rows() != 2 * g.dim() || !phi.square()) throw ValidationError("phi must be a 2n x 2n matrix");
  Analysis a{g, phi, analyze(phi), {}, {}, {}, {}, false, {}};
  a.blocks = block_decompose(phi, a.spectral);
  a.minimal = minimal_torsion(g, phi, a.spectral.minpoly);
  a.torsions = torsion_summary(g, phi, torsion_max.value_or(default_torsion_order(a.spectral.minpoly)));
  a.dlambda = d_lambda_decomposition(g, phi, a.spectral);
  a.dlambda_sums_to_d = d_lambda_sum_is_d(g, a.dlambda);
  Verdicts& v = a.verdicts;
  v.minimal = a.minimal.minimal();
  if (!a.minimal.multinomial.is_zero()) {
    auto k = a.minimal.multinomial.entries().begin()->first;
    Tensor3 probe(phi.rows());
    v.courant_witness = std::array<size_t, 3>{probe.partner(k[0]), probe.partner(k[1]), probe.partner(k[2])};
  }
  v.resonance = resonance(a.spectral);
  v.non_resonant = !v.resonance.has_value();
  SpectralData ss = analyze(a.spectral.semisimple);
  auto wn = weak_nijenhuis_check(g, ss);
  v.weak_nijenhuis_semisimple = wn.holds;
  v.weak_witness = wn.witness;
  v.generalized_nijenhuis = a.torsions.t_zero.size() > 1 && a.torsions.t_zero[1];
  return a;
}

}  // namespace gps

#include "support.hpp"

#include "gps/fuzz.hpp"

#include <random>

using namespace gps;
using gps::testing::fixture;
using gps::testing::M;
using gps::testing::P;
using gps::testing::S;

namespace {

// Oracle: [[X+xi, Y+eta]] = [X,Y] + (Z -> xi([Y,Z]) - eta([X,Z])) from structure constants alone.
GenVector dorfman_oracle(const LiePresentation& g, const GenVector& x, const GenVector& y) {
  size_t n = g.dim();
  GenVector out(2 * n);
  auto c = [&](size_t i, size_t j, size_t k) {
    if (i == j) return Scalar(0);
    auto it = g.entries().find({std::min(i, j), std::max(i, j)});
    if (it == g.entries().end()) return Scalar(0);
    return i < j ? it->second[k] : -it->second[k];
  };
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      for (size_t k = 0; k < n; ++k) {
        Scalar cijk = c(i, j, k);
        if (cijk.is_zero()) continue;
        out[k] += x[i] * y[j] * cijk;
        // xi([Y, v_j]) on slot j: xi_k c(i,j,k) Y_i
        out[n + j] += x[n + k] * y[i] * cijk;
        out[n + j] -= y[n + k] * x[i] * cijk;
      }
  return out;
}

std::vector<GenVector> frame(size_t n) {
  std::vector<GenVector> f;
  for (size_t i = 0; i < 2 * n; ++i) f.push_back(unit(2 * n, i));
  return f;
}

const char* structure_names[] = {"heisenberg_a", "heisenberg_c", "nilpotent4", "resonance_1_3", "abelian_zero"};

}  // namespace

TEST(Pairing, DualFrames) {
  EXPECT_EQ(pairing(frame_v(3, 0), frame_a(3, 0)), S("1/2"));
  EXPECT_EQ(pairing(frame_v(3, 0), frame_v(3, 1)), Scalar(0));
  GenVector x = frame_v(3, 0) + frame_a(3, 0);
  EXPECT_EQ(pairing(x, x), Scalar(1));
  EXPECT_THROW(pairing(unit(4, 0), unit(6, 0)), std::invalid_argument);
}

TEST(Pairing, SymmetricBilinear) {
  std::mt19937 rng(1);
  std::uniform_int_distribution<int> c(-3, 3);
  for (int t = 0; t < 50; ++t) {
    GenVector x(6), y(6), z(6);
    for (size_t k = 0; k < 6; ++k) x[k] = c(rng), y[k] = c(rng), z[k] = c(rng);
    EXPECT_EQ(pairing(x, y), pairing(y, x));
    EXPECT_EQ(pairing(x + Scalar(2) * z, y), pairing(x, y) + Scalar(2) * pairing(z, y));
  }
}

TEST(Dorfman, HeisenbergValues) {
  const auto& g = fixture("heisenberg_a").g;
  EXPECT_EQ(dorfman(g, frame_v(3, 0), frame_v(3, 1)), frame_v(3, 2));
  EXPECT_EQ(dorfman(g, frame_v(3, 0), frame_a(3, 2)), Scalar(-1) * frame_a(3, 1));
  for (size_t i = 0; i < 3; ++i)
    for (size_t j = 0; j < 3; ++j) EXPECT_TRUE(is_zero(dorfman(g, frame_a(3, i), frame_a(3, j))));
}

TEST(Dorfman, MatchesStructureConstantOracle) {
  for (const char* name : structure_names) {
    const auto& g = fixture(name).g;
    for (const auto& x : frame(g.dim()))
      for (const auto& y : frame(g.dim())) EXPECT_EQ(dorfman(g, x, y), dorfman_oracle(g, x, y)) << name;
  }
}

TEST(Dorfman, LeibnizPairingInvarianceAndSkew) {
  for (const char* name : structure_names) {
    const auto& g = fixture(name).g;
    auto f = frame(g.dim());
    for (const auto& x : f)
      for (const auto& y : f) {
        EXPECT_TRUE(is_zero(dorfman(g, x, y) + dorfman(g, y, x))) << name;
        for (const auto& z : f) {
          EXPECT_EQ(dorfman(g, x, dorfman(g, y, z)),
                    dorfman(g, dorfman(g, x, y), z) + dorfman(g, y, dorfman(g, x, z)))
              << name;
          EXPECT_TRUE((pairing(dorfman(g, x, y), z) + pairing(y, dorfman(g, x, z))).is_zero()) << name;
        }
      }
  }
}

TEST(CourantT, Values) {
  const auto& h = fixture("heisenberg_a").g;
  EXPECT_EQ(courant_T(h, frame_v(3, 0), frame_v(3, 1), frame_a(3, 2)), S("1/2"));
  EXPECT_EQ(courant_T(h, frame_v(3, 0), frame_v(3, 0), frame_a(3, 2)), Scalar(0));
  const auto& n4 = fixture("nilpotent4").g;
  EXPECT_EQ(courant_T(n4, frame_v(4, 1), frame_v(4, 3), frame_a(4, 0)), S("-1/2"));
}

TEST(CourantT, TotallyAntisymmetric) {
  for (const char* name : structure_names) {
    const auto& g = fixture(name).g;
    auto f = frame(g.dim());
    for (const auto& x : f)
      for (const auto& y : f)
        for (const auto& z : f) {
          Scalar t = courant_T(g, x, y, z);
          EXPECT_EQ(courant_T(g, y, x, z), -t);
          EXPECT_EQ(courant_T(g, x, z, y), -t);
          EXPECT_EQ(courant_T(g, z, x, y), t);
          EXPECT_EQ(courant_T(g, y, z, x), t);
          EXPECT_EQ(courant_T(g, z, y, x), -t);
        }
  }
}

TEST(LiePresentation, StorageAndJacobi) {
  LiePresentation g(3);
  g.set(1, 0, 2, 1);  // [v2, v1] = v3
  EXPECT_EQ(g.bracket_basis(0, 1), (Vec{0, 0, -1}));
  EXPECT_FALSE(g.jacobi_violation());
  EXPECT_THROW(g.set(0, 0, 1, 1), ValidationError);
  EXPECT_THROW(g.set(0, 3, 1, 1), ValidationError);

  // [v1,v2] = v1, [v2,v3] = v2, [v1,v3] = v3 is not a Lie bracket.
  LiePresentation bad(3);
  bad.set(0, 1, 0, 1);
  bad.set(1, 2, 1, 1);
  bad.set(0, 2, 2, 1);
  EXPECT_TRUE(bad.jacobi_violation());
}

TEST(ClassicalLift, ZeroMap) {
  Endo phi = classical_lift(Matrix(3, 3));
  EXPECT_TRUE(phi.is_zero());
  EXPECT_EQ(min_poly_of_matrix(phi), Poly::x());
}

TEST(ClassicalLift, MetallicStructure) {
  Matrix f = M({{0, 1}, {1, 1}});  // companion of x^2 - x - 1
  ASSERT_EQ(min_poly_of_matrix(f), P({-1, -1, 1}));
  Endo phi = classical_lift(f);
  EXPECT_TRUE(is_skew(phi));
  EXPECT_EQ(min_poly_of_matrix(phi), P({1, 0, -3, 0, 1}));
  EXPECT_EQ(classical_lift_minpoly(P({-1, -1, 1})), P({1, 0, -3, 0, 1}));
  EXPECT_THROW(spectrum_extract(min_poly_of_matrix(phi)), UnsupportedSpectrum);
}

TEST(ClassicalLift, ComplexStructure) {
  Matrix j = M({{0, -1}, {1, 0}});
  Endo phi = classical_lift(j);
  EXPECT_TRUE(is_skew(phi));
  EXPECT_EQ(min_poly_of_matrix(phi), P({1, 0, 1}));
  EXPECT_EQ(classical_lift_minpoly(P({1, 0, 1})), P({1, 0, 1}));
}

// Predicted minimal polynomial against the directly computed one, including p = x(x^2+1).
TEST(ClassicalLift, PredictedMinimalPolynomial) {
  std::vector<Matrix> fs{M({{0, -1, 0}, {1, 0, 0}, {0, 0, 0}}), M({{1, 0}, {0, 2}}), M({{0, 1}, {0, 0}}),
                         M({{1, 1}, {0, 1}}), M({{2, 0, 0}, {0, -2, 0}, {0, 0, 3}})};
  for (const auto& f : fs) {
    Poly p = min_poly_of_matrix(f);
    EXPECT_EQ(classical_lift_minpoly(p), min_poly_of_matrix(classical_lift(f))) << p.str();
  }
}

TEST(OnnConjugate, IdentityWord) {
  const auto& phi = fixture("heisenberg_a").phi;
  EXPECT_EQ(onn_conjugate(phi, {}), phi);
  EXPECT_EQ(onn_conjugate(phi, {FrameChange{Matrix::identity(3)}}), phi);
}

TEST(OnnConjugate, GeneratorsPreservePairing) {
  std::mt19937 rng(17);
  Matrix gram = pairing_gram(3);
  for (int t = 0; t < 40; ++t)
    for (const auto& gen : random_word(rng, 3)) {
      Matrix g = generator_matrix(gen, 3);
      EXPECT_EQ(g.transpose() * gram * g, gram);
    }
}

TEST(OnnConjugate, PreservesSkewnessAndMinimalPolynomial) {
  std::mt19937 rng(23);
  for (const auto& s : fuzz_seeds())
    for (int t = 0; t < 10; ++t) {
      Endo c = onn_conjugate(s.phi, random_word(rng, s.g.dim()));
      EXPECT_TRUE(is_skew(c)) << s.name;
      EXPECT_EQ(min_poly_of_matrix(c), s.minpoly) << s.name;
    }
}

TEST(OnnConjugate, RejectsSingularFrameChange) {
  EXPECT_THROW(onn_conjugate(fixture("heisenberg_a").phi, {FrameChange{Matrix(3, 3)}}), std::invalid_argument);
  Matrix notskew = M({{0, 1, 0}, {0, 0, 0}, {0, 0, 0}});
  EXPECT_THROW(generator_matrix(BTransform{notskew}, 3), std::invalid_argument);
}

TEST(Skew, DetectsNonSkewEndomorphisms) {
  for (const auto& [stem, text] : embedded_fixtures()) EXPECT_TRUE(is_skew(parse_document(text).phi)) << stem;
  Endo phi(6, 6);
  phi(0, 0) = 1;
  EXPECT_FALSE(is_skew(phi));
  EXPECT_THROW(require_skew(phi), NotSkew);
}

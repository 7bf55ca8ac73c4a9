#pragma once

#include "gps/lie_double.hpp"

#include <random>

namespace gps {

struct FuzzSeed {
  std::string name;
  Poly minpoly;
  LiePresentation g;
  Endo phi;
};

struct FuzzCase {
  std::string name;  // seed/index
  Poly minpoly;
  LiePresentation g;
  Endo phi;
  std::vector<Generator> word;
};

inline LiePresentation heisenberg(size_t n = 3) {
  LiePresentation g(n);
  g.set(0, 1, 2, 1);
  return g;
}

inline LiePresentation nilpotent4() {
  LiePresentation g(4);
  g.set(0, 1, 2, 1);
  g.set(1, 3, 0, -1);
  return g;
}

inline Endo endo_from_images(size_t n, const std::vector<std::vector<std::pair<size_t, Scalar>>>& images) {
  Endo phi(2 * n, 2 * n);
  for (size_t j = 0; j < images.size(); ++j)
    for (const auto& [i, c] : images[j]) phi(i, j) = c;
  return phi;
}

// One block seed per minimal polynomial used by the property checks.
inline std::vector<FuzzSeed> fuzz_seeds() {
  auto x = Poly::x();
  Poly one(Scalar(1));
  std::vector<FuzzSeed> s;

  // x^2: beta-type nilpotent map a1 -> v2, a2 -> -v1
  s.push_back({"x^2", x.pow(2), heisenberg(), endo_from_images(3, {{}, {}, {}, {{1, 1}}, {{0, -1}}, {}})});

  Matrix j4(4, 4);
  j4(1, 0) = 1;
  j4(0, 1) = -1;
  j4(3, 2) = 1;
  j4(2, 3) = -1;
  s.push_back({"x^2+1", x.pow(2) + one, heisenberg(4), classical_lift(j4)});

  Matrix j3(3, 3);
  j3(1, 0) = 1;
  j3(0, 1) = -1;
  s.push_back({"x^3+x", x.pow(3) + x, heisenberg(), classical_lift(j3)});

  // v1 -> v2 - a2, v2 -> -v1 + a1, a1 -> a2, a2 -> -a1, plus the lift of a complex structure on v3, v4
  s.push_back({"(x^2+1)^2", (x.pow(2) + one).pow(2), heisenberg(4),
               endo_from_images(4, {{{1, 1}, {5, -1}},
                                    {{0, -1}, {4, 1}},
                                    {{3, 1}},
                                    {{2, -1}},
                                    {{5, 1}},
                                    {{4, -1}},
                                    {{7, 1}},
                                    {{6, -1}}})});

  Matrix jn(4, 4);
  jn(1, 0) = 1;
  jn(0, 1) = -1;
  jn(3, 2) = 1;
  s.push_back({"x^2(x^2+1)", x.pow(2) * (x.pow(2) + one), heisenberg(4), classical_lift(jn)});

  s.push_back({"x^4", x.pow(4), nilpotent4(),
               endo_from_images(4, {{}, {{3, 1}}, {{0, 1}}, {{2, 1}}, {{6, -1}}, {}, {{7, -1}}, {{5, -1}}})});

  s.push_back({"x^5", x.pow(5), heisenberg(),
               endo_from_images(3, {{{1, 1}}, {{2, 1}, {5, 1}}, {{4, -1}}, {}, {{3, -1}}, {{4, -1}}})});
  return s;
}

// Random word of pairing-preserving generators with small entries.
inline std::vector<Generator> random_word(std::mt19937& rng, size_t n, size_t max_len = 6) {
  std::uniform_int_distribution<size_t> len(1, max_len);
  std::uniform_int_distribution<int> kind(0, 2), entry(-1, 1), pick(0, static_cast<int>(n) - 1);
  const Scalar scales[] = {Scalar(2), Scalar(-1), Scalar(1, 2), Scalar(-2)};
  std::uniform_int_distribution<int> scale(0, 3);
  std::vector<Generator> word;
  size_t l = len(rng);
  for (size_t t = 0; t < l; ++t) {
    int k = kind(rng);
    if (k < 2) {
      Matrix m(n, n);
      for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
          m(i, j) = entry(rng);
          m(j, i) = -m(i, j);
        }
      if (k == 0)
        word.push_back(BTransform{m});
      else
        word.push_back(BetaTransform{m});
    } else {
      Matrix a = Matrix::identity(n);
      size_t i = static_cast<size_t>(pick(rng)), j = static_cast<size_t>(pick(rng));
      if (i == j)
        a(i, i) = scales[scale(rng)];
      else
        a(i, j) = entry(rng) == 0 ? Scalar(1) : Scalar(entry(rng));
      word.push_back(FrameChange{a});
    }
  }
  return word;
}

// per_seed conjugates of every seed, reproducible from the seed value.
inline std::vector<FuzzCase> fuzz_family(uint32_t seed = 20240611u, size_t per_seed = 15) {
  std::mt19937 rng(seed);
  std::vector<FuzzCase> out;
  for (const auto& s : fuzz_seeds())
    for (size_t k = 0; k < per_seed; ++k) {
      auto word = random_word(rng, s.g.dim());
      out.push_back({s.name + "/" + std::to_string(k), s.minpoly, s.g, onn_conjugate(s.phi, word), word});
    }
  return out;
}

}  // namespace gps

#pragma once

#include "gps/embedded_fixtures.hpp"
#include "gps/io.hpp"

#include <gtest/gtest.h>

namespace gps {

inline void PrintTo(const Matrix& m, std::ostream* os) { *os << "\n" << m.str(); }
inline void PrintTo(const Poly& p, std::ostream* os) { *os << p.str(); }

}  // namespace gps

namespace gps::testing {

inline const InputDocument& fixture(const std::string& name) {
  static std::map<std::string, InputDocument> cache;
  auto it = cache.find(name);
  if (it != cache.end()) return it->second;
  for (const auto& [stem, text] : embedded_fixtures())
    if (stem == name) return cache.emplace(name, parse_document(text)).first->second;
  throw std::runtime_error("no embedded fixture " + name);
}

inline Scalar S(const char* text) { return Scalar::parse(text); }

// Coefficients listed from the constant term upwards.
inline Poly P(std::initializer_list<Scalar> c) { return Poly(Vec(c)); }

inline Matrix M(std::initializer_list<std::initializer_list<Scalar>> rows) {
  Matrix m(rows.size(), rows.begin()->size());
  size_t i = 0;
  for (const auto& r : rows) {
    size_t j = 0;
    for (const auto& s : r) m(i, j++) = s;
    ++i;
  }
  return m;
}

}  // namespace gps::testing

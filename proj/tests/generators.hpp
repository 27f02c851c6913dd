#pragma once

// Hand-rolled random generators for property tests.

#include <random>
#include <vector>

#include "propcalc/diagram.hpp"
#include "propcalc/scalar.hpp"
#include "propcalc/word_tensor.hpp"

namespace gen {

using propcalc::Rational;

inline std::mt19937_64& rng() {
  static std::mt19937_64 r(20240611);
  return r;
}

inline int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }

inline Rational rational(int bound = 9) {
  int den = uniform(1, bound);
  Rational r(uniform(-bound, bound), den);
  r.canonicalize();
  return r;
}

inline Rational nonzero_rational(int bound = 9) {
  Rational r;
  do r = rational(bound);
  while (r == 0);
  return r;
}

inline propcalc::HSeries hseries(int order, int low = 0) {
  propcalc::HSeries s = propcalc::HSeries::zero(order);
  for (int e = low; e < order; ++e) s += propcalc::HSeries::monomial(rational(), e, order);
  return s;
}

inline propcalc::Permutation permutation(int n) {
  std::vector<int> img(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) img[static_cast<std::size_t>(i)] = i;
  std::shuffle(img.begin(), img.end(), rng());
  return propcalc::Permutation(img);
}

inline propcalc::Word word(int letters, int max_len) {
  propcalc::Word w(static_cast<std::size_t>(uniform(0, max_len)));
  for (int& a : w) a = uniform(0, letters - 1);
  return w;
}

inline propcalc::Diagram diagram(propcalc::Variant v, int n_in, int max_vertices, int max_width = 4) {
  propcalc::RandomDiagramOptions o;
  o.n_in = n_in;
  o.max_vertices = max_vertices;
  o.max_width = max_width;
  return propcalc::random_diagram(rng(), propcalc::Signature::for_variant(v).generators(), o);
}

}  // namespace gen

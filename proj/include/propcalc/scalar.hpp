#pragma once

// Exact scalars: GMP rationals and truncated hbar-series.

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <vector>

namespace propcalc {

using Rational = mpq_class;
using Integer = mpz_class;

inline bool is_zero(const Rational& x) { return sgn(x) == 0; }
std::string to_string(const Rational& x);
Rational parse_rational(const std::string& text);

/// Global default truncation order K for hbar arithmetic.
int default_order();
void set_default_order(int k);

/// Element of K((hbar)) known modulo hbar^order.
///
/// Stores the coefficients of hbar^low .. hbar^(order-1). Negative exponents
/// are representable (the localized model); callers that accept user data
/// reject them unless working in localized mode.
class HSeries {
 public:
  HSeries() : order_(default_order()) {}
  HSeries(const Rational& c, int order = default_order());  // NOLINT: constants convert implicitly
  HSeries(long c) : HSeries(Rational(c)) {}                 // NOLINT

  static HSeries monomial(const Rational& c, int exponent, int order = default_order());
  static HSeries zero(int order) { return HSeries(Rational(0), order); }

  int order() const { return order_; }
  /// Lowest exponent with a nonzero coefficient; order() for the zero series.
  int valuation() const;
  Rational coeff(int exponent) const;
  bool is_zero() const { return coeffs_.empty(); }
  bool is_constant() const;

  HSeries& operator+=(const HSeries& o);
  HSeries& operator-=(const HSeries& o);
  HSeries& operator*=(const HSeries& o);
  HSeries& operator*=(const Rational& c);
  HSeries operator-() const;

  /// Multiply by hbar^k.
  HSeries shifted(int k) const;
  /// Reduce modulo hbar^k (k <= order()).
  HSeries truncated(int k) const;
  /// Inverse of a unit: valuation 0 with nonzero constant term.
  HSeries inverse() const;

  friend bool operator==(const HSeries& a, const HSeries& b);
  friend bool operator!=(const HSeries& a, const HSeries& b) { return !(a == b); }

  std::string str() const;

 private:
  void trim();

  int order_;
  int low_ = 0;
  std::vector<Rational> coeffs_;
};

inline HSeries operator+(HSeries a, const HSeries& b) { return a += b; }
inline HSeries operator-(HSeries a, const HSeries& b) { return a -= b; }
inline HSeries operator*(HSeries a, const HSeries& b) { return a *= b; }
inline HSeries operator*(HSeries a, const Rational& c) { return a *= c; }
inline HSeries operator*(const Rational& c, HSeries a) { return a *= c; }

inline bool is_zero(const HSeries& x) { return x.is_zero(); }
inline std::string to_string(const HSeries& x) { return x.str(); }

/// Series (1+hbar)^{-1} style helpers are built from these; `hbar(order)` is the generator.
inline HSeries hbar(int order = default_order()) { return HSeries::monomial(Rational(1), 1, order); }

/// Scalar traits used by templated containers.
template <typename S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static Rational one() { return Rational(1); }
  static Rational from(const Rational& c) { return c; }
};

template <>
struct ScalarTraits<HSeries> {
  static HSeries one() { return HSeries(Rational(1)); }
  static HSeries from(const Rational& c) { return HSeries(c); }
};

}  // namespace propcalc

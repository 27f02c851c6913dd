#include "propcalc/scalar.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <stdexcept>

namespace propcalc {

namespace {
std::atomic<int> g_default_order{8};
}

int default_order() { return g_default_order.load(); }

void set_default_order(int k) {
  if (k < 1) throw std::invalid_argument("truncation order must be >= 1");
  g_default_order.store(k);
}

std::string to_string(const Rational& x) { return x.get_str(); }

Rational parse_rational(const std::string& text) {
  Rational r;
  if (r.set_str(text, 10) != 0) throw std::invalid_argument("not a rational: " + text);
  if (sgn(r.get_den()) == 0) throw std::invalid_argument("zero denominator: " + text);
  r.canonicalize();
  return r;
}

HSeries::HSeries(const Rational& c, int order) : order_(order) {
  if (order_ > 0 && !propcalc::is_zero(c)) coeffs_.push_back(c);
}

HSeries HSeries::monomial(const Rational& c, int exponent, int order) {
  HSeries s = zero(order);
  if (exponent < order && !propcalc::is_zero(c)) {
    s.low_ = exponent;
    s.coeffs_.push_back(c);
  }
  return s;
}

int HSeries::valuation() const { return coeffs_.empty() ? order_ : low_; }

Rational HSeries::coeff(int exponent) const {
  int i = exponent - low_;
  if (i < 0 || i >= static_cast<int>(coeffs_.size())) return Rational(0);
  return coeffs_[i];
}

bool HSeries::is_constant() const { return coeffs_.empty() || (low_ == 0 && coeffs_.size() == 1); }

void HSeries::trim() {
  // drop coefficients at or beyond the order, then zeros at both ends
  int keep = std::max(0, order_ - low_);
  if (static_cast<int>(coeffs_.size()) > keep) coeffs_.resize(keep);
  while (!coeffs_.empty() && propcalc::is_zero(coeffs_.back())) coeffs_.pop_back();
  std::size_t lead = 0;
  while (lead < coeffs_.size() && propcalc::is_zero(coeffs_[lead])) ++lead;
  if (lead > 0) {
    coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(lead));
    low_ += static_cast<int>(lead);
  }
  if (coeffs_.empty()) low_ = 0;
}

HSeries& HSeries::operator+=(const HSeries& o) {
  order_ = std::min(order_, o.order_);
  if (o.coeffs_.empty()) {
    trim();
    return *this;
  }
  if (coeffs_.empty()) {
    low_ = o.low_;
    coeffs_ = o.coeffs_;
    trim();
    return *this;
  }
  int lo = std::min(low_, o.low_);
  int hi = std::max(low_ + static_cast<int>(coeffs_.size()), o.low_ + static_cast<int>(o.coeffs_.size()));
  std::vector<Rational> out(static_cast<std::size_t>(hi - lo));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) out[low_ - lo + i] += coeffs_[i];
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) out[o.low_ - lo + i] += o.coeffs_[i];
  low_ = lo;
  coeffs_ = std::move(out);
  trim();
  return *this;
}

HSeries& HSeries::operator-=(const HSeries& o) { return *this += -o; }

HSeries HSeries::operator-() const {
  HSeries r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

HSeries& HSeries::operator*=(const HSeries& o) {
  // a factor with negative valuation lowers the precision of the other one
  int order = std::min(order_ + std::min(0, o.valuation()), o.order_ + std::min(0, valuation()));
  if (coeffs_.empty() || o.coeffs_.empty()) {
    coeffs_.clear();
    low_ = 0;
    order_ = order;
    return *this;
  }
  int lo = low_ + o.low_;
  int span = std::max(0, order - lo);
  std::vector<Rational> out(static_cast<std::size_t>(std::min<long>(span, static_cast<long>(coeffs_.size() + o.coeffs_.size()))));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < o.coeffs_.size() && i + j < out.size(); ++j) out[i + j] += coeffs_[i] * o.coeffs_[j];
  }
  low_ = lo;
  order_ = order;
  coeffs_ = std::move(out);
  trim();
  return *this;
}

HSeries& HSeries::operator*=(const Rational& c) {
  for (auto& x : coeffs_) x *= c;
  trim();
  return *this;
}

HSeries HSeries::shifted(int k) const {
  HSeries r = *this;
  r.low_ += k;
  r.trim();
  return r;
}

HSeries HSeries::truncated(int k) const {
  HSeries r = *this;
  r.order_ = std::min(order_, k);
  r.trim();
  return r;
}

HSeries HSeries::inverse() const {
  if (coeffs_.empty() || low_ != 0) throw std::domain_error("HSeries::inverse: not a unit (valuation must be 0)");
  // b_0 = 1/a_0, b_n = -(1/a_0) sum_{i=1..n} a_i b_{n-i}
  int n = order_;
  std::vector<Rational> b(static_cast<std::size_t>(n));
  Rational inv0 = 1 / coeffs_[0];
  b[0] = inv0;
  for (int k = 1; k < n; ++k) {
    Rational acc = 0;
    for (int i = 1; i <= k && i < static_cast<int>(coeffs_.size()); ++i) acc += coeffs_[i] * b[k - i];
    b[k] = -inv0 * acc;
  }
  HSeries r = zero(n);
  r.coeffs_ = std::move(b);
  r.trim();
  return r;
}

bool operator==(const HSeries& a, const HSeries& b) {
  // compare within the common precision
  int order = std::min(a.order_, b.order_);
  HSeries d = a.truncated(order) - b.truncated(order);
  return d.is_zero();
}

std::string HSeries::str() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const Rational& c = coeffs_[i];
    if (propcalc::is_zero(c)) continue;
    int e = low_ + static_cast<int>(i);
    std::string cs = c.get_str();
    if (!first) {
      if (cs[0] == '-') {
        os << " - ";
        cs = cs.substr(1);
      } else {
        os << " + ";
      }
    }
    first = false;
    if (e == 0) {
      os << cs;
    } else {
      if (cs == "-1") {
        os << "-";
      } else if (cs != "1") {
        os << cs << " ";
      }
      os << "h";
      if (e != 1) os << "^" << e;
    }
  }
  return os.str();
}

}  // namespace propcalc

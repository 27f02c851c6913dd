#pragma once

// Formal linear combinations of diagrams of a fixed bidegree.

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "propcalc/diagram.hpp"
#include "propcalc/scalar.hpp"

namespace propcalc {

template <typename S>
class LinComb {
 public:
  using Map = std::map<CanonicalDiagram, S>;

  LinComb(int n_in = 0, int n_out = 0) : n_in_(n_in), n_out_(n_out) {}
  explicit LinComb(const Diagram& d, const S& c = ScalarTraits<S>::one()) : n_in_(d.n_in()), n_out_(d.n_out()) { add(d, c); }

  int n_in() const { return n_in_; }
  int n_out() const { return n_out_; }
  const Map& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add(const CanonicalDiagram& d, const S& c) {
    check(d.diagram());
    if (propcalc::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(d, c);
    if (!inserted) {
      it->second += c;
      if (propcalc::is_zero(it->second)) terms_.erase(it);
    }
  }
  void add(const Diagram& d, const S& c) { add(canonical_form(d), c); }

  LinComb& operator+=(const LinComb& o) {
    for (const auto& [d, c] : o.terms_) add(d, c);
    return *this;
  }
  LinComb& operator-=(const LinComb& o) {
    for (const auto& [d, c] : o.terms_) add(d, -c);
    return *this;
  }
  template <typename C>
  LinComb& scale(const C& c) {
    Map out;
    for (auto [d, x] : terms_) {
      x *= c;
      if (!propcalc::is_zero(x)) out.emplace(d, x);
    }
    terms_ = std::move(out);
    return *this;
  }
  friend LinComb operator+(LinComb a, const LinComb& b) { return a += b; }
  friend LinComb operator-(LinComb a, const LinComb& b) { return a -= b; }
  friend bool operator==(const LinComb& a, const LinComb& b) {
    return a.n_in_ == b.n_in_ && a.n_out_ == b.n_out_ && (a - b).is_zero();
  }

  /// g∘f, bilinear.
  friend LinComb compose(const LinComb& g, const LinComb& f) {
    if (f.n_out_ != g.n_in_) throw std::invalid_argument("compose: arity mismatch");
    LinComb r(f.n_in_, g.n_out_);
    for (const auto& [dg, cg] : g.terms_)
      for (const auto& [df, cf] : f.terms_) r.add(compose(dg.diagram(), df.diagram()), cg * cf);
    return r;
  }
  friend LinComb tensor(const LinComb& a, const LinComb& b) {
    LinComb r(a.n_in_ + b.n_in_, a.n_out_ + b.n_out_);
    for (const auto& [da, ca] : a.terms_)
      for (const auto& [db, cb] : b.terms_) r.add(tensor(da.diagram(), db.diagram()), ca * cb);
    return r;
  }

 private:
  void check(const Diagram& d) const {
    if (d.n_in() != n_in_ || d.n_out() != n_out_) throw std::invalid_argument("LinComb: bidegree mismatch");
  }

  int n_in_, n_out_;
  Map terms_;
};

}  // namespace propcalc

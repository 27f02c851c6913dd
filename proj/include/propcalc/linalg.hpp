#pragma once

// Incremental exact row reduction over the rationals for sparse vectors with
// arbitrary ordered keys. Rows are kept in semi-echelon form: the pivot of a
// row is its smallest key and no other row has that pivot.

#include <cstddef>
#include <map>
#include <vector>

#include "propcalc/scalar.hpp"

namespace propcalc {

template <typename K>
using SparseVector = std::map<K, Rational>;

template <typename K>
void axpy(SparseVector<K>& y, const Rational& a, const SparseVector<K>& x) {
  for (const auto& [k, c] : x) {
    auto [it, inserted] = y.try_emplace(k, a * c);
    if (!inserted) {
      it->second += a * c;
      if (is_zero(it->second)) y.erase(it);
    }
  }
}

template <typename K>
class EchelonBasis {
 public:
  /// Reduce v against the stored rows.
  SparseVector<K> reduce(SparseVector<K> v) const {
    auto it = v.begin();
    while (it != v.end()) {
      auto piv = rows_.find(it->first);
      if (piv == rows_.end()) {
        ++it;
        continue;
      }
      K key = it->first;
      Rational c = it->second;
      axpy(v, Rational(-c), piv->second);
      it = v.upper_bound(key);
    }
    return v;
  }

  /// Adds v to the span; returns true if it was independent.
  bool insert(const SparseVector<K>& v) {
    SparseVector<K> r = reduce(v);
    if (r.empty()) return false;
    Rational lead = r.begin()->second;
    for (auto& [k, c] : r) c /= lead;
    K key = r.begin()->first;
    rows_.emplace(key, std::move(r));
    return true;
  }

  bool contains(const SparseVector<K>& v) const { return reduce(v).empty(); }
  std::size_t rank() const { return rows_.size(); }

 private:
  std::map<K, SparseVector<K>> rows_;
};

template <typename K>
std::size_t rank_of(const std::vector<SparseVector<K>>& vectors) {
  EchelonBasis<K> b;
  for (const auto& v : vectors) b.insert(v);
  return b.rank();
}

}  // namespace propcalc

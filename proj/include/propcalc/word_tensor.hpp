#pragma once

// Sparse elements of T(V)^{⊗n}: maps from tuples of words to coefficients.
//
// Letters are small nonnegative integers. A word of length zero is the unit.
// The optional length cap L drops every term whose total word length (summed
// over slots) exceeds L; products respect this ideal because length is additive.

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "propcalc/scalar.hpp"

namespace propcalc {

using Word = std::vector<int>;
using WordTuple = std::vector<Word>;

inline int total_length(const WordTuple& t) {
  int n = 0;
  for (const auto& w : t) n += static_cast<int>(w.size());
  return n;
}

inline Word concat(const Word& a, const Word& b) {
  Word r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

template <typename S>
class WordTensor {
 public:
  using Map = std::map<WordTuple, S>;

  explicit WordTensor(int slots = 1, int max_len = -1) : slots_(slots), max_len_(max_len) {
    if (slots < 0) throw std::invalid_argument("WordTensor: negative slot count");
  }

  static WordTensor unit(int slots, int max_len = -1) {
    WordTensor t(slots, max_len);
    t.add(WordTuple(static_cast<std::size_t>(slots)), ScalarTraits<S>::one());
    return t;
  }
  static WordTensor monomial(const WordTuple& key, const S& c, int max_len = -1) {
    WordTensor t(static_cast<int>(key.size()), max_len);
    t.add(key, c);
    return t;
  }

  int slots() const { return slots_; }
  int max_len() const { return max_len_; }
  const Map& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  S coeff(const WordTuple& key) const {
    auto it = terms_.find(key);
    return it == terms_.end() ? S(Rational(0)) : it->second;
  }

  void add(const WordTuple& key, const S& c) {
    if (static_cast<int>(key.size()) != slots_) throw std::invalid_argument("WordTensor: slot count mismatch");
    if (propcalc::is_zero(c)) return;
    if (max_len_ >= 0 && total_length(key) > max_len_) return;
    auto [it, inserted] = terms_.try_emplace(key, c);
    if (!inserted) {
      it->second += c;
      if (propcalc::is_zero(it->second)) terms_.erase(it);
    }
  }

  /// Same element with a different (or no) length cap.
  WordTensor with_max_len(int max_len) const {
    WordTensor r(slots_, max_len);
    for (const auto& [k, c] : terms_) r.add(k, c);
    return r;
  }

  WordTensor& operator+=(const WordTensor& o) {
    check_slots(o);
    for (const auto& [k, c] : o.terms_) add(k, c);
    return *this;
  }
  WordTensor& operator-=(const WordTensor& o) {
    check_slots(o);
    for (const auto& [k, c] : o.terms_) add(k, -c);
    return *this;
  }
  WordTensor operator-() const {
    WordTensor r(slots_, max_len_);
    for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
    return r;
  }
  template <typename C>
  WordTensor& scale(const C& c) {
    for (auto it = terms_.begin(); it != terms_.end();) {
      it->second *= c;
      if (propcalc::is_zero(it->second))
        it = terms_.erase(it);
      else
        ++it;
    }
    return *this;
  }

  /// Slot-wise concatenation product in A^{⊗n}.
  friend WordTensor operator*(const WordTensor& a, const WordTensor& b) {
    a.check_slots(b);
    int cap = combined_cap(a.max_len_, b.max_len_);
    WordTensor r(a.slots_, cap);
    for (const auto& [ka, ca] : a.terms_) {
      int la = total_length(ka);
      for (const auto& [kb, cb] : b.terms_) {
        if (cap >= 0 && la + total_length(kb) > cap) continue;
        WordTuple k(ka.size());
        for (std::size_t i = 0; i < ka.size(); ++i) k[i] = concat(ka[i], kb[i]);
        r.add(k, ca * cb);
      }
    }
    return r;
  }

  friend WordTensor operator+(WordTensor a, const WordTensor& b) { return a += b; }
  friend WordTensor operator-(WordTensor a, const WordTensor& b) { return a -= b; }
  friend bool operator==(const WordTensor& a, const WordTensor& b) {
    if (a.slots_ != b.slots_) return false;
    WordTensor d = a;
    d -= b;
    return d.is_zero();
  }

  std::string str(const std::string& letters = "") const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      os << "(" << to_string(c) << ")";
      for (std::size_t i = 0; i < k.size(); ++i) {
        os << (i == 0 ? " " : "|");
        if (k[i].empty()) os << "1";
        for (int x : k[i]) {
          if (!letters.empty() && x >= 0 && x < static_cast<int>(letters.size()))
            os << letters[static_cast<std::size_t>(x)];
          else
            os << "x" << x;
        }
      }
    }
    return os.str();
  }

 private:
  static int combined_cap(int a, int b) {
    if (a < 0) return b;
    if (b < 0) return a;
    return a < b ? a : b;
  }
  void check_slots(const WordTensor& o) const {
    if (o.slots_ != slots_) throw std::invalid_argument("WordTensor: slot count mismatch");
  }

  int slots_;
  int max_len_;
  Map terms_;
};

/// Coproduct of the tensor algebra with primitive letters (unshuffle), on one word.
template <typename F>
void for_each_unshuffle(const Word& w, F&& f) {
  std::size_t n = w.size();
  for (unsigned long mask = 0; mask < (1UL << n); ++mask) {
    Word a, b;
    for (std::size_t i = 0; i < n; ++i) ((mask >> i) & 1UL ? b : a).push_back(w[i]);
    f(a, b);
  }
}

}  // namespace propcalc

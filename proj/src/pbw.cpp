#include "propcalc/pbw.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "propcalc/permutation.hpp"

namespace propcalc {

bool pbw_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

bool is_pbw_monomial(const PBWMonomial& m) {
  for (const auto& slot : m) {
    for (const auto& w : slot)
      if (!is_lyndon(w)) return false;
    for (std::size_t i = 0; i + 1 < slot.size(); ++i)
      if (pbw_less(slot[i], slot[i + 1])) return false;
  }
  return true;
}

std::vector<Word> lyndon_factorization(const Word& w) {
  // Duval's algorithm
  std::vector<Word> out;
  std::size_t n = w.size(), i = 0;
  while (i < n) {
    std::size_t j = i + 1, k = i;
    while (j < n && w[k] <= w[j]) {
      k = w[k] < w[j] ? i : k + 1;
      ++j;
    }
    while (i <= k) {
      out.emplace_back(w.begin() + static_cast<long>(i), w.begin() + static_cast<long>(i + j - k));
      i += j - k;
    }
  }
  return out;
}

const std::map<std::vector<Word>, Rational>& straighten(const std::vector<Word>& factors) {
  static std::mutex mu;
  static std::map<std::vector<Word>, std::map<std::vector<Word>, Rational>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(factors);
    if (it != cache.end()) return it->second;
  }
  std::map<std::vector<Word>, Rational> value;
  std::size_t i = 0;
  while (i + 1 < factors.size() && !pbw_less(factors[i], factors[i + 1])) ++i;
  if (i + 1 >= factors.size()) {
    value[factors] = 1;
  } else {
    // ...ab... = ...ba... + ...[a,b]...
    std::vector<Word> swapped = factors;
    std::swap(swapped[i], swapped[i + 1]);
    for (const auto& [m, c] : straighten(swapped)) value[m] += c;
    LieElement br = lie_bracket(LieElement{{factors[i], Rational(1)}}, LieElement{{factors[i + 1], Rational(1)}});
    for (const auto& [l, c] : br) {
      std::vector<Word> shorter(factors.begin(), factors.begin() + static_cast<long>(i));
      shorter.push_back(l);
      shorter.insert(shorter.end(), factors.begin() + static_cast<long>(i) + 2, factors.end());
      for (const auto& [m, d] : straighten(shorter)) value[m] += c * d;
    }
    for (auto it = value.begin(); it != value.end();) it = it->second == 0 ? value.erase(it) : std::next(it);
  }
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(factors, std::move(value)).first->second;
}

namespace {

WordPoly product_expansion(const std::vector<Word>& factors) {
  WordPoly r{{Word{}, Rational(1)}};
  for (const auto& l : factors) r = word_product(r, lyndon_expansion(l));
  return r;
}

/// Σ c·(f_1 ⊗ ... ⊗ f_n) added into t.
template <typename S>
void add_tensor_product(WordTensor<S>& t, const std::vector<WordPoly>& slots, const S& c) {
  std::vector<std::pair<WordTuple, Rational>> acc{{WordTuple{}, Rational(1)}};
  for (const auto& f : slots) {
    std::vector<std::pair<WordTuple, Rational>> next;
    for (const auto& [k, x] : acc)
      for (const auto& [w, y] : f) {
        WordTuple k2 = k;
        k2.push_back(w);
        next.emplace_back(std::move(k2), x * y);
      }
    acc = std::move(next);
  }
  for (const auto& [k, x] : acc) {
    S y = c;
    y *= x;
    t.add(k, y);
  }
}

/// Coordinates in the Chen-Fox-Lyndon basis (factors lexicographically non-increasing).
template <typename S>
PBWCoords<S> to_cfl(const WordTensor<S>& a) {
  WordTensor<S> f = a.with_max_len(-1);
  PBWCoords<S> out;
  while (!f.is_zero()) {
    auto [key, c] = *f.terms().begin();  // smallest tuple: its factorization leads
    PBWMonomial mono;
    std::vector<WordPoly> slots;
    for (const auto& w : key) {
      mono.push_back(lyndon_factorization(w));
      slots.push_back(product_expansion(mono.back()));
    }
    out.emplace(mono, c);
    add_tensor_product(f, slots, S(-c));
  }
  return out;
}

template <typename S>
void check_single_slot(const WordTensor<S>& a, const char* what) {
  if (a.slots() != 1) throw std::invalid_argument(std::string(what) + ": expects a single-slot element");
}

template <typename S>
void check_degree(const WordTensor<S>& a, int cap, const char* what) {
  for (const auto& [k, c] : a.terms())
    if (total_length(k) > cap) throw std::invalid_argument(std::string(what) + ": degree above the series bound");
}

/// Calls f(result_word_slots) for every surjective assignment of the letters of w to k slots.
template <typename F>
void for_each_surjection(const Word& w, int k, F&& f) {
  std::vector<Word> slots(static_cast<std::size_t>(k));
  int nonempty = 0;
  auto rec = [&](auto&& self, std::size_t i) -> void {
    int left = static_cast<int>(w.size() - i);
    if (left < k - nonempty) return;
    if (i == w.size()) {
      f(slots);
      return;
    }
    for (int s = 0; s < k; ++s) {
      auto& slot = slots[static_cast<std::size_t>(s)];
      if (slot.empty()) ++nonempty;
      slot.push_back(w[i]);
      self(self, i + 1);
      slot.pop_back();
      if (slot.empty()) --nonempty;
    }
  };
  rec(rec, 0);
}

/// Σ_n coeff[n] m^{(n)}∘(id−η∘ε)^{⊗n}∘Δ^{(n)} on a single word.
std::map<Word, Rational> convolution_series(const Word& w, const std::vector<Rational>& coeff) {
  std::map<Word, Rational> out;
  if (w.empty()) {
    if (!coeff.empty() && coeff[0] != 0) out[w] = coeff[0];
    return out;
  }
  for (int n = 1; n <= static_cast<int>(w.size()) && n < static_cast<int>(coeff.size()); ++n) {
    const Rational& c = coeff[static_cast<std::size_t>(n)];
    if (c == 0) continue;
    for_each_surjection(w, n, [&](const std::vector<Word>& slots) {
      Word r;
      for (const auto& s : slots) r.insert(r.end(), s.begin(), s.end());
      out[r] += c;
    });
  }
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

template <typename S>
WordTensor<S> apply_series(const WordTensor<S>& a, const std::vector<Rational>& coeff) {
  WordTensor<S> out(1);
  // the Eulerian and antipode series get applied to the same words over and over
  static std::mutex mu;
  static std::map<std::vector<Rational>, std::map<Word, std::map<Word, Rational>>> caches;
  std::lock_guard lock(mu);
  auto& cache = caches[coeff];
  for (const auto& [k, c] : a.terms()) {
    auto it = cache.find(k[0]);
    if (it == cache.end()) it = cache.emplace(k[0], convolution_series(k[0], coeff)).first;
    for (const auto& [w, x] : it->second) {
      S y = c;
      y *= x;
      out.add({w}, y);
    }
  }
  return out;
}

}  // namespace

template <typename S>
PBWCoords<S> to_pbw(const WordTensor<S>& a) {
  PBWCoords<S> out;
  for (const auto& [mono, c] : to_cfl(a)) {
    std::vector<std::pair<PBWMonomial, Rational>> acc{{PBWMonomial{}, Rational(1)}};
    for (const auto& slot : mono) {
      std::vector<std::pair<PBWMonomial, Rational>> next;
      for (const auto& [m, x] : acc)
        for (const auto& [ordered, y] : straighten(slot)) {
          PBWMonomial m2 = m;
          m2.push_back(ordered);
          next.emplace_back(std::move(m2), x * y);
        }
      acc = std::move(next);
    }
    for (const auto& [m, x] : acc) {
      S y = c;
      y *= x;
      auto [it, inserted] = out.try_emplace(m, y);
      if (!inserted) {
        it->second += y;
        if (is_zero(it->second)) out.erase(it);
      }
    }
  }
  return out;
}

template <typename S>
WordTensor<S> from_pbw(const PBWCoords<S>& c, int slots) {
  WordTensor<S> out(slots);
  for (const auto& [m, x] : c) {
    if (static_cast<int>(m.size()) != slots) throw std::invalid_argument("from_pbw: slot count mismatch");
    if (!is_pbw_monomial(m)) throw std::invalid_argument("from_pbw: not an ordered PBW monomial");
    std::vector<WordPoly> polys;
    for (const auto& slot : m) polys.push_back(product_expansion(slot));
    add_tensor_product(out, polys, x);
  }
  return out;
}

template <typename S>
int pbw_filtration_degree(const WordTensor<S>& a) {
  // any ordered PBW basis spans the same filtration, so the Lyndon factorization basis suffices
  int deg = -1;
  for (const auto& [m, c] : to_cfl(a)) {
    int d = 0;
    for (const auto& slot : m) d += static_cast<int>(slot.size());
    deg = std::max(deg, d);
  }
  return deg;
}

template <typename S>
WordTensor<S> ue_product(const WordTensor<S>& a, const WordTensor<S>& b) {
  return a.with_max_len(-1) * b.with_max_len(-1);
}

template <typename S>
WordTensor<S> ue_coproduct(const WordTensor<S>& a) {
  int n = a.slots();
  WordTensor<S> out(2 * n);
  for (const auto& [k, c] : a.terms()) {
    std::vector<std::pair<WordTuple, WordTuple>> acc{{{}, {}}};
    for (const auto& w : k) {
      std::vector<std::pair<WordTuple, WordTuple>> next;
      for_each_unshuffle(w, [&](const Word& x, const Word& y) {
        for (const auto& [l, r] : acc) {
          auto l2 = l, r2 = r;
          l2.push_back(x);
          r2.push_back(y);
          next.emplace_back(std::move(l2), std::move(r2));
        }
      });
      acc = std::move(next);
    }
    for (const auto& [l, r] : acc) {
      WordTuple key = l;
      key.insert(key.end(), r.begin(), r.end());
      out.add(key, c);
    }
  }
  return out;
}

template <typename S>
S counit(const WordTensor<S>& a) {
  return a.coeff(WordTuple(static_cast<std::size_t>(a.slots())));
}

template <typename S>
WordTensor<S> reduced_coproduct_power(const WordTensor<S>& a, int k) {
  check_single_slot(a, "reduced_coproduct_power");
  if (k < 0) throw std::invalid_argument("reduced_coproduct_power: negative power");
  WordTensor<S> out(k);
  for (const auto& [key, c] : a.terms()) {
    const Word& w = key[0];
    if (k == 0) {
      if (w.empty()) out.add({}, c);
      continue;
    }
    if (w.empty()) continue;
    for_each_surjection(w, k, [&](const std::vector<Word>& slots) { out.add(slots, c); });
  }
  return out;
}

template <typename S>
WordTensor<S> iterated_product(const WordTensor<S>& a) {
  WordTensor<S> out(1);
  for (const auto& [k, c] : a.terms()) {
    Word w;
    for (const auto& x : k) w.insert(w.end(), x.begin(), x.end());
    out.add({w}, c);
  }
  return out;
}

template <typename S>
WordTensor<S> antipode(const WordTensor<S>& a, int degree_cap) {
  check_degree(a, degree_cap, "antipode");
  std::vector<Rational> sign;
  for (int n = 0; n <= degree_cap; ++n) sign.emplace_back(n % 2 ? -1 : 1);
  if (a.slots() == 1) return apply_series(a, sign);
  // slot-wise
  WordTensor<S> out(a.slots());
  for (const auto& [k, c] : a.terms()) {
    std::vector<std::pair<WordTuple, Rational>> acc{{WordTuple{}, Rational(1)}};
    for (const auto& w : k) {
      auto img = convolution_series(w, sign);
      std::vector<std::pair<WordTuple, Rational>> next;
      for (const auto& [t, x] : acc)
        for (const auto& [v, y] : img) {
          WordTuple t2 = t;
          t2.push_back(v);
          next.emplace_back(std::move(t2), x * y);
        }
      acc = std::move(next);
    }
    for (const auto& [t, x] : acc) {
      S y = c;
      y *= x;
      out.add(t, y);
    }
  }
  return out;
}

std::vector<Rational> eulerian_coeffs(int m, int n_max) {
  if (m < 0 || n_max < 0) throw std::invalid_argument("eulerian_coeffs: negative index");
  std::vector<Rational> log1p(static_cast<std::size_t>(n_max) + 1, Rational(0));
  for (int n = 1; n <= n_max; ++n) log1p[static_cast<std::size_t>(n)] = Rational(n % 2 ? 1 : -1, n);
  std::vector<Rational> acc(static_cast<std::size_t>(n_max) + 1, Rational(0));
  acc[0] = 1;
  for (int j = 0; j < m; ++j) {
    std::vector<Rational> next(acc.size(), Rational(0));
    for (std::size_t a = 0; a < acc.size(); ++a)
      for (std::size_t b = 1; a + b < acc.size(); ++b) next[a + b] += acc[a] * log1p[b];
    acc = std::move(next);
  }
  Rational f(static_cast<long>(factorial(m)));
  for (auto& x : acc) x /= f;
  return acc;
}

template <typename S>
WordTensor<S> eulerian_apply(int m, const WordTensor<S>& a, int degree_cap) {
  check_single_slot(a, "eulerian_apply");
  check_degree(a, degree_cap, "eulerian_apply");
  return apply_series(a, eulerian_coeffs(m, degree_cap));
}

template <typename S>
WordTensor<S> sym_map(const SymDecomposition<S>& d) {
  WordTensor<S> out(1);
  for (const auto& [k, comp] : d)
    for (const auto& [ls, c] : comp) {
      if (static_cast<int>(ls.size()) != k) throw std::invalid_argument("sym_map: component degree mismatch");
      std::vector<std::size_t> idx(ls.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      WordPoly sum;
      do {
        std::vector<Word> f;
        for (std::size_t i : idx) f.push_back(ls[i]);
        add_to(sum, product_expansion(f));
      } while (std::next_permutation(idx.begin(), idx.end()));
      Rational inv(1, static_cast<long>(factorial(k)));
      for (const auto& [w, x] : sum) {
        S y = c;
        y *= x * inv;
        out.add({w}, y);
      }
    }
  return out;
}

template <typename S>
SymDecomposition<S> sym_decompose(const WordTensor<S>& a) {
  check_single_slot(a, "sym_decompose");
  SymDecomposition<S> out;
  WordTensor<S> rest = a.with_max_len(-1);
  while (!rest.is_zero()) {
    auto coords = to_pbw(rest);
    int k = 0;
    for (const auto& [m, c] : coords) k = std::max(k, static_cast<int>(m[0].size()));
    SymElement<S> top;
    for (const auto& [m, c] : coords) {
      if (static_cast<int>(m[0].size()) != k) continue;
      std::vector<Word> key = m[0];
      std::sort(key.begin(), key.end());
      top[key] += c;
    }
    rest -= sym_map(SymDecomposition<S>{{k, top}});
    auto& slot = out[k];
    for (const auto& [key, c] : top) {
      slot[key] += c;
      if (is_zero(slot[key])) slot.erase(key);
    }
    if (slot.empty()) out.erase(k);
  }
  return out;
}

template <typename S>
SymDecomposition<S> sym_inverse(const WordTensor<S>& a) {
  check_single_slot(a, "sym_inverse");
  int deg = 0;
  for (const auto& [k, c] : a.terms()) deg = std::max(deg, total_length(k));
  SymDecomposition<S> out;
  for (int m = 0; m <= deg; ++m) {
    auto part = sym_decompose(eulerian_apply(m, a));
    if (part.empty()) continue;
    if (part.size() != 1 || part.begin()->first != m) throw std::logic_error("sym_inverse: p_m image is not homogeneous");
    out[m] = part.begin()->second;
  }
  return out;
}

SymElement<Rational> mm_structure_constant(int p, int q, int r, int cap) {
  if (p < 0 || q < 0 || r < 0) throw std::invalid_argument("mm_structure_constant: negative degree");
  if (p + q > cap) throw std::out_of_range("mm_structure_constant: cap exceeded");
  std::vector<Word> xs, ys;
  for (int i = 0; i < p; ++i) xs.push_back({i});
  for (int j = 0; j < q; ++j) ys.push_back({p + j});
  auto X = sym_map(SymDecomposition<Rational>{{p, {{xs, Rational(1)}}}});
  auto Y = sym_map(SymDecomposition<Rational>{{q, {{ys, Rational(1)}}}});
  auto d = sym_inverse(ue_product(X, Y));
  auto it = d.find(r);
  return it == d.end() ? SymElement<Rational>{} : it->second;
}

bool qcomm_membership(const WordTensor<HSeries>& a, int N) {
  if (N < 0) throw std::invalid_argument("qcomm_membership: negative N");
  if (a.is_zero()) return true;
  int low = 0, high = default_order();
  for (const auto& [k, c] : a.terms()) {
    low = std::min(low, c.valuation());
    high = std::min(high, c.order());
  }
  if (low < -default_order()) throw std::out_of_range("qcomm_membership: Laurent window overflow");
  if (low < -N) return false;
  for (int e = low; e < std::min(high, 0); ++e) {
    WordTensor<Rational> part(a.slots());
    for (const auto& [k, c] : a.terms()) part.add(k, c.coeff(e));
    if (pbw_filtration_degree(part) > e + N) return false;
  }
  return true;
}

template <typename S>
std::string pbw_str(const PBWCoords<S>& c) {
  if (c.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, x] : c) {
    if (!first) os << " + ";
    first = false;
    os << "(" << to_string(x) << ")";
    for (std::size_t s = 0; s < m.size(); ++s) {
      os << (s == 0 ? " " : " | ");
      if (m[s].empty()) os << "1";
      for (std::size_t i = 0; i < m[s].size(); ++i) os << (i ? " " : "") << "P" << word_str(m[s][i]);
    }
  }
  return os.str();
}

template <typename S>
nlohmann::json to_json(const PBWCoords<S>& c) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [m, x] : c) {
    nlohmann::json slots = nlohmann::json::array();
    for (const auto& slot : m) {
      nlohmann::json ws = nlohmann::json::array();
      for (const auto& w : slot) ws.push_back(word_str(w));
      slots.push_back(ws);
    }
    arr.push_back({{"monomial", slots}, {"coeff", to_string(x)}});
  }
  return arr;
}

#define PROPCALC_PBW_INSTANTIATE(S)                                                   \
  template PBWCoords<S> to_pbw(const WordTensor<S>&);                                 \
  template WordTensor<S> from_pbw(const PBWCoords<S>&, int);                          \
  template int pbw_filtration_degree(const WordTensor<S>&);                           \
  template WordTensor<S> ue_product(const WordTensor<S>&, const WordTensor<S>&);      \
  template WordTensor<S> ue_coproduct(const WordTensor<S>&);                          \
  template S counit(const WordTensor<S>&);                                            \
  template WordTensor<S> reduced_coproduct_power(const WordTensor<S>&, int);          \
  template WordTensor<S> iterated_product(const WordTensor<S>&);                      \
  template WordTensor<S> antipode(const WordTensor<S>&, int);                         \
  template WordTensor<S> eulerian_apply(int, const WordTensor<S>&, int);              \
  template WordTensor<S> sym_map(const SymDecomposition<S>&);                         \
  template SymDecomposition<S> sym_inverse(const WordTensor<S>&);                     \
  template SymDecomposition<S> sym_decompose(const WordTensor<S>&);                   \
  template std::string pbw_str(const PBWCoords<S>&);                                 \
  template nlohmann::json to_json(const PBWCoords<S>&);

PROPCALC_PBW_INSTANTIATE(Rational)
PROPCALC_PBW_INSTANTIATE(HSeries)

}  // namespace propcalc

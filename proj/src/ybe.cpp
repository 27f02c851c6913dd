#include "propcalc/ybe.hpp"

#include <algorithm>
#include <stdexcept>

#include "propcalc/freelie.hpp"

namespace propcalc {

Carrier Carrier::free_symbols(std::vector<std::string> names, int L) {
  Carrier c;
  c.kind = Kind::FreeSymbols;
  c.names = std::move(names);
  c.max_len = L;
  return c;
}

Carrier Carrier::enveloping(int N, int L) {
  Carrier c;
  c.kind = Kind::EnvelopingFL;
  for (int i = 1; i <= N; ++i) c.names.push_back("x" + std::to_string(i));
  c.max_len = L;
  return c;
}

int Carrier::letter(const std::string& name) const {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw std::invalid_argument("carrier: unknown symbol '" + name + "'");
  return static_cast<int>(it - names.begin());
}

TensorSeries Carrier::term(const std::vector<std::vector<std::string>>& words, const HSeries& c) const {
  WordTuple key;
  for (const auto& w : words) {
    Word x;
    for (const auto& s : w) x.push_back(letter(s));
    key.push_back(x);
  }
  TensorSeries t(static_cast<int>(key.size()), max_len);
  t.add(key, c);
  return t;
}

std::string Carrier::str(const TensorSeries& x) const {
  if (x.is_zero()) return "0";
  std::string out;
  for (const auto& [k, c] : x.terms()) {
    if (!out.empty()) out += " + ";
    out += "(" + c.str() + ")";
    for (std::size_t i = 0; i < k.size(); ++i) {
      out += i == 0 ? " " : " ⊗ ";
      if (k[i].empty()) out += "1";
      for (std::size_t j = 0; j < k[i].size(); ++j) {
        if (j) out += "·";
        int l = k[i][j];
        out += l < static_cast<int>(names.size()) ? names[static_cast<std::size_t>(l)] : "?" + std::to_string(l);
      }
    }
  }
  return out;
}

TensorSeries embed(const TensorSeries& x, const std::vector<int>& legs, int total) {
  if (static_cast<int>(legs.size()) != x.slots()) throw std::invalid_argument("embed: leg count differs from slot count");
  std::vector<bool> seen(static_cast<std::size_t>(std::max(total, 0)), false);
  for (int l : legs) {
    if (l < 1 || l > total) throw std::invalid_argument("embed: leg out of range");
    if (seen[static_cast<std::size_t>(l - 1)]) throw std::invalid_argument("embed: repeated leg");
    seen[static_cast<std::size_t>(l - 1)] = true;
  }
  TensorSeries r(total, x.max_len());
  for (const auto& [k, c] : x.terms()) {
    WordTuple nk(static_cast<std::size_t>(total));
    for (std::size_t i = 0; i < legs.size(); ++i) nk[static_cast<std::size_t>(legs[i] - 1)] = k[i];
    r.add(nk, c);
  }
  return r;
}

TensorSeries coproduct_on_leg(const TensorSeries& x, int leg) {
  if (leg < 0 || leg >= x.slots()) throw std::invalid_argument("coproduct: leg out of range");
  auto j = static_cast<std::size_t>(leg);
  TensorSeries r(x.slots() + 1, x.max_len());
  for (const auto& [k, c] : x.terms())
    for_each_unshuffle(k[j], [&](const Word& a, const Word& b) {
      WordTuple nk(k.begin(), k.begin() + static_cast<long>(j));
      nk.push_back(a);
      nk.push_back(b);
      nk.insert(nk.end(), k.begin() + static_cast<long>(j) + 1, k.end());
      r.add(nk, c);
    });
  return r;
}

TensorSeries commutator(const TensorSeries& a, const TensorSeries& b) { return a * b - b * a; }

namespace {

void require_slots(const TensorSeries& x, int n, const char* what) {
  if (x.slots() != n) throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(n) + " slots");
}

void require_coproduct(const Carrier& c, const char* what) {
  if (!c.has_coproduct()) throw std::invalid_argument(std::string(what) + ": carrier has no coproduct");
}

struct Legs {
  TensorSeries l12, l13, l23;
  explicit Legs(const TensorSeries& r) : l12(embed(r, {1, 2}, 3)), l13(embed(r, {1, 3}, 3)), l23(embed(r, {2, 3}, 3)) {}
};

}  // namespace

TensorSeries cyb(const TensorSeries& r) {
  require_slots(r, 2, "cyb");
  Legs e(r);
  return commutator(e.l12, e.l13) + commutator(e.l12, e.l23) + commutator(e.l13, e.l23);
}

TensorSeries qybe_defect(const TensorSeries& R) {
  require_slots(R, 2, "qybe_defect");
  Legs e(R);
  return e.l12 * e.l13 * e.l23 - e.l23 * e.l13 * e.l12;
}

TensorSeries deformed_cybe_defect(const TensorSeries& rho) {
  require_slots(rho, 2, "deformed_cybe_defect");
  Legs e(rho);
  TensorSeries cubic = e.l12 * e.l13 * e.l23 - e.l23 * e.l13 * e.l12;
  cubic.scale(hbar());
  return cyb(rho) + cubic;
}

TensorSeries unit_inverse(const TensorSeries& x) {
  WordTuple empty(static_cast<std::size_t>(x.slots()));
  Rational c0 = x.coeff(empty).coeff(0);
  if (is_zero(c0)) throw std::invalid_argument("inverse: constant term is zero");
  TensorSeries y = x;
  y.scale(Rational(1) / c0);
  y -= TensorSeries::unit(x.slots(), x.max_len());
  for (const auto& [k, c] : y.terms()) {
    int v = c.valuation();
    if (v < 0) throw std::invalid_argument("inverse: negative powers of hbar");
    if (v == 0 && x.max_len() < 0) throw std::invalid_argument("inverse: not unit-leading without a length cap");
  }
  // each factor of y raises (ħ-valuation + length) by at least one
  int bound = default_order() + std::max(x.max_len(), 0) + 1;
  TensorSeries sum = TensorSeries::unit(x.slots(), x.max_len());
  TensorSeries pw = sum;
  TensorSeries neg = -y;
  for (int n = 0; n < bound && !pw.is_zero(); ++n) {
    pw = pw * neg;
    sum += pw;
  }
  if (!pw.is_zero()) throw std::logic_error("inverse: geometric series did not terminate");
  sum.scale(Rational(1) / c0);
  return sum;
}

TensorSeries perturb_forward(const std::vector<Perturbation>& perturbations, const TensorSeries& r) {
  TensorSeries out = r;
  for (std::size_t k = 0; k < perturbations.size(); ++k) {
    TensorSeries p = perturbations[k](r);
    p.scale(HSeries::monomial(Rational(1), static_cast<int>(k) + 1));
    out += p;
  }
  return out;
}

TensorSeries triangular_invert(const std::vector<Perturbation>& perturbations, const TensorSeries& target) {
  for (const auto& [k, c] : target.terms())
    if (c.valuation() < 0) throw std::invalid_argument("triangular_invert: negative powers of hbar");
  TensorSeries r = target;
  for (int it = 0; it <= default_order() + 1; ++it) {
    TensorSeries next = target - (perturb_forward(perturbations, r) - r);
    if (next == r) return r;
    r = std::move(next);
  }
  throw std::runtime_error("triangular_invert: no fixed point within the truncation order (perturbation of weight 0?)");
}

TensorSeries sample_p2(const TensorSeries& r) {
  require_slots(r, 2, "sample_p2");
  TensorSeries out(2, r.max_len());
  for (const auto& [ks, cs] : r.terms())
    for (const auto& [kt, ct] : r.terms()) out.add({concat(concat(ks[0], kt[0]), ks[1]), kt[1]}, cs * ct);
  return out;
}

bool is_normally_ordered(const TensorSeries& x, const std::vector<bool>& left) {
  auto is_left = [&](int l) { return l >= 0 && l < static_cast<int>(left.size()) && left[static_cast<std::size_t>(l)]; };
  for (const auto& [k, c] : x.terms())
    for (const auto& w : k)
      for (std::size_t i = 1; i < w.size(); ++i)
        if (is_left(w[i]) && !is_left(w[i - 1])) return false;
  return true;
}

TensorSeries twist_d(const TensorSeries& J, const Carrier& c) {
  require_slots(J, 2, "twist_d");
  require_coproduct(c, "twist_d");
  TensorSeries j23 = embed(J, {2, 3}, 3), j12 = embed(J, {1, 2}, 3);
  TensorSeries j1_23 = coproduct_on_leg(J, 1), j12_3 = coproduct_on_leg(J, 0);
  return unit_inverse(j23 * j1_23) * j12 * j12_3;
}

TensorSeries twist_act(const TensorSeries& u, const TensorSeries& J, const Carrier& c) {
  require_slots(u, 1, "twist_act");
  require_slots(J, 2, "twist_act");
  require_coproduct(c, "twist_act");
  return embed(u, {1}, 2) * embed(u, {2}, 2) * J * unit_inverse(coproduct_on_leg(u, 0));
}

TensorSeries cohochschild_d1(const TensorSeries& kappa, const Carrier& c) {
  require_slots(kappa, 1, "cohochschild_d1");
  require_coproduct(c, "cohochschild_d1");
  return embed(kappa, {1}, 2) + embed(kappa, {2}, 2) - coproduct_on_leg(kappa, 0);
}

TensorSeries cohochschild_d2(const TensorSeries& K, const Carrier& c) {
  require_slots(K, 2, "cohochschild_d2");
  require_coproduct(c, "cohochschild_d2");
  return coproduct_on_leg(K, 0) - coproduct_on_leg(K, 1) - embed(K, {2, 3}, 3) + embed(K, {1, 2}, 3);
}

nlohmann::json to_json(const TensorSeries& x, const Carrier* c) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [k, s] : x.terms()) {
    nlohmann::json words = nlohmann::json::array();
    for (const auto& w : k) {
      if (!c) {
        words.push_back(word_str(w));
        continue;
      }
      std::string str;
      for (int l : w) str += (str.empty() ? "" : " ") + c->names.at(static_cast<std::size_t>(l));
      words.push_back(str.empty() ? "1" : str);
    }
    nlohmann::json h = nlohmann::json::array();
    int v = s.valuation();
    for (int e = v; e < s.order(); ++e) h.push_back(to_string(s.coeff(e)));
    terms.push_back({{"words", words}, {"hcoeffs", h}, {"val", v}});
  }
  return {{"slots", x.slots()}, {"terms", terms}};
}

}  // namespace propcalc

#include <doctest.h>

#include <array>

#include "generators.hpp"
#include "propcalc/ybe.hpp"

using namespace propcalc;

namespace {

struct OrderGuard {
  int saved;
  explicit OrderGuard(int k) : saved(default_order()) { set_default_order(k); }
  ~OrderGuard() { set_default_order(saved); }
};

Carrier symbols(int pairs, int L) {
  std::vector<std::string> names;
  for (int i = 1; i <= pairs; ++i) {
    names.push_back("a" + std::to_string(i));
    names.push_back("b" + std::to_string(i));
  }
  return Carrier::free_symbols(names, L);
}

TensorSeries random_series(int slots, int letters, int max_word, int L, int terms, int low = 0) {
  TensorSeries x(slots, L);
  for (int t = 0; t < terms; ++t) {
    WordTuple k;
    for (int s = 0; s < slots; ++s) k.push_back(gen::word(letters, max_word));
    x.add(k, gen::hseries(default_order(), low));
  }
  return x;
}

TensorSeries unit_leading(int slots, int letters, int L) {
  TensorSeries x(slots, L);
  for (int t = 0; t < 3; ++t) {
    WordTuple k;
    for (int s = 0; s < slots; ++s) k.push_back(gen::word(letters, 2));
    if (total_length(k) == 0) continue;
    x.add(k, gen::hseries(default_order()));
  }
  x.add(WordTuple(static_cast<std::size_t>(slots)), HSeries(Rational(1)) + gen::hseries(default_order(), 1));
  return x;
}

// Generic symbolic ρ = Σ_k ħ^k Σ_i a_{k,i} ⊗ b_{k,i}; letters a = 2j, b = 2j+1.
TensorSeries generic_rho(int per_order, int orders, int L) {
  TensorSeries r(2, L);
  int j = 0;
  for (int k = 0; k < orders; ++k)
    for (int i = 0; i < per_order; ++i, ++j) r.add({{2 * j}, {2 * j + 1}}, HSeries::monomial(Rational(1), k));
  return r;
}

TensorSeries at_hbar_zero(const TensorSeries& x) {
  TensorSeries r(x.slots(), x.max_len());
  for (const auto& [k, c] : x.terms()) r.add(k, HSeries(c.coeff(0)));
  return r;
}

// CYB by expanding the six leg products of every pair of terms.
TensorSeries cyb_oracle(const TensorSeries& r) {
  TensorSeries out(3, r.max_len());
  for (const auto& [s, cs] : r.terms())
    for (const auto& [t, ct] : r.terms()) {
      HSeries c = cs * ct;
      const Word &xs = s[0], &ys = s[1], &xt = t[0], &yt = t[1];
      out.add({concat(xs, xt), ys, yt}, c);
      out.add({concat(xt, xs), ys, yt}, -c);
      out.add({xs, concat(ys, xt), yt}, c);
      out.add({xs, concat(xt, ys), yt}, -c);
      out.add({xs, xt, concat(ys, yt)}, c);
      out.add({xs, xt, concat(yt, ys)}, -c);
    }
  return out;
}

TensorSeries rename(const TensorSeries& x, const std::vector<int>& perm) {
  TensorSeries r(x.slots(), x.max_len());
  for (const auto& [k, c] : x.terms()) {
    WordTuple nk = k;
    for (auto& w : nk)
      for (int& l : w) l = perm[static_cast<std::size_t>(l)];
    r.add(nk, c);
  }
  return r;
}

// Commutative polynomials in (ħ, x1, x2, x3), truncated at ħ^3.
using Mono = std::array<int, 4>;
using Poly = std::map<Mono, Rational>;

Poly pmul(const Poly& a, const Poly& b) {
  Poly r;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      Mono m{};
      for (int i = 0; i < 4; ++i) m[static_cast<std::size_t>(i)] = ma[static_cast<std::size_t>(i)] + mb[static_cast<std::size_t>(i)];
      if (m[0] >= 3) continue;
      r[m] += ca * cb;
    }
  std::erase_if(r, [](const auto& kv) { return kv.second == 0; });
  return r;
}

Poly padd(Poly a, const Poly& b, const Rational& s = 1) {
  for (const auto& [m, c] : b) a[m] += s * c;
  std::erase_if(a, [](const auto& kv) { return kv.second == 0; });
  return a;
}

}  // namespace

TEST_CASE("embed") {
  Carrier c = symbols(1, -1);
  auto ab = c.term({{"a1"}, {"b1"}}, HSeries(Rational(1)));
  CHECK(embed(ab, {1, 2}, 2) == ab);
  CHECK(embed(TensorSeries::unit(2), {2, 3}, 3) == TensorSeries::unit(3));
  CHECK(embed(ab, {1, 3}, 3) == c.term({{"a1"}, {}, {"b1"}}, HSeries(Rational(1))));
  CHECK(embed(ab, {3, 1}, 3) == c.term({{"b1"}, {}, {"a1"}}, HSeries(Rational(1))));
  CHECK_THROWS_AS(embed(ab, {1, 1}, 3), std::invalid_argument);
  CHECK_THROWS_AS(embed(ab, {1, 4}, 3), std::invalid_argument);
  CHECK_THROWS_AS(embed(ab, {1}, 3), std::invalid_argument);
}

TEST_CASE("classical Yang-Baxter expression") {
  CHECK(cyb(TensorSeries(2)).is_zero());
  Carrier one = Carrier::free_symbols({"x"}, 6);
  CHECK(cyb(one.term({{"x"}, {"x"}}, HSeries(Rational(1)))).is_zero());
  Carrier c = symbols(1, -1);
  auto ab = c.term({{"a1"}, {"b1"}}, HSeries(Rational(1)));
  CHECK(cyb(ab) == cyb_oracle(ab));
  // only [r12, r23] survives for a single tensor a⊗b
  CHECK(cyb(ab) == c.term({{"a1"}, {"b1", "a1"}, {"b1"}}, HSeries(Rational(1))) -
                       c.term({{"a1"}, {"a1", "b1"}, {"b1"}}, HSeries(Rational(1))));
  CHECK_THROWS_AS(cyb(TensorSeries(3)), std::invalid_argument);

  for (int t = 0; t < 40; ++t) {
    auto r = random_series(2, 4, 2, 6, 3);
    auto y = cyb(r);
    CHECK(y == cyb_oracle(r));
    std::vector<int> perm{0, 1, 2, 3};
    std::shuffle(perm.begin(), perm.end(), gen::rng());
    CHECK(cyb(rename(r, perm)) == rename(y, perm));
  }
}

TEST_CASE("quantum Yang-Baxter defect factors through hbar squared") {
  CHECK(qybe_defect(TensorSeries::unit(2)).is_zero());
  auto check_identity = [](const TensorSeries& rho) {
    TensorSeries R = TensorSeries::unit(2, rho.max_len());
    TensorSeries hr = rho;
    hr.scale(hbar());
    R += hr;
    TensorSeries rhs = deformed_cybe_defect(rho);
    rhs.scale(HSeries::monomial(Rational(1), 2));
    CHECK(qybe_defect(R) == rhs);
  };
  check_identity(generic_rho(2, 2, -1));
  check_identity(generic_rho(3, 1, -1));
  for (int t = 0; t < 20; ++t) check_identity(random_series(2, 3, 2, 7, 3));
  {
    OrderGuard g(6);
    check_identity(generic_rho(2, 3, -1));
  }
  for (int t = 0; t < 20; ++t) {
    auto rho = random_series(2, 3, 2, 7, 3);
    CHECK(at_hbar_zero(deformed_cybe_defect(rho)) == at_hbar_zero(cyb(at_hbar_zero(rho))));
  }
}

TEST_CASE("unit inverse") {
  for (int t = 0; t < 30; ++t) {
    auto x = unit_leading(2, 3, 4);
    auto y = unit_inverse(x);
    CHECK(x * y == TensorSeries::unit(2, 4));
    CHECK(y * x == TensorSeries::unit(2, 4));
  }
  TensorSeries two = TensorSeries::unit(1);
  two.scale(Rational(2));
  TensorSeries half = TensorSeries::unit(1);
  half.scale(Rational(1, 2));
  CHECK(unit_inverse(two) == half);
  CHECK_THROWS_AS(unit_inverse(TensorSeries(1)), std::invalid_argument);
  TensorSeries bad = TensorSeries::unit(1);
  bad.add({{0}}, HSeries(Rational(1)));
  CHECK_THROWS_AS(unit_inverse(bad), std::invalid_argument);  // 1 + x is not invertible without a cap
}

TEST_CASE("triangular inversion") {
  auto target = generic_rho(2, 1, -1);
  CHECK(triangular_invert({}, target) == target);
  CHECK(triangular_invert({[](const TensorSeries& r) { return TensorSeries(r.slots(), r.max_len()); }}, target) == target);

  // P_1 = id: r = target·Σ (−ħ)^n
  auto r = triangular_invert({[](const TensorSeries& x) { return x; }}, target);
  HSeries geo;
  for (int n = 0; n < default_order(); ++n) geo += HSeries::monomial(Rational(n % 2 ? -1 : 1), n);
  TensorSeries expected = target;
  expected.scale(geo);
  CHECK(r == expected);

  std::vector<Perturbation> ps{[](const TensorSeries& x) { return TensorSeries(x.slots(), x.max_len()); }, sample_p2};
  {
    OrderGuard g(4);
    auto rho = generic_rho(2, 1, 9);
    auto inv = triangular_invert(ps, rho);
    CHECK(perturb_forward(ps, inv) == rho);
    CHECK(triangular_invert(ps, perturb_forward(ps, rho)) == rho);
    std::vector<bool> is_a{true, false, true, false};
    CHECK(is_normally_ordered(sample_p2(rho), is_a));
    CHECK(is_normally_ordered(inv, is_a));
  }
  for (int t = 0; t < 10; ++t) {
    auto x = random_series(2, 3, 2, 5, 3);
    std::vector<Perturbation> qs{sample_p2, [](const TensorSeries& y) { return y * y; }};
    CHECK(perturb_forward(qs, triangular_invert(qs, x)) == x);
    CHECK(triangular_invert(qs, perturb_forward(qs, x)) == x);
  }
  CHECK_FALSE(is_normally_ordered(symbols(1, -1).term({{"b1", "a1"}, {}}, HSeries(Rational(1))), {true, false}));
  // weight-zero perturbation: r + r = target oscillates under substitution
  std::vector<Perturbation> bad{[](const TensorSeries& x) {
    TensorSeries y = x;
    y.scale(HSeries::monomial(Rational(1), -1));
    return y;
  }};
  CHECK_THROWS_AS(triangular_invert(bad, target), std::runtime_error);
}

TEST_CASE("twist functional") {
  Carrier u1 = Carrier::enveloping(1, 8);
  CHECK(twist_d(u1.unit(2), u1) == u1.unit(3));
  CHECK_THROWS_AS(twist_d(symbols(1, 4).unit(2), symbols(1, 4)), std::invalid_argument);

  // J = 1 + ħc·x⊗x in U(FL_1) = k[x], against commutative expansion mod ħ^3
  Rational c(3, 2);
  TensorSeries J = u1.unit(2);
  J.add({{0}, {0}}, HSeries::monomial(c, 1));
  auto d = twist_d(J, u1);
  auto lin = [&](std::vector<std::pair<int, int>> pairs) {
    Poly p{{Mono{0, 0, 0, 0}, Rational(1)}};
    for (auto [i, j] : pairs) {
      Mono m{1, 0, 0, 0};
      m[static_cast<std::size_t>(i)] += 1;
      m[static_cast<std::size_t>(j)] += 1;
      p[m] += c;
    }
    return p;
  };
  Poly num = pmul(lin({{1, 2}}), lin({{1, 3}, {2, 3}}));
  Poly den = pmul(lin({{2, 3}}), lin({{1, 2}, {1, 3}}));
  Poly e = padd(den, Poly{{Mono{0, 0, 0, 0}, Rational(1)}}, -1);
  Poly inv = padd(padd(Poly{{Mono{0, 0, 0, 0}, Rational(1)}}, e, -1), pmul(e, e));
  Poly oracle = pmul(num, inv);
  TensorSeries got(3, 8);
  for (const auto& [m, x] : oracle)
    got.add({Word(static_cast<std::size_t>(m[1]), 0), Word(static_cast<std::size_t>(m[2]), 0), Word(static_cast<std::size_t>(m[3]), 0)},
            HSeries::monomial(x, m[0]));
  TensorSeries low(3, 8);
  for (const auto& [k, x] : d.terms())
    for (int p = 0; p < 3; ++p) low.add(k, HSeries::monomial(x.coeff(p), p));
  CHECK(low == got);
  // leading correction: c²·(x²⊗x⊗x − x⊗x⊗x²) at ħ²
  CHECK(oracle.at(Mono{2, 2, 1, 1}) == c * c);
  CHECK(oracle.at(Mono{2, 1, 1, 2}) == -c * c);

  // abelian carrier: every d̃(J) is invariant, so d̃(u∗J) = d̃(J)
  Carrier small = Carrier::enveloping(1, 5);
  for (int t = 0; t < 15; ++t) {
    auto Jr = unit_leading(2, 1, 5);
    auto u = unit_leading(1, 1, 5);
    CHECK(twist_d(twist_act(u, Jr, small), small) == twist_d(Jr, small));
  }
}

TEST_CASE("twist action") {
  Carrier c = Carrier::enveloping(2, 4);
  for (int t = 0; t < 15; ++t) {
    auto J = unit_leading(2, 2, 4);
    auto u = unit_leading(1, 2, 4), v = unit_leading(1, 2, 4);
    CHECK(twist_act(c.unit(1), J, c) == J);
    CHECK(twist_act(u * v, J, c) == twist_act(u, twist_act(v, J, c), c));
    CHECK(twist_act(u, c.unit(2), c) == embed(u, {1}, 2) * embed(u, {2}, 2) * unit_inverse(coproduct_on_leg(u, 0)));
  }
  CHECK_THROWS_AS(twist_act(c.unit(2), c.unit(2), c), std::invalid_argument);
}

TEST_CASE("co-Hochschild differentials") {
  Carrier c = Carrier::enveloping(3, 6);
  CHECK(cohochschild_d1(c.unit(1), c) == c.unit(2));
  for (int l = 0; l < 3; ++l) CHECK(cohochschild_d1(TensorSeries::monomial({{l}}, HSeries(Rational(1)), 6), c).is_zero());
  TensorSeries xy = TensorSeries::monomial({{0, 1}}, HSeries(Rational(1)), 6);
  TensorSeries cross(2, 6);
  cross.add({{0}, {1}}, HSeries(Rational(-1)));
  cross.add({{1}, {0}}, HSeries(Rational(-1)));
  CHECK(cohochschild_d1(xy, c) == cross);
  for (int t = 0; t < 25; ++t) {
    auto kappa = random_series(1, 3, 4, 6, 4);
    CHECK(cohochschild_d2(cohochschild_d1(kappa, c), c).is_zero());
  }
  CHECK_THROWS_AS(cohochschild_d1(c.unit(1), symbols(1, 3)), std::invalid_argument);
}

TEST_CASE("tensor series json") {
  Carrier c = symbols(1, -1);
  TensorSeries x = c.term({{"a1", "b1"}, {}}, HSeries::monomial(Rational(1, 2), 1) + HSeries::monomial(Rational(3), 2));
  auto j = to_json(x, &c);
  CHECK(j["slots"] == 2);
  REQUIRE(j["terms"].size() == 1);
  CHECK(j["terms"][0]["words"] == nlohmann::json::array({"a1 b1", "1"}));
  CHECK(j["terms"][0]["val"] == 1);
  CHECK(j["terms"][0]["hcoeffs"][0] == "1/2");
  CHECK(j["terms"][0]["hcoeffs"][1] == "3");
  CHECK(to_json(x)["terms"][0]["words"][0] == "12");
}

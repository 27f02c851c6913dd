#include <doctest.h>

#include <set>

#include "generators.hpp"
#include "propcalc/linalg.hpp"
#include "propcalc/module_eval.hpp"
#include "propcalc/rewrite.hpp"

using namespace propcalc;

namespace {

using L = LinComb<Rational>;

L g(const char* name, int in, int out) { return L(Diagram::generator(name, in, out)); }
L id(int n) { return L(Diagram::identity(n)); }
L P(const char* s) { return L(Diagram::perm(Permutation::parse(s))); }

const L m = g("m", 2, 1), D = g("Delta", 1, 2), eta = g("eta", 0, 1), eps = g("eps", 1, 0), cobr = g("delta", 1, 2);

// Orbits of S_N acting diagonally on pairs (coword, word) of multilinear
// orderings, counted by brute force over the group.
long long orbit_count(int N) {
  std::set<std::pair<Permutation, Permutation>> seen;
  long long orbits = 0;
  auto perms = all_permutations(N);
  for (const auto& a : perms)
    for (const auto& b : perms) {
      if (seen.count({a, b})) continue;
      ++orbits;
      for (const auto& s : perms) seen.insert({compose(s, a), compose(s, b)});
    }
  return orbits;
}

bool same_nf_all_strategies(const L& x, Variant v) {
  NormalizeOptions first, last, rnd;
  last.strategy = Strategy::Last;
  rnd.strategy = Strategy::Random;
  rnd.seed = 99;
  auto a = normalize(x, v, first);
  return a == normalize(x, v, last) && a == normalize(x, v, rnd);
}

}  // namespace

TEST_CASE("compatibility of product and coproduct") {
  auto lhs = compose(D, m);
  auto rhs = compose(tensor(m, m), compose(P("(1324)"), tensor(D, D)));
  for (auto v : {Variant::Plain, Variant::Coco, Variant::CP, Variant::QT}) CHECK(check_relation(lhs, rhs, v));
  auto nf = normalize(lhs, Variant::Plain);
  // Every term is ordered: no coproduct after a product once re-expanded.
  auto expanded = to_lincomb(nf);
  for (const auto& [d, c] : expanded.terms()) CHECK(product_coproduct_paths(d.diagram()) == 0);
}

TEST_CASE("unit and counit absorption") {
  CHECK(check_relation(compose(D, eta), tensor(eta, eta), Variant::Plain));
  CHECK(check_relation(compose(eps, m), tensor(eps, eps), Variant::Plain));
  auto scalar = normalize(compose(eps, eta), Variant::Plain);
  REQUIRE(scalar.terms.size() == 1);
  CHECK(scalar.terms.begin()->second == 1);
  CHECK(scalar.terms.begin()->first.strands() == 0);
}

TEST_CASE("unit law and compatibility route agree") {
  auto x = compose(D, compose(m, tensor(eta, id(1))));
  CHECK(normalize(x, Variant::Plain) == normalize(D, Variant::Plain));
  CHECK(same_nf_all_strategies(x, Variant::Plain));
  CHECK(to_lincomb(normalize(x, Variant::Plain)) == to_lincomb(normalize(D, Variant::Plain)));
}

TEST_CASE("cobracket compatibility in the co-Poisson variant") {
  auto lhs = compose(cobr, m);
  auto rhs = compose(tensor(m, m), compose(P("(1324)"), tensor(cobr, D) + tensor(D, cobr)));
  CHECK(check_relation(lhs, rhs, Variant::CP));
  CHECK_FALSE(check_relation(lhs, L(2, 2), Variant::CP));
}

TEST_CASE("relation checks") {
  auto coassoc_l = compose(tensor(D, id(1)), D), coassoc_r = compose(tensor(id(1), D), D);
  for (auto v : {Variant::Plain, Variant::Coco, Variant::CP, Variant::QT}) CHECK(check_relation(coassoc_l, coassoc_r, v));
  CHECK_FALSE(check_relation(D, compose(P("(21)"), D), Variant::Plain));
  CHECK(check_relation(D, compose(P("(21)"), D), Variant::Coco));
  for (auto v : {Variant::Plain, Variant::Coco, Variant::CP, Variant::QT}) CHECK_FALSE(check_relation(m, compose(m, P("(21)")), v));
  CHECK_THROWS_AS(check_relation(m, D, Variant::Plain), std::invalid_argument);
}

TEST_CASE("listed relations hold in their variants") {
  for (auto v : {Variant::Plain, Variant::Coco, Variant::CP, Variant::QT}) {
    for (const auto& r : relation_list(v)) {
      INFO(variant_name(v), " ", r.name);
      CHECK(check_relation(r.lhs, r.rhs, v));
    }
  }
  for (const auto& r : relation_list(Variant::QCoco)) {
    INFO(r.name);
    LinComb<HSeries> lhs(r.lhs.n_in(), r.lhs.n_out()), rhs(r.rhs.n_in(), r.rhs.n_out());
    for (const auto& [d, c] : r.lhs.terms()) lhs.add(d, HSeries(c));
    for (const auto& [d, c] : r.rhs.terms()) rhs.add(d, HSeries(c));
    CHECK(check_relation(lhs, rhs, Variant::QCoco));
  }
}

TEST_CASE("algebra-only relations") {
  for (auto v : {Variant::CYBA, Variant::QYBA}) {
    for (const auto& r : relation_list(v)) {
      INFO(r.name);
      if (r.name == "CYBE")
        CHECK_FALSE(check_relation(r.lhs, r.rhs, v));  // a defining relation, not a consequence of associativity
      else
        CHECK(check_relation(r.lhs, r.rhs, v));
    }
  }
  CHECK(propic_cybe().n_in() == 0);
  CHECK(propic_cybe().n_out() == 3);
  CHECK_THROWS_AS(normalize(m, Variant::CYBA), std::invalid_argument);
}

TEST_CASE("quasi-cocommutative cobracket") {
  LinComb<HSeries> dt(Diagram::generator("deltat", 1, 2));
  LinComb<HSeries> diff(Diagram::generator("Delta", 1, 2));
  diff -= LinComb<HSeries>(compose(Diagram::perm(Permutation::parse("(21)")), Diagram::generator("Delta", 1, 2)));
  diff.scale(HSeries::monomial(Rational(1), -1));
  CHECK(normalize(dt, Variant::QCoco) == normalize(diff, Variant::QCoco));
  // (21)∘Δ = Δ − ħ δ̃ in the localized model.
  LinComb<HSeries> flipped(compose(Diagram::perm(Permutation::parse("(21)")), Diagram::generator("Delta", 1, 2)));
  LinComb<HSeries> rhs(Diagram::generator("Delta", 1, 2));
  LinComb<HSeries> hdt = dt;
  hdt.scale(hbar());
  rhs -= hdt;
  CHECK(check_relation(flipped, rhs, Variant::QCoco));
  for (const auto& [od, c] : normalize(dt, Variant::QCoco).terms) CHECK(c.valuation() == -1);
}

TEST_CASE("structure bases") {
  for (int N = 0; N <= 6; ++N) CHECK(structure_basis(1, 1, N, Variant::Coco).size() == 1);
  for (int p = 0; p <= 2; ++p)
    for (int q = 0; q <= 2; ++q) {
      auto b = structure_basis(p, q, 0, Variant::Plain);
      REQUIRE(b.size() == 1);
      CHECK(b[0].strands() == 0);
      CHECK(b[0].coalgebra.size() == static_cast<std::size_t>(p));
      CHECK(b[0].algebra.size() == static_cast<std::size_t>(q));
    }
  auto k1 = structure_basis(1, 1, 2, Variant::CP, 1), k2 = structure_basis(1, 1, 2, Variant::CP, 2);
  REQUIRE(k1.size() == 1);
  REQUIRE(k2.size() == 1);
  CHECK(k1[0].blocks() == 1);
  CHECK(k2[0].blocks() == 2);
  // the k = 1 element is δ followed by m, the k = 2 element Δ followed by m
  CHECK(normalize(compose(m, cobr), Variant::CP).terms.begin()->first == k1[0]);
  CHECK(normalize(compose(m, D), Variant::CP).terms.count(k2[0]) == 1);
  CHECK_THROWS_AS(structure_basis(1, 1, 9, Variant::Plain), std::out_of_range);
}

TEST_CASE("component dimensions") {
  for (int N = 0; N <= 6; ++N) CHECK(component_dim(1, 1, N, Variant::Coco) == 1);
  for (int N = 0; N <= 5; ++N) CHECK(component_dim(1, 1, N, Variant::Plain) == orbit_count(N));
  CHECK(component_dim(0, 0, 0, Variant::Plain) == 1);
  CHECK(component_dim(0, 0, 1, Variant::Plain) == 0);
  for (auto v : {Variant::Plain, Variant::Coco, Variant::CP})
    for (auto [p, q] : {std::pair{1, 1}, {1, 2}, {2, 1}, {2, 2}})
      for (int N = 0; N <= 4; ++N) {
        INFO(variant_name(v), " ", p, q, " N=", N);
        CHECK(component_dim(p, q, N, v) == static_cast<long long>(structure_basis(p, q, N, v).size()));
      }
  CHECK(graded_dims(1, 1, 4, Variant::Coco) == std::vector<long long>{1, 1, 1, 1, 1});
  CHECK_THROWS_AS(component_dim(1, 1, 20, Variant::Plain), std::out_of_range);
}

TEST_CASE("co-Poisson dimensions graded by blocks") {
  // S^k(FL_N^{⊕p}) multilinear parts summed over k give the ungraded count.
  for (int N = 0; N <= 4; ++N) {
    long long total = 0;
    for (int k = 0; k <= N; ++k) total += component_dim(1, 1, N, Variant::CP, k);
    CHECK(total == component_dim(1, 1, N, Variant::CP));
  }
}

TEST_CASE("normalize is idempotent on random diagrams") {
  // Idempotence is linear, so it suffices on each ordered diagram that occurs.
  // Re-expanding an N-strand term costs 2^N diagrams; terms above 7 strands are skipped.
  for (auto v : {Variant::Plain, Variant::Coco, Variant::CP, Variant::QT}) {
    int checked = 0;
    for (int t = 0; t < 30; ++t) {
      auto d = gen::diagram(v, gen::uniform(0, 2), 12, 5);
      auto nf = normalize(L(d), v);
      for (const auto& [od, c] : nf.terms) {
        if (od.strands() > 7) continue;
        auto again = normalize(to_lincomb<Rational>(od), v);
        CHECK(again.terms.size() == 1);
        CHECK(again.terms.begin()->first == od);
        CHECK(again.terms.begin()->second == 1);
        if (++checked > 400) break;
      }
    }
    CHECK(checked > 20);
  }
}

TEST_CASE("termination measure decreases on every compatibility step") {
  std::size_t steps = 0, bad = 0;
  NormalizeOptions opt;
  opt.on_step = [&](const Diagram& before, const Diagram& after, bool compat) {
    auto a = product_coproduct_paths(before), b = product_coproduct_paths(after);
    if (compat) {
      ++steps;
      if (b + 1 != a) ++bad;
    } else if (b > a || after.vertex_count() >= before.vertex_count()) {
      ++bad;
    }
  };
  opt.step_budget = 20000;
  for (auto v : {Variant::Plain, Variant::Coco, Variant::CP, Variant::QT})
    for (int t = 0; t < 60; ++t) CHECK_NOTHROW(normalize(L(gen::diagram(v, gen::uniform(0, 2), 12, 5)), v, opt));
  CHECK(steps > 200);
  CHECK(bad == 0);
}

TEST_CASE("step budget is enforced") {
  NormalizeOptions opt;
  opt.step_budget = 2;
  auto x = compose(compose(D, m), compose(D, m));
  CHECK_THROWS_AS(normalize(x, Variant::Plain, opt), std::runtime_error);
}

TEST_CASE("small overlaps are joinable under every strategy") {
  // All rule left sides have at most two vertices, so diagrams with up to three
  // vertices cover every overlap.
  for (auto v : {Variant::Plain, Variant::Coco, Variant::CP, Variant::QT}) {
    int checked = 0;
    for (int t = 0; t < 400; ++t) {
      auto d = gen::diagram(v, gen::uniform(0, 2), 3, 4);
      if (d.vertex_count() < 2) continue;
      ++checked;
      CHECK(same_nf_all_strategies(L(d), v));
    }
    CHECK(checked > 100);
  }
}

TEST_CASE("normal forms of random diagrams lie in the structure basis") {
  for (auto v : {Variant::Plain, Variant::Coco, Variant::CP}) {
    std::map<std::tuple<int, int, int>, std::set<OrderedDiagram>> bases;
    for (int t = 0; t < 60; ++t) {
      auto d = gen::diagram(v, gen::uniform(1, 2), 6, 4);
      if (d.n_out() < 1 || d.n_out() > 2) continue;
      for (const auto& [od, c] : normalize(L(d), v).terms) {
        auto key = std::tuple{od.p, od.q, od.strands()};
        if (!bases.count(key)) {
          auto b = structure_basis(od.p, od.q, od.strands(), v);
          bases[key] = std::set<OrderedDiagram>(b.begin(), b.end());
        }
        CHECK(bases[key].count(od) == 1);
      }
    }
  }
}

TEST_CASE("basis elements evaluate independently on a cofree module") {
  // Injectivity of the structure map in low degree: the basis of (1,1) up to N = 3
  // stays linearly independent after evaluation on F(C), C the deconcatenation
  // coalgebra on words of length <= 2 in two letters.
  FreeBialgebraModule<Rational> mod(FiniteCoalgebra::deconcatenation(2, 2));
  int dimC = mod.coalgebra().dim;
  std::vector<Word> inputs{{}};
  for (int a = 0; a < dimC; ++a) inputs.push_back({a});
  for (int a = 0; a < dimC; ++a)
    for (int b = 0; b < dimC; ++b) inputs.push_back({a, b});
  EchelonBasis<std::pair<Word, Word>> span;
  std::size_t count = 0;
  for (int N = 0; N <= 2; ++N)
    for (const auto& od : structure_basis(1, 1, N, Variant::Plain)) {
      ++count;
      auto x = to_lincomb<Rational>(od);
      SparseVector<std::pair<Word, Word>> vec;
      for (const auto& w : inputs) {
        auto out = eval_on_module(x, mod, WordTensor<Rational>::monomial({w}, Rational(1)));
        for (const auto& [k, c] : out.terms()) vec[{w, k[0]}] = c;
      }
      CHECK(span.insert(vec));
    }
  CHECK(span.rank() == count);
}

TEST_CASE("normal form json") {
  auto nf = normalize(compose(D, m), Variant::Plain);
  auto j = to_json(nf);
  REQUIRE(j.is_array());
  CHECK(j.size() == nf.terms.size());
  for (const auto& e : j) {
    CHECK(e.contains("N"));
    CHECK(e.contains("coalgebra"));
    CHECK(e.contains("algebra"));
    CHECK(e.contains("coeff"));
  }
}

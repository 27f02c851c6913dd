// Acceptance run: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>

#include "generators.hpp"
#include "propcalc/freelie.hpp"
#include "propcalc/module_eval.hpp"
#include "propcalc/pbw.hpp"
#include "propcalc/rewrite.hpp"
#include "propcalc/ybe.hpp"

using namespace propcalc;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail = "first failure: " + what;
    ok = ok && cond;
  }
};

int failures = 0;

void criterion(int id, const std::string& name, double limit_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.ok = false;
    o.detail = std::string("exception: ") + e.what();
  }
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (o.ok && s > limit_s) {
    o.ok = false;
    o.detail = "time limit exceeded";
  }
  if (!o.ok) ++failures;
  std::printf("[%s] %2d %-40s %8.2f s (limit %.0f s)%s%s\n", o.ok ? "PASS" : "FAIL", id, name.c_str(), s, limit_s,
              o.detail.empty() ? "" : "  ", o.detail.c_str());
  std::fflush(stdout);
}

Diagram small(int n_in) { return gen::diagram(Variant::Plain, n_in, 3, 4); }

template <typename S>
std::vector<WordTensor<S>> basis_inputs(int slots, int letters) {
  std::vector<Word> ws{{}};
  for (int a = 0; a < letters; ++a) ws.push_back({a});
  ws.push_back({letters - 1, 0});
  std::vector<WordTuple> keys{{}};
  for (int i = 0; i < slots; ++i) {
    std::vector<WordTuple> next;
    for (const auto& k : keys)
      for (const auto& w : ws) {
        auto k2 = k;
        k2.push_back(w);
        if (total_length(k2) <= 3) next.push_back(k2);
      }
    keys = next;
  }
  std::vector<WordTensor<S>> r;
  for (const auto& k : keys) r.push_back(WordTensor<S>::monomial(k, ScalarTraits<S>::one()));
  return r;
}

using T = WordTensor<Rational>;
T word(const Word& w) { return T::monomial({w}, Rational(1)); }

std::vector<Word> multilinear_words(int N) {
  std::vector<Word> out;
  for (const auto& p : all_permutations(N)) out.push_back(p.images());
  return out;
}

TensorSeries generic_rho(int pairs, int orders, int L) {
  TensorSeries r(2, L);
  int j = 0;
  for (int k = 0; k < orders; ++k)
    for (int i = 0; i < pairs; ++i, ++j) r.add({{2 * j}, {2 * j + 1}}, HSeries::monomial(Rational(1), k));
  return r;
}

TensorSeries random_unit_leading(int slots, int letters, int L) {
  TensorSeries x = TensorSeries::unit(slots, L);
  for (int t = 0; t < 3; ++t) {
    WordTuple k;
    for (int s = 0; s < slots; ++s) k.push_back(gen::word(letters, 2));
    x.add(k, total_length(k) == 0 ? gen::hseries(default_order(), 1) : gen::hseries(default_order()));
  }
  return x;
}

std::vector<Word> random_sym_monomial(const std::vector<int>& letters, int j) {
  std::vector<std::vector<int>> blocks(static_cast<std::size_t>(j));
  for (int b = 0; b < j; ++b) blocks[static_cast<std::size_t>(b)].push_back(letters[static_cast<std::size_t>(b)]);
  for (std::size_t i = static_cast<std::size_t>(j); i < letters.size(); ++i)
    blocks[static_cast<std::size_t>(gen::uniform(0, j - 1))].push_back(letters[i]);
  std::vector<Word> out;
  for (auto& b : blocks) {
    auto ls = multilinear_lyndon(b);
    out.push_back(ls[static_cast<std::size_t>(gen::uniform(0, static_cast<int>(ls.size()) - 1))]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Random element of Σ_k ħ^{k−N} U^{≤k}, multilinear in `letters`, built from
// symmetrized Lie monomials so the filtration degree is known by construction.
WordTensor<HSeries> random_member(const std::vector<int>& letters) {
  int N = static_cast<int>(letters.size());
  WordTensor<HSeries> a(1);
  for (int e = -N; e <= 0; ++e) {
    int jmax = std::min(N, e + N);
    if (jmax < 1) continue;
    SymDecomposition<Rational> d;
    for (int t = 0; t < 2; ++t) {
      int j = gen::uniform(1, jmax);
      d[j][random_sym_monomial(letters, j)] += gen::rational();
    }
    auto layer = sym_map(d);
    for (const auto& [k, c] : layer.terms()) a.add(k, HSeries::monomial(c, e));
  }
  return a;
}

}  // namespace

int main() {
  criterion(1, "prop axioms (interchange, unit, symmetry)", 10, [](Outcome& o) {
    int cases = 0;
    for (int t = 0; t < 200; ++t) {
      auto a = small(gen::uniform(0, 2));
      auto b = small(a.n_out());
      auto c = small(b.n_out());
      o.require(equals(compose(c, compose(b, a)), compose(compose(c, b), a)), "associativity of composition");
      auto x = small(gen::uniform(0, 2)), y = small(gen::uniform(0, 2)), z = small(gen::uniform(0, 2));
      o.require(equals(tensor(x, tensor(y, z)), tensor(tensor(x, y), z)), "associativity of tensor");
      auto x2 = small(x.n_out()), y2 = small(y.n_out());
      o.require(equals(tensor(compose(x2, x), compose(y2, y)), compose(tensor(x2, y2), tensor(x, y))), "interchange");
      o.require(equals(compose(Diagram::identity(x.n_out()), x), x) && equals(compose(x, Diagram::identity(x.n_in())), x),
                "identity");
      o.require(equals(tensor(Diagram::identity(0), x), x), "monoidal unit");
      o.require(equals(tensor(y, x), compose(Diagram::perm(block_swap(x.n_out(), y.n_out())),
                                             compose(tensor(x, y), Diagram::perm(block_swap(y.n_in(), x.n_in()))))),
                "symmetry");
      auto s1 = gen::permutation(3), s2 = gen::permutation(3);
      o.require(equals(compose(Diagram::perm(s1), Diagram::perm(s2)), Diagram::perm(compose(s1, s2))), "permutation composition");
      cases += 7;
    }
    // equality is not vacuous
    auto D = Diagram::generator("Delta", 1, 2);
    o.require(!equals(D, compose(Diagram::perm(Permutation::parse("(21)")), D)), "Delta distinct from its flip");
    o.detail = o.ok ? std::to_string(cases) + " randomized instances" : o.detail;
  });

  criterion(2, "structure theorem (plain, coco, cP)", 120, [](Outcome& o) {
    long long total = 0;
    for (auto v : {Variant::Plain, Variant::Coco, Variant::CP})
      for (auto [p, q] : {std::pair{1, 1}, {1, 2}, {2, 1}}) {
        long long dims = 0, independent = 0;
        for (int N = 0; N <= 4; ++N) {
          dims += component_dim(p, q, N, v);
          std::set<OrderedDiagram> seen;
          for (const auto& od : structure_basis(p, q, N, v)) {
            // each basis element is its own normal form, so distinct elements are independent
            auto nf = normalize(to_lincomb<Rational>(od), v);
            if (nf.terms.size() == 1 && nf.terms.begin()->first == od && nf.terms.begin()->second == 1 && seen.insert(od).second)
              ++independent;
          }
        }
        o.require(independent == dims, variant_name(v) + " count " + std::to_string(independent) + " vs " + std::to_string(dims));
        total += dims;
      }
    std::vector<std::pair<Variant, FiniteCoalgebra>> modules{{Variant::Plain, FiniteCoalgebra::triangular()},
                                                             {Variant::Coco, FiniteCoalgebra::divided_powers()},
                                                             {Variant::CP, FiniteCoalgebra::copoisson()}};
    int diagrams = 0;
    for (const auto& [v, c] : modules) {
      FreeBialgebraModule<Rational> mod(c);
      for (int t = 0; t < 200; ++t) {
        auto d = gen::diagram(v, gen::uniform(1, 2), 4, 4);
        LinComb<Rational> x(d);
        auto nf = normalize(x, v);
        for (const auto& in : basis_inputs<Rational>(d.n_in(), c.dim))
          o.require(eval_on_module(x, mod, in) == eval_normal_form(nf, mod, in), variant_name(v) + " evaluation mismatch");
        ++diagrams;
      }
    }
    if (o.ok) o.detail = std::to_string(total) + " basis elements, " + std::to_string(diagrams) + " diagrams evaluated";
  });

  criterion(3, "classical dimension tables", 30, [](Outcome& o) {
    for (int N = 0; N <= 6; ++N)
      for (int n = 0; n <= 3; ++n) {
        long long rising = 1;
        for (int i = 0; i < N; ++i) rising *= n + i;
        o.require(classical_dim(ClassicalSpace::Alg, N, n) == rising, "Alg(" + std::to_string(N) + "," + std::to_string(n) + ")");
      }
    for (int N = 1; N <= 7; ++N) {
      o.require(classical_dim(ClassicalSpace::LA, N, 1) == factorial(N - 1), "LA(" + std::to_string(N) + ",1)");
      o.require(classical_dim(ClassicalSpace::Poisson, N, 1) == factorial(N), "Poisson(" + std::to_string(N) + ",1)");
      o.require(classical_dim(ClassicalSpace::Alg, N, 1) == factorial(N), "Alg(" + std::to_string(N) + ",1)");
    }
  });

  criterion(4, "Eulerian idempotents, N <= 5", 60, [](Outcome& o) {
    for (int N = 1; N <= 5; ++N)
      for (const auto& x : multilinear_words(N)) {
        T a = word(x), total(1);
        std::vector<T> img;
        for (int m = 0; m <= N; ++m) img.push_back(eulerian_apply(m, a));
        for (int m = 0; m <= N; ++m) {
          total += img[static_cast<std::size_t>(m)];
          for (int m2 = 0; m2 <= N; ++m2)
            o.require(eulerian_apply(m2, img[static_cast<std::size_t>(m)]) == (m == m2 ? img[static_cast<std::size_t>(m)] : T(1)),
                      "orthogonality");
        }
        o.require(total == a, "completeness");
        o.require(reduced_coproduct_power(img[1], 2).is_zero(), "p_1 primitive");
      }
  });

  criterion(5, "propic Milnor-Moore consistency", 60, [](Outcome& o) {
    o.require(mm_structure_constant(1, 1, 1) == SymElement<Rational>{{{{0, 1}}, Rational(1, 2)}}, "m_{1,1}^1 = 1/2 mu");
    o.require(mm_structure_constant(1, 1, 2) == SymElement<Rational>{{{{0}, {1}}, Rational(1)}}, "m_{1,1}^2 symmetric");
    for (int p = 0; p <= 4; ++p)
      for (int q = 0; p + q <= 4; ++q)
        for (int r = p + q + 1; r <= 6; ++r) o.require(mm_structure_constant(p, q, r).empty(), "vanishing above p+q");
    for (int N = 0; N <= 5; ++N)
      for (const auto& x : multilinear_words(N)) o.require(sym_map(sym_inverse(word(x))) == word(x), "sym round trip");
    for (int t = 0; t < 40; ++t) {
      T a(1);
      a.add({gen::word(3, 5)}, gen::nonzero_rational());
      a.add({gen::word(3, 5)}, gen::nonzero_rational());
      o.require(sym_map(sym_inverse(a)) == a, "sym round trip on repeated letters");
    }
  });

  criterion(6, "antipode series, N <= 4", 30, [](Outcome& o) {
    for (int N = 0; N <= 4; ++N)
      for (const auto& x : multilinear_words(N)) {
        T a = word(x), s = antipode(a);
        o.require(antipode(s) == a, "S^2 = id");
        T left(1), right(1), da = ue_coproduct(a);
        for (const auto& [k, c] : da.terms()) {
          left += ue_product(antipode(T::monomial({k[0]}, c)), word(k[1]));
          right += ue_product(T::monomial({k[0]}, c), antipode(word(k[1])));
        }
        T unit_counit = T::unit(1);
        unit_counit.scale(counit(a));
        o.require(left == unit_counit && right == unit_counit, "convolution inverse");
      }
  });

  criterion(7, "CYBE <-> QYBE equivalence (K = 6, L = 6)", 30, [](Outcome& o) {
    int saved = default_order();
    set_default_order(6);
    for (auto [pairs, orders] : {std::pair{2, 2}, {1, 4}, {3, 1}, {1, 6}}) {
      TensorSeries rho = generic_rho(pairs, orders, 6);
      TensorSeries R = TensorSeries::unit(2, 6), hr = rho;
      hr.scale(hbar());
      R += hr;
      TensorSeries rhs = deformed_cybe_defect(rho);
      rhs.scale(HSeries::monomial(Rational(1), 2));
      TensorSeries lhs = qybe_defect(R);
      o.require(!lhs.is_zero() && (lhs - rhs).is_zero(), "factorization for " + std::to_string(pairs) + "x" + std::to_string(orders));
    }
    // longer words, so the length cap actually truncates
    for (int t = 0; t < 5; ++t) {
      TensorSeries rho(2, 6);
      for (int i = 0; i < 4; ++i) rho.add({gen::word(3, 3), gen::word(3, 3)}, gen::hseries(6));
      TensorSeries R = TensorSeries::unit(2, 6), hr = rho;
      hr.scale(hbar());
      R += hr;
      TensorSeries rhs = deformed_cybe_defect(rho);
      rhs.scale(HSeries::monomial(Rational(1), 2));
      o.require((qybe_defect(R) - rhs).is_zero(), "factorization for random rho");
    }
    set_default_order(saved);
  });

  criterion(8, "triangular inversion mod h^5", 30, [](Outcome& o) {
    int saved = default_order();
    set_default_order(5);
    std::vector<Perturbation> ps{[](const TensorSeries& x) { return TensorSeries(x.slots(), x.max_len()); }, sample_p2};
    for (int pairs = 1; pairs <= 3; ++pairs) {
      TensorSeries rho = generic_rho(pairs, 1, 8);
      o.require(triangular_invert(ps, perturb_forward(ps, rho)) == rho, "inverse after forward");
      o.require(perturb_forward(ps, triangular_invert(ps, rho)) == rho, "forward after inverse");
    }
    set_default_order(saved);
  });

  criterion(9, "twist calculus mod h^4", 30, [](Outcome& o) {
    int saved = default_order();
    set_default_order(4);
    Carrier c = Carrier::enveloping(2, 4);
    o.require(twist_d(c.unit(2), c) == c.unit(3), "d~(1) = 1");
    for (int t = 0; t < 20; ++t) {
      auto J = random_unit_leading(2, 2, 4);
      auto u = random_unit_leading(1, 2, 4), v = random_unit_leading(1, 2, 4);
      o.require(twist_act(u * v, J, c) == twist_act(u, twist_act(v, J, c), c), "group action");
      o.require(twist_act(c.unit(1), J, c) == J, "unit acts trivially");
      TensorSeries kappa(1, 4);
      for (int i = 0; i < 4; ++i) kappa.add({gen::word(2, 4)}, gen::hseries(4));
      o.require(cohochschild_d2(cohochschild_d1(kappa, c), c).is_zero(), "d2 d1 = 0");
    }
    set_default_order(saved);
  });

  criterion(10, "quasi-commutative lattice", 30, [](Outcome& o) {
    WordTensor<HSeries> br(1), plain(1);
    br.add({{0, 1}}, HSeries::monomial(1, -1));
    br.add({{1, 0}}, HSeries::monomial(-1, -1));
    plain.add({{0, 1}}, HSeries::monomial(1, -1));
    o.require(qcomm_membership(br, 2), "h^-1 [x1,x2] is a member");
    o.require(!qcomm_membership(plain, 2), "h^-1 x1 x2 is not a member");
    for (int t = 0; t < 100; ++t) {
      int n1 = gen::uniform(1, 3), n2 = gen::uniform(1, 2);
      std::vector<int> l1, l2;
      for (int i = 0; i < n1; ++i) l1.push_back(i);
      for (int i = 0; i < n2; ++i) l2.push_back(n1 + i);
      auto a = random_member(l1), b = random_member(l2);
      o.require(qcomm_membership(a, n1) && qcomm_membership(b, n2), "generated members");
      o.require(qcomm_membership(ue_product(a, b), n1 + n2), "closure under product");
    }
  });

  criterion(11, "LBA graded dimensions, (p,q) <= (2,2), N <= 4", 120, [](Outcome& o) {
    for (int p = 0; p <= 2; ++p)
      for (int q = 0; q <= 2; ++q)
        for (int N = 0; N <= 4; ++N)
          o.require(lba_component_dim(p, q, N) == lba_component_dim_enumerated(p, q, N),
                    "LBA(" + std::to_string(p) + "," + std::to_string(q) + ") N=" + std::to_string(N));
  });

  std::printf("%s: %d failing criteria\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures ? 1 : 0;
}

#include "propcalc/freelie.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "propcalc/diagram.hpp"
#include "propcalc/permutation.hpp"

namespace propcalc {

std::string word_str(const Word& w) {
  if (w.empty()) return "1";
  std::ostringstream os;
  bool wide = false;
  for (int x : w) wide = wide || x >= 9;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (wide && i > 0) os << ',';
    os << w[i] + 1;
  }
  return os.str();
}

Word parse_word(const std::string& s) {
  Word w;
  if (s == "1") return w;
  if (s.find(',') != std::string::npos) {
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) w.push_back(std::stoi(item) - 1);
    return w;
  }
  for (char c : s) {
    if (c < '1' || c > '9') throw std::invalid_argument("parse_word: bad letter in " + s);
    w.push_back(c - '1');
  }
  return w;
}

bool is_lyndon(const Word& w) {
  if (w.empty()) return false;
  std::size_t n = w.size();
  for (std::size_t k = 1; k < n; ++k) {
    // compare w with its rotation starting at k
    for (std::size_t i = 0; i < n; ++i) {
      int a = w[i], b = w[(i + k) % n];
      if (a < b) break;
      if (a > b) return false;
      if (i + 1 == n) return false;  // equal rotation: periodic word
    }
  }
  return true;
}

std::vector<Word> lyndon_basis(const std::vector<int>& multidegree, int cap) {
  int total = 0;
  Word w;
  for (std::size_t i = 0; i < multidegree.size(); ++i) {
    if (multidegree[i] < 0) throw std::invalid_argument("lyndon_basis: negative multidegree");
    total += multidegree[i];
    for (int k = 0; k < multidegree[i]; ++k) w.push_back(static_cast<int>(i));
  }
  if (total > cap) throw std::out_of_range("lyndon_basis: degree cap exceeded");
  std::vector<Word> out;
  if (w.empty()) return out;
  do {
    if (is_lyndon(w)) out.push_back(w);
  } while (std::next_permutation(w.begin(), w.end()));
  return out;
}

std::vector<Word> multilinear_lyndon(const std::vector<int>& letters) {
  std::vector<Word> out;
  if (letters.empty()) return out;
  Word rest = letters;
  std::sort(rest.begin(), rest.end());
  int first = rest.front();
  rest.erase(rest.begin());
  do {
    Word w{first};
    w.insert(w.end(), rest.begin(), rest.end());
    out.push_back(std::move(w));
  } while (std::next_permutation(rest.begin(), rest.end()));
  return out;
}

std::pair<Word, Word> standard_factorization(const Word& w) {
  if (w.size() < 2 || !is_lyndon(w)) throw std::invalid_argument("standard_factorization: needs a Lyndon word of length >= 2");
  for (std::size_t k = 1; k < w.size(); ++k) {
    Word v(w.begin() + static_cast<std::ptrdiff_t>(k), w.end());
    if (is_lyndon(v)) return {Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k)), v};
  }
  throw std::logic_error("standard_factorization: no Lyndon suffix");
}

void add_to(WordPoly& a, const WordPoly& b, const Rational& c) {
  for (const auto& [w, x] : b) {
    auto [it, inserted] = a.try_emplace(w, c * x);
    if (!inserted) {
      it->second += c * x;
      if (is_zero(it->second)) a.erase(it);
    }
  }
}

WordPoly word_product(const WordPoly& a, const WordPoly& b) {
  WordPoly r;
  for (const auto& [u, x] : a)
    for (const auto& [v, y] : b) add_to(r, WordPoly{{concat(u, v), x * y}});
  return r;
}

WordPoly commutator(const WordPoly& a, const WordPoly& b) {
  WordPoly r = word_product(a, b);
  add_to(r, word_product(b, a), Rational(-1));
  return r;
}

const WordPoly& lyndon_expansion(const Word& w) {
  static std::mutex mu;
  static std::map<Word, WordPoly> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(w);
    if (it != cache.end()) return it->second;
  }
  WordPoly value;
  if (w.size() == 1) {
    value[w] = 1;
  } else {
    auto [u, v] = standard_factorization(w);
    value = commutator(lyndon_expansion(u), lyndon_expansion(v));
  }
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(w, std::move(value)).first->second;
}

LieElement lie_letter(int i) { return LieElement{{Word{i}, Rational(1)}}; }

WordPoly expand_to_assoc(const LieElement& a) {
  WordPoly r;
  for (const auto& [w, c] : a) add_to(r, lyndon_expansion(w), c);
  return r;
}

LieElement lie_from_assoc(WordPoly f) {
  LieElement out;
  while (!f.empty()) {
    Word w = f.begin()->first;
    Rational c = f.begin()->second;
    if (!is_lyndon(w)) throw std::invalid_argument("lie_from_assoc: not a Lie element (leading word " + word_str(w) + ")");
    out[w] += c;
    add_to(f, lyndon_expansion(w), Rational(-c));
  }
  return out;
}

LieElement lie_bracket(const LieElement& a, const LieElement& b) {
  return lie_from_assoc(commutator(expand_to_assoc(a), expand_to_assoc(b)));
}

WordPoly relabel(const WordPoly& a, const std::vector<int>& map) {
  WordPoly r;
  for (const auto& [w, c] : a) {
    Word u;
    for (int x : w) u.push_back(map.at(static_cast<std::size_t>(x)));
    add_to(r, WordPoly{{u, c}});
  }
  return r;
}

LieElement relabel_lie(const LieElement& a, const std::vector<int>& map) { return lie_from_assoc(relabel(expand_to_assoc(a), map)); }

std::string lie_str(const LieElement& a) {
  if (a.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [w, c] : a) {
    if (!first) os << " + ";
    first = false;
    if (c != 1) os << c.get_str() << "*";
    os << "L" << word_str(w);
  }
  return os.str();
}

ClassicalSpace parse_classical_space(const std::string& name) {
  std::string s;
  for (char c : name)
    if (c != '_') s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "alg") return ClassicalSpace::Alg;
  if (s == "algcomm") return ClassicalSpace::AlgComm;
  if (s == "poisson") return ClassicalSpace::Poisson;
  if (s == "la") return ClassicalSpace::LA;
  throw std::invalid_argument("unknown space: " + name);
}

long long classical_dim(ClassicalSpace space, int N, int n, int cap) {
  if (N > cap || n > cap) throw std::out_of_range("classical_dim: cap exceeded");
  if (N < 0 || n < 0) throw std::invalid_argument("classical_dim: negative size");
  switch (space) {
    case ClassicalSpace::Alg: {
      // ordered letters distributed into n ordered lists
      return factorial(N) * static_cast<long long>(weak_compositions(N, n).size());
    }
    case ClassicalSpace::AlgComm: {
      long long r = 1;
      for (int i = 0; i < N; ++i) r *= n;
      return r;
    }
    case ClassicalSpace::Poisson: {
      // S(FL_N)^{⊗n}: set partition into Lie blocks, each block in one of n slots
      long long total = 0;
      for (const auto& part : set_partitions(N)) {
        long long prod = 1;
        for (const auto& b : part) prod *= static_cast<long long>(multilinear_lyndon(b).size()) * n;
        total += prod;
      }
      return total;
    }
    case ClassicalSpace::LA: {
      // ordered set partitions into n nonempty Lie blocks
      if (N == 0) return n == 0 ? 1 : 0;
      long long total = 0;
      for (const auto& part : set_partitions(N, n)) {
        long long prod = 1;
        for (const auto& b : part) prod *= static_cast<long long>(multilinear_lyndon(b).size());
        total += prod * factorial(n);
      }
      return total;
    }
  }
  return 0;
}

std::vector<LieTensorKey> lie_tensor_basis(int N, int slots) {
  std::vector<LieTensorKey> out;
  if (slots == 0) {
    if (N == 0) out.emplace_back();
    return out;
  }
  // assign each letter to a slot, every slot nonempty
  std::vector<int> assign(static_cast<std::size_t>(N), 0);
  auto rec = [&](auto&& self, int i) -> void {
    if (i == N) {
      std::vector<std::vector<int>> blocks(static_cast<std::size_t>(slots));
      for (int x = 0; x < N; ++x) blocks[static_cast<std::size_t>(assign[static_cast<std::size_t>(x)])].push_back(x);
      for (const auto& b : blocks)
        if (b.empty()) return;
      std::vector<LieTensorKey> acc{LieTensorKey{}};
      for (const auto& b : blocks) {
        std::vector<LieTensorKey> next;
        for (const auto& key : acc)
          for (const auto& w : multilinear_lyndon(b)) {
            auto k = key;
            k.push_back(w);
            next.push_back(std::move(k));
          }
        acc = std::move(next);
      }
      out.insert(out.end(), acc.begin(), acc.end());
      return;
    }
    for (int s = 0; s < slots; ++s) {
      assign[static_cast<std::size_t>(i)] = s;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Action of σ on (FL_N^{⊗slots})_mult as sparse columns over basis indices.
std::vector<std::vector<std::pair<int, Rational>>> action_columns(const std::vector<LieTensorKey>& basis, const Permutation& sigma) {
  std::map<LieTensorKey, int> index;
  for (std::size_t i = 0; i < basis.size(); ++i) index.emplace(basis[i], static_cast<int>(i));
  std::vector<std::vector<std::pair<int, Rational>>> cols;
  for (const auto& key : basis) {
    std::map<LieTensorKey, Rational> acc{{LieTensorKey{}, Rational(1)}};
    for (const auto& w : key) {
      LieElement img = relabel_lie(LieElement{{w, Rational(1)}}, sigma.images());
      std::map<LieTensorKey, Rational> next;
      for (const auto& [k, c] : acc)
        for (const auto& [u, d] : img) {
          auto k2 = k;
          k2.push_back(u);
          next[k2] += c * d;
        }
      acc = std::move(next);
    }
    std::vector<std::pair<int, Rational>> col;
    for (const auto& [k, c] : acc)
      if (!is_zero(c)) col.emplace_back(index.at(k), c);
    cols.push_back(std::move(col));
  }
  return cols;
}

struct Symmetrizer {
  std::vector<LieTensorKey> left, right;
  std::vector<std::pair<int, int>> reps;
  long long rank = 0;
};

Symmetrizer symmetrize(int p, int q, int N) {
  Symmetrizer s;
  s.left = lie_tensor_basis(N, p);
  s.right = lie_tensor_basis(N, q);
  std::vector<std::vector<std::vector<std::pair<int, Rational>>>> act_l, act_r;
  for (const auto& sigma : all_permutations(N)) {
    act_l.push_back(action_columns(s.left, sigma));
    act_r.push_back(action_columns(s.right, sigma));
  }
  EchelonBasis<std::pair<int, int>> basis;
  for (std::size_t a = 0; a < s.left.size(); ++a)
    for (std::size_t b = 0; b < s.right.size(); ++b) {
      SparseVector<std::pair<int, int>> avg;
      for (std::size_t g = 0; g < act_l.size(); ++g)
        for (const auto& [i, c] : act_l[g][a])
          for (const auto& [j, d] : act_r[g][b]) axpy(avg, c * d, SparseVector<std::pair<int, int>>{{{i, j}, Rational(1)}});
      if (basis.insert(avg)) s.reps.emplace_back(static_cast<int>(a), static_cast<int>(b));
    }
  s.rank = static_cast<long long>(basis.rank());
  return s;
}

void check_lba_caps(int p, int q, int N, int cap) {
  if (p < 0 || q < 0 || N < 0) throw std::invalid_argument("lba: negative size");
  if (p > cap || q > cap || N > cap) throw std::out_of_range("lba: cap exceeded");
}

}  // namespace

long long lba_component_dim(int p, int q, int N, int cap) {
  check_lba_caps(p, q, N, cap);
  return symmetrize(p, q, N).rank;
}

std::vector<std::pair<LieTensorKey, LieTensorKey>> lba_component_basis(int p, int q, int N, int cap) {
  check_lba_caps(p, q, N, cap);
  Symmetrizer s = symmetrize(p, q, N);
  std::vector<std::pair<LieTensorKey, LieTensorKey>> out;
  for (auto [a, b] : s.reps) out.emplace_back(s.left[static_cast<std::size_t>(a)], s.right[static_cast<std::size_t>(b)]);
  return out;
}

namespace {

// Planar binary tree; leaves carry strand labels.
struct BTree {
  int leaf = -1;
  std::vector<BTree> kids;
  bool is_leaf() const { return kids.empty(); }
};

std::vector<BTree> tree_shapes(int leaves) {
  std::vector<BTree> out;
  if (leaves == 1) {
    out.push_back(BTree{0, {}});
    return out;
  }
  for (int l = 1; l < leaves; ++l)
    for (const auto& a : tree_shapes(l))
      for (const auto& b : tree_shapes(leaves - l)) out.push_back(BTree{-1, {a, b}});
  return out;
}

void label_leaves(BTree& t, const std::vector<int>& labels, std::size_t& pos) {
  if (t.is_leaf()) {
    t.leaf = labels[pos++];
    return;
  }
  for (auto& k : t.kids) label_leaves(k, labels, pos);
}

struct LbaExpr {
  std::vector<BTree> co;   // one δ-tree per input
  std::vector<BTree> lie;  // one μ-tree per output
};

Diagram lba_diagram(const LbaExpr& e, int N) {
  std::vector<Vertex> vs;
  std::vector<Port> strand(static_cast<std::size_t>(N));
  auto build_co = [&](auto&& self, const BTree& t, Port src) -> void {
    if (t.is_leaf()) {
      strand[static_cast<std::size_t>(t.leaf)] = src;
      return;
    }
    int v = static_cast<int>(vs.size());
    vs.push_back(Vertex{"delta", 1, 2, {src}});
    self(self, t.kids[0], Port{v, 0});
    self(self, t.kids[1], Port{v, 1});
  };
  for (std::size_t i = 0; i < e.co.size(); ++i) build_co(build_co, e.co[i], Port{-1, static_cast<int>(i)});
  auto build_lie = [&](auto&& self, const BTree& t) -> Port {
    if (t.is_leaf()) return strand[static_cast<std::size_t>(t.leaf)];
    Port a = self(self, t.kids[0]);
    Port b = self(self, t.kids[1]);
    vs.push_back(Vertex{"mu", 2, 1, {a, b}});
    return Port{static_cast<int>(vs.size()) - 1, 0};
  };
  std::vector<Port> outs;
  for (const auto& t : e.lie) outs.push_back(build_lie(build_lie, t));
  return Diagram(static_cast<int>(e.co.size()), static_cast<int>(e.lie.size()), std::move(vs), std::move(outs));
}

void internal_paths(const BTree& t, std::vector<int>& path, std::vector<std::vector<int>>& out) {
  if (t.is_leaf()) return;
  out.push_back(path);
  for (int k = 0; k < 2; ++k) {
    path.push_back(k);
    internal_paths(t.kids[static_cast<std::size_t>(k)], path, out);
    path.pop_back();
  }
}

BTree& at_path(BTree& t, const std::vector<int>& path) {
  BTree* cur = &t;
  for (int k : path) cur = &cur->kids[static_cast<std::size_t>(k)];
  return *cur;
}

const BTree& at_path(const BTree& t, const std::vector<int>& path) {
  const BTree* cur = &t;
  for (int k : path) cur = &cur->kids[static_cast<std::size_t>(k)];
  return *cur;
}

}  // namespace

long long lba_component_dim_enumerated(int p, int q, int N, int cap) {
  check_lba_caps(p, q, N, cap);
  if (N < p || N < q) return 0;
  if (N == 0) return 1;
  std::vector<LbaExpr> exprs;
  auto sides = [&](int slots) {
    std::vector<std::vector<BTree>> forests;
    for (const auto& comp : weak_compositions(N, slots)) {
      if (std::find(comp.begin(), comp.end(), 0) != comp.end()) continue;
      std::vector<std::vector<BTree>> acc{{}};
      for (int k : comp) {
        std::vector<std::vector<BTree>> next;
        for (const auto& f : acc)
          for (const auto& t : tree_shapes(k)) {
            auto g = f;
            g.push_back(t);
            next.push_back(std::move(g));
          }
        acc = std::move(next);
      }
      forests.insert(forests.end(), acc.begin(), acc.end());
    }
    return forests;
  };
  auto co_forests = sides(p);
  auto lie_forests = sides(q);
  std::vector<int> ident(static_cast<std::size_t>(N));
  std::iota(ident.begin(), ident.end(), 0);
  for (const auto& cf : co_forests)
    for (const auto& lf : lie_forests)
      for (const auto& sigma : all_permutations(N)) {
        LbaExpr e{cf, lf};
        std::size_t pos = 0;
        for (auto& t : e.co) label_leaves(t, sigma.images(), pos);
        pos = 0;
        for (auto& t : e.lie) label_leaves(t, ident, pos);
        exprs.push_back(std::move(e));
      }

  std::map<CanonicalDiagram, int> keys;
  auto key_of = [&](const LbaExpr& e) {
    auto k = canonical_form(lba_diagram(e, N));
    return keys.emplace(k, static_cast<int>(keys.size())).first->second;
  };
  for (const auto& e : exprs) key_of(e);

  EchelonBasis<int> rels;
  for (const auto& e : exprs) {
    for (int side = 0; side < 2; ++side) {
      const auto& forest = side == 0 ? e.co : e.lie;
      for (std::size_t t = 0; t < forest.size(); ++t) {
        std::vector<std::vector<int>> paths;
        std::vector<int> path;
        internal_paths(forest[t], path, paths);
        for (const auto& pth : paths) {
          auto edit = [&](auto&& fn) {
            LbaExpr f = e;
            fn(at_path((side == 0 ? f.co : f.lie)[t], pth));
            return key_of(f);
          };
          // antisymmetry
          SparseVector<int> anti;
          axpy(anti, Rational(1), SparseVector<int>{{key_of(e), Rational(1)}});
          axpy(anti, Rational(1), SparseVector<int>{{edit([](BTree& x) { std::swap(x.kids[0], x.kids[1]); }), Rational(1)}});
          rels.insert(anti);
          // (co-)Jacobi when the left child is internal: x = ((a,b),c)
          const BTree& x = at_path(forest[t], pth);
          if (!x.kids[0].is_leaf()) {
            SparseVector<int> jac{{key_of(e), Rational(1)}};
            auto rotate = [](BTree& y) {
              BTree a = y.kids[0].kids[0], b = y.kids[0].kids[1], c = y.kids[1];
              y.kids[0].kids[0] = b;
              y.kids[0].kids[1] = c;
              y.kids[1] = a;
            };
            axpy(jac, Rational(1), SparseVector<int>{{edit(rotate), Rational(1)}});
            axpy(jac, Rational(1), SparseVector<int>{{edit([&](BTree& y) {
                                                          rotate(y);
                                                          rotate(y);
                                                        }),
                                                      Rational(1)}});
            rels.insert(jac);
          }
        }
      }
    }
  }
  return static_cast<long long>(keys.size()) - static_cast<long long>(rels.rank());
}

}  // namespace propcalc

#include "propcalc/module_eval.hpp"

#include <algorithm>
#include <stdexcept>

namespace propcalc {

FiniteCoalgebra FiniteCoalgebra::triangular() {
  // letters: 0 = g1, 1 = g2, 2 = x
  FiniteCoalgebra c;
  c.dim = 3;
  c.coproduct = {{{0, 0, Rational(1)}}, {{1, 1, Rational(1)}}, {{0, 2, Rational(1)}, {2, 1, Rational(1)}}};
  c.counit = {Rational(1), Rational(1), Rational(0)};
  return c;
}

FiniteCoalgebra FiniteCoalgebra::divided_powers() {
  FiniteCoalgebra c;
  c.dim = 3;
  c.coproduct.resize(3);
  for (int n = 0; n < 3; ++n)
    for (int i = 0; i <= n; ++i) c.coproduct[static_cast<std::size_t>(n)].emplace_back(i, n - i, Rational(1));
  c.counit = {Rational(1), Rational(0), Rational(0)};
  return c;
}

FiniteCoalgebra FiniteCoalgebra::copoisson() {
  // letters: 0 = 1_C, 1 = x, 2 = y
  FiniteCoalgebra c;
  c.dim = 3;
  c.coproduct = {{{0, 0, Rational(1)}},
                 {{0, 1, Rational(1)}, {1, 0, Rational(1)}},
                 {{0, 2, Rational(1)}, {2, 0, Rational(1)}}};
  c.counit = {Rational(1), Rational(0), Rational(0)};
  c.cobracket = {{}, {}, {{1, 2, Rational(1)}, {2, 1, Rational(-1)}}};
  return c;
}

FiniteCoalgebra FiniteCoalgebra::deconcatenation(int letters, int L) {
  std::vector<Word> words{{}};
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (static_cast<int>(words[i].size()) == L) continue;
    for (int a = 0; a < letters; ++a) words.push_back(concat(words[i], Word{a}));
  }
  std::map<Word, int> index;
  for (std::size_t i = 0; i < words.size(); ++i) index[words[i]] = static_cast<int>(i);
  FiniteCoalgebra c;
  c.dim = static_cast<int>(words.size());
  c.coproduct.resize(words.size());
  c.counit.assign(words.size(), Rational(0));
  c.counit[0] = 1;
  for (std::size_t i = 0; i < words.size(); ++i) {
    const Word& w = words[i];
    for (std::size_t k = 0; k <= w.size(); ++k) {
      Word a(w.begin(), w.begin() + static_cast<long>(k)), b(w.begin() + static_cast<long>(k), w.end());
      c.coproduct[i].emplace_back(index.at(a), index.at(b), Rational(1));
    }
  }
  return c;
}

namespace {

template <typename S>
S from_rational(const Rational& c) {
  return ScalarTraits<S>::from(c);
}

/// Applies f: Word -> WordTensor (with `k` slots) to slot `j` of every term of t.
template <typename S, typename F>
WordTensor<S> apply_to_slot(const WordTensor<S>& t, std::size_t j, int k, F&& f) {
  WordTensor<S> r(t.slots() - 1 + k);
  for (const auto& [key, c] : t.terms()) {
    WordTensor<S> img = f(key[j]);
    for (const auto& [ik, ic] : img.terms()) {
      WordTuple nk(key.begin(), key.begin() + static_cast<long>(j));
      nk.insert(nk.end(), ik.begin(), ik.end());
      nk.insert(nk.end(), key.begin() + static_cast<long>(j) + 1, key.end());
      r.add(nk, c * ic);
    }
  }
  return r;
}

/// k-fold iterate of a binary coproduct (k = 1 is the identity; k = 0 is handled by callers).
template <typename S, typename F>
WordTensor<S> iterate_coproduct(const Word& w, int k, F&& delta2) {
  if (k == 1) return WordTensor<S>::monomial({w}, ScalarTraits<S>::one());
  WordTensor<S> t = delta2(w);
  for (int s = 2; s < k; ++s) t = apply_to_slot<S>(t, static_cast<std::size_t>(s - 1), 2, delta2);
  return t;
}

template <typename S>
WordTensor<S> flip(const WordTensor<S>& t) {
  WordTensor<S> r(2);
  for (const auto& [k, c] : t.terms()) r.add({k[1], k[0]}, c);
  return r;
}

template <typename S>
WordTensor<S> concat_all(const WordTuple& args) {
  Word w;
  for (const auto& a : args) w.insert(w.end(), a.begin(), a.end());
  return WordTensor<S>::monomial({w}, ScalarTraits<S>::one());
}

[[noreturn]] void unsupported(const std::string& name, int in, int out) {
  throw std::invalid_argument("module: generator " + name + "(" + std::to_string(in) + "," + std::to_string(out) +
                              ") has no action");
}

}  // namespace

template <typename S>
WordTensor<S> FreeBialgebraModule<S>::coproduct(const Word& w) const {
  WordTensor<S> t = WordTensor<S>::unit(2);
  for (int a : w) {
    if (a < 0 || a >= c_.dim) throw std::out_of_range("F(C): letter outside the coalgebra");
    WordTensor<S> f(2);
    for (const auto& [x, y, c] : c_.coproduct[static_cast<std::size_t>(a)]) f.add({{x}, {y}}, from_rational<S>(c));
    t = t * f;
  }
  return t;
}

template <typename S>
WordTensor<S> FreeBialgebraModule<S>::cobracket(const Word& w) const {
  if (c_.cobracket.empty()) throw std::invalid_argument("F(C): coalgebra has no cobracket");
  WordTensor<S> r(2);
  for (std::size_t i = 0; i < w.size(); ++i) {
    WordTensor<S> mid(2);
    for (const auto& [x, y, c] : c_.cobracket[static_cast<std::size_t>(w[i])]) mid.add({{x}, {y}}, from_rational<S>(c));
    if (mid.is_zero()) continue;
    Word pre(w.begin(), w.begin() + static_cast<long>(i)), post(w.begin() + static_cast<long>(i) + 1, w.end());
    r += coproduct(pre) * mid * coproduct(post);
  }
  return r;
}

template <typename S>
WordTensor<S> FreeBialgebraModule<S>::apply(const std::string& name, int in, int out, const WordTuple& args) const {
  if (name == "m" || name == "eta") {
    if (out != 1) unsupported(name, in, out);
    return concat_all<S>(args);
  }
  if (in != 1) unsupported(name, in, out);
  const Word& w = args[0];
  if (name == "Delta" || name == "eps") {
    if (out == 0) {
      Rational e(1);
      for (int a : w) e *= c_.counit[static_cast<std::size_t>(a)];
      WordTensor<S> r(0);
      r.add({}, from_rational<S>(e));
      return r;
    }
    return iterate_coproduct<S>(w, out, [this](const Word& x) { return coproduct(x); });
  }
  if (name == "delta" && out == 2) return cobracket(w);
  if (name == "deltat" && out == 2) {
    if constexpr (std::is_same_v<S, HSeries>) {
      WordTensor<S> d = coproduct(w);
      d -= flip(d);
      d.scale(HSeries::monomial(Rational(1), -1));
      return d;
    } else {
      throw std::invalid_argument("F(C): deltat needs hbar-series coefficients");
    }
  }
  unsupported(name, in, out);
}

template <typename S>
WordTensor<S> TensorAlgebraModule<S>::apply(const std::string& name, int in, int out, const WordTuple& args) const {
  if (name == "m" || name == "eta") {
    if (out != 1) unsupported(name, in, out);
    WordTensor<S> r = concat_all<S>(args);
    if (max_len_ >= 0 && total_length(r.terms().begin()->first) > max_len_) {
      if (drop_long_) return WordTensor<S>(1);
      throw std::overflow_error("module: truncation overflow");
    }
    return r;
  }
  if ((name == "r" || name == "rho") && in == 0 && out == 2) {
    if (!r_) throw std::invalid_argument("module: no value assigned to " + name);
    return *r_;
  }
  if (in != 1) unsupported(name, in, out);
  const Word& w = args[0];
  if (name == "Delta" || name == "eps") {
    if (out == 0) {
      WordTensor<S> r(0);
      if (w.empty()) r.add({}, ScalarTraits<S>::one());
      return r;
    }
    auto unshuffle = [](const Word& x) {
      WordTensor<S> t(2);
      for_each_unshuffle(x, [&](const Word& a, const Word& b) { t.add({a, b}, ScalarTraits<S>::one()); });
      return t;
    };
    return iterate_coproduct<S>(w, out, unshuffle);
  }
  unsupported(name, in, out);
}

template <typename S>
WordTensor<S> eval_diagram(const Diagram& d, const Module<S>& mod, const WordTensor<S>& input) {
  if (input.slots() != d.n_in()) throw std::invalid_argument("eval: input has the wrong number of slots");
  std::vector<Port> wires;
  for (int i = 0; i < d.n_in(); ++i) wires.push_back({-1, i});
  WordTensor<S> state = input.with_max_len(-1);

  for (int v : d.topological_order()) {
    const Vertex& vx = d.vertices()[static_cast<std::size_t>(v)];
    std::vector<std::size_t> pos;
    std::vector<bool> used(wires.size(), false);
    for (const Port& src : vx.sources) {
      auto it = std::find(wires.begin(), wires.end(), src);
      if (it == wires.end()) throw std::logic_error("eval: dangling source");
      pos.push_back(static_cast<std::size_t>(it - wires.begin()));
      used[pos.back()] = true;
    }
    std::vector<Port> next;
    for (std::size_t i = 0; i < wires.size(); ++i)
      if (!used[i]) next.push_back(wires[i]);
    for (int s = 0; s < vx.out; ++s) next.push_back({v, s});

    std::map<WordTuple, WordTensor<S>> cache;
    WordTensor<S> out(static_cast<int>(next.size()));
    for (const auto& [key, c] : state.terms()) {
      WordTuple args;
      for (std::size_t p : pos) args.push_back(key[p]);
      auto it = cache.find(args);
      if (it == cache.end()) it = cache.emplace(args, mod.apply(vx.name, vx.in, vx.out, args)).first;
      WordTuple rest;
      for (std::size_t i = 0; i < key.size(); ++i)
        if (!used[i]) rest.push_back(key[i]);
      for (const auto& [ik, ic] : it->second.terms()) {
        WordTuple nk = rest;
        nk.insert(nk.end(), ik.begin(), ik.end());
        out.add(nk, c * ic);
      }
    }
    state = std::move(out);
    wires = std::move(next);
  }

  std::vector<std::size_t> order;
  for (const Port& o : d.outputs()) order.push_back(static_cast<std::size_t>(std::find(wires.begin(), wires.end(), o) - wires.begin()));
  WordTensor<S> result(d.n_out());
  for (const auto& [key, c] : state.terms()) {
    WordTuple nk;
    for (std::size_t p : order) nk.push_back(key[p]);
    result.add(nk, c);
  }
  return result;
}

template <typename S>
WordTensor<S> eval_on_module(const LinComb<S>& x, const Module<S>& mod, const WordTensor<S>& input) {
  WordTensor<S> r(x.n_out());
  for (const auto& [d, c] : x.terms()) {
    WordTensor<S> t = eval_diagram(d.diagram(), mod, input);
    t.scale(c);
    r += t;
  }
  return r;
}

template <typename S>
WordTensor<S> eval_normal_form(const NormalForm<S>& nf, const Module<S>& mod, const WordTensor<S>& input) {
  WordTensor<S> r(nf.q);
  WordTensor<S> unit = mod.apply("eta", 0, 1, {});
  std::map<Word, WordTensor<S>> proj;
  auto project = [&](const Word& w) {
    auto it = proj.find(w);
    if (it != proj.end()) return it->second;
    WordTensor<S> img = WordTensor<S>::monomial({w}, ScalarTraits<S>::one());
    WordTensor<S> u = unit;
    u.scale(mod.apply("eps", 1, 0, {w}).coeff({}));
    img -= u;
    return proj.emplace(w, img).first->second;
  };
  // many terms share their coalgebra part
  using Key = std::pair<std::vector<std::vector<Word>>, std::vector<std::array<int, 2>>>;
  std::map<Key, WordTensor<S>> lower;
  for (const auto& [od, c] : nf.terms) {
    Key key{od.coalgebra, od.r_pairs};
    auto it = lower.find(key);
    if (it == lower.end()) {
      WordTensor<S> t = eval_diagram(coalgebra_part(od), mod, input);
      for (int s = 0; s < od.strands(); ++s) t = apply_to_slot<S>(t, static_cast<std::size_t>(s), 1, project);
      it = lower.emplace(std::move(key), std::move(t)).first;
    }
    WordTensor<S> t = eval_diagram(algebra_part(od), mod, it->second);
    t.scale(c);
    r += t;
  }
  return r;
}

template class FreeBialgebraModule<Rational>;
template class FreeBialgebraModule<HSeries>;
template class TensorAlgebraModule<Rational>;
template class TensorAlgebraModule<HSeries>;
template WordTensor<Rational> eval_diagram(const Diagram&, const Module<Rational>&, const WordTensor<Rational>&);
template WordTensor<HSeries> eval_diagram(const Diagram&, const Module<HSeries>&, const WordTensor<HSeries>&);
template WordTensor<Rational> eval_on_module(const LinComb<Rational>&, const Module<Rational>&, const WordTensor<Rational>&);
template WordTensor<HSeries> eval_on_module(const LinComb<HSeries>&, const Module<HSeries>&, const WordTensor<HSeries>&);
template WordTensor<Rational> eval_normal_form(const NormalForm<Rational>&, const Module<Rational>&, const WordTensor<Rational>&);
template WordTensor<HSeries> eval_normal_form(const NormalForm<HSeries>&, const Module<HSeries>&, const WordTensor<HSeries>&);

}  // namespace propcalc

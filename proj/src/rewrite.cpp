#include "propcalc/rewrite.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

#include "propcalc/freelie.hpp"

namespace propcalc {

int OrderedDiagram::strands() const {
  int n = 0;
  for (const auto& l : algebra) n += static_cast<int>(l.size());
  return n;
}

int OrderedDiagram::blocks() const {
  int n = 0;
  for (const auto& c : coalgebra) n += static_cast<int>(c.size());
  return n;
}

std::string OrderedDiagram::str() const {
  std::ostringstream os;
  os << "N=" << strands() << " [";
  for (std::size_t i = 0; i < coalgebra.size(); ++i) {
    if (i) os << " | ";
    if (coalgebra[i].empty()) os << "eps";
    for (std::size_t b = 0; b < coalgebra[i].size(); ++b) os << (b ? " " : "") << word_str(coalgebra[i][b]);
  }
  os << "] -> [";
  for (std::size_t j = 0; j < algebra.size(); ++j) {
    if (j) os << " | ";
    if (algebra[j].empty()) os << "eta";
    for (std::size_t b = 0; b < algebra[j].size(); ++b) os << (b ? " " : "") << algebra[j][b] + 1;
  }
  os << "]";
  for (const auto& r : r_pairs) os << " r(" << r[0] + 1 << "," << r[1] + 1 << ")";
  return os.str();
}

template <typename S>
void NormalForm<S>::add(const OrderedDiagram& d, const S& c) {
  if (propcalc::is_zero(c)) return;
  auto [it, inserted] = terms.try_emplace(d, c);
  if (!inserted) {
    it->second += c;
    if (propcalc::is_zero(it->second)) terms.erase(it);
  }
}

namespace {

// ---------------------------------------------------------------------------
// Graph surgery on a copy of a diagram.

class Edit {
 public:
  explicit Edit(const Diagram& d)
      : n_in_(d.n_in()), n_out_(d.n_out()), vs_(d.vertices()), alive_(d.vertex_count(), 1), outs_(d.outputs()), cons_(d.consumers()) {}

  Vertex& at(int v) { return vs_[static_cast<std::size_t>(v)]; }
  /// Original consumer of a vertex out-slot: {-1, j} for global output j.
  Port target(int v, int slot) const { return cons_[static_cast<std::size_t>(v)][static_cast<std::size_t>(slot)]; }
  void feed(const Port& tgt, const Port& src) {
    if (tgt.vertex < 0)
      outs_[static_cast<std::size_t>(tgt.slot)] = src;
    else
      vs_[static_cast<std::size_t>(tgt.vertex)].sources[static_cast<std::size_t>(tgt.slot)] = src;
  }
  int add(const std::string& name, int in, int out, std::vector<Port> srcs) {
    vs_.push_back(Vertex{name, in, out, std::move(srcs)});
    alive_.push_back(1);
    return static_cast<int>(vs_.size()) - 1;
  }
  void kill(int v) { alive_[static_cast<std::size_t>(v)] = 0; }

  Diagram finish() const {
    std::vector<int> idx(vs_.size(), -1);
    int n = 0;
    for (std::size_t v = 0; v < vs_.size(); ++v)
      if (alive_[v]) idx[v] = n++;
    auto remap = [&](Port p) {
      if (p.vertex >= 0) {
        p.vertex = idx[static_cast<std::size_t>(p.vertex)];
        if (p.vertex < 0) throw std::logic_error("rewrite: dangling reference to a removed vertex");
      }
      return p;
    };
    std::vector<Vertex> out;
    for (std::size_t v = 0; v < vs_.size(); ++v) {
      if (!alive_[v]) continue;
      Vertex x = vs_[v];
      for (auto& p : x.sources) p = remap(p);
      out.push_back(std::move(x));
    }
    std::vector<Port> outs;
    for (const auto& p : outs_) outs.push_back(remap(p));
    return Diagram(n_in_, n_out_, std::move(out), std::move(outs));
  }

 private:
  int n_in_, n_out_;
  std::vector<Vertex> vs_;
  std::vector<char> alive_;
  std::vector<Port> outs_;
  std::vector<std::vector<Port>> cons_;
};

bool is_mult(const Vertex& v) { return v.name == "m"; }
bool is_comult(const Vertex& v) { return v.name == "Delta"; }
bool is_cobr(const Vertex& v) { return v.name == "delta"; }
bool is_r(const Vertex& v) { return v.name == "r"; }

const Vertex& vtx(const Diagram& d, int v) { return d.vertices()[static_cast<std::size_t>(v)]; }

using Terms = std::vector<std::pair<Diagram, Rational>>;

// ---------------------------------------------------------------------------
// Lowering user generators to the flattened internal alphabet.

template <typename S>
std::vector<std::pair<Diagram, S>> lower(const Diagram& d, Variant variant) {
  Signature sig = Signature::for_variant(variant);
  std::vector<Vertex> vs = d.vertices();
  std::vector<int> tilde;
  for (std::size_t v = 0; v < vs.size(); ++v) {
    auto& x = vs[v];
    const Generator* g = sig.find(x.name);
    bool internal = (x.name == "m" && x.out == 1) || (x.name == "Delta" && x.in == 1);
    if (!internal && (!g || g->in != x.in || g->out != x.out))
      throw std::invalid_argument("generator '" + x.name + "' is not part of variant " + variant_name(variant));
    if (x.name == "eta") x.name = "m";
    if (x.name == "eps") x.name = "Delta";
    if (x.name == "deltat") tilde.push_back(static_cast<int>(v));
  }
  Diagram base(d.n_in(), d.n_out(), vs, d.outputs());
  std::vector<std::pair<Diagram, S>> out;
  if (tilde.empty()) {
    out.emplace_back(base, ScalarTraits<S>::one());
    return out;
  }
  if constexpr (std::is_same_v<S, Rational>) {
    throw std::invalid_argument("the qcoco variant needs hbar-series coefficients");
  } else {
    // deltat = hbar^{-1} (Delta - (21)∘Delta)
    std::size_t k = tilde.size();
    for (unsigned long mask = 0; mask < (1UL << k); ++mask) {
      Edit e(base);
      int sign = 1;
      for (std::size_t i = 0; i < k; ++i) {
        int v = tilde[i];
        e.at(v).name = "Delta";
        if ((mask >> i) & 1UL) {
          sign = -sign;
          Port t0 = e.target(v, 0), t1 = e.target(v, 1);
          e.feed(t0, Port{v, 1});
          e.feed(t1, Port{v, 0});
        }
      }
      out.emplace_back(e.finish(), HSeries::monomial(Rational(sign), -static_cast<int>(k)));
    }
    return out;
  }
}

// ---------------------------------------------------------------------------
// Redexes and rules.

enum class RuleKind { SpliceM, SpliceDelta, FlattenM, FlattenDelta, Compat, CompatCobr, CobrEps, RPrim };

struct Redex {
  RuleKind kind;
  int a = -1;  // primary vertex
  int b = -1;  // secondary vertex
  int slot = 0;
};

std::vector<Redex> find_redexes(const Diagram& d, Variant variant, bool algebra_only) {
  std::vector<Redex> out;
  auto cons = d.consumers();
  int nv = static_cast<int>(d.vertex_count());
  for (int v = 0; v < nv; ++v) {
    const Vertex& x = vtx(d, v);
    if (is_mult(x)) {
      if (x.in == 1) out.push_back({RuleKind::SpliceM, v});
      for (int s = 0; s < x.in; ++s) {
        const Port& p = x.sources[static_cast<std::size_t>(s)];
        if (p.vertex >= 0 && is_mult(vtx(d, p.vertex))) {
          out.push_back({RuleKind::FlattenM, v, p.vertex, s});
          break;
        }
      }
      continue;
    }
    if (algebra_only) continue;
    if (is_comult(x)) {
      if (x.out == 1) out.push_back({RuleKind::SpliceDelta, v});
      for (int s = 0; s < x.out; ++s) {
        const Port& t = cons[static_cast<std::size_t>(v)][static_cast<std::size_t>(s)];
        if (t.vertex >= 0 && is_comult(vtx(d, t.vertex))) {
          out.push_back({RuleKind::FlattenDelta, v, t.vertex, s});
          break;
        }
      }
    }
    if (is_cobr(x)) {
      for (int s = 0; s < 2; ++s) {
        const Port& t = cons[static_cast<std::size_t>(v)][static_cast<std::size_t>(s)];
        if (t.vertex >= 0 && is_comult(vtx(d, t.vertex)) && vtx(d, t.vertex).out == 0) {
          out.push_back({RuleKind::CobrEps, v});
          break;
        }
      }
    }
    if (is_comult(x) || is_cobr(x)) {
      const Port& src = x.sources[0];
      if (src.vertex >= 0) {
        const Vertex& up = vtx(d, src.vertex);
        if (is_mult(up)) out.push_back({is_cobr(x) ? RuleKind::CompatCobr : RuleKind::Compat, src.vertex, v});
        if (is_r(up) && is_comult(x) && variant == Variant::QT) out.push_back({RuleKind::RPrim, src.vertex, v, src.slot});
      }
    }
  }
  return out;
}

Terms apply_rule(const Diagram& d, const Redex& r) {
  Terms out;
  switch (r.kind) {
    case RuleKind::SpliceM:
    case RuleKind::SpliceDelta: {
      Edit e(d);
      e.feed(e.target(r.a, 0), vtx(d, r.a).sources[0]);
      e.kill(r.a);
      out.emplace_back(e.finish(), Rational(1));
      break;
    }
    case RuleKind::FlattenM: {
      Edit e(d);
      const Vertex& up = vtx(d, r.b);
      Vertex& v = e.at(r.a);
      std::vector<Port> src(v.sources.begin(), v.sources.begin() + r.slot);
      src.insert(src.end(), up.sources.begin(), up.sources.end());
      src.insert(src.end(), v.sources.begin() + r.slot + 1, v.sources.end());
      v.sources = std::move(src);
      v.in = static_cast<int>(v.sources.size());
      e.kill(r.b);
      out.emplace_back(e.finish(), Rational(1));
      break;
    }
    case RuleKind::FlattenDelta: {
      Edit e(d);
      int ku = vtx(d, r.a).out, kw = vtx(d, r.b).out;
      for (int t = r.slot + 1; t < ku; ++t) e.feed(e.target(r.a, t), Port{r.a, t + kw - 1});
      for (int t = 0; t < kw; ++t) e.feed(e.target(r.b, t), Port{r.a, r.slot + t});
      e.at(r.a).out = ku - 1 + kw;
      e.kill(r.b);
      out.emplace_back(e.finish(), Rational(1));
      break;
    }
    case RuleKind::Compat:
    case RuleKind::CompatCobr: {
      const Vertex& a = vtx(d, r.a);
      const Vertex& c = vtx(d, r.b);
      int l = a.in, k = c.out;
      bool cobr = r.kind == RuleKind::CompatCobr;
      // δ∘m^{(l)} = Σ_i (m^{(l)})^{⊗2} ∘ shuffle ∘ (Δ ⊗ ... ⊗ δ_i ⊗ ... ⊗ Δ); δ∘η = 0.
      int choices = cobr ? l : 1;
      for (int i0 = 0; i0 < choices; ++i0) {
        Edit e(d);
        std::vector<int> D;
        for (int i = 0; i < l; ++i) D.push_back(e.add(cobr && i == i0 ? "delta" : "Delta", 1, k, {a.sources[static_cast<std::size_t>(i)]}));
        for (int j = 0; j < k; ++j) {
          std::vector<Port> src;
          for (int i = 0; i < l; ++i) src.push_back(Port{D[static_cast<std::size_t>(i)], j});
          int M = e.add("m", l, 1, std::move(src));
          e.feed(e.target(r.b, j), Port{M, 0});
        }
        e.kill(r.a);
        e.kill(r.b);
        out.emplace_back(e.finish(), Rational(1));
      }
      break;
    }
    case RuleKind::CobrEps:
      break;  // (ε⊗id)∘δ = (id⊗ε)∘δ = 0
    case RuleKind::RPrim: {
      // (Δ^{(k)}⊗id)∘r = Σ_t r^{t,k+1} with η on the other legs
      int k = vtx(d, r.b).out;
      for (int t = 0; t < k; ++t) {
        Edit e(d);
        for (int u = 0; u < k; ++u) {
          if (u == t) {
            e.feed(e.target(r.b, u), Port{r.a, r.slot});
          } else {
            int eta = e.add("m", 0, 1, {});
            e.feed(e.target(r.b, u), Port{eta, 0});
          }
        }
        e.kill(r.b);
        out.emplace_back(e.finish(), Rational(1));
      }
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reading an irreducible diagram.

using PMono = std::vector<Word>;
using PPoly = std::map<PMono, Rational>;

PPoly p_product(const PPoly& a, const PPoly& b, bool commutative) {
  PPoly r;
  for (const auto& [x, c] : a)
    for (const auto& [y, d] : b) {
      PMono m = x;
      m.insert(m.end(), y.begin(), y.end());
      if (commutative) std::sort(m.begin(), m.end());
      r[m] += c * d;
    }
  std::erase_if(r, [](const auto& kv) { return is_zero(kv.second); });
  return r;
}

// Poisson bracket on S(FL) extended by the Leibniz rule.
PPoly p_bracket(const PPoly& a, const PPoly& b) {
  PPoly r;
  for (const auto& [x, c] : a)
    for (const auto& [y, d] : b)
      for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j) {
          LieElement br = lie_bracket(LieElement{{x[i], Rational(1)}}, LieElement{{y[j], Rational(1)}});
          PMono rest;
          for (std::size_t i2 = 0; i2 < x.size(); ++i2)
            if (i2 != i) rest.push_back(x[i2]);
          for (std::size_t j2 = 0; j2 < y.size(); ++j2)
            if (j2 != j) rest.push_back(y[j2]);
          for (const auto& [w, e] : br) {
            PMono m = rest;
            m.push_back(w);
            std::sort(m.begin(), m.end());
            r[m] += c * d * e;
          }
        }
  std::erase_if(r, [](const auto& kv) { return is_zero(kv.second); });
  return r;
}

[[noreturn]] void extract_fail(const std::string& why) { throw std::logic_error("normal form extraction: " + why); }

std::vector<std::pair<OrderedDiagram, Rational>> extract(const Diagram& d, Variant variant) {
  auto cons = d.consumers();
  std::map<Port, int> label;
  auto label_of = [&](const Port& p) {
    auto [it, inserted] = label.emplace(p, static_cast<int>(label.size()));
    if (!inserted) extract_fail("strand read twice");
    return it->second;
  };
  OrderedDiagram od;
  od.p = d.n_in();
  od.q = d.n_out();
  for (const auto& src : d.outputs()) {
    std::vector<int> list;
    if (src.vertex >= 0 && is_mult(vtx(d, src.vertex))) {
      for (const auto& s : vtx(d, src.vertex).sources) list.push_back(label_of(s));
    } else {
      list.push_back(label_of(src));
    }
    od.algebra.push_back(std::move(list));
  }
  // A port is a strand end iff it feeds a product or a global output.
  auto feeds_strand = [&](const Port& tgt) { return tgt.vertex < 0 || is_mult(vtx(d, tgt.vertex)); };
  bool commutative = variant != Variant::Plain && variant != Variant::QCoco;
  auto value = [&](auto&& self, const Port& src, const Port& tgt) -> PPoly {
    if (feeds_strand(tgt)) return PPoly{{PMono{Word{label.at(src)}}, Rational(1)}};
    int w = tgt.vertex;
    const Vertex& x = vtx(d, w);
    auto child = [&](int s) { return self(self, Port{w, s}, cons[static_cast<std::size_t>(w)][static_cast<std::size_t>(s)]); };
    if (is_comult(x)) {
      PPoly acc{{PMono{}, Rational(1)}};
      for (int s = 0; s < x.out; ++s) acc = p_product(acc, child(s), commutative);
      return acc;
    }
    if (is_cobr(x)) return p_bracket(child(0), child(1));
    extract_fail("unexpected vertex '" + x.name + "' on the coalgebra side");
  };
  std::vector<std::pair<OrderedDiagram, Rational>> acc{{od, Rational(1)}};
  for (int i = 0; i < d.n_in(); ++i) {
    PPoly v = value(value, Port{-1, i}, cons.back()[static_cast<std::size_t>(i)]);
    std::vector<std::pair<OrderedDiagram, Rational>> next;
    for (const auto& [o, c] : acc)
      for (const auto& [mono, e] : v) {
        OrderedDiagram o2 = o;
        o2.coalgebra.push_back(mono);
        next.emplace_back(std::move(o2), c * e);
      }
    acc = std::move(next);
  }
  std::vector<std::array<int, 2>> rp;
  for (std::size_t v = 0; v < d.vertex_count(); ++v)
    if (is_r(d.vertices()[v])) rp.push_back({label.at(Port{static_cast<int>(v), 0}), label.at(Port{static_cast<int>(v), 1})});
  std::sort(rp.begin(), rp.end());
  for (auto& [o, c] : acc) o.r_pairs = rp;
  if (static_cast<int>(label.size()) != od.strands()) extract_fail("strand count mismatch");
  return acc;
}

// Cutting a set of strands by η∘ε; returns false when the term vanishes.
bool cut_strands(const OrderedDiagram& od, unsigned long mask, OrderedDiagram& out) {
  int N = od.strands();
  std::vector<int> relabel(static_cast<std::size_t>(N), -1);
  int next = 0;
  for (int s = 0; s < N; ++s)
    if (!((mask >> s) & 1UL)) relabel[static_cast<std::size_t>(s)] = next++;
  out = OrderedDiagram{od.p, od.q, {}, {}, {}};
  for (const auto& blocks : od.coalgebra) {
    std::vector<Word> nb;
    for (const auto& w : blocks) {
      bool hit = false;
      for (int x : w) hit = hit || ((mask >> x) & 1UL);
      if (hit) {
        if (w.size() > 1) return false;  // ε kills cobrackets
        continue;                        // counit removes the leg
      }
      Word u;
      for (int x : w) u.push_back(relabel[static_cast<std::size_t>(x)]);
      nb.push_back(std::move(u));
    }
    out.coalgebra.push_back(std::move(nb));
  }
  for (const auto& list : od.algebra) {
    std::vector<int> nl;
    for (int x : list)
      if (!((mask >> x) & 1UL)) nl.push_back(relabel[static_cast<std::size_t>(x)]);
    out.algebra.push_back(std::move(nl));
  }
  for (const auto& r : od.r_pairs) {
    if (((mask >> r[0]) & 1UL) || ((mask >> r[1]) & 1UL)) return false;  // (ε⊗id)∘r = 0
    out.r_pairs.push_back({relabel[static_cast<std::size_t>(r[0])], relabel[static_cast<std::size_t>(r[1])]});
  }
  return true;
}

void check_normalizable(Variant v) {
  if (v == Variant::CYBA || v == Variant::QYBA || v == Variant::Custom)
    throw std::invalid_argument("variant " + variant_name(v) + " has no ordered normal form; use algebra_normal_form");
}

template <typename S>
std::map<CanonicalDiagram, S> rewrite_all(std::map<CanonicalDiagram, S> pending, Variant variant, bool algebra_only,
                                          const NormalizeOptions& opt, std::vector<std::pair<Diagram, S>>& irreducible) {
  std::mt19937_64 rng(opt.seed);
  std::size_t steps = 0;
  while (!pending.empty()) {
    auto it = pending.begin();
    Diagram d = it->first.diagram();
    S c = it->second;
    pending.erase(it);
    auto redexes = find_redexes(d, variant, algebra_only);
    if (redexes.empty()) {
      irreducible.emplace_back(std::move(d), c);
      continue;
    }
    if (++steps > opt.step_budget) throw std::runtime_error("normalize: step budget exhausted (rule orientation does not terminate?)");
    std::size_t pick = 0;
    if (opt.strategy == Strategy::Last) pick = redexes.size() - 1;
    if (opt.strategy == Strategy::Random) pick = std::uniform_int_distribution<std::size_t>(0, redexes.size() - 1)(rng);
    const Redex& rx = redexes[pick];
    bool compat = rx.kind == RuleKind::Compat || rx.kind == RuleKind::CompatCobr || rx.kind == RuleKind::RPrim;
    for (auto& [nd, f] : apply_rule(d, rx)) {
      if (opt.on_step) opt.on_step(d, nd, compat);
      S x = c;
      x *= f;
      auto key = canonical_form(nd);
      auto [jt, inserted] = pending.try_emplace(key, x);
      if (!inserted) {
        jt->second += x;
        if (propcalc::is_zero(jt->second)) pending.erase(jt);
      }
    }
  }
  return pending;
}

// Diagram builder for ordered normal forms.
struct Builder {
  std::vector<Vertex> vs;
  int add(const std::string& name, int in, int out, std::vector<Port> srcs) {
    vs.push_back(Vertex{name, in, out, std::move(srcs)});
    return static_cast<int>(vs.size()) - 1;
  }
  std::vector<Port> comult_comb(const Port& src, int k) {
    if (k == 0) {
      add("eps", 1, 0, {src});
      return {};
    }
    std::vector<Port> ports{src};
    for (int i = 1; i < k; ++i) {
      int v = add("Delta", 1, 2, {ports[0]});
      ports[0] = Port{v, 1};
      ports.insert(ports.begin(), Port{v, 0});
    }
    return ports;
  }
  Port mult_comb(const std::vector<Port>& srcs) {
    if (srcs.empty()) return Port{add("eta", 0, 1, {}), 0};
    Port acc = srcs[0];
    for (std::size_t i = 1; i < srcs.size(); ++i) acc = Port{add("m", 2, 1, {acc, srcs[i]}), 0};
    return acc;
  }
  void cobracket_tree(const Word& w, const Port& src, std::vector<Port>& strand) {
    if (w.size() == 1) {
      strand[static_cast<std::size_t>(w[0])] = src;
      return;
    }
    auto [u, v] = standard_factorization(w);
    int d = add("delta", 1, 2, {src});
    cobracket_tree(u, Port{d, 0}, strand);
    cobracket_tree(v, Port{d, 1}, strand);
  }
};

// Coalgebra operations and r's: fills the port of every strand.
std::vector<Port> build_strands(Builder& b, const OrderedDiagram& od) {
  std::vector<Port> strand(static_cast<std::size_t>(od.strands()));
  for (int i = 0; i < od.p; ++i) {
    const auto& blocks = od.coalgebra[static_cast<std::size_t>(i)];
    auto ports = b.comult_comb(Port{-1, i}, static_cast<int>(blocks.size()));
    for (std::size_t k = 0; k < blocks.size(); ++k) b.cobracket_tree(blocks[k], ports[k], strand);
  }
  for (const auto& r : od.r_pairs) {
    int v = b.add("r", 0, 2, {});
    strand[static_cast<std::size_t>(r[0])] = Port{v, 0};
    strand[static_cast<std::size_t>(r[1])] = Port{v, 1};
  }
  return strand;
}

std::vector<Port> build_products(Builder& b, const OrderedDiagram& od, const std::vector<Port>& strand) {
  std::vector<Port> outs;
  for (const auto& list : od.algebra) {
    std::vector<Port> srcs;
    for (int x : list) srcs.push_back(strand[static_cast<std::size_t>(x)]);
    outs.push_back(b.mult_comb(srcs));
  }
  return outs;
}

Diagram pure_diagram(const OrderedDiagram& od, unsigned long cut) {
  Builder b;
  std::vector<Port> strand = build_strands(b, od);
  for (int s = 0; s < od.strands(); ++s)
    if ((cut >> s) & 1UL) {
      b.add("eps", 1, 0, {strand[static_cast<std::size_t>(s)]});
      strand[static_cast<std::size_t>(s)] = Port{b.add("eta", 0, 1, {}), 0};
    }
  auto outs = build_products(b, od, strand);
  return Diagram(od.p, od.q, std::move(b.vs), std::move(outs));
}

Diagram binarize_products(const Diagram& d) {
  // rebuild flattened m^{(l)} as left combs; m^{(0)} becomes η
  Builder b;
  std::vector<int> idx(d.vertex_count(), -1);
  std::vector<Port> outs(static_cast<std::size_t>(d.n_out()));
  auto order = d.topological_order();
  std::map<int, Port> mult_out;
  auto remap = [&](const Port& p) -> Port {
    if (p.vertex < 0) return p;
    auto it = mult_out.find(p.vertex);
    if (it != mult_out.end()) return it->second;
    return Port{idx[static_cast<std::size_t>(p.vertex)], p.slot};
  };
  for (int v : order) {
    const Vertex& x = vtx(d, v);
    std::vector<Port> srcs;
    for (const auto& p : x.sources) srcs.push_back(remap(p));
    if (is_mult(x)) {
      mult_out[v] = b.mult_comb(srcs);
    } else {
      idx[static_cast<std::size_t>(v)] = b.add(x.name, x.in, x.out, std::move(srcs));
    }
  }
  for (int j = 0; j < d.n_out(); ++j) outs[static_cast<std::size_t>(j)] = remap(d.outputs()[static_cast<std::size_t>(j)]);
  return Diagram(d.n_in(), d.n_out(), std::move(b.vs), std::move(outs));
}

}  // namespace

template <typename S>
NormalForm<S> normalize(const LinComb<S>& x, Variant v, const NormalizeOptions& opt) {
  check_normalizable(v);
  std::map<CanonicalDiagram, S> pending;
  for (const auto& [d, c] : x.terms())
    for (auto& [ld, f] : lower<S>(d.diagram(), v)) {
      S y = c;
      y *= f;
      auto [it, inserted] = pending.try_emplace(canonical_form(ld), y);
      if (!inserted) it->second += y;
    }
  std::vector<std::pair<Diagram, S>> irreducible;
  rewrite_all(std::move(pending), v, false, opt, irreducible);
  NormalForm<S> nf;
  nf.p = x.n_in();
  nf.q = x.n_out();
  for (const auto& [d, c] : irreducible)
    for (const auto& [od, f] : extract(d, v)) {
      int N = od.strands();
      for (unsigned long mask = 0; mask < (1UL << N); ++mask) {
        OrderedDiagram cut;
        if (!cut_strands(od, mask, cut)) continue;
        S y = c;
        y *= f;
        nf.add(cut, y);
      }
    }
  return nf;
}

Diagram coalgebra_part(const OrderedDiagram& d) {
  Builder b;
  auto strand = build_strands(b, d);
  return Diagram(d.p, d.strands(), std::move(b.vs), std::move(strand));
}

Diagram algebra_part(const OrderedDiagram& d) {
  Builder b;
  std::vector<Port> strand;
  for (int s = 0; s < d.strands(); ++s) strand.push_back(Port{-1, s});
  auto outs = build_products(b, d, strand);
  return Diagram(d.strands(), d.q, std::move(b.vs), std::move(outs));
}

template <typename S>
LinComb<S> to_lincomb(const OrderedDiagram& d) {
  LinComb<S> out(d.p, d.q);
  int N = d.strands();
  for (unsigned long mask = 0; mask < (1UL << N); ++mask) {
    int sign = __builtin_popcountl(mask) % 2 ? -1 : 1;
    out.add(pure_diagram(d, mask), S(Rational(sign)));
  }
  return out;
}

template <typename S>
LinComb<S> to_lincomb(const NormalForm<S>& nf) {
  LinComb<S> out(nf.p, nf.q);
  for (const auto& [d, c] : nf.terms) {
    LinComb<S> t = to_lincomb<S>(d);
    t.scale(c);
    out += t;
  }
  return out;
}

template <typename S>
LinComb<S> algebra_normal_form(const LinComb<S>& x) {
  std::map<CanonicalDiagram, S> pending;
  for (const auto& [d, c] : x.terms()) {
    std::vector<Vertex> vs = d.diagram().vertices();
    for (auto& v : vs) {
      if (v.name == "eta") v.name = "m";
      if (v.name == "Delta" || v.name == "eps" || v.name == "delta" || v.name == "deltat")
        throw std::invalid_argument("algebra_normal_form: coproduct generators are not allowed");
    }
    Diagram ld(d.diagram().n_in(), d.diagram().n_out(), vs, d.diagram().outputs());
    auto [it, inserted] = pending.try_emplace(canonical_form(ld), c);
    if (!inserted) it->second += c;
  }
  std::vector<std::pair<Diagram, S>> irreducible;
  rewrite_all(std::move(pending), Variant::CYBA, true, NormalizeOptions{}, irreducible);
  LinComb<S> out(x.n_in(), x.n_out());
  for (const auto& [d, c] : irreducible) out.add(binarize_products(d), c);
  return out;
}

template <typename S>
bool check_relation(const LinComb<S>& lhs, const LinComb<S>& rhs, Variant v, const NormalizeOptions& opt) {
  if (lhs.n_in() != rhs.n_in() || lhs.n_out() != rhs.n_out()) throw std::invalid_argument("check_relation: bidegree mismatch");
  if (v == Variant::CYBA || v == Variant::QYBA) return algebra_normal_form(lhs) == algebra_normal_form(rhs);
  return normalize(lhs, v, opt) == normalize(rhs, v, opt);
}

std::size_t product_coproduct_paths(const Diagram& d) {
  // paths[v] = number of directed paths from a product (or r) vertex ending at v
  auto is_source = [](const Vertex& x) { return x.name == "m" || x.name == "eta" || x.name == "r" || x.name == "rho"; };
  auto is_coprod = [](const Vertex& x) { return x.name == "Delta" || x.name == "eps" || x.name == "delta" || x.name == "deltat"; };
  std::vector<std::size_t> paths(d.vertex_count(), 0);
  std::size_t n = 0;
  for (int v : d.topological_order()) {
    const Vertex& x = vtx(d, v);
    std::size_t in = 0;
    for (const auto& p : x.sources)
      if (p.vertex >= 0) {
        const Vertex& u = vtx(d, p.vertex);
        in += paths[static_cast<std::size_t>(p.vertex)] + (is_source(u) ? 1 : 0);
      }
    paths[static_cast<std::size_t>(v)] = in;
    if (is_coprod(x)) n += in;
  }
  return n;
}

// ---------------------------------------------------------------------------
// Bases and dimensions.

namespace {

void check_caps(int p, int q, int N, int cap) {
  if (p < 0 || q < 0 || N < 0) throw std::invalid_argument("negative size");
  if (p > cap || q > cap || N > cap) throw std::out_of_range("cap exceeded");
}

using CoalgebraElement = std::vector<std::vector<Word>>;

std::vector<CoalgebraElement> coalgebra_elements(int p, int N, Variant v, int k) {
  std::vector<CoalgebraElement> all;
  switch (v) {
    case Variant::Plain:
    case Variant::QCoco:
      for (const auto& sigma : all_permutations(N))
        for (const auto& comp : weak_compositions(N, p)) {
          CoalgebraElement c;
          int pos = 0;
          for (int len : comp) {
            std::vector<Word> blocks;
            for (int t = 0; t < len; ++t) blocks.push_back(Word{sigma(pos++)});
            c.push_back(std::move(blocks));
          }
          all.push_back(std::move(c));
        }
      break;
    case Variant::Coco: {
      if (p == 0 && N > 0) break;
      std::vector<int> assign(static_cast<std::size_t>(N), 0);
      auto rec = [&](auto&& self, int i) -> void {
        if (i == N) {
          CoalgebraElement c(static_cast<std::size_t>(p));
          for (int x = 0; x < N; ++x) c[static_cast<std::size_t>(assign[static_cast<std::size_t>(x)])].push_back(Word{x});
          all.push_back(std::move(c));
          return;
        }
        for (int s = 0; s < p; ++s) {
          assign[static_cast<std::size_t>(i)] = s;
          self(self, i + 1);
        }
      };
      rec(rec, 0);
      break;
    }
    case Variant::CP:
      for (const auto& part : set_partitions(N)) {
        if (k >= 0 && static_cast<int>(part.size()) != k) continue;
        // a Lyndon word and an input for every block
        std::vector<std::vector<std::pair<Word, int>>> acc{{}};
        for (const auto& b : part) {
          std::vector<std::vector<std::pair<Word, int>>> next;
          for (const auto& a : acc)
            for (const auto& w : multilinear_lyndon(b))
              for (int s = 0; s < p; ++s) {
                auto a2 = a;
                a2.emplace_back(w, s);
                next.push_back(std::move(a2));
              }
          acc = std::move(next);
        }
        for (const auto& a : acc) {
          CoalgebraElement c(static_cast<std::size_t>(p));
          for (const auto& [w, s] : a) c[static_cast<std::size_t>(s)].push_back(w);
          for (auto& blocks : c) std::sort(blocks.begin(), blocks.end());
          all.push_back(std::move(c));
        }
      }
      break;
    default:
      throw std::invalid_argument("unsupported variant for structure bases: " + variant_name(v));
  }
  return all;
}

long long coalgebra_dim(int p, int N, Variant v, int k) {
  switch (v) {
    case Variant::Plain:
    case Variant::QCoco:
      return factorial(N) * binomial(N + p - 1, p - 1) + (p == 0 && N == 0 ? 1 : 0);
    case Variant::Coco: {
      long long r = 1;
      for (int i = 0; i < N; ++i) r *= p;
      return r;
    }
    case Variant::CP: {
      // S^k(FL_N^{⊕p}) multilinear: Σ over set partitions of Π p·(|B|-1)!
      long long total = 0;
      for (const auto& part : set_partitions(N)) {
        if (k >= 0 && static_cast<int>(part.size()) != k) continue;
        long long prod = 1;
        for (const auto& b : part) prod *= p * factorial(static_cast<int>(b.size()) - 1);
        total += prod;
      }
      return total;
    }
    default:
      throw std::invalid_argument("unsupported variant for component dimensions: " + variant_name(v));
  }
}

long long algebra_dim(int N, int q) { return factorial(N) * binomial(N + q - 1, q - 1) + (q == 0 && N == 0 ? 1 : 0); }

}  // namespace

std::vector<OrderedDiagram> structure_basis(int p, int q, int N, Variant v, int k, int cap) {
  check_caps(p, q, N, cap);
  std::vector<OrderedDiagram> out;
  // the S_N action on Alg(N,q) is free: every orbit has one element whose
  // strands appear in order 0..N-1 along the outputs
  for (const auto& comp : weak_compositions(N, q)) {
    std::vector<std::vector<int>> alg;
    int pos = 0;
    for (int len : comp) {
      std::vector<int> list;
      for (int t = 0; t < len; ++t) list.push_back(pos++);
      alg.push_back(std::move(list));
    }
    for (auto& c : coalgebra_elements(p, N, v, k)) out.push_back(OrderedDiagram{p, q, std::move(c), alg, {}});
  }
  std::sort(out.begin(), out.end());
  return out;
}

long long component_dim(int p, int q, int N, Variant v, int k, int cap) {
  check_caps(p, q, N, cap);
  // rank of the idempotent (1/N!) Σ_σ σ⊗σ equals its trace (1/N!) Σ_σ χ_C(σ) χ_A(σ);
  // Alg(N,q) is a free permutation module, so only σ = id has χ_A ≠ 0
  long long chi_c = coalgebra_dim(p, N, v, k);
  long long chi_a = algebra_dim(N, q);
  return chi_c * chi_a / factorial(N);
}

std::vector<long long> graded_dims(int p, int q, int n_max, Variant v) {
  std::vector<long long> out;
  for (int N = 0; N <= n_max; ++N) out.push_back(component_dim(p, q, N, v));
  return out;
}

// ---------------------------------------------------------------------------
// Relation lists.

namespace {

LinComb<Rational> gen(const std::string& name, int in, int out) { return LinComb<Rational>(Diagram::generator(name, in, out)); }
LinComb<Rational> ident(int n) { return LinComb<Rational>(Diagram::identity(n)); }
LinComb<Rational> perm(const std::string& s) { return LinComb<Rational>(Diagram::perm(Permutation::parse(s))); }

LinComb<Rational> labeled(const std::vector<Diagram>& factors, const std::vector<std::vector<int>>& part) {
  return LinComb<Rational>(labeled_tensor(factors, part));
}

}  // namespace

LinComb<Rational> propic_cybe(const std::string& r_name) {
  Diagram r = Diagram::generator(r_name, 0, 2);
  auto mu = gen("m", 2, 1) - compose(gen("m", 2, 1), perm("(21)"));
  auto r13r24 = labeled({r, r}, {{1, 3}, {2, 4}});
  auto r12r34 = labeled({r, r}, {{1, 2}, {3, 4}});
  auto t1 = compose(tensor(tensor(mu, ident(1)), ident(1)), r13r24);
  auto t2 = compose(tensor(tensor(ident(1), mu), ident(1)), r12r34);
  auto t3 = compose(tensor(tensor(ident(1), ident(1)), mu), r13r24);
  return t1 + t2 + t3;
}

std::vector<Relation> relation_list(Variant v) {
  auto m = gen("m", 2, 1), D = gen("Delta", 1, 2), eta = gen("eta", 0, 1), eps = gen("eps", 1, 0);
  std::vector<Relation> rels;
  auto push = [&](const std::string& name, LinComb<Rational> a, LinComb<Rational> b) { rels.push_back({name, std::move(a), std::move(b)}); };
  if (v == Variant::CYBA || v == Variant::QYBA) {
    std::string r = v == Variant::CYBA ? "r" : "rho";
    push("associativity", compose(m, tensor(m, ident(1))), compose(m, tensor(ident(1), m)));
    push("left unit", compose(m, tensor(eta, ident(1))), ident(1));
    push("right unit", compose(m, tensor(ident(1), eta)), ident(1));
    push("CYBE", propic_cybe(r), LinComb<Rational>(0, 3));
    return rels;
  }
  push("associativity", compose(m, tensor(m, ident(1))), compose(m, tensor(ident(1), m)));
  push("left unit", compose(m, tensor(eta, ident(1))), ident(1));
  push("right unit", compose(m, tensor(ident(1), eta)), ident(1));
  push("coassociativity", compose(tensor(D, ident(1)), D), compose(tensor(ident(1), D), D));
  push("left counit", compose(tensor(eps, ident(1)), D), ident(1));
  push("right counit", compose(tensor(ident(1), eps), D), ident(1));
  push("compatibility", compose(D, m), compose(tensor(m, m), compose(perm("(1324)"), tensor(D, D))));
  push("unit coproduct", compose(D, eta), tensor(eta, eta));
  push("counit product", compose(eps, m), tensor(eps, eps));
  if (v == Variant::Coco || v == Variant::CP || v == Variant::QT) push("cocommutativity", D, compose(perm("(21)"), D));
  if (v == Variant::CP) {
    auto d = gen("delta", 1, 2);
    push("co-antisymmetry", d + compose(perm("(21)"), d), LinComb<Rational>(1, 2));
    auto dd = compose(tensor(d, ident(1)), d);
    push("co-Jacobi", dd + compose(perm("(231)"), dd) + compose(perm("(312)"), dd), LinComb<Rational>(1, 3));
    auto rhs = compose(ident(3) + perm("(213)"), compose(tensor(ident(1), d), D));
    push("co-Leibniz", compose(tensor(D, ident(1)), d), rhs);
    push("cobracket compatibility", compose(d, m),
         compose(tensor(m, m), compose(perm("(1324)"), tensor(d, D) + tensor(D, d))));
    push("cobracket of unit", compose(d, eta), LinComb<Rational>(0, 2));
    push("counit of cobracket", compose(tensor(eps, ident(1)), d), LinComb<Rational>(1, 1));
  }
  if (v == Variant::QT) {
    Diagram r = Diagram::generator("r", 0, 2), e = Diagram::generator("eta", 0, 1);
    auto rr = gen("r", 0, 2);
    push("left primitivity of r", compose(tensor(D, ident(1)), rr), labeled({r, e}, {{1, 3}, {2}}) + labeled({e, r}, {{1}, {2, 3}}));
    push("right primitivity of r", compose(tensor(ident(1), D), rr), labeled({r, e}, {{1, 3}, {2}}) + labeled({r, e}, {{1, 2}, {3}}));
  }
  return rels;
}

// ---------------------------------------------------------------------------
// JSON.

nlohmann::json to_json(const OrderedDiagram& d) {
  using nlohmann::json;
  json co = json::array();
  for (const auto& blocks : d.coalgebra) {
    json b = json::array();
    for (const auto& w : blocks) b.push_back(word_str(w));
    co.push_back(b);
  }
  json alg = json::array();
  for (const auto& list : d.algebra) {
    json l = json::array();
    for (int x : list) l.push_back(x + 1);
    alg.push_back(l);
  }
  json j{{"N", d.strands()}, {"coalgebra", co}, {"algebra", alg}};
  if (!d.r_pairs.empty()) {
    json r = json::array();
    for (const auto& pr : d.r_pairs) r.push_back(json::array({pr[0] + 1, pr[1] + 1}));
    j["r"] = r;
  }
  return j;
}

template <typename S>
nlohmann::json to_json(const NormalForm<S>& nf) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [d, c] : nf.terms) {
    auto j = to_json(d);
    j["coeff"] = to_string(c);
    arr.push_back(j);
  }
  return arr;
}

template struct NormalForm<Rational>;
template struct NormalForm<HSeries>;
template NormalForm<Rational> normalize(const LinComb<Rational>&, Variant, const NormalizeOptions&);
template NormalForm<HSeries> normalize(const LinComb<HSeries>&, Variant, const NormalizeOptions&);
template LinComb<Rational> to_lincomb(const OrderedDiagram&);
template LinComb<HSeries> to_lincomb(const OrderedDiagram&);
template LinComb<Rational> to_lincomb(const NormalForm<Rational>&);
template LinComb<HSeries> to_lincomb(const NormalForm<HSeries>&);
template LinComb<Rational> algebra_normal_form(const LinComb<Rational>&);
template LinComb<HSeries> algebra_normal_form(const LinComb<HSeries>&);
template bool check_relation(const LinComb<Rational>&, const LinComb<Rational>&, Variant, const NormalizeOptions&);
template bool check_relation(const LinComb<HSeries>&, const LinComb<HSeries>&, Variant, const NormalizeOptions&);
template nlohmann::json to_json(const NormalForm<Rational>&);
template nlohmann::json to_json(const NormalForm<HSeries>&);

}  // namespace propcalc

#include "propcalc/diagram.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

namespace propcalc {

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::Plain: return "bialg";
    case Variant::Coco: return "coco";
    case Variant::CP: return "cp";
    case Variant::QCoco: return "qcoco";
    case Variant::QT: return "qt";
    case Variant::CYBA: return "cyba";
    case Variant::QYBA: return "qyba";
    case Variant::Custom: return "custom";
  }
  return "custom";
}

Variant parse_variant(const std::string& name) {
  if (name == "bialg" || name == "plain") return Variant::Plain;
  if (name == "coco") return Variant::Coco;
  if (name == "cp") return Variant::CP;
  if (name == "qcoco") return Variant::QCoco;
  if (name == "qt") return Variant::QT;
  if (name == "cyba") return Variant::CYBA;
  if (name == "qyba") return Variant::QYBA;
  throw std::invalid_argument("unknown variant: " + name);
}

Signature::Signature(Variant v, std::vector<Generator> gens) : variant_(v), gens_(std::move(gens)) {
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    if (gens_[i].in < 0 || gens_[i].out < 0) throw std::invalid_argument("Signature: negative arity for " + gens_[i].name);
    for (std::size_t j = 0; j < i; ++j)
      if (gens_[i].name == gens_[j].name) throw std::invalid_argument("Signature: duplicate generator " + gens_[i].name);
  }
}

Signature Signature::for_variant(Variant v) {
  std::vector<Generator> bialg = {{"m", 2, 1}, {"Delta", 1, 2}, {"eta", 0, 1}, {"eps", 1, 0}};
  switch (v) {
    case Variant::Plain:
    case Variant::Coco: return Signature(v, bialg);
    case Variant::CP: bialg.push_back({"delta", 1, 2}); return Signature(v, bialg);
    case Variant::QCoco: bialg.push_back({"deltat", 1, 2}); return Signature(v, bialg);
    case Variant::QT: bialg.push_back({"r", 0, 2}); return Signature(v, bialg);
    case Variant::CYBA: return Signature(v, {{"m", 2, 1}, {"eta", 0, 1}, {"r", 0, 2}});
    case Variant::QYBA: return Signature(v, {{"m", 2, 1}, {"eta", 0, 1}, {"rho", 0, 2}});
    case Variant::Custom: return Signature(v, {});
  }
  return Signature(v, {});
}

const Generator* Signature::find(const std::string& name) const {
  for (const auto& g : gens_)
    if (g.name == name) return &g;
  return nullptr;
}

const Generator& Signature::at(const std::string& name) const {
  const Generator* g = find(name);
  if (!g) throw std::invalid_argument("unknown generator '" + name + "' for variant " + variant_name(variant_));
  return *g;
}

Diagram::Diagram(int n_in, int n_out, std::vector<Vertex> vertices, std::vector<Port> outputs)
    : n_in_(n_in), n_out_(n_out), vertices_(std::move(vertices)), outputs_(std::move(outputs)) {
  validate();
}

Diagram Diagram::identity(int n) { return perm(Permutation::identity(n)); }

Diagram Diagram::generator(const std::string& name, int in, int out) {
  Vertex v{name, in, out, {}};
  for (int i = 0; i < in; ++i) v.sources.push_back({-1, i});
  std::vector<Port> outs;
  for (int j = 0; j < out; ++j) outs.push_back({0, j});
  return Diagram(in, out, {v}, outs);
}

Diagram Diagram::perm(const Permutation& sigma) {
  int n = sigma.size();
  std::vector<Port> outs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) outs[static_cast<std::size_t>(sigma(i))] = {-1, i};
  return Diagram(n, n, {}, outs);
}

std::vector<std::vector<Port>> Diagram::consumers() const {
  std::vector<std::vector<Port>> c(vertices_.size() + 1);
  for (std::size_t v = 0; v < vertices_.size(); ++v) c[v].assign(static_cast<std::size_t>(vertices_[v].out), Port{-2, 0});
  c.back().assign(static_cast<std::size_t>(n_in_), Port{-2, 0});
  auto slot_of = [&](const Port& src) -> Port& {
    auto& row = src.vertex < 0 ? c.back() : c[static_cast<std::size_t>(src.vertex)];
    return row[static_cast<std::size_t>(src.slot)];
  };
  for (std::size_t v = 0; v < vertices_.size(); ++v)
    for (int s = 0; s < vertices_[v].in; ++s) slot_of(vertices_[v].sources[static_cast<std::size_t>(s)]) = {static_cast<int>(v), s};
  for (int j = 0; j < n_out_; ++j) slot_of(outputs_[static_cast<std::size_t>(j)]) = {-1, j};
  return c;
}

void Diagram::validate() const {
  if (n_in_ < 0 || n_out_ < 0) throw std::invalid_argument("Diagram: negative arity");
  if (static_cast<int>(outputs_.size()) != n_out_) throw std::invalid_argument("Diagram: output count mismatch");
  int nv = static_cast<int>(vertices_.size());
  std::vector<std::vector<int>> used(vertices_.size() + 1);
  for (int v = 0; v < nv; ++v) {
    const auto& x = vertices_[static_cast<std::size_t>(v)];
    if (x.in < 0 || x.out < 0 || static_cast<int>(x.sources.size()) != x.in)
      throw std::invalid_argument("Diagram: vertex " + std::to_string(v) + " has wrong in-slot count");
    used[static_cast<std::size_t>(v)].assign(static_cast<std::size_t>(x.out), 0);
  }
  used.back().assign(static_cast<std::size_t>(n_in_), 0);
  auto use = [&](const Port& p) {
    if (p.vertex < -1 || p.vertex >= nv) throw std::invalid_argument("Diagram: port refers to missing vertex");
    auto& row = p.vertex < 0 ? used.back() : used[static_cast<std::size_t>(p.vertex)];
    if (p.slot < 0 || p.slot >= static_cast<int>(row.size())) throw std::invalid_argument("Diagram: port slot out of range");
    if (row[static_cast<std::size_t>(p.slot)]++) throw std::invalid_argument("Diagram: port used twice");
  };
  for (const auto& x : vertices_)
    for (const auto& p : x.sources) use(p);
  for (const auto& p : outputs_) use(p);
  for (const auto& row : used)
    for (int u : row)
      if (u != 1) throw std::invalid_argument("Diagram: dangling port");
  topological_order();  // throws on cycles
}

std::vector<int> Diagram::topological_order() const {
  int nv = static_cast<int>(vertices_.size());
  std::vector<int> indeg(static_cast<std::size_t>(nv), 0);
  std::vector<std::vector<int>> succ(static_cast<std::size_t>(nv));
  for (int v = 0; v < nv; ++v)
    for (const auto& p : vertices_[static_cast<std::size_t>(v)].sources)
      if (p.vertex >= 0) {
        succ[static_cast<std::size_t>(p.vertex)].push_back(v);
        ++indeg[static_cast<std::size_t>(v)];
      }
  std::vector<int> order, stack;
  for (int v = nv - 1; v >= 0; --v)
    if (indeg[static_cast<std::size_t>(v)] == 0) stack.push_back(v);
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (int w : succ[static_cast<std::size_t>(v)])
      if (--indeg[static_cast<std::size_t>(w)] == 0) stack.push_back(w);
  }
  if (static_cast<int>(order.size()) != nv) throw std::invalid_argument("Diagram: oriented cycle");
  return order;
}

Diagram compose(const Diagram& g, const Diagram& f) {
  if (f.n_out() != g.n_in())
    throw std::invalid_argument("compose: arity mismatch (" + std::to_string(f.n_out()) + " outputs into " +
                                std::to_string(g.n_in()) + " inputs)");
  int shift = static_cast<int>(f.vertex_count());
  std::vector<Vertex> vs = f.vertices();
  auto remap = [&](const Port& p) -> Port { return p.vertex < 0 ? f.outputs()[static_cast<std::size_t>(p.slot)] : Port{p.vertex + shift, p.slot}; };
  for (Vertex v : g.vertices()) {
    for (auto& p : v.sources) p = remap(p);
    vs.push_back(std::move(v));
  }
  std::vector<Port> outs;
  for (const auto& p : g.outputs()) outs.push_back(remap(p));
  return Diagram(f.n_in(), g.n_out(), std::move(vs), std::move(outs));
}

Diagram tensor(const Diagram& a, const Diagram& b) {
  int shift = static_cast<int>(a.vertex_count());
  std::vector<Vertex> vs = a.vertices();
  auto remap = [&](const Port& p) -> Port { return p.vertex < 0 ? Port{-1, p.slot + a.n_in()} : Port{p.vertex + shift, p.slot}; };
  for (Vertex v : b.vertices()) {
    for (auto& p : v.sources) p = remap(p);
    vs.push_back(std::move(v));
  }
  std::vector<Port> outs = a.outputs();
  for (const auto& p : b.outputs()) outs.push_back(remap(p));
  return Diagram(a.n_in() + b.n_in(), a.n_out() + b.n_out(), std::move(vs), std::move(outs));
}

Diagram tensor_power(const Diagram& a, int k) {
  Diagram r = Diagram::identity(0);
  for (int i = 0; i < k; ++i) r = tensor(r, a);
  return r;
}

Diagram labeled_tensor(const std::vector<Diagram>& factors, const std::vector<std::vector<int>>& partition) {
  std::vector<int> sizes;
  Diagram prod = Diagram::identity(0);
  for (const auto& f : factors) {
    if (f.n_in() != 0) throw std::invalid_argument("labeled_tensor: factors must have no inputs");
    sizes.push_back(f.n_out());
    prod = tensor(prod, f);
  }
  return compose(Diagram::perm(block_perm(sizes, partition)), prod);
}

namespace {

// Relabels the vertices of `d` listed in `order` (a permutation of a subset),
// producing vertex records whose sources refer to the new indices.
std::vector<Vertex> relabel(const Diagram& d, const std::vector<int>& order, std::vector<int>& new_index, int offset) {
  for (std::size_t i = 0; i < order.size(); ++i) new_index[static_cast<std::size_t>(order[i])] = offset + static_cast<int>(i);
  std::vector<Vertex> out;
  for (int v : order) {
    Vertex x = d.vertices()[static_cast<std::size_t>(v)];
    for (auto& p : x.sources)
      if (p.vertex >= 0) p.vertex = new_index[static_cast<std::size_t>(p.vertex)];
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace

CanonicalDiagram::CanonicalDiagram(const Diagram& d) {
  const auto cons = d.consumers();
  std::size_t nv = d.vertex_count();
  std::vector<char> seen(nv, 0);
  std::vector<int> order;

  std::function<void(int, std::vector<int>&, std::vector<char>&)> visit = [&](int v, std::vector<int>& ord, std::vector<char>& mark) {
    if (mark[static_cast<std::size_t>(v)]) return;
    mark[static_cast<std::size_t>(v)] = 1;
    ord.push_back(v);
    for (const auto& p : d.vertices()[static_cast<std::size_t>(v)].sources)
      if (p.vertex >= 0) visit(p.vertex, ord, mark);
    for (const auto& c : cons[static_cast<std::size_t>(v)])
      if (c.vertex >= 0) visit(c.vertex, ord, mark);
  };

  for (const auto& p : d.outputs())
    if (p.vertex >= 0) visit(p.vertex, order, seen);
  for (const auto& c : cons.back())
    if (c.vertex >= 0) visit(c.vertex, order, seen);

  std::vector<int> new_index(nv, -1);
  std::vector<Vertex> vs = relabel(d, order, new_index, 0);

  // Closed components: each is encoded by its smallest traversal over all start vertices.
  std::vector<std::vector<Vertex>> closed;
  for (std::size_t v = 0; v < nv; ++v) {
    if (seen[v]) continue;
    std::vector<int> comp;
    std::vector<char> mark = seen;
    visit(static_cast<int>(v), comp, mark);
    std::vector<Vertex> best;
    bool have = false;
    for (int start : comp) {
      std::vector<int> ord;
      std::vector<char> m2 = seen;
      visit(start, ord, m2);
      std::vector<int> idx(nv, -1);
      auto enc = relabel(d, ord, idx, 0);
      if (!have || enc < best) {
        best = std::move(enc);
        have = true;
      }
    }
    for (int x : comp) seen[static_cast<std::size_t>(x)] = 1;
    closed.push_back(std::move(best));
  }
  std::sort(closed.begin(), closed.end());
  for (auto& comp : closed) {
    int offset = static_cast<int>(vs.size());
    for (auto& x : comp) {
      for (auto& p : x.sources)
        if (p.vertex >= 0) p.vertex += offset;
      vs.push_back(std::move(x));
    }
  }

  std::vector<Port> outs = d.outputs();
  for (auto& p : outs)
    if (p.vertex >= 0) p.vertex = new_index[static_cast<std::size_t>(p.vertex)];
  d_ = Diagram(d.n_in(), d.n_out(), std::move(vs), std::move(outs));
}

CanonicalDiagram canonical_form(const Diagram& d) { return CanonicalDiagram(d); }

bool equals(const Diagram& a, const Diagram& b) { return canonical_form(a) == canonical_form(b); }

long long operad_component_dim(const std::vector<long long>& operad_dims, int n, int m, int cap) {
  if (n > cap || m > cap) throw std::out_of_range("operad_component_dim: cap exceeded");
  if (n < m) return 0;
  long long total = 0;
  for (const auto& part : set_partitions(n, m)) {
    long long prod = 1;
    for (const auto& b : part) {
      std::size_t k = b.size();
      prod *= k < operad_dims.size() ? operad_dims[k] : 0;
    }
    total += prod;
  }
  return total;
}

nlohmann::json to_json(const Diagram& d) {
  using nlohmann::json;
  auto src = [](const Port& p) -> std::pair<json, int> {
    if (p.vertex < 0) return {json("in:" + std::to_string(p.slot)), 0};
    return {json(p.vertex), p.slot};
  };
  json names = json::array();
  for (const auto& v : d.vertices()) names.push_back(v.name);
  json edges = json::array();
  for (std::size_t v = 0; v < d.vertex_count(); ++v) {
    const auto& x = d.vertices()[v];
    for (int s = 0; s < x.in; ++s) {
      auto [sj, ss] = src(x.sources[static_cast<std::size_t>(s)]);
      edges.push_back(json::array({sj, ss, static_cast<int>(v), s}));
    }
  }
  for (int j = 0; j < d.n_out(); ++j) {
    auto [sj, ss] = src(d.outputs()[static_cast<std::size_t>(j)]);
    edges.push_back(json::array({sj, ss, "out:" + std::to_string(j), 0}));
  }
  return json{{"in", d.n_in()}, {"out", d.n_out()}, {"vertices", names}, {"edges", edges}};
}

namespace {

// Returns (vertex, slot) with vertex = -1 for "in:i"/"out:j" strings.
std::pair<int, int> parse_port(const nlohmann::json& p, int slot, const char* prefix) {
  if (p.is_number_integer()) return {p.get<int>(), slot};
  if (p.is_string()) {
    std::string s = p.get<std::string>();
    std::string pre = std::string(prefix) + ":";
    if (s.rfind(pre, 0) == 0) return {-1, std::stoi(s.substr(pre.size()))};
  }
  throw std::invalid_argument("diagram JSON: bad port " + p.dump());
}

}  // namespace

Diagram diagram_from_json(const nlohmann::json& j) {
  int n_in = j.at("in").get<int>();
  int n_out = j.at("out").get<int>();
  const auto& names = j.at("vertices");
  std::size_t nv = names.size();
  std::vector<std::map<int, Port>> ins(nv);
  std::vector<int> outs_count(nv, 0);
  std::map<int, Port> glob;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 4) throw std::invalid_argument("diagram JSON: edge must have 4 entries");
    auto [sv, ss] = parse_port(e[0], e[1].get<int>(), "in");
    auto [dv, ds] = parse_port(e[2], e[3].get<int>(), "out");
    if (sv >= static_cast<int>(nv) || dv >= static_cast<int>(nv)) throw std::invalid_argument("diagram JSON: vertex index out of range");
    Port src{sv, ss};
    if (sv >= 0) outs_count[static_cast<std::size_t>(sv)] = std::max(outs_count[static_cast<std::size_t>(sv)], ss + 1);
    auto& target = dv < 0 ? glob : ins[static_cast<std::size_t>(dv)];
    if (!target.emplace(ds, src).second) throw std::invalid_argument("diagram JSON: slot fed twice");
  }
  std::vector<Vertex> vs;
  for (std::size_t v = 0; v < nv; ++v) {
    Vertex x;
    x.name = names[v].get<std::string>();
    x.in = static_cast<int>(ins[v].size());
    x.out = outs_count[v];
    int expect = 0;
    for (const auto& [slot, src] : ins[v]) {
      if (slot != expect++) throw std::invalid_argument("diagram JSON: in-slots not contiguous");
      x.sources.push_back(src);
    }
    vs.push_back(std::move(x));
  }
  std::vector<Port> outs;
  int expect = 0;
  for (const auto& [slot, src] : glob) {
    if (slot != expect++) throw std::invalid_argument("diagram JSON: outputs not contiguous");
    outs.push_back(src);
  }
  return Diagram(n_in, n_out, std::move(vs), std::move(outs));
}

Diagram random_diagram(std::mt19937_64& rng, const std::vector<Generator>& gens, const RandomDiagramOptions& opt) {
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  Diagram d = Diagram::identity(opt.n_in);
  int width = opt.n_in;
  int target = uniform(0, opt.max_vertices);
  for (int placed = 0; placed < target;) {
    if (opt.allow_perms && width > 1 && uniform(0, 3) == 0) {
      std::vector<int> img(static_cast<std::size_t>(width));
      for (int i = 0; i < width; ++i) img[static_cast<std::size_t>(i)] = i;
      std::shuffle(img.begin(), img.end(), rng);
      d = compose(Diagram::perm(Permutation(img)), d);
      continue;
    }
    std::vector<const Generator*> fit;
    for (const auto& g : gens)
      if (g.in <= width && width - g.in + g.out <= opt.max_width) fit.push_back(&g);
    if (fit.empty()) break;
    const Generator& g = *fit[static_cast<std::size_t>(uniform(0, static_cast<int>(fit.size()) - 1))];
    int a = uniform(0, width - g.in);
    Diagram layer = tensor(tensor(Diagram::identity(a), Diagram::generator(g)), Diagram::identity(width - a - g.in));
    d = compose(layer, d);
    width = width - g.in + g.out;
    ++placed;
  }
  return d;
}

}  // namespace propcalc

#pragma once

// Free props: diagrams are port-ordered acyclic graphs.
//
// Every wire has a unique source (a global input or a vertex out-slot) and a
// unique target (a global output or a vertex in-slot). We store, for each
// vertex in-slot and each global output, the port it is fed by.

#include <compare>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "propcalc/permutation.hpp"

namespace propcalc {

enum class Variant { Plain, Coco, CP, QCoco, QT, CYBA, QYBA, Custom };

std::string variant_name(Variant v);
Variant parse_variant(const std::string& name);  // bialg|plain|coco|cp|qcoco|qt|cyba|qyba

struct Generator {
  std::string name;
  int in = 0;
  int out = 0;
};

/// Named generators with arities. Names are unique.
class Signature {
 public:
  Signature() = default;
  Signature(Variant v, std::vector<Generator> gens);
  static Signature for_variant(Variant v);

  Variant variant() const { return variant_; }
  const std::vector<Generator>& generators() const { return gens_; }
  const Generator* find(const std::string& name) const;
  const Generator& at(const std::string& name) const;  // throws on unknown name

 private:
  Variant variant_ = Variant::Custom;
  std::vector<Generator> gens_;
};

/// Source of a wire: `vertex == -1` means global input `slot`.
struct Port {
  int vertex = -1;
  int slot = 0;
  auto operator<=>(const Port&) const = default;
};

struct Vertex {
  std::string name;
  int in = 0;
  int out = 0;
  std::vector<Port> sources;  // one per in-slot
  auto operator<=>(const Vertex&) const = default;
};

class Diagram {
 public:
  Diagram() = default;
  Diagram(int n_in, int n_out, std::vector<Vertex> vertices, std::vector<Port> outputs);

  static Diagram identity(int n);
  static Diagram generator(const std::string& name, int in, int out);
  static Diagram generator(const Generator& g) { return generator(g.name, g.in, g.out); }
  /// Wires input i to output σ(i).
  static Diagram perm(const Permutation& sigma);

  int n_in() const { return n_in_; }
  int n_out() const { return n_out_; }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Port>& outputs() const { return outputs_; }
  std::size_t vertex_count() const { return vertices_.size(); }

  /// Checks arities, that every port is used exactly once, and acyclicity.
  void validate() const;
  /// Vertex indices such that every vertex comes after the vertices feeding it.
  std::vector<int> topological_order() const;

  /// Where each port goes: for vertex v out-slot s, or global input i (v = -1).
  /// Encoded as a Port whose vertex == -1 means global output `slot`.
  std::vector<std::vector<Port>> consumers() const;  // indexed by vertex, last entry = global inputs

  auto operator<=>(const Diagram&) const = default;

 private:
  friend class DiagramBuilder;
  int n_in_ = 0;
  int n_out_ = 0;
  std::vector<Vertex> vertices_;
  std::vector<Port> outputs_;
};

/// g∘f: f first. Requires f.n_out() == g.n_in().
Diagram compose(const Diagram& g, const Diagram& f);
Diagram tensor(const Diagram& a, const Diagram& b);
Diagram tensor_power(const Diagram& a, int k);

/// x_1^{I_1}⋯x_p^{I_p} = σ∘(x_1⊗⋯⊗x_p) for factors with no inputs.
Diagram labeled_tensor(const std::vector<Diagram>& factors, const std::vector<std::vector<int>>& partition);

/// Diagram relabeled by the canonical traversal; structural equality is prop equality.
class CanonicalDiagram {
 public:
  CanonicalDiagram() = default;
  explicit CanonicalDiagram(const Diagram& d);
  const Diagram& diagram() const { return d_; }
  auto operator<=>(const CanonicalDiagram&) const = default;

 private:
  Diagram d_;
};

CanonicalDiagram canonical_form(const Diagram& d);
bool equals(const Diagram& a, const Diagram& b);

/// Σ over unordered m-part set partitions of [1,n] of Π dim O(|I_j|).
long long operad_component_dim(const std::vector<long long>& operad_dims, int n, int m, int cap = 12);

nlohmann::json to_json(const Diagram& d);
Diagram diagram_from_json(const nlohmann::json& j);

/// Random diagram built from layers id^a ⊗ g ⊗ id^b and random permutations.
struct RandomDiagramOptions {
  int n_in = 1;
  int max_vertices = 6;
  int max_width = 5;
  bool allow_perms = true;
};
Diagram random_diagram(std::mt19937_64& rng, const std::vector<Generator>& gens, const RandomDiagramOptions& opt);

}  // namespace propcalc

#pragma once

// Normal forms in the bialgebra-family props.
//
// Products are flattened into multi-ary m (m with 0 inputs is η) and
// coproducts into multi-ary Δ (Δ with 0 outputs is ε). The remaining rules
// push coproducts toward the inputs. An irreducible diagram is read off as
// coalgebra data on the inputs, N strands, and an ordered product on each
// output; the result is expressed in the basis ι_1(y)∘(id−η∘ε)^{⊗N}∘ι_2(x).

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "propcalc/diagram.hpp"
#include "propcalc/lincomb.hpp"
#include "propcalc/word_tensor.hpp"

namespace propcalc {

/// j_{p,q}(x⊗y) with strands labeled 0..N-1 in order of appearance on the outputs.
///
/// coalgebra[i] lists the blocks read on input i. Blocks are single strands
/// except in the co-Poisson variant, where a block is a Lyndon word standing
/// for the iterated cobracket of its standard bracketing. In cocommutative
/// variants the blocks of an input are sorted.
struct OrderedDiagram {
  int p = 0;
  int q = 0;
  std::vector<std::vector<Word>> coalgebra;
  std::vector<std::vector<int>> algebra;
  std::vector<std::array<int, 2>> r_pairs;

  int strands() const;
  /// Number of coalgebra blocks (the symmetric degree in the co-Poisson case).
  int blocks() const;
  std::string str() const;
  auto operator<=>(const OrderedDiagram&) const = default;
};

template <typename S>
struct NormalForm {
  int p = 0;
  int q = 0;
  std::map<OrderedDiagram, S> terms;

  void add(const OrderedDiagram& d, const S& c);
  bool is_zero() const { return terms.empty(); }
  friend bool operator==(const NormalForm& a, const NormalForm& b) { return a.p == b.p && a.q == b.q && a.terms == b.terms; }
};

enum class Strategy { First, Last, Random };

struct NormalizeOptions {
  Strategy strategy = Strategy::First;
  std::uint64_t seed = 0;
  std::size_t step_budget = 500000;
  /// Called after each rule application with the redex diagram, one result term
  /// and whether the rule moved a coproduct past a product (or past r).
  std::function<void(const Diagram&, const Diagram&, bool)> on_step;
};

/// Variants with ordered normal forms: Plain, Coco, CP, QCoco (HSeries only), QT.
template <typename S>
NormalForm<S> normalize(const LinComb<S>& x, Variant v, const NormalizeOptions& opt = {});

/// The free-prop element ι_1(y)∘(id−η∘ε)^{⊗N}∘ι_2(x).
template <typename S>
LinComb<S> to_lincomb(const OrderedDiagram& d);
template <typename S>
LinComb<S> to_lincomb(const NormalForm<S>& nf);
/// ι_2(x) as a (p, N) diagram (strand i on output i) and ι_1(y) as an (N, q) diagram.
Diagram coalgebra_part(const OrderedDiagram& d);
Diagram algebra_part(const OrderedDiagram& d);

/// Normal forms modulo associativity and unit only (props generated by m, η and r).
template <typename S>
LinComb<S> algebra_normal_form(const LinComb<S>& x);

/// True iff both sides have the same normal form in the variant.
template <typename S>
bool check_relation(const LinComb<S>& lhs, const LinComb<S>& rhs, Variant v, const NormalizeOptions& opt = {});

/// Basis of the N-th summand (orbit representatives). For the co-Poisson
/// variant, `k` >= 0 restricts to k coalgebra blocks.
std::vector<OrderedDiagram> structure_basis(int p, int q, int N, Variant v, int k = -1, int cap = 7);
/// Dimension of the N-th summand as the rank (= trace) of the S_N-averaging idempotent.
long long component_dim(int p, int q, int N, Variant v, int k = -1, int cap = 7);
std::vector<long long> graded_dims(int p, int q, int n_max, Variant v);

/// Number of directed paths from a product, unit or r vertex to a coproduct-type vertex.
/// Compatibility and r-primitivity rewrites lower it by exactly one per result term;
/// the other rules never raise it and remove a vertex.
std::size_t product_coproduct_paths(const Diagram& d);

/// Relation lists as pairs (lhs, rhs) of bidegree-matched elements.
struct Relation {
  std::string name;
  LinComb<Rational> lhs, rhs;
};
std::vector<Relation> relation_list(Variant v);
/// (μ⊗id⊗id)(r^{13}r^{24}) + (id⊗μ⊗id)(r^{12}r^{34}) + (id⊗id⊗μ)(r^{13}r^{24}), μ = m − m∘(21).
LinComb<Rational> propic_cybe(const std::string& r_name = "r");

nlohmann::json to_json(const OrderedDiagram& d);
template <typename S>
nlohmann::json to_json(const NormalForm<S>& nf);

}  // namespace propcalc

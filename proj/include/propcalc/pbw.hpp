#pragma once

// U(FL_N) = T(V) and its tensor powers.
//
// Elements are stored in word coordinates (a WordTensor); PBW coordinates are
// computed on demand. A PBW monomial lists Lyndon words per slot in weakly
// decreasing order for the order "shorter first, then lexicographic", i.e.
// longer and lexicographically larger factors come first. Each Lyndon word w
// stands for its standard bracketing P_w.

#include <map>
#include <vector>

#include <json.hpp>

#include "propcalc/freelie.hpp"
#include "propcalc/word_tensor.hpp"

namespace propcalc {

using PBWMonomial = std::vector<std::vector<Word>>;  // one factor list per slot
template <typename S>
using PBWCoords = std::map<PBWMonomial, S>;

/// True iff l1 precedes l2 in the factor order (shorter first, then lexicographic).
bool pbw_less(const Word& a, const Word& b);
bool is_pbw_monomial(const PBWMonomial& m);
/// Chen-Fox-Lyndon factorization w = l1 l2 ... lk with l1 >= ... >= lk lexicographically.
std::vector<Word> lyndon_factorization(const Word& w);
/// P_{l1}⋯P_{lk} rewritten as a combination of ordered monomials (one slot).
const std::map<std::vector<Word>, Rational>& straighten(const std::vector<Word>& factors);

template <typename S>
PBWCoords<S> to_pbw(const WordTensor<S>& a);
template <typename S>
WordTensor<S> from_pbw(const PBWCoords<S>& c, int slots);

/// Smallest k with a in (U^{⊗n})^{≤k}; -1 for zero.
template <typename S>
int pbw_filtration_degree(const WordTensor<S>& a);

template <typename S>
WordTensor<S> ue_product(const WordTensor<S>& a, const WordTensor<S>& b);
/// Δ on U^{⊗n}: result has 2n slots, left legs first.
template <typename S>
WordTensor<S> ue_coproduct(const WordTensor<S>& a);
template <typename S>
S counit(const WordTensor<S>& a);

/// (id−η∘ε)^{⊗k}∘Δ^{(k)}(a) for a single-slot a; k = 0 gives ε(a) in zero slots.
template <typename S>
WordTensor<S> reduced_coproduct_power(const WordTensor<S>& a, int k);
/// m^{(k)}: concatenates the k slots.
template <typename S>
WordTensor<S> iterated_product(const WordTensor<S>& a);

/// Σ_n (−1)^n m^{(n)}∘(id−η∘ε)^{⊗n}∘Δ^{(n)}, applied slot-wise.
template <typename S>
WordTensor<S> antipode(const WordTensor<S>& a, int degree_cap = 12);

/// Taylor coefficients of (ln(1+u))^m / m! up to u^{n_max}.
std::vector<Rational> eulerian_coeffs(int m, int n_max);
/// p_m(a) = Σ_n λ_n^{(m)} m^{(n)}∘(id−η∘ε)^{⊗n}∘Δ^{(n)}(a), single slot.
template <typename S>
WordTensor<S> eulerian_apply(int m, const WordTensor<S>& a, int degree_cap = 12);

/// Element of S^k(FL_N): sorted lists of Lyndon words.
template <typename S>
using SymElement = std::map<std::vector<Word>, S>;
/// Components indexed by symmetric degree.
template <typename S>
using SymDecomposition = std::map<int, SymElement<S>>;

template <typename S>
WordTensor<S> sym_map(const SymDecomposition<S>& d);
/// Via the Eulerian idempotents: component m is read off p_m(a).
template <typename S>
SymDecomposition<S> sym_inverse(const WordTensor<S>& a);
/// Independent route: peel off the symmetrization of the top PBW layer repeatedly.
template <typename S>
SymDecomposition<S> sym_decompose(const WordTensor<S>& a);

/// S^r part of Sym^{-1}(Sym(x_1⋯x_p)·Sym(y_1⋯y_q)), x_i = letter i-1, y_j = letter p+j-1.
SymElement<Rational> mm_structure_constant(int p, int q, int r, int cap = 6);

/// Membership of a in Σ_{k≥0} ħ^{k−N}(U^{⊗n})^{≤k}: every coefficient of ħ^e has filtration degree ≤ e+N.
bool qcomm_membership(const WordTensor<HSeries>& a, int N);

template <typename S>
std::string pbw_str(const PBWCoords<S>& c);
/// [{"monomial": [["12","1"], ...], "coeff": "1/2"}, ...]
template <typename S>
nlohmann::json to_json(const PBWCoords<S>& c);

}  // namespace propcalc

#pragma once

// Free Lie algebras in the Lyndon basis, embedded in the free associative
// algebra on the same letters. Letters are 0-based internally and printed
// 1-based ("12" is the word x1 x2).

#include <map>
#include <string>
#include <vector>

#include "propcalc/linalg.hpp"
#include "propcalc/word_tensor.hpp"

namespace propcalc {

/// Element of the free associative algebra in the word basis.
using WordPoly = std::map<Word, Rational>;
/// Element of FL_N: coordinates in the Lyndon basis.
using LieElement = std::map<Word, Rational>;

std::string word_str(const Word& w);  // 1-based, e.g. "12"; empty word prints "1"
Word parse_word(const std::string& s);

bool is_lyndon(const Word& w);
/// Lyndon words with letter counts given by `multidegree` (letters 0..size-1).
std::vector<Word> lyndon_basis(const std::vector<int>& multidegree, int cap = 12);
/// Lyndon words using each of the given distinct letters exactly once.
std::vector<Word> multilinear_lyndon(const std::vector<int>& letters);
/// w = uv with v the longest proper Lyndon suffix.
std::pair<Word, Word> standard_factorization(const Word& w);

WordPoly word_product(const WordPoly& a, const WordPoly& b);
WordPoly commutator(const WordPoly& a, const WordPoly& b);
void add_to(WordPoly& a, const WordPoly& b, const Rational& c = Rational(1));

/// Standard bracketing P_w of a Lyndon word, expanded into words.
const WordPoly& lyndon_expansion(const Word& w);

LieElement lie_letter(int i);
LieElement lie_bracket(const LieElement& a, const LieElement& b);
WordPoly expand_to_assoc(const LieElement& a);
/// Inverse of expand_to_assoc; throws std::invalid_argument if `f` is not a Lie element.
LieElement lie_from_assoc(WordPoly f);
/// Renames letter i to map[i].
LieElement relabel_lie(const LieElement& a, const std::vector<int>& map);
WordPoly relabel(const WordPoly& a, const std::vector<int>& map);
std::string lie_str(const LieElement& a);

/// Multilinear dimensions of the classical props.
enum class ClassicalSpace { Alg, AlgComm, Poisson, LA };
ClassicalSpace parse_classical_space(const std::string& s);
long long classical_dim(ClassicalSpace space, int N, int n, int cap = 10);

/// Basis element of (FL_N^{⊗p})_mult: one Lyndon word per slot, letters partitioning 0..N-1.
using LieTensorKey = std::vector<Word>;
std::vector<LieTensorKey> lie_tensor_basis(int N, int slots);

/// dim (FL_N^{⊗p} ⊗ FL_N^{⊗q})_{S_N} on multilinear parts, by symmetrizer rank.
long long lba_component_dim(int p, int q, int N, int cap = 5);
/// Same number from canonical forms of δ-before-μ diagrams modulo antisymmetry,
/// Jacobi and co-Jacobi.
long long lba_component_dim_enumerated(int p, int q, int N, int cap = 5);
/// Orbit representatives: pairs of basis keys whose averages form a basis of the coinvariants.
std::vector<std::pair<LieTensorKey, LieTensorKey>> lba_component_basis(int p, int q, int N, int cap = 5);

}  // namespace propcalc

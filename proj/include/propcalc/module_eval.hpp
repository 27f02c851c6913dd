#pragma once

// Prop modules: evaluating diagrams as linear maps on tensor powers of a
// concrete algebra whose elements are linear combinations of words.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "propcalc/lincomb.hpp"
#include "propcalc/rewrite.hpp"
#include "propcalc/word_tensor.hpp"

namespace propcalc {

template <typename S>
class Module {
 public:
  virtual ~Module() = default;
  /// Image of a tuple of basis words under the generator `name` of arity (in,out).
  virtual WordTensor<S> apply(const std::string& name, int in, int out, const WordTuple& args) const = 0;
};

/// A finite-dimensional coalgebra on basis letters 0..dim-1 (optionally with a cobracket).
struct FiniteCoalgebra {
  int dim = 0;
  std::vector<std::vector<std::tuple<int, int, Rational>>> coproduct;  // Δ(c) = Σ coef a⊗b
  std::vector<Rational> counit;
  std::vector<std::vector<std::tuple<int, int, Rational>>> cobracket;  // empty unless co-Poisson

  /// Dual of upper-triangular 2×2 matrices: g1, g2 group-like, Δx = g1⊗x + x⊗g2.
  static FiniteCoalgebra triangular();
  /// Divided powers d0, d1, d2: Δd_n = Σ d_i⊗d_j (i+j = n).
  static FiniteCoalgebra divided_powers();
  /// 1 ⊕ g with g = span(x, y) primitive, δ(x) = 0, δ(y) = x⊗y − y⊗x.
  static FiniteCoalgebra copoisson();
  /// Deconcatenation coalgebra on words of length ≤ L over `letters` letters.
  static FiniteCoalgebra deconcatenation(int letters, int L);
};

/// F(C): the free algebra on C with Δ multiplicative and δ a derivation
/// (δ(ab) = δ(a)Δ(b) + Δ(a)δ(b)). The quasi-cocommutative cobracket
/// deltat acts as hbar^{-1}(Δ − Δ^{21}) when S is HSeries.
template <typename S>
class FreeBialgebraModule : public Module<S> {
 public:
  explicit FreeBialgebraModule(FiniteCoalgebra c) : c_(std::move(c)) {}
  WordTensor<S> apply(const std::string& name, int in, int out, const WordTuple& args) const override;
  const FiniteCoalgebra& coalgebra() const { return c_; }

  WordTensor<S> coproduct(const Word& w) const;
  WordTensor<S> cobracket(const Word& w) const;

 private:
  FiniteCoalgebra c_;
};

/// T(V) with primitive letters: U(FL_N) for N letters, or a free symbol
/// algebra. Optional 2-tensors give the values of r (or rho).
/// When `max_len` >= 0, products longer than max_len are dropped (the
/// truncated symbol algebra) or rejected, depending on `drop_long`.
template <typename S>
class TensorAlgebraModule : public Module<S> {
 public:
  explicit TensorAlgebraModule(int max_len = -1, bool drop_long = false) : max_len_(max_len), drop_long_(drop_long) {}
  void set_r(const WordTensor<S>& r) { r_ = r; }
  WordTensor<S> apply(const std::string& name, int in, int out, const WordTuple& args) const override;

 private:
  int max_len_;
  bool drop_long_;
  std::optional<WordTensor<S>> r_;
};

/// ρ(d) applied to `input` (a tensor with d.n_in() slots).
template <typename S>
WordTensor<S> eval_diagram(const Diagram& d, const Module<S>& mod, const WordTensor<S>& input);
template <typename S>
WordTensor<S> eval_on_module(const LinComb<S>& x, const Module<S>& mod, const WordTensor<S>& input);

/// Same value as eval_on_module(to_lincomb(nf), ...), computed per ordered
/// diagram as algebra part ∘ (id−η∘ε)^{⊗N} ∘ coalgebra part instead of
/// expanding the 2^N cut diagrams.
template <typename S>
WordTensor<S> eval_normal_form(const NormalForm<S>& nf, const Module<S>& mod, const WordTensor<S>& input);

}  // namespace propcalc

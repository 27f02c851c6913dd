#pragma once

// Truncated ħ-series tensors over two symbolic carriers: the free algebra on
// named symbols, and U(FL_N) = T(V) with primitive letters. Truncation is
// modulo ħ^K (the HSeries order) and modulo total word length L.

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "propcalc/word_tensor.hpp"

namespace propcalc {

using TensorSeries = WordTensor<HSeries>;

struct Carrier {
  enum class Kind { FreeSymbols, EnvelopingFL };
  Kind kind = Kind::FreeSymbols;
  std::vector<std::string> names;  // letter i prints as names[i]
  int max_len = -1;

  static Carrier free_symbols(std::vector<std::string> names, int L);
  /// U(FL_N) on letters x1..xN.
  static Carrier enveloping(int N, int L);

  bool has_coproduct() const { return kind == Kind::EnvelopingFL; }
  int letter(const std::string& name) const;
  TensorSeries zero(int slots) const { return TensorSeries(slots, max_len); }
  TensorSeries unit(int slots) const { return TensorSeries::unit(slots, max_len); }
  /// c·(w_1 ⊗ ... ⊗ w_n), words given as symbol names.
  TensorSeries term(const std::vector<std::vector<std::string>>& words, const HSeries& c) const;
  std::string str(const TensorSeries& x) const;
};

/// Places x on the 1-based `legs` of a `total`-slot tensor, units elsewhere.
TensorSeries embed(const TensorSeries& x, const std::vector<int>& legs, int total);
/// Applies the coproduct of U(FL_N) (unshuffle) to the 0-based slot `leg`.
TensorSeries coproduct_on_leg(const TensorSeries& x, int leg);

TensorSeries commutator(const TensorSeries& a, const TensorSeries& b);
/// [r12,r13] + [r12,r23] + [r13,r23].
TensorSeries cyb(const TensorSeries& r);
/// R12 R13 R23 − R23 R13 R12.
TensorSeries qybe_defect(const TensorSeries& R);
/// CYB(ρ) + ħ(ρ12 ρ13 ρ23 − ρ23 ρ13 ρ12).
TensorSeries deformed_cybe_defect(const TensorSeries& rho);

/// Inverse of c·1 + y with c a nonzero constant and y nilpotent modulo the
/// truncation (every term has positive ħ-valuation or positive length).
TensorSeries unit_inverse(const TensorSeries& x);

using Perturbation = std::function<TensorSeries(const TensorSeries&)>;
/// r + Σ_k ħ^k P_k(r), with P_k = perturbations[k-1].
TensorSeries perturb_forward(const std::vector<Perturbation>& perturbations, const TensorSeries& r);
/// Solves r + Σ_k ħ^k P_k(r) = target by iterated substitution r ← target − Σ_k ħ^k P_k(r).
TensorSeries triangular_invert(const std::vector<Perturbation>& perturbations, const TensorSeries& target);
/// For r = Σ c_s x_s ⊗ y_s: Σ_{s,t} c_s c_t x_s x_t y_s ⊗ y_t.
TensorSeries sample_p2(const TensorSeries& r);
/// Every slot word has all letters flagged in `left` before the others.
bool is_normally_ordered(const TensorSeries& x, const std::vector<bool>& left);

/// (J23 J^{1,23})^{-1} J12 J^{12,3}.
TensorSeries twist_d(const TensorSeries& J, const Carrier& c);
/// u¹ u² J (Δu)^{-1}.
TensorSeries twist_act(const TensorSeries& u, const TensorSeries& J, const Carrier& c);
/// κ¹ + κ² − Δκ.
TensorSeries cohochschild_d1(const TensorSeries& kappa, const Carrier& c);
/// K^{12,3} − K^{1,23} − K^{2,3} + K^{1,2}.
TensorSeries cohochschild_d2(const TensorSeries& K, const Carrier& c);

/// {"slots": n, "terms": [{"words": [...], "hcoeffs": [...], "val": v}]}
nlohmann::json to_json(const TensorSeries& x, const Carrier* c = nullptr);

}  // namespace propcalc

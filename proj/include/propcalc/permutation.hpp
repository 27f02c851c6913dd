#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace propcalc {

/// Permutation of {1..n}, stored 0-based.
///
/// The one-line word "(i_1 ... i_k)" denotes the permutation taking j to i_j.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> images0);  // 0-based images, validated

  static Permutation identity(int n);
  /// From 1-based images, e.g. {1,4,3,2}.
  static Permutation from_one_based(const std::vector<int>& images1);
  /// Parses "(1432)" or "1432"; multi-digit entries use commas: "(1,10,2,...)".
  static Permutation parse(const std::string& text);

  int size() const { return static_cast<int>(img_.size()); }
  int operator()(int i) const { return img_[static_cast<std::size_t>(i)]; }  // 0-based
  const std::vector<int>& images() const { return img_; }

  Permutation inverse() const;
  bool is_identity() const;
  int cycle_count() const;
  std::string str() const;  // "(1432)"

  auto operator<=>(const Permutation&) const = default;

 private:
  std::vector<int> img_;
};

/// p∘q: apply q first, then p.
Permutation compose(const Permutation& p, const Permutation& q);

/// σ∗σ': σ on the first block, σ' shifted on the second.
Permutation block_product(const Permutation& a, const Permutation& b);

/// σ_{n,n'}: i ↦ i+n' for i ≤ n, i ↦ i−n for i > n.
Permutation block_swap(int n, int n2);

/// Block permutation realizing x_1^{I_1} ⋯ x_p^{I_p} = σ∘(x_1⊗⋯⊗x_p).
/// `blocks` are 1-based ordered sets; block j must have block_sizes[j] entries.
Permutation block_perm(const std::vector<int>& block_sizes, const std::vector<std::vector<int>>& blocks);

/// All permutations of size n in lexicographic order of images.
std::vector<Permutation> all_permutations(int n);

// Small combinatorics used across modules.

/// Weak compositions of n into k nonnegative parts.
std::vector<std::vector<int>> weak_compositions(int n, int k);
/// Set partitions of {0..n-1} into exactly k unordered nonempty blocks (k < 0: any number).
std::vector<std::vector<std::vector<int>>> set_partitions(int n, int k = -1);
long long factorial(int n);
long long binomial(int n, int k);

}  // namespace propcalc

#include "propcalc/permutation.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace propcalc {

Permutation::Permutation(std::vector<int> images0) : img_(std::move(images0)) {
  std::vector<char> seen(img_.size(), 0);
  for (int v : img_) {
    if (v < 0 || v >= size() || seen[static_cast<std::size_t>(v)])
      throw std::invalid_argument("Permutation: images are not a bijection");
    seen[static_cast<std::size_t>(v)] = 1;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 0);
  return Permutation(std::move(v));
}

Permutation Permutation::from_one_based(const std::vector<int>& images1) {
  std::vector<int> v;
  v.reserve(images1.size());
  for (int x : images1) v.push_back(x - 1);
  return Permutation(std::move(v));
}

Permutation Permutation::parse(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (!s.empty() && s.front() == '(') {
    if (s.back() != ')') throw std::invalid_argument("Permutation::parse: unbalanced parenthesis in " + text);
    s = s.substr(1, s.size() - 2);
  }
  std::vector<int> images;
  if (s.find(',') != std::string::npos) {
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) throw std::invalid_argument("Permutation::parse: empty entry in " + text);
      images.push_back(std::stoi(item));
    }
  } else {
    for (char c : s) {
      if (!std::isdigit(static_cast<unsigned char>(c)) || c == '0')
        throw std::invalid_argument("Permutation::parse: bad digit in " + text);
      images.push_back(c - '0');
    }
  }
  return from_one_based(images);
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(img_.size());
  for (int i = 0; i < size(); ++i) inv[static_cast<std::size_t>(img_[static_cast<std::size_t>(i)])] = i;
  return Permutation(std::move(inv));
}

bool Permutation::is_identity() const {
  for (int i = 0; i < size(); ++i)
    if (img_[static_cast<std::size_t>(i)] != i) return false;
  return true;
}

int Permutation::cycle_count() const {
  std::vector<char> seen(img_.size(), 0);
  int cycles = 0;
  for (int i = 0; i < size(); ++i) {
    if (seen[static_cast<std::size_t>(i)]) continue;
    ++cycles;
    for (int j = i; !seen[static_cast<std::size_t>(j)]; j = img_[static_cast<std::size_t>(j)]) seen[static_cast<std::size_t>(j)] = 1;
  }
  return cycles;
}

std::string Permutation::str() const {
  std::ostringstream os;
  os << '(';
  bool wide = size() > 9;
  for (int i = 0; i < size(); ++i) {
    if (wide && i > 0) os << ',';
    os << img_[static_cast<std::size_t>(i)] + 1;
  }
  os << ')';
  return os.str();
}

Permutation compose(const Permutation& p, const Permutation& q) {
  if (p.size() != q.size()) throw std::invalid_argument("compose: permutation size mismatch");
  std::vector<int> r(static_cast<std::size_t>(p.size()));
  for (int i = 0; i < p.size(); ++i) r[static_cast<std::size_t>(i)] = p(q(i));
  return Permutation(std::move(r));
}

Permutation block_product(const Permutation& a, const Permutation& b) {
  std::vector<int> r = a.images();
  for (int i = 0; i < b.size(); ++i) r.push_back(b(i) + a.size());
  return Permutation(std::move(r));
}

Permutation block_swap(int n, int n2) {
  std::vector<int> r(static_cast<std::size_t>(n + n2));
  for (int i = 0; i < n; ++i) r[static_cast<std::size_t>(i)] = i + n2;
  for (int i = n; i < n + n2; ++i) r[static_cast<std::size_t>(i)] = i - n;
  return Permutation(std::move(r));
}

Permutation block_perm(const std::vector<int>& block_sizes, const std::vector<std::vector<int>>& blocks) {
  if (block_sizes.size() != blocks.size()) throw std::invalid_argument("block_perm: malformed partition (block count)");
  int n = std::accumulate(block_sizes.begin(), block_sizes.end(), 0);
  std::vector<int> images;
  images.reserve(static_cast<std::size_t>(n));
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    if (static_cast<int>(blocks[j].size()) != block_sizes[j])
      throw std::invalid_argument("block_perm: malformed partition (block size)");
    for (int x : blocks[j]) {
      if (x < 1 || x > n) throw std::invalid_argument("block_perm: malformed partition (entry out of range)");
      images.push_back(x - 1);
    }
  }
  try {
    return Permutation(std::move(images));
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("block_perm: malformed partition (blocks overlap)");
  }
}

std::vector<Permutation> all_permutations(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 0);
  std::vector<Permutation> out;
  do {
    out.emplace_back(v);
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

std::vector<std::vector<int>> weak_compositions(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k == 0) {
    if (n == 0) out.emplace_back();
    return out;
  }
  std::vector<int> cur(static_cast<std::size_t>(k), 0);
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == k - 1) {
      cur[static_cast<std::size_t>(pos)] = left;
      out.push_back(cur);
      return;
    }
    for (int x = 0; x <= left; ++x) {
      cur[static_cast<std::size_t>(pos)] = x;
      self(self, pos + 1, left - x);
    }
  };
  rec(rec, 0, n);
  return out;
}

std::vector<std::vector<std::vector<int>>> set_partitions(int n, int k) {
  std::vector<std::vector<std::vector<int>>> out;
  std::vector<std::vector<int>> blocks;
  auto rec = [&](auto&& self, int i) -> void {
    if (i == n) {
      if (k < 0 || static_cast<int>(blocks.size()) == k) out.push_back(blocks);
      return;
    }
    for (std::size_t j = 0; j < blocks.size(); ++j) {
      blocks[j].push_back(i);
      self(self, i + 1);
      blocks[j].pop_back();
    }
    if (k < 0 || static_cast<int>(blocks.size()) < k) {
      blocks.push_back({i});
      self(self, i + 1);
      blocks.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

long long factorial(int n) {
  long long r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace propcalc

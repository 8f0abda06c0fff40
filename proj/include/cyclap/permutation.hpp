#pragma once

#include <vector>

namespace cyclap {

/// A bijection on {0..n-1}; map[i] is the image of i.
struct Permutation {
  std::vector<int> map;

  Permutation() = default;
  explicit Permutation(std::vector<int> m) : map(std::move(m)) {}

  static Permutation identity(int n);

  /// Validated construction: throws std::invalid_argument unless map is a
  /// bijection on {0..n-1}.
  static Permutation checked(std::vector<int> m);

  int size() const { return static_cast<int>(map.size()); }
  int operator()(int i) const { return map[i]; }
  bool is_valid() const;
  Permutation inverse() const;
};

}  // namespace cyclap

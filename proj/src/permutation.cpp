#include "cyclap/permutation.hpp"

#include <numeric>
#include <stdexcept>

namespace cyclap {

Permutation Permutation::identity(int n) {
  std::vector<int> m(n);
  std::iota(m.begin(), m.end(), 0);
  return Permutation(std::move(m));
}

bool Permutation::is_valid() const {
  const int n = size();
  std::vector<char> seen(n, 0);
  for (int v : map) {
    if (v < 0 || v >= n || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

Permutation Permutation::checked(std::vector<int> m) {
  Permutation p(std::move(m));
  if (!p.is_valid())
    throw std::invalid_argument("Permutation: map is not a bijection");
  return p;
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(map.size());
  for (int i = 0; i < size(); ++i) inv[map[i]] = i;
  return Permutation(std::move(inv));
}

}  // namespace cyclap

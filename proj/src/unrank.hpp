#pragma once
// Lehmer-code unranking: permutation of {1..n} at `rank` in lexicographic
// order. Shared by the census loops to hand each worker a contiguous range.

#include <vector>

namespace mobius::detail {

inline std::vector<int> nth_permutation(int n, unsigned long long rank) {
  unsigned long long fact[21];
  fact[0] = 1;
  for (int i = 1; i <= n; ++i) fact[i] = fact[i - 1] * i;
  std::vector<int> avail(n), out;
  for (int i = 0; i < n; ++i) avail[i] = i + 1;
  for (int i = n - 1; i >= 0; --i) {
    unsigned long long d = rank / fact[i];
    rank %= fact[i];
    out.push_back(avail[static_cast<std::size_t>(d)]);
    avail.erase(avail.begin() + static_cast<std::size_t>(d));
  }
  return out;
}

} // namespace mobius::detail

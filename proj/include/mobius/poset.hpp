#pragma once
// The pattern-containment poset: containment, covers, downsets, intervals,
// and the memoized Mobius engine.
//
// mu(sigma, pi) is 0 when sigma is not contained in pi, 1 when sigma == pi,
// and otherwise -sum of mu(sigma, tau) over the half-open interval
// [sigma, pi). Principal values mu(1, pi) are memoized under the canonical
// form of pi (the 8 poset symmetries preserve principal values); general
// (sigma, pi) values are memoized under the verbatim pair.

#include <atomic>
#include <cstdint>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "mobius/perm.hpp"

namespace mobius {

bool contains(const Perm& sigma, const Perm& pi); // sigma <= pi; e <= everything

// Distinct one-point deletions of pi, sorted. For |pi| >= 2 these are exactly
// the permutations covered by pi in the containment order.
std::vector<Perm> cover(const Perm& pi);

// All patterns of pi, including pi and the empty permutation, sorted.
std::vector<Perm> downset(const Perm& pi);

// The closed interval [sigma, pi] as an explicit sorted set; empty when the
// endpoints are incomparable. sigma must be nonempty (the poset minimum used
// by the Mobius recursion is the singleton permutation, not e).
std::vector<Perm> interval(const Perm& sigma, const Perm& pi);

// Identical set to interval(); the name mirrors the restricted-closure
// notation used by the sigma-variant detection operations.
std::vector<Perm> sigma_closure(const Perm& sigma, const Perm& pi);

struct IntervalKey {
  PermCode lower = 0;
  PermCode upper = 0;
  bool operator==(const IntervalKey&) const = default;
};
struct IntervalKeyHash {
  std::size_t operator()(const IntervalKey& k) const noexcept {
    std::uint64_t h = k.lower * 0x9e3779b97f4a7c15ULL;
    h ^= k.upper + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

class CacheCorrupt : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Memo for Mobius values. Safe for concurrent readers with serialized
// writers; all writers store identical values for a given key, so
// last-write-wins is harmless. Only principal entries persist to disk.
//
// File format: header line "mobius-cache v1", then one record per line:
// canonical permutation text, TAB, decimal mu value. LF endings, records
// sorted by (length, lexicographic). Loading validates the header, record
// syntax, canonicality and uniqueness, and throws CacheCorrupt otherwise.
class MobiusCache {
public:
  MobiusCache() = default;
  MobiusCache(const MobiusCache&) = delete;
  MobiusCache& operator=(const MobiusCache&) = delete;

  std::optional<long long> principal(PermCode canonical_pi) const;
  void store_principal(PermCode canonical_pi, long long mu);
  std::optional<long long> general(const IntervalKey& key) const;
  void store_general(const IntervalKey& key, long long mu);

  std::size_t principal_size() const;
  std::size_t general_size() const;

  struct Stats {
    std::uint64_t hits = 0;
    std::uint64_t misses = 0;
  };
  Stats stats() const;

  void save(const std::string& path) const; // atomic: temp file + rename
  void load(const std::string& path);       // throws CacheCorrupt

private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<PermCode, long long> principal_;
  std::unordered_map<IntervalKey, long long, IntervalKeyHash> general_;
  mutable std::atomic<std::uint64_t> hits_ = 0;
  mutable std::atomic<std::uint64_t> misses_ = 0;
};

// mu(sigma, pi). sigma must be nonempty (domain error otherwise). Exact
// integer arithmetic; overflow past 64 bits raises std::overflow_error.
long long mobius(const Perm& sigma, const Perm& pi, MobiusCache& cache);

// mu(1, pi) for nonempty pi; memoized under canonical_form(pi).
long long principal_mobius(const Perm& pi, MobiusCache& cache);

// Fill the cache with principal values for every permutation of length
// <= max_n. Work is sharded across threads (0 = hardware concurrency);
// results are deterministic and independent of the shard count.
void ensure_principal(int max_n, MobiusCache& cache, int threads = 0);

} // namespace mobius

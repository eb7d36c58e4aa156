#include "mobius/poset.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <thread>
#include <unordered_set>

namespace mobius {

namespace {

void unpack(PermCode c, int* a, int& n) {
  n = code_length(c);
  for (int k = 0; k < n; ++k) a[k] = static_cast<int>((c >> (4 * (15 - k))) & 0xF);
}

// Iterative backtracking matcher: chosen[i] is the pi-position matched to
// sigma entry i; each new choice is checked against all earlier ones.
bool contains_arrays(const int* s, int k, const int* p, int n) {
  if (k == 0) return true;
  if (k > n) return false;
  int chosen[16];
  int i = 0, start = 0;
  while (true) {
    if (i == k) return true;
    int j = start;
    for (; j <= n - (k - i); ++j) {
      bool ok = true;
      for (int t = 0; t < i; ++t)
        if ((s[t] < s[i]) != (p[chosen[t]] < p[j])) {
          ok = false;
          break;
        }
      if (ok) break;
    }
    if (j <= n - (k - i)) {
      chosen[i++] = j;
      start = j + 1;
    } else {
      if (i == 0) return false;
      start = chosen[--i] + 1;
    }
  }
}

bool contains_codes(PermCode s, PermCode p) {
  int a[16], b[16], k, n;
  unpack(s, a, k);
  unpack(p, b, n);
  return contains_arrays(a, k, b, n);
}

// All distinct nonempty pattern codes of pc, including pc itself. One subset
// per position mask; the reduced value of a kept entry is its rank among the
// kept values, read off a value bitmask.
std::vector<PermCode> distinct_patterns(PermCode pc) {
  int a[16], n;
  unpack(pc, a, n);
  std::unordered_set<PermCode> seen;
  seen.reserve(std::size_t{1} << n);
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    unsigned valmask = 0;
    for (int k = 0; k < n; ++k)
      if (mask >> k & 1) valmask |= 1u << a[k];
    PermCode c = 0;
    int slot = 0;
    for (int k = 0; k < n; ++k)
      if (mask >> k & 1) {
        int v = std::popcount(valmask & ((1u << a[k]) - 1)) + 1;
        c |= static_cast<PermCode>(v) << (4 * (15 - slot));
        ++slot;
      }
    seen.insert(c);
  }
  return {seen.begin(), seen.end()};
}

void add_checked(long long& acc, long long x) {
  if (__builtin_add_overflow(acc, x, &acc)) throw std::overflow_error("mobius value overflow");
}

long long negate_checked(long long x) {
  if (x == std::numeric_limits<long long>::min()) throw std::overflow_error("mobius value overflow");
  return -x;
}

long long principal_rec(PermCode canon, MobiusCache& cache) {
  if (auto v = cache.principal(canon)) return *v;
  long long mu;
  if (code_length(canon) == 1) {
    mu = 1;
  } else {
    long long acc = 0;
    for (PermCode tau : distinct_patterns(canon))
      if (tau != canon) add_checked(acc, principal_rec(canonical_code(tau), cache));
    mu = negate_checked(acc);
  }
  cache.store_principal(canon, mu);
  return mu;
}

long long general_rec(PermCode s, PermCode p, MobiusCache& cache) {
  if (s == p) return 1;
  IntervalKey key{s, p};
  if (auto v = cache.general(key)) return *v;
  long long acc = 0;
  for (PermCode tau : distinct_patterns(p))
    if (tau != p && contains_codes(s, tau)) add_checked(acc, general_rec(s, tau, cache));
  long long mu = negate_checked(acc);
  cache.store_general(key, mu);
  return mu;
}

} // namespace

bool contains(const Perm& sigma, const Perm& pi) {
  return contains_arrays(sigma.entries().data(), sigma.size(), pi.entries().data(),
                         pi.size());
}

std::vector<Perm> cover(const Perm& pi) {
  std::set<Perm> out;
  const auto& v = pi.entries();
  for (int del = 0; del < pi.size(); ++del) {
    std::vector<int> w;
    w.reserve(v.size() - 1);
    for (int i = 0; i < pi.size(); ++i) {
      if (i == del) continue;
      w.push_back(v[i] > v[del] ? v[i] - 1 : v[i]);
    }
    out.insert(Perm{std::move(w)});
  }
  return {out.begin(), out.end()};
}

std::vector<Perm> downset(const Perm& pi) {
  std::vector<Perm> out{Perm{}};
  if (!pi.is_empty())
    for (PermCode c : distinct_patterns(encode(pi))) out.push_back(decode(c));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Perm> interval(const Perm& sigma, const Perm& pi) {
  if (sigma.is_empty())
    throw std::domain_error("interval lower endpoint must be nonempty");
  std::vector<Perm> out;
  if (!contains(sigma, pi)) return out;
  for (const Perm& t : downset(pi))
    if (!t.is_empty() && contains(sigma, t)) out.push_back(t);
  return out;
}

std::vector<Perm> sigma_closure(const Perm& sigma, const Perm& pi) {
  return interval(sigma, pi);
}

std::optional<long long> MobiusCache::principal(PermCode canonical_pi) const {
  std::shared_lock lock(mutex_);
  auto it = principal_.find(canonical_pi);
  if (it == principal_.end()) {
    ++misses_;
    return std::nullopt;
  }
  ++hits_;
  return it->second;
}

void MobiusCache::store_principal(PermCode canonical_pi, long long mu) {
  std::unique_lock lock(mutex_);
  principal_[canonical_pi] = mu;
}

std::optional<long long> MobiusCache::general(const IntervalKey& key) const {
  std::shared_lock lock(mutex_);
  auto it = general_.find(key);
  if (it == general_.end()) {
    ++misses_;
    return std::nullopt;
  }
  ++hits_;
  return it->second;
}

void MobiusCache::store_general(const IntervalKey& key, long long mu) {
  std::unique_lock lock(mutex_);
  general_[key] = mu;
}

std::size_t MobiusCache::principal_size() const {
  std::shared_lock lock(mutex_);
  return principal_.size();
}

std::size_t MobiusCache::general_size() const {
  std::shared_lock lock(mutex_);
  return general_.size();
}

MobiusCache::Stats MobiusCache::stats() const { return {hits_.load(), misses_.load()}; }

void MobiusCache::save(const std::string& path) const {
  std::vector<std::pair<PermCode, long long>> recs;
  {
    std::shared_lock lock(mutex_);
    recs.assign(principal_.begin(), principal_.end());
  }
  std::sort(recs.begin(), recs.end(), [](const auto& a, const auto& b) {
    int la = code_length(a.first), lb = code_length(b.first);
    return la != lb ? la < lb : a.first < b.first;
  });
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << "mobius-cache v1\n";
    for (const auto& [code, mu] : recs)
      out << format_perm(decode(code)) << '\t' << mu << '\n';
    out.flush();
    if (!out) throw std::runtime_error("write failed on " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

void MobiusCache::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CacheCorrupt("cannot open cache file " + path);
  std::string line;
  if (!std::getline(in, line) || line != "mobius-cache v1")
    throw CacheCorrupt("bad cache header in " + path);
  std::unordered_map<PermCode, long long> fresh;
  while (std::getline(in, line)) {
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw CacheCorrupt("cache record without tab: " + line);
    Perm p;
    try {
      p = parse_perm(line.substr(0, tab));
    } catch (const MalformedPermutation& e) {
      throw CacheCorrupt(std::string("bad cache permutation: ") + e.what());
    }
    if (p.is_empty()) throw CacheCorrupt("empty permutation in cache record");
    if (canonical_form(p) != p)
      throw CacheCorrupt("non-canonical cache record " + line.substr(0, tab));
    const char* first = line.data() + tab + 1;
    const char* last = line.data() + line.size();
    long long mu = 0;
    auto [end, ec] = std::from_chars(first, last, mu);
    if (ec != std::errc{} || end != last)
      throw CacheCorrupt("bad cache value in record " + line);
    PermCode code;
    try {
      code = encode(p);
    } catch (const std::domain_error& e) {
      throw CacheCorrupt(std::string("cache permutation too long: ") + e.what());
    }
    if (!fresh.emplace(code, mu).second)
      throw CacheCorrupt("duplicate cache record " + line.substr(0, tab));
  }
  std::unique_lock lock(mutex_);
  for (const auto& [code, mu] : fresh) principal_[code] = mu;
}

long long mobius(const Perm& sigma, const Perm& pi, MobiusCache& cache) {
  if (sigma.is_empty()) throw std::domain_error("mobius lower endpoint must be nonempty");
  if (sigma == pi) return 1;
  if (!contains(sigma, pi)) return 0;
  return general_rec(encode(sigma), encode(pi), cache);
}

long long principal_mobius(const Perm& pi, MobiusCache& cache) {
  if (pi.is_empty()) throw std::domain_error("principal mobius of the empty permutation");
  return principal_rec(canonical_code(encode(pi)), cache);
}

void ensure_principal(int max_n, MobiusCache& cache, int threads) {
  int nthreads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  if (nthreads < 1) nthreads = 1;
  for (int n = 1; n <= max_n; ++n) {
    std::unordered_set<PermCode> reps_set;
    std::vector<int> v(n);
    for (int i = 0; i < n; ++i) v[i] = i + 1;
    do {
      reps_set.insert(canonical_code(encode_entries(v.data(), n)));
    } while (std::next_permutation(v.begin(), v.end()));
    std::vector<PermCode> reps(reps_set.begin(), reps_set.end());
    std::sort(reps.begin(), reps.end());

    // Patterns of a length-n permutation are strictly shorter, so every
    // recursion from a length-n representative reads completed lengths only;
    // shards write disjoint keys.
    const int shards = std::min<int>(nthreads, static_cast<int>(reps.size()));
    if (shards <= 1) {
      for (PermCode c : reps) principal_rec(c, cache);
    } else {
      std::vector<std::thread> pool;
      const std::size_t chunk = (reps.size() + shards - 1) / shards;
      for (int t = 0; t < shards; ++t) {
        const std::size_t lo = t * chunk;
        const std::size_t hi = std::min(reps.size(), lo + chunk);
        pool.emplace_back([&reps, &cache, lo, hi] {
          for (std::size_t i = lo; i < hi; ++i) principal_rec(reps[i], cache);
        });
      }
      for (auto& th : pool) th.join();
    }
  }
}

} // namespace mobius

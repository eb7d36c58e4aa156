#include "mobius/strongly_zero.hpp"

#include <algorithm>
#include <ostream>
#include <set>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "mobius/inflation.hpp"
#include "unrank.hpp"

namespace mobius {

namespace {

using detail::nth_permutation;

std::vector<int> reduce_values(const std::vector<int>& w) {
  std::vector<int> sorted = w, out = w;
  std::sort(sorted.begin(), sorted.end());
  for (int& x : out)
    x = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), x) -
                         sorted.begin()) +
        1;
  return out;
}

// Reduced content of the window [lo, hi] (0-based, inclusive) when it holds
// contiguous values; nullopt otherwise.
std::optional<Perm> interval_window(const std::vector<int>& v, int lo, int hi) {
  int mn = v[lo], mx = v[lo];
  for (int i = lo + 1; i <= hi; ++i) {
    mn = std::min(mn, v[i]);
    mx = std::max(mx, v[i]);
  }
  if (mx - mn + 1 != hi - lo + 1) return std::nullopt;
  std::vector<int> w(v.begin() + lo, v.begin() + hi + 1);
  for (int& x : w) x -= mn - 1;
  return Perm{std::move(w)};
}

// Certificate scan against registered patterns of length <= max_pattern_len.
std::optional<SZCertificate> certificate_scan(const Perm& pi, const SZRegistry& reg,
                                              int max_pattern_len) {
  AdjacencyProfile prof = adjacency_profile(pi);
  if (!prof.up_positions.empty() && !prof.down_positions.empty()) {
    SZCertificate c;
    c.kind = SZCertificate::Kind::OpposingAdjacencies;
    c.up_pos = prof.up_positions.front();
    c.down_pos = prof.down_positions.front();
    return c;
  }
  const auto& v = pi.entries();
  const int n = pi.size();
  for (int m = 3; m <= std::min(n, max_pattern_len); ++m) {
    if (reg.nice_members(m).empty()) continue;
    for (int i = 0; i + m <= n; ++i) {
      auto w = interval_window(v, i, i + m - 1);
      if (!w || !reg.is_registered(encode(*w))) continue;
      SZCertificate c;
      c.kind = SZCertificate::Kind::NiceInterval;
      c.lo = i + 1;
      c.hi = i + m;
      c.pattern = *w;
      return c;
    }
  }
  return std::nullopt;
}

// Memoizing context for the registry build: certification verdicts are valid
// for one registry state, downsets are valid forever.
struct DetectContext {
  const SZRegistry& reg;
  std::unordered_map<PermCode, bool> cert_memo;
  std::unordered_map<PermCode, std::vector<PermCode>> down_memo;
};

bool certified_cached(PermCode code, DetectContext& ctx) {
  auto it = ctx.cert_memo.find(code);
  if (it != ctx.cert_memo.end()) return it->second;
  Perm p = decode(code);
  bool yes = certificate_scan(p, ctx.reg, p.size()).has_value();
  ctx.cert_memo.emplace(code, yes);
  return yes;
}

// Nonempty pattern codes, the decoded permutation included.
const std::vector<PermCode>& downset_codes(PermCode code, DetectContext& ctx) {
  auto it = ctx.down_memo.find(code);
  if (it != ctx.down_memo.end()) return it->second;
  std::vector<PermCode> codes;
  for (const Perm& q : downset(decode(code)))
    if (!q.is_empty()) codes.push_back(encode(q));
  return ctx.down_memo.emplace(code, std::move(codes)).first->second;
}

std::optional<Perm> find_core_impl(const Perm& phi, DetectContext& ctx) {
  std::vector<Perm> covers = cover(phi);
  // uncertified pattern codes per cover member; the empty permutation is
  // uncertifiable but lies in every downset, so it never constrains the core
  std::vector<std::vector<PermCode>> surviving(covers.size());
  for (std::size_t j = 0; j < covers.size(); ++j)
    for (PermCode c : downset_codes(encode(covers[j]), ctx))
      if (!certified_cached(c, ctx)) surviving[j].push_back(c);

  for (std::size_t i = 0; i < covers.size(); ++i) {
    const auto& dpsi = downset_codes(encode(covers[i]), ctx);
    std::unordered_set<PermCode> inside(dpsi.begin(), dpsi.end());
    bool ok = true;
    for (std::size_t j = 0; j < covers.size() && ok; ++j) {
      if (j == i) continue;
      for (PermCode c : surviving[j])
        if (!inside.count(c)) {
          ok = false;
          break;
        }
    }
    if (ok) return covers[i];
  }
  return std::nullopt;
}

} // namespace

bool has_interval_copy(const Perm& pi, const Perm& alpha) {
  const int n = pi.size(), m = alpha.size();
  if (m == 0 || m > n) return false;
  for (int i = 0; i + m <= n; ++i) {
    auto w = interval_window(pi.entries(), i, i + m - 1);
    if (w && *w == alpha) return true;
  }
  return false;
}

const std::vector<NiceEntry>& SZRegistry::nice_members(int length) const {
  static const std::vector<NiceEntry> empty;
  auto it = members_.find(length);
  return it == members_.end() ? empty : it->second;
}

bool SZRegistry::is_registered(PermCode code) const { return registered_.count(code) > 0; }

SZRegistry::Counts SZRegistry::counts(int length) const {
  auto it = counts_.find(length);
  return it == counts_.end() ? Counts{} : it->second;
}

void SZRegistry::export_members(std::ostream& out) const {
  for (const auto& [length, entries] : members_)
    for (const NiceEntry& e : entries)
      if (canonical_form(e.perm) == e.perm)
        out << length << '\t' << format_perm(e.perm) << '\t' << format_perm(e.core)
            << '\n';
}

SZRegistry build_registry(int max_n, MobiusCache& cache, int threads) {
  int nthreads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  if (nthreads < 1) nthreads = 1;

  SZRegistry reg;
  reg.max_length_ = max_n;
  reg.sigma_ = Perm::identity(1);

  for (int n = 3; n <= max_n; ++n) {
    unsigned long long total = 1;
    for (int i = 2; i <= n; ++i) total *= i;
    const int shards = static_cast<int>(
        std::min<unsigned long long>(nthreads, total));

    struct ShardOut {
      long long obvious = 0;
      std::vector<NiceEntry> found;
    };
    std::vector<ShardOut> results(shards);

    auto work = [&](int shard) {
      // per-shard memos: results are pure functions of the registry state
      DetectContext ctx{reg, {}, {}};
      unsigned long long lo = total * shard / shards;
      unsigned long long hi = total * (shard + 1) / shards;
      std::vector<int> v = nth_permutation(n, lo);
      for (unsigned long long r = lo; r < hi;
           ++r, std::next_permutation(v.begin(), v.end())) {
        Perm p{std::vector<int>(v)};
        if (principal_mobius(p, cache) != 0) continue;
        // only nice permutations are tallied; a certificate alone does not
        // place a permutation in either column
        auto core = find_core_impl(p, ctx);
        if (!core) continue;
        if (certified_cached(encode(p), ctx))
          ++results[shard].obvious;
        else
          results[shard].found.push_back({p, *core});
      }
    };

    if (shards == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < shards; ++t) pool.emplace_back(work, t);
      for (auto& th : pool) th.join();
    }

    SZRegistry::Counts c;
    std::vector<NiceEntry> merged;
    for (const ShardOut& s : results) {
      c.obviously_zero += s.obvious;
      merged.insert(merged.end(), s.found.begin(), s.found.end());
    }
    std::sort(merged.begin(), merged.end(),
              [](const NiceEntry& a, const NiceEntry& b) { return a.perm < b.perm; });
    c.new_members = static_cast<long long>(merged.size());
    for (const NiceEntry& e : merged) reg.registered_.emplace(encode(e.perm), e.core);
    reg.members_[n] = std::move(merged);
    reg.counts_[n] = c;
  }
  return reg;
}

std::vector<Perm> ground(const std::vector<Perm>& perms, const SZRegistry& registry) {
  DetectContext ctx{registry, {}, {}};
  std::set<Perm> out;
  for (const Perm& p : perms) {
    out.insert(Perm{}); // a pattern of everything, and never certifiable
    for (const Perm& q : downset(p))
      if (!q.is_empty() && !certified_cached(encode(q), ctx)) out.insert(q);
  }
  return {out.begin(), out.end()};
}

std::optional<Perm> find_core(const Perm& phi, const SZRegistry& registry) {
  DetectContext ctx{registry, {}, {}};
  return find_core_impl(phi, ctx);
}

bool is_nice(const Perm& phi, const SZRegistry& registry, MobiusCache& cache) {
  if (phi.size() < 2) return false;
  if (principal_mobius(phi, cache) != 0) return false;
  return find_core(phi, registry).has_value();
}

std::optional<SZCertificate> is_certified_strongly_zero(const Perm& pi,
                                                        const SZRegistry& registry) {
  return certificate_scan(pi, registry, pi.size());
}

Classification classify(const Perm& pi, const SZRegistry& registry, MobiusCache& cache) {
  if (registry.max_length() < pi.size() - 1)
    throw std::domain_error("registry too short to classify length " +
                            std::to_string(pi.size()));
  Classification out;
  out.mu = principal_mobius(pi, cache);
  if (out.mu != 0) {
    out.category = Category::NonZero;
    return out;
  }
  auto core = find_core(pi, registry);
  if (!core) {
    // mu vanishes but the permutation is not nice; certificates alone do not
    // move it into the obvious column
    out.category = Category::ZeroNotCertified;
    return out;
  }
  if (auto cert = certificate_scan(pi, registry, pi.size() - 1)) {
    out.category = Category::ObviouslyZero;
    out.certificate = cert;
    return out;
  }
  out.category = Category::New;
  out.core = core;
  return out;
}

OpposingPartition partition_opposing(const Perm& pi, int ell, int r, MobiusCache& cache) {
  const int n = pi.size();
  if (ell < 1 || r < ell + 1 || r + 2 > n)
    throw std::domain_error("adjacency positions out of range");
  const auto& v = pi.entries();
  if (v[ell] != v[ell - 1] + 1)
    throw std::domain_error("no ascent pair at position " + std::to_string(ell));
  if (v[r + 1] != v[r] - 1)
    throw std::domain_error("no descent pair at position " + std::to_string(r + 1));

  OpposingPartition part;
  part.ell = ell;
  part.r = r;
  std::vector<int> g;
  for (int i = 0; i < n; ++i)
    if (i != ell && i != r + 1) g.push_back(v[i]);
  part.gamma = Perm{reduce_values(g)};
  part.lambda = inflate_at(part.gamma, {ell}, {parse_perm("12")});
  part.rho = inflate_at(part.gamma, {r}, {parse_perm("21")});

  auto nonempty_down = [](const Perm& p) {
    std::set<Perm> out;
    for (const Perm& q : downset(p))
      if (!q.is_empty()) out.insert(q);
    return out;
  };
  std::set<Perm> DL = nonempty_down(part.lambda);
  std::set<Perm> DR = nonempty_down(part.rho);
  std::set<Perm> DG = nonempty_down(part.gamma);
  std::set<Perm> all = nonempty_down(pi);
  all.erase(pi);

  for (const Perm& q : DL) part.L.push_back(q);
  for (const Perm& q : DR) part.R.push_back(q);
  for (const Perm& q : DG) part.G_gamma.push_back(q);
  for (const Perm& q : DL)
    if (DR.count(q) && !DG.count(q)) part.G_x.push_back(q);
  for (const Perm& q : all)
    if (!DL.count(q) && !DR.count(q)) part.T.push_back(q);

  auto tally = [&cache](const std::vector<Perm>& block) {
    long long s = 0;
    for (const Perm& q : block) s += principal_mobius(q, cache);
    return s;
  };
  part.sum_L = tally(part.L);
  part.sum_R = tally(part.R);
  part.sum_T = tally(part.T);
  part.sum_G = tally(part.G_gamma) + tally(part.G_x);
  return part;
}

NicePartition partition_nice(const Perm& pi, int c, const Perm& phi,
                             const SZRegistry& registry) {
  const int n = pi.size(), m = phi.size();
  if (c < 1 || c + m - 1 > n) throw std::domain_error("window out of range");
  auto w = interval_window(pi.entries(), c - 1, c + m - 2);
  if (!w || !(*w == phi))
    throw std::domain_error("no interval copy of " + format_perm(phi) +
                            " at position " + std::to_string(c));
  const auto& entries = registry.nice_members(m);
  auto entry = std::find_if(entries.begin(), entries.end(),
                            [&](const NiceEntry& e) { return e.perm == phi; });
  if (entry == entries.end())
    throw std::domain_error(format_perm(phi) + " is not a registered nice permutation");

  NicePartition part;
  part.phi = phi;
  part.core = entry->core;
  std::vector<int> g;
  for (int i = 0; i < n; ++i)
    if (i < c || i >= c + m - 1) g.push_back(pi.entries()[i]);
  part.gamma = Perm{reduce_values(g)};

  auto nonempty_down = [](const Perm& p) {
    std::set<Perm> out;
    for (const Perm& q : downset(p))
      if (!q.is_empty()) out.insert(q);
    return out;
  };

  Perm core_top = inflate_at(part.gamma, {c}, {part.core});
  std::set<Perm> cum = nonempty_down(core_top);
  part.P.assign(cum.begin(), cum.end());

  for (const Perm& lam : cover(phi)) {
    if (lam == part.core) continue;
    Perm top = inflate_at(part.gamma, {c}, {lam});
    part.lambda_tops.push_back(top);
    std::vector<Perm> block;
    for (const Perm& q : nonempty_down(top))
      if (cum.insert(q).second) block.push_back(q);
    part.L.push_back(std::move(block));
  }

  std::set<Perm> all = nonempty_down(pi);
  all.erase(pi);
  for (const Perm& q : all)
    if (!cum.count(q)) part.R.push_back(q);
  return part;
}

// ---------------------------------------------------------------------------
// Sigma-variants.

namespace {

const std::vector<Perm>& seed_patterns() {
  static const std::vector<Perm> seeds = {parse_perm("1243"), parse_perm("2134"),
                                          parse_perm("3421"), parse_perm("4312")};
  return seeds;
}

std::optional<SZCertificate> sigma_scan(const Perm& pi, const SigmaRegistry& reg) {
  const auto& v = pi.entries();
  const int n = pi.size();
  for (int m = 3; m <= n; ++m) {
    bool seeds_here = reg.seeded() && m == 4;
    if (!seeds_here && reg.nice_members(m).empty()) continue;
    for (int i = 0; i + m <= n; ++i) {
      auto w = interval_window(v, i, i + m - 1);
      if (!w) continue;
      bool hit = reg.is_registered(encode(*w));
      if (!hit && seeds_here) {
        const auto& seeds = seed_patterns();
        hit = std::find(seeds.begin(), seeds.end(), *w) != seeds.end();
      }
      if (!hit) continue;
      SZCertificate c;
      c.kind = SZCertificate::Kind::NiceInterval;
      c.lo = i + 1;
      c.hi = i + m;
      c.pattern = *w;
      return c;
    }
  }
  return std::nullopt;
}

} // namespace

const std::vector<NiceEntry>& SigmaRegistry::nice_members(int length) const {
  static const std::vector<NiceEntry> empty;
  auto it = members_.find(length);
  return it == members_.end() ? empty : it->second;
}

bool SigmaRegistry::is_registered(PermCode code) const {
  return registered_.count(code) > 0;
}

SigmaRegistry build_sigma_registry(const Perm& sigma, int max_n, MobiusCache& cache) {
  if (sigma.is_empty()) throw std::domain_error("sigma must be nonempty");
  SigmaRegistry reg;
  reg.sigma_ = sigma;
  reg.seeded_ = is_adjacency_free(sigma);
  reg.max_length_ = max_n;

  for (int n = sigma.size() + 1; n <= max_n; ++n) {
    std::vector<NiceEntry> found;
    std::vector<int> v(n);
    for (int i = 0; i < n; ++i) v[i] = i + 1;
    do {
      Perm p{std::vector<int>(v)};
      if (!contains(sigma, p)) continue;
      if (mobius(sigma, p, cache) != 0) continue;
      if (sigma_scan(p, reg)) continue;
      if (auto core = find_sigma_core(p, sigma, reg)) found.push_back({p, *core});
    } while (std::next_permutation(v.begin(), v.end()));
    std::sort(found.begin(), found.end(),
              [](const NiceEntry& a, const NiceEntry& b) { return a.perm < b.perm; });
    for (const NiceEntry& e : found) reg.registered_.emplace(encode(e.perm), e.core);
    reg.members_[n] = std::move(found);
  }
  return reg;
}

std::optional<SZCertificate> sigma_certified_strongly_zero(const Perm& pi,
                                                           const SigmaRegistry& registry) {
  return sigma_scan(pi, registry);
}

std::vector<Perm> sigma_ground(const std::vector<Perm>& perms, const Perm& sigma,
                               const SigmaRegistry& registry) {
  std::set<Perm> out;
  for (const Perm& p : perms)
    for (const Perm& q : sigma_closure(sigma, p))
      if (!sigma_scan(q, registry)) out.insert(q);
  return {out.begin(), out.end()};
}

std::optional<Perm> find_sigma_core(const Perm& phi, const Perm& sigma,
                                    const SigmaRegistry& registry) {
  std::vector<Perm> covers = cover(phi);
  for (const Perm& psi : covers) {
    if (!contains(sigma, psi)) continue;
    std::vector<Perm> rest;
    for (const Perm& c : covers)
      if (!(c == psi)) rest.push_back(c);
    auto closure = sigma_closure(sigma, psi);
    std::set<Perm> inside(closure.begin(), closure.end());
    bool ok = true;
    for (const Perm& g : sigma_ground(rest, sigma, registry))
      if (!inside.count(g)) {
        ok = false;
        break;
      }
    if (ok) return psi;
  }
  return std::nullopt;
}

bool is_sigma_nice(const Perm& phi, const Perm& sigma, const SigmaRegistry& registry,
                   MobiusCache& cache) {
  if (!contains(sigma, phi) || phi == sigma) return false;
  if (mobius(sigma, phi, cache) != 0) return false;
  return find_sigma_core(phi, sigma, registry).has_value();
}

} // namespace mobius

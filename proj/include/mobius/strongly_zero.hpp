#pragma once
// Detection of strongly-zero structure. A permutation is strongly zero when
// every permutation containing it as an interval (contiguous positions and
// contiguous values) has principal Mobius value 0. Two certificates are
// implemented: opposing adjacencies, and "nice" permutations (mu = 0 plus a
// core). The registry is the certified under-approximation of the
// strongly-zero set, built length by length.

#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include "mobius/perm.hpp"
#include "mobius/poset.hpp"

namespace mobius {

// Does pi contain a window of contiguous positions and contiguous values that
// is order-isomorphic to alpha? The improper window (pi itself) counts.
bool has_interval_copy(const Perm& pi, const Perm& alpha);

struct SZCertificate {
  enum class Kind { OpposingAdjacencies, NiceInterval };
  Kind kind;
  // OpposingAdjacencies: 1-based start positions of one up- and one down-adjacency.
  int up_pos = 0;
  int down_pos = 0;
  // NiceInterval: window [lo, hi] (1-based, inclusive) and the registered
  // nice permutation it is order-isomorphic to.
  int lo = 0;
  int hi = 0;
  Perm pattern;
};

struct NiceEntry {
  Perm perm;
  Perm core;
};

// Certified strongly-zero permutations up to max_length: all permutations
// with opposing adjacencies (implicitly), plus the registered nice members,
// each stored with a core. For the principal registry lower_bound_sigma is
// the singleton permutation; the sigma-variant registry is separate (below).
//
// Invariants: every registered member phi has mu(phi) = 0 and
// ground(cover(phi) \ {core}) inside downset(core); the member set of each
// length is closed under the 8 symmetries.
class SZRegistry {
public:
  int max_length() const { return max_length_; }
  const Perm& lower_bound_sigma() const { return sigma_; }

  const std::vector<NiceEntry>& nice_members(int length) const;
  bool is_registered(PermCode code) const;

  struct Counts {
    long long obviously_zero = 0;
    long long new_members = 0;
  };
  Counts counts(int length) const;

  // One line per registered nice member whose permutation is canonical:
  // length TAB permutation TAB core, sorted by (length, lexicographic).
  void export_members(std::ostream& out) const;

private:
  friend SZRegistry build_registry(int, MobiusCache&, int);
  int max_length_ = 0;
  Perm sigma_ = Perm::identity(1);
  std::map<int, std::vector<NiceEntry>> members_;      // sorted within length
  std::unordered_map<PermCode, Perm> registered_;      // code -> core
  std::map<int, Counts> counts_;
};

// For n = 3..max_n ascending, every length-n permutation with mu = 0 is
// classified: obviously zero when it has opposing adjacencies or an interval
// copy of a strictly shorter registered nice permutation; otherwise
// registered as a new nice member when it is nice. Within one length the
// certificate test reads only strictly-shorter registry state, so results
// are deterministic and independent of the thread count.
SZRegistry build_registry(int max_n, MobiusCache& cache, int threads = 0);

// Union of the downsets of `perms` minus every permutation the registry
// certifies strongly zero. Sorted; the empty permutation survives (it has no
// adjacencies and no windows).
std::vector<Perm> ground(const std::vector<Perm>& perms, const SZRegistry& registry);

// Some cover member psi of phi with ground(cover(phi) \ {psi}) inside
// downset(psi); lexicographically smallest when several qualify. |phi| >= 2.
std::optional<Perm> find_core(const Perm& phi, const SZRegistry& registry);

// mu(phi) = 0 and phi has a core.
bool is_nice(const Perm& phi, const SZRegistry& registry, MobiusCache& cache);

// Opposing adjacencies, or some window of pi (the improper one included) is
// order-isomorphic to a registered nice member. The witness reports which.
std::optional<SZCertificate> is_certified_strongly_zero(const Perm& pi,
                                                        const SZRegistry& registry);

enum class Category { ObviouslyZero, New, ZeroNotCertified, NonZero };

struct Classification {
  Category category;
  std::optional<SZCertificate> certificate; // ObviouslyZero
  std::optional<Perm> core;                 // New
  long long mu = 0;                         // NonZero / ZeroNotCertified / New
};

// The census taxonomy. Requires the registry to cover lengths < |pi|. The
// interval scan here uses strictly shorter patterns only: a registered
// permutation does not reclassify itself as obviously zero.
Classification classify(const Perm& pi, const SZRegistry& registry, MobiusCache& cache);

// ---------------------------------------------------------------------------
// Verification structures for the two partition arguments.

// pi = gamma with an up-adjacency inflated at gamma-position ell and a
// down-adjacency at gamma-position r (the up pair sits at pi-positions
// ell, ell+1; the down pair at r+1, r+2). The five sets partition the
// nonempty patterns of pi below pi as L u R u T with G = L n R split into
// G_gamma u G_x; each of sum(L), sum(R), sum(T), sum(G) of principal Mobius
// values is zero, and -sum(L)-sum(R)-sum(T)+sum(G) = mu(pi) = 0.
struct OpposingPartition {
  Perm gamma;
  int ell = 0;
  int r = 0;
  Perm lambda; // gamma with 12 at ell
  Perm rho;    // gamma with 21 at r
  std::vector<Perm> L, R, G_gamma, G_x, T;
  long long sum_L = 0, sum_R = 0, sum_T = 0, sum_G = 0;
};
OpposingPartition partition_opposing(const Perm& pi, int ell, int r, MobiusCache& cache);

// pi = gamma with a registered nice phi (core psi) inflated at position c.
// P is the downset of the psi-inflation; L[i] are the successive differences
// over the remaining cover members of phi (lexicographic order); R is the
// remainder of [1, pi). The sets are pairwise disjoint and exhaust the
// nonempty proper patterns of pi; every member of R contains an interval
// copy of phi.
struct NicePartition {
  Perm gamma;
  Perm phi;
  Perm core;
  std::vector<Perm> lambda_tops; // gamma with cover-member lambda_i at c
  std::vector<Perm> P;
  std::vector<std::vector<Perm>> L;
  std::vector<Perm> R;
};
NicePartition partition_nice(const Perm& pi, int c, const Perm& phi,
                             const SZRegistry& registry);

// ---------------------------------------------------------------------------
// Sigma-variants: the same machinery over the poset restricted to
// permutations containing sigma, with mu(sigma, .) in place of mu(1, .).
// When sigma is adjacency-free, the four length-4 permutations with opposing
// adjacencies (1243, 2134, 3421, 4312) are strongly zero relative to sigma
// and seed the certificate set. Rebuilt per sigma, never persisted; intended
// for verification-scale use.

class SigmaRegistry {
public:
  const Perm& sigma() const { return sigma_; }
  int max_length() const { return max_length_; }
  const std::vector<NiceEntry>& nice_members(int length) const;
  bool is_registered(PermCode code) const;
  bool seeded() const { return seeded_; } // sigma adjacency-free

private:
  friend SigmaRegistry build_sigma_registry(const Perm&, int, MobiusCache&);
  Perm sigma_;
  bool seeded_ = false;
  int max_length_ = 0;
  std::map<int, std::vector<NiceEntry>> members_;
  std::unordered_map<PermCode, Perm> registered_;
};

SigmaRegistry build_sigma_registry(const Perm& sigma, int max_n, MobiusCache& cache);

// Opposing-adjacency seed members (when seeded) or registered sigma-nice
// members matched as interval copies, improper window included.
std::optional<SZCertificate> sigma_certified_strongly_zero(const Perm& pi,
                                                           const SigmaRegistry& registry);

// Union of sigma-closures of `perms` minus certified members. Members all
// contain sigma; there is no epsilon here.
std::vector<Perm> sigma_ground(const std::vector<Perm>& perms, const Perm& sigma,
                               const SigmaRegistry& registry);

// psi in cover(phi) with sigma_ground(cover(phi) \ {psi}) inside
// sigma_closure(sigma, psi); lexicographically smallest.
std::optional<Perm> find_sigma_core(const Perm& phi, const Perm& sigma,
                                    const SigmaRegistry& registry);

// mu(sigma, phi) = 0, phi properly contains sigma, and phi has a sigma-core.
bool is_sigma_nice(const Perm& phi, const Perm& sigma, const SigmaRegistry& registry,
                   MobiusCache& cache);

} // namespace mobius

#pragma once
// Permutations in one-line notation, their symmetries and canonical forms,
// and local structure detection: adjacencies, triple adjacencies, simplicity.
//
// Conventions used across the whole library:
//   * values and positions are 1-based;
//   * the empty permutation (length 0) is a first-class value, written "e";
//   * text format: "e", digit string for length <= 9 ("346215"),
//     comma-separated values for length >= 10 ("10,2,3,...").

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mobius {

class MalformedPermutation : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Immutable permutation of {1..n}. Default-constructed value is the empty
// permutation. Ordering is (length, lexicographic), the order used whenever
// sets of permutations are materialized or serialized.
class Perm {
public:
  Perm() = default;
  explicit Perm(std::vector<int> entries); // throws MalformedPermutation
  static Perm identity(int n);

  int size() const { return static_cast<int>(v_.size()); }
  bool is_empty() const { return v_.empty(); }
  int at(int pos) const; // 1-based; throws std::out_of_range
  const std::vector<int>& entries() const { return v_; }

  bool operator==(const Perm&) const = default;
  bool operator<(const Perm& o) const {
    if (v_.size() != o.v_.size()) return v_.size() < o.v_.size();
    return v_ < o.v_;
  }

private:
  std::vector<int> v_;
};

Perm parse_perm(const std::string& text); // throws MalformedPermutation
std::string format_perm(const Perm& p);

// The order-8 symmetry group generated by reverse, complement, inverse.
Perm reverse(const Perm& p);
Perm complement(const Perm& p);
Perm inverse(const Perm& p);

struct SymmetryOrbit {
  std::vector<Perm> images; // distinct, sorted ascending; size divides 8
  Perm canonical;           // lexicographically smallest image
};
SymmetryOrbit symmetry_orbit(const Perm& p);
Perm canonical_form(const Perm& p);

// up at i:   p[i+1] == p[i] + 1 (the pair is an ascending length-2 interval)
// down at i: p[i+1] == p[i] - 1
// triple at i: positions i, i+1, i+2 form a monotone contiguous-value run,
// i.e. i and i+1 are adjacency positions of the same direction.
struct AdjacencyProfile {
  std::vector<int> up_positions;
  std::vector<int> down_positions;
  std::vector<int> triple_positions;
};
AdjacencyProfile adjacency_profile(const Perm& p);
bool has_opposing_adjacencies(const Perm& p); // >=1 up and >=1 down
bool has_triple_adjacency(const Perm& p);
bool is_adjacency_free(const Perm& p);

// True iff no window of length 2..n-1 has contiguous values (O(n^2) scan).
// Length 0..2 permutations are simple (no proper window lengths exist).
bool is_simple(const Perm& p);

// ---------------------------------------------------------------------------
// Packed codes, the engine's working representation.
//
// A permutation of length n <= 15 packs into a uint64, one value per nibble,
// first entry in the most significant nibble, unused low nibbles zero. The
// empty permutation is 0. Within a fixed length, integer comparison of codes
// is lexicographic comparison of permutations.

using PermCode = std::uint64_t;
inline constexpr int kMaxEncodedLength = 15;

PermCode encode(const Perm& p);            // throws std::domain_error if n > 15
PermCode encode_entries(const int* a, int n);
Perm decode(PermCode c);
int code_length(PermCode c);
PermCode canonical_code(PermCode c); // lex-min over the 8 symmetry images

} // namespace mobius

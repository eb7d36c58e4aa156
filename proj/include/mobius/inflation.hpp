#pragma once
// Inflation of a skeleton permutation by parts (empty parts delete points),
// the inflate-at-positions shorthand, inflation/witness set enumeration, and
// the unique substitution decomposition into a simple skeleton.

#include <string>
#include <vector>

#include "mobius/perm.hpp"

namespace mobius {

// skeleton[parts[0], ..., parts[m-1]]; parts may be empty permutations but at
// least one must be nonempty.
struct InflationSpec {
  Perm skeleton;
  std::vector<Perm> parts;
};

// Unique decomposition: skeleton is simple, parts are nonempty, and
// inflate({skeleton, parts}) reproduces the source. When the skeleton is 12
// (respectively 21), the first part is sum- (skew-) indecomposable, which
// pins the otherwise ambiguous two-block split.
struct Decomposition {
  Perm skeleton;
  std::vector<Perm> parts;
};

// Replace each skeleton point by a block order-isomorphic to its part.
// Throws std::domain_error when |parts| != |skeleton| or all parts are empty.
Perm inflate(const InflationSpec& spec);

// inflate with part 1 at every position not listed. positions are 1-based,
// strictly increasing, within 1..|sigma| (domain error otherwise), and
// |positions| == |parts|.
Perm inflate_at(const Perm& sigma, const std::vector<int>& positions,
                const std::vector<Perm>& parts);

Decomposition decompose(const Perm& pi); // |pi| >= 1

// All distinct permutations obtained by inflating listed position j with any
// pattern of parts[j] (including the empty one) and unlisted positions with 1
// or e, excluding the all-empty selection. Sorted.
std::vector<Perm> inflation_set(const Perm& sigma,
                                const std::vector<int>& positions,
                                const std::vector<Perm>& parts);

// All inflations where `position` carries exactly alpha (alpha nonempty) and
// every other position carries 1 or e. Sorted. Every member contains an
// interval order-isomorphic to alpha.
std::vector<Perm> witness_set(const Perm& sigma, int position, const Perm& alpha);

// Text syntax: "3624715[1,12,1,1,21,1,1]" with "e" for empty parts;
// whitespace-insensitive. Parts use the digit or "e" form only (a
// comma-separated part would be ambiguous against the separator).
InflationSpec parse_inflation(const std::string& text); // throws MalformedPermutation
std::string format_inflation(const InflationSpec& spec);
std::string format_decomposition(const Decomposition& d);

} // namespace mobius

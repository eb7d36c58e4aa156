#pragma once
// Exact censuses over all permutations of each length: the proportion Z(n)
// with principal Mobius value zero, the multi-adjacency non-opposing split,
// the strongly-zero classification counts, the simple-permutation census,
// and the asymptotic lower-bound series for the strongly-zero proportion.
//
// All counts are exact integers; only display strings are decimal. Census
// loops shard the n! permutations by rank range; per-shard counters merge in
// shard order, so results are independent of the thread count.

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <string>
#include <vector>

#include "mobius/perm.hpp"
#include "mobius/poset.hpp"
#include "mobius/strongly_zero.hpp"

namespace mobius {

using Rational = boost::multiprecision::cpp_rational;

// One length's counts. Fields outside the producing table are zero.
struct CensusRow {
  int n = 0;
  long long total = 0;          // n!
  long long mu_zero = 0;        // Z table
  long long nonopp_zero = 0;    // multi-adjacency non-opposing split
  long long nonopp_nonzero = 0;
  long long obviously_zero = 0; // strongly-zero classification
  long long new_members = 0;
  long long simple_count = 0;   // simple census
};

// Z(n) = mu_zero / n! for n = 1..max_n, by exhaustive evaluation.
std::vector<CensusRow> z_table(int max_n, MobiusCache& cache, int threads = 0);

// Permutations with at least two adjacencies, all in one direction, split by
// mu = 0 vs mu != 0, for n = 4..max_n.
std::vector<CensusRow> nonopp_table(int max_n, MobiusCache& cache, int threads = 0);

// (obviously zero, new) registry counts for n = 3..max_n; the registry must
// cover max_n.
std::vector<CensusRow> sz_class_table(int max_n, const SZRegistry& registry);

// S(n) by exhaustive filtering; result[n] = S(n) for 1 <= n <= max_n
// (index 0 unused).
std::vector<long long> simple_census(int max_n, int threads = 0);

double s_plain_asymptotic(int n); // n!/e^2
double s_asymptotic(int n);       // n!/e^2 (1 - 1/n + 2/(n(n-1))), n >= 2

// (2^k - 2)/k! for k >= 2: e^2 times the limiting proportion of permutations
// whose adjacency structure is exactly k same-direction adjacencies.
Rational limit_coefficient(int k); // domain error for k < 2

// (1/e^2) * sum_{k=2..K} (2^k - 2)/k!, exact rationals with one final
// division by e^2 carried out at 50 significant digits. Increasing in K with
// limit (1 - 1/e)^2.
double asymptotic_lower_bound(int K); // K >= 2

// Finite-n lower bound for the strongly-zero proportion:
// (1/n!) * sum over k of S(n-k) * C(n-k, k) * (2^k - 2), k = 2..floor(n/2),
// keeping skeleton lengths n-k >= 4 plus the n-k = 2 term with S(2) = 2
// (skeleton lengths 1 and 3 contribute nothing). Exact rational. n >= 4.
Rational zsz_lower_bound(int n);

struct BoundSeries {
  std::map<int, Rational> terms;        // k -> (2^k - 2)/k!
  std::map<int, double> partial_sums;   // K -> bound value
  std::map<int, Rational> finite_n;     // n -> finite-n bound
};
BoundSeries bound_series(int max_k, int max_finite_n = 0);

// ---------------------------------------------------------------------------
// Table rendering. Text is the human-readable default; CSV and JSON carry
// the same rows with deterministic field order. Proportions print with
// round-half-up at the table's precision (4 decimals for Z, 2 for the
// classification percentages); the n!/e^2 row truncates toward zero at its
// printed precision (one decimal for n <= 6, integer above).

enum class TableFormat { Text, Csv, Json };

std::string render_z_table(const std::vector<CensusRow>& rows, TableFormat f);
std::string render_nonopp_table(const std::vector<CensusRow>& rows, TableFormat f);
std::string render_szclass_table(const std::vector<CensusRow>& rows, TableFormat f);
std::string render_simples_table(const std::vector<long long>& s, int max_n, TableFormat f);
std::string render_bound(const BoundSeries& series, int max_k, TableFormat f);

// Round-half-up display of num/den (both >= 0, den > 0) with `decimals`
// digits after the point.
std::string format_fixed_half_up(long long num, long long den, int decimals);

// Nonnegative double truncated toward zero at `decimals` digits (no point
// when decimals == 0); used by the n!/e^2 comparison row.
std::string format_truncated(double value, int decimals);

// Fixed-point display of a double, round to nearest.
std::string format_fixed_decimal(double value, int decimals);

long long factorial(int n); // n <= 20

} // namespace mobius

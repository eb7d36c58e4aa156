#include "mobius/census.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "unrank.hpp"

namespace mobius {

namespace {

using detail::nth_permutation;
using BigFloat = boost::multiprecision::cpp_bin_float_50;
using BigInt = boost::multiprecision::cpp_int;

// e^2 to 50 significant digits; the bound's one inexact step divides the
// exact rational series by this.
const char* const kESquared =
    "7.3890560989306502272304274605750078131803155705518";

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Counts permutations of length n accepted by `pred`, sharding the rank
// range across threads. Counters merge by addition, so the result does not
// depend on the shard count.
template <typename Pred>
long long count_perms(int n, int threads, Pred&& pred) {
  unsigned long long total = static_cast<unsigned long long>(factorial(n));
  int shards =
      static_cast<int>(std::min<unsigned long long>(resolve_threads(threads), total));
  std::vector<long long> found(shards, 0);
  auto work = [&](int shard) {
    unsigned long long lo = static_cast<unsigned long long>(
        static_cast<unsigned __int128>(total) * shard / shards);
    unsigned long long hi = static_cast<unsigned long long>(
        static_cast<unsigned __int128>(total) * (shard + 1) / shards);
    std::vector<int> v = nth_permutation(n, lo);
    for (unsigned long long r = lo; r < hi;
         ++r, std::next_permutation(v.begin(), v.end()))
      if (pred(v)) ++found[shard];
  };
  if (shards == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int s = 0; s < shards; ++s) pool.emplace_back(work, s);
    for (auto& t : pool) t.join();
  }
  long long sum = 0;
  for (long long f : found) sum += f;
  return sum;
}

BigInt big_factorial(int n) {
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long b = 1;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

BigFloat to_bigfloat(const Rational& q) {
  return BigFloat(boost::multiprecision::numerator(q)) /
         BigFloat(boost::multiprecision::denominator(q));
}

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c) out += ',';
      out += cells[c];
    }
    out += '\n';
  };
  emit(header);
  for (const auto& r : rows) emit(r);
  return out;
}

std::string text_table(const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size(); ++c)
      width[c] = std::max(width[c], r[c].size());
  std::string out;
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c) out += "  ";
      out.append(width[c] - cells[c].size(), ' ');
      out += cells[c];
    }
    out += '\n';
  };
  emit(header);
  for (const auto& r : rows) emit(r);
  return out;
}

std::string finish(const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows,
                   TableFormat f) {
  return f == TableFormat::Csv ? csv_table(header, rows)
                               : text_table(header, rows);
}

std::string json_dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

} // namespace

long long factorial(int n) {
  if (n < 0 || n > 20)
    throw std::domain_error("factorial: argument must be in [0, 20]");
  long long f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

std::vector<CensusRow> z_table(int max_n, MobiusCache& cache, int threads) {
  if (max_n < 1) throw std::domain_error("z_table: max_n must be >= 1");
  ensure_principal(max_n, cache, threads);
  std::vector<CensusRow> rows;
  for (int n = 1; n <= max_n; ++n) {
    CensusRow row;
    row.n = n;
    row.total = factorial(n);
    row.mu_zero = count_perms(n, threads, [&](const std::vector<int>& v) {
      return principal_mobius(Perm{std::vector<int>(v)}, cache) == 0;
    });
    rows.push_back(row);
  }
  return rows;
}

std::vector<CensusRow> nonopp_table(int max_n, MobiusCache& cache, int threads) {
  ensure_principal(std::max(max_n, 1), cache, threads);
  std::vector<CensusRow> rows;
  for (int n = 4; n <= max_n; ++n) {
    CensusRow row;
    row.n = n;
    row.total = factorial(n);
    auto one_direction_multi = [](const Perm& p) {
      AdjacencyProfile prof = adjacency_profile(p);
      std::size_t ups = prof.up_positions.size();
      std::size_t downs = prof.down_positions.size();
      return ups + downs >= 2 && (ups == 0 || downs == 0);
    };
    row.nonopp_zero = count_perms(n, threads, [&](const std::vector<int>& v) {
      Perm p{std::vector<int>(v)};
      return one_direction_multi(p) && principal_mobius(p, cache) == 0;
    });
    row.nonopp_nonzero = count_perms(n, threads, [&](const std::vector<int>& v) {
      Perm p{std::vector<int>(v)};
      return one_direction_multi(p) && principal_mobius(p, cache) != 0;
    });
    rows.push_back(row);
  }
  return rows;
}

std::vector<CensusRow> sz_class_table(int max_n, const SZRegistry& registry) {
  if (registry.max_length() < max_n)
    throw std::domain_error("sz_class_table: registry does not cover length " +
                            std::to_string(max_n));
  std::vector<CensusRow> rows;
  for (int n = 3; n <= max_n; ++n) {
    CensusRow row;
    row.n = n;
    row.total = factorial(n);
    SZRegistry::Counts c = registry.counts(n);
    row.obviously_zero = c.obviously_zero;
    row.new_members = c.new_members;
    rows.push_back(row);
  }
  return rows;
}

std::vector<long long> simple_census(int max_n, int threads) {
  if (max_n < 1) throw std::domain_error("simple_census: max_n must be >= 1");
  std::vector<long long> result(static_cast<std::size_t>(max_n) + 1, 0);
  for (int n = 1; n <= max_n; ++n)
    result[static_cast<std::size_t>(n)] =
        count_perms(n, threads, [](const std::vector<int>& v) {
          return is_simple(Perm{std::vector<int>(v)});
        });
  return result;
}

double s_plain_asymptotic(int n) {
  if (n < 1) throw std::domain_error("s_plain_asymptotic: n must be >= 1");
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f / std::exp(2.0);
}

double s_asymptotic(int n) {
  if (n < 2) throw std::domain_error("s_asymptotic: n must be >= 2");
  return s_plain_asymptotic(n) *
         (1.0 - 1.0 / n + 2.0 / (static_cast<double>(n) * (n - 1)));
}

Rational limit_coefficient(int k) {
  if (k < 2) throw std::domain_error("limit_coefficient: k must be >= 2");
  return Rational((BigInt(1) << k) - 2, big_factorial(k));
}

double asymptotic_lower_bound(int K) {
  if (K < 2) throw std::domain_error("asymptotic_lower_bound: K must be >= 2");
  Rational sum = 0;
  for (int k = 2; k <= K; ++k) sum += limit_coefficient(k);
  BigFloat value = to_bigfloat(sum) / BigFloat(kESquared);
  return value.convert_to<double>();
}

Rational zsz_lower_bound(int n) {
  if (n < 4) throw std::domain_error("zsz_lower_bound: n must be >= 4");
  std::vector<long long> simples = simple_census(n - 2);
  Rational sum = 0;
  for (int k = 2; k <= n / 2; ++k) {
    int m = n - k;  // skeleton length; 1 and 3 admit no contributing skeleton
    if (m != 2 && m < 4) continue;
    sum += Rational(simples[static_cast<std::size_t>(m)]) * binomial(m, k) *
           ((1LL << k) - 2);
  }
  return sum / factorial(n);
}

BoundSeries bound_series(int max_k, int max_finite_n) {
  if (max_k < 2) throw std::domain_error("bound_series: max_k must be >= 2");
  BoundSeries series;
  BigFloat e2(kESquared);
  Rational sum = 0;
  for (int k = 2; k <= max_k; ++k) {
    series.terms[k] = limit_coefficient(k);
    sum += series.terms[k];
    series.partial_sums[k] = (to_bigfloat(sum) / e2).convert_to<double>();
  }
  for (int n = 4; n <= max_finite_n; ++n) series.finite_n[n] = zsz_lower_bound(n);
  return series;
}

std::string render_z_table(const std::vector<CensusRow>& rows, TableFormat f) {
  if (f == TableFormat::Json) {
    nlohmann::ordered_json j;
    j["table"] = "z";
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : rows)
      j["rows"].push_back({{"n", r.n},
                           {"total", r.total},
                           {"mu_zero", r.mu_zero},
                           {"Z", format_fixed_half_up(r.mu_zero, r.total, 4)}});
    return json_dump(j);
  }
  std::vector<std::string> header{"n", "total", "mu_zero", "Z(n)"};
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : rows)
    cells.push_back({std::to_string(r.n), std::to_string(r.total),
                     std::to_string(r.mu_zero),
                     format_fixed_half_up(r.mu_zero, r.total, 4)});
  return finish(header, cells, f);
}

std::string render_nonopp_table(const std::vector<CensusRow>& rows, TableFormat f) {
  if (f == TableFormat::Json) {
    nlohmann::ordered_json j;
    j["table"] = "nonopp";
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : rows)
      j["rows"].push_back({{"length", r.n},
                           {"mu_zero", r.nonopp_zero},
                           {"mu_nonzero", r.nonopp_nonzero}});
    return json_dump(j);
  }
  std::vector<std::string> header{"length", "mu_zero", "mu_nonzero"};
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : rows)
    cells.push_back({std::to_string(r.n), std::to_string(r.nonopp_zero),
                     std::to_string(r.nonopp_nonzero)});
  return finish(header, cells, f);
}

std::string render_szclass_table(const std::vector<CensusRow>& rows, TableFormat f) {
  if (f == TableFormat::Json) {
    nlohmann::ordered_json j;
    j["table"] = "szclass";
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : rows)
      j["rows"].push_back(
          {{"length", r.n},
           {"obviously_zero", r.obviously_zero},
           {"obviously_zero_pct",
            format_fixed_half_up(r.obviously_zero * 100, r.total, 2)},
           {"new", r.new_members},
           {"new_pct", format_fixed_half_up(r.new_members * 100, r.total, 2)}});
    return json_dump(j);
  }
  std::vector<std::string> header{"length", "obviously_zero",
                                  "obviously_zero_pct", "new", "new_pct"};
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : rows)
    cells.push_back({std::to_string(r.n), std::to_string(r.obviously_zero),
                     format_fixed_half_up(r.obviously_zero * 100, r.total, 2),
                     std::to_string(r.new_members),
                     format_fixed_half_up(r.new_members * 100, r.total, 2)});
  return finish(header, cells, f);
}

std::string render_simples_table(const std::vector<long long>& s, int max_n,
                                 TableFormat f) {
  if (max_n < 1 || static_cast<std::size_t>(max_n) >= s.size())
    throw std::domain_error("render_simples_table: census shorter than max_n");
  auto asym = [](int n) {
    return format_truncated(s_plain_asymptotic(n), n <= 6 ? 1 : 0);
  };
  if (f == TableFormat::Json) {
    nlohmann::ordered_json j;
    j["table"] = "simples";
    j["rows"] = nlohmann::ordered_json::array();
    for (int n = 1; n <= max_n; ++n)
      j["rows"].push_back({{"n", n},
                           {"simple_count", s[static_cast<std::size_t>(n)]},
                           {"asymptotic", asym(n)}});
    return json_dump(j);
  }
  std::vector<std::string> header{"n", "simple_count", "asymptotic"};
  std::vector<std::vector<std::string>> cells;
  for (int n = 1; n <= max_n; ++n)
    cells.push_back({std::to_string(n),
                     std::to_string(s[static_cast<std::size_t>(n)]), asym(n)});
  return finish(header, cells, f);
}

std::string render_bound(const BoundSeries& series, int max_k, TableFormat f) {
  if (f == TableFormat::Json) {
    nlohmann::ordered_json j;
    j["table"] = "bound";
    j["rows"] = nlohmann::ordered_json::array();
    for (int k = 2; k <= max_k; ++k)
      j["rows"].push_back(
          {{"k", k},
           {"term", series.terms.at(k).str()},
           {"partial_sum", format_fixed_decimal(series.partial_sums.at(k), 10)}});
    return json_dump(j);
  }
  std::vector<std::string> header{"k", "term", "partial_sum"};
  std::vector<std::vector<std::string>> cells;
  for (int k = 2; k <= max_k; ++k)
    cells.push_back({std::to_string(k), series.terms.at(k).str(),
                     format_fixed_decimal(series.partial_sums.at(k), 10)});
  return finish(header, cells, f);
}

std::string format_fixed_half_up(long long num, long long den, int decimals) {
  if (num < 0 || den <= 0 || decimals < 0)
    throw std::domain_error("format_fixed_half_up: bad arguments");
  long long scale = 1;
  for (int i = 0; i < decimals; ++i) scale *= 10;
  if (num > std::numeric_limits<long long>::max() / (2 * scale))
    throw std::overflow_error("format_fixed_half_up: numerator too large");
  long long q = (2 * num * scale + den) / (2 * den);
  if (decimals == 0) return std::to_string(q);
  std::string frac = std::to_string(q % scale);
  frac.insert(frac.begin(), static_cast<std::size_t>(decimals) - frac.size(), '0');
  return std::to_string(q / scale) + "." + frac;
}

std::string format_truncated(double value, int decimals) {
  if (value < 0 || decimals < 0)
    throw std::domain_error("format_truncated: bad arguments");
  long long scale = 1;
  for (int i = 0; i < decimals; ++i) scale *= 10;
  long long t = static_cast<long long>(value * static_cast<double>(scale));
  if (decimals == 0) return std::to_string(t);
  std::string frac = std::to_string(t % scale);
  frac.insert(frac.begin(), static_cast<std::size_t>(decimals) - frac.size(), '0');
  return std::to_string(t / scale) + "." + frac;
}

std::string format_fixed_decimal(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

} // namespace mobius

#include "mobius/inflation.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "mobius/poset.hpp"

namespace mobius {

namespace {

std::vector<int> reduce_window(const std::vector<int>& v, int lo, int hi) {
  std::vector<int> w(v.begin() + lo, v.begin() + hi + 1);
  std::vector<int> sorted = w;
  std::sort(sorted.begin(), sorted.end());
  for (int& x : w)
    x = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), x) -
                         sorted.begin()) +
        1;
  return w;
}

void check_positions(const Perm& sigma, const std::vector<int>& positions,
                     std::size_t part_count) {
  if (positions.size() != part_count)
    throw std::domain_error("positions and parts differ in length");
  int prev = 0;
  for (int p : positions) {
    if (p < 1 || p > sigma.size())
      throw std::domain_error("position " + std::to_string(p) + " out of range");
    if (p <= prev) throw std::domain_error("positions must be strictly increasing");
    prev = p;
  }
}

std::vector<Perm> full_parts(const Perm& sigma, const std::vector<int>& positions,
                             const std::vector<Perm>& parts) {
  std::vector<Perm> all(sigma.size(), Perm::identity(1));
  for (std::size_t j = 0; j < positions.size(); ++j) all[positions[j] - 1] = parts[j];
  return all;
}

} // namespace

Perm inflate(const InflationSpec& spec) {
  const int n = spec.skeleton.size();
  if (static_cast<int>(spec.parts.size()) != n)
    throw std::domain_error("inflation needs one part per skeleton point");
  bool nonempty = false;
  for (const Perm& p : spec.parts) nonempty |= !p.is_empty();
  if (!nonempty) throw std::domain_error("inflation needs at least one nonempty part");

  // value base for point i: total size of parts at points with smaller value
  std::vector<int> base(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (spec.skeleton.entries()[j] < spec.skeleton.entries()[i])
        base[i] += spec.parts[j].size();

  std::vector<int> out;
  for (int i = 0; i < n; ++i)
    for (int x : spec.parts[i].entries()) out.push_back(base[i] + x);
  return Perm{std::move(out)};
}

Perm inflate_at(const Perm& sigma, const std::vector<int>& positions,
                const std::vector<Perm>& parts) {
  check_positions(sigma, positions, parts.size());
  return inflate({sigma, full_parts(sigma, positions, parts)});
}

Decomposition decompose(const Perm& pi) {
  const int n = pi.size();
  if (n < 1) throw std::domain_error("cannot decompose the empty permutation");
  const auto& v = pi.entries();
  if (n == 1) return {Perm::identity(1), {Perm::identity(1)}};

  // sum: shortest prefix on values 1..k makes the first part sum-indecomposable
  for (int k = 1; k < n; ++k) {
    int mx = *std::max_element(v.begin(), v.begin() + k);
    if (mx == k)
      return {parse_perm("12"),
              {Perm{reduce_window(v, 0, k - 1)}, Perm{reduce_window(v, k, n - 1)}}};
  }
  // skew: shortest prefix on values n-k+1..n
  for (int k = 1; k < n; ++k) {
    int mn = *std::min_element(v.begin(), v.begin() + k);
    if (mn == n - k + 1)
      return {parse_perm("21"),
              {Perm{reduce_window(v, 0, k - 1)}, Perm{reduce_window(v, k, n - 1)}}};
  }

  // neither: the maximal proper intervals are disjoint and cover the
  // positions, so the greedy longest-proper-interval scan finds the blocks
  std::vector<Perm> parts;
  std::vector<int> mins;
  int i = 0;
  while (i < n) {
    int lo = v[i], hi = v[i], best = i;
    for (int j = i + 1; j < n; ++j) {
      lo = std::min(lo, v[j]);
      hi = std::max(hi, v[j]);
      if (j - i + 1 == n) break; // the improper window is not a block
      if (hi - lo + 1 == j - i + 1) best = j;
    }
    parts.push_back(Perm{reduce_window(v, i, best)});
    int m = v[i];
    for (int j = i; j <= best; ++j) m = std::min(m, v[j]);
    mins.push_back(m);
    i = best + 1;
  }
  std::vector<int> sorted = mins;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> skel;
  for (int m : mins)
    skel.push_back(
        static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), m) - sorted.begin()) +
        1);
  return {Perm{std::move(skel)}, std::move(parts)};
}

std::vector<Perm> inflation_set(const Perm& sigma, const std::vector<int>& positions,
                                const std::vector<Perm>& parts) {
  check_positions(sigma, positions, parts.size());
  const int n = sigma.size();
  std::vector<std::vector<Perm>> choices(n, {Perm::identity(1), Perm{}});
  for (std::size_t j = 0; j < positions.size(); ++j)
    choices[positions[j] - 1] = downset(parts[j]);

  std::set<Perm> out;
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    std::vector<Perm> sel;
    bool nonempty = false;
    for (int i = 0; i < n; ++i) {
      sel.push_back(choices[i][idx[i]]);
      nonempty |= !sel.back().is_empty();
    }
    if (nonempty) out.insert(inflate({sigma, sel}));
    int j = n - 1;
    while (j >= 0 && idx[j] + 1 == choices[j].size()) idx[j--] = 0;
    if (j < 0) break;
    ++idx[j];
  }
  return {out.begin(), out.end()};
}

std::vector<Perm> witness_set(const Perm& sigma, int position, const Perm& alpha) {
  if (alpha.is_empty()) throw std::domain_error("witness pattern must be nonempty");
  check_positions(sigma, {position}, 1);
  const int n = sigma.size();
  std::set<Perm> out;
  for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
    std::vector<Perm> sel;
    int bit = 0;
    for (int i = 0; i < n; ++i) {
      if (i == position - 1)
        sel.push_back(alpha);
      else
        sel.push_back((mask >> bit++ & 1) ? Perm::identity(1) : Perm{});
    }
    out.insert(inflate({sigma, sel}));
  }
  return {out.begin(), out.end()};
}

namespace {

Perm parse_part(const std::string& tok, const std::string& whole) {
  if (tok.empty())
    throw MalformedPermutation("empty part in inflation '" + whole + "'");
  if (tok == "e") return Perm{};
  return parse_perm(tok);
}

} // namespace

InflationSpec parse_inflation(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  auto open = s.find('[');
  if (open == std::string::npos || open == 0)
    throw MalformedPermutation("expected skeleton[parts] in '" + text + "'");
  if (s.back() != ']' || s.find(']') != s.size() - 1)
    throw MalformedPermutation("expected closing bracket at end of '" + text + "'");
  InflationSpec spec;
  spec.skeleton = parse_perm(s.substr(0, open));
  std::string inner = s.substr(open + 1, s.size() - open - 2);
  std::string tok;
  for (char c : inner) {
    if (c == ',') {
      spec.parts.push_back(parse_part(tok, text));
      tok.clear();
    } else {
      tok.push_back(c);
    }
  }
  spec.parts.push_back(parse_part(tok, text));
  return spec;
}

std::string format_inflation(const InflationSpec& spec) {
  std::string out = format_perm(spec.skeleton);
  out.push_back('[');
  for (std::size_t i = 0; i < spec.parts.size(); ++i) {
    if (i) out.push_back(',');
    out += format_perm(spec.parts[i]);
  }
  out.push_back(']');
  return out;
}

std::string format_decomposition(const Decomposition& d) {
  return format_inflation({d.skeleton, d.parts});
}

} // namespace mobius

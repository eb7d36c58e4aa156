#include "mobius/perm.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>

namespace mobius {

namespace {

[[noreturn]] void malformed(const std::string& msg) { throw MalformedPermutation(msg); }

void validate(const std::vector<int>& v) {
  const int n = static_cast<int>(v.size());
  std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
  for (int x : v) {
    if (x < 1 || x > n)
      malformed("value " + std::to_string(x) + " out of range 1.." + std::to_string(n));
    if (seen[x]) malformed("value " + std::to_string(x) + " repeats");
    seen[x] = 1;
  }
}

} // namespace

Perm::Perm(std::vector<int> entries) : v_(std::move(entries)) { validate(v_); }

Perm Perm::identity(int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i + 1;
  Perm p;
  p.v_ = std::move(v);
  return p;
}

int Perm::at(int pos) const {
  if (pos < 1 || pos > size()) throw std::out_of_range("position " + std::to_string(pos));
  return v_[pos - 1];
}

Perm parse_perm(const std::string& text) {
  std::string s;
  s.reserve(text.size());
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) malformed("empty permutation text");
  if (s == "e") return Perm{};

  std::vector<int> v;
  if (s.find(',') != std::string::npos) {
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
        malformed("bad entry '" + tok + "' in '" + text + "'");
      v.push_back(std::stoi(tok));
    }
    if (s.back() == ',') malformed("trailing comma in '" + text + "'");
  } else {
    for (char c : s) {
      if (!std::isdigit(static_cast<unsigned char>(c)))
        malformed("bad character '" + std::string(1, c) + "' in '" + text + "'");
      v.push_back(c - '0');
    }
  }
  return Perm{std::move(v)};
}

std::string format_perm(const Perm& p) {
  if (p.is_empty()) return "e";
  std::string out;
  const bool digits = p.size() <= 9;
  for (int i = 0; i < p.size(); ++i) {
    if (i && !digits) out.push_back(',');
    out += std::to_string(p.entries()[i]);
  }
  return out;
}

Perm reverse(const Perm& p) {
  std::vector<int> v(p.entries().rbegin(), p.entries().rend());
  return Perm{std::move(v)};
}

Perm complement(const Perm& p) {
  const int n = p.size();
  std::vector<int> v(p.entries());
  for (int& x : v) x = n + 1 - x;
  return Perm{std::move(v)};
}

Perm inverse(const Perm& p) {
  std::vector<int> v(p.size());
  for (int i = 0; i < p.size(); ++i) v[p.entries()[i] - 1] = i + 1;
  return Perm{std::move(v)};
}

SymmetryOrbit symmetry_orbit(const Perm& p) {
  std::vector<Perm> images;
  for (const Perm& base : {p, inverse(p)}) {
    images.push_back(base);
    images.push_back(reverse(base));
    images.push_back(complement(base));
    images.push_back(reverse(complement(base)));
  }
  std::sort(images.begin(), images.end());
  images.erase(std::unique(images.begin(), images.end()), images.end());
  return {images, images.empty() ? Perm{} : images.front()};
}

Perm canonical_form(const Perm& p) { return symmetry_orbit(p).canonical; }

AdjacencyProfile adjacency_profile(const Perm& p) {
  AdjacencyProfile a;
  const auto& v = p.entries();
  for (int i = 0; i + 1 < p.size(); ++i) {
    if (v[i + 1] == v[i] + 1) a.up_positions.push_back(i + 1);
    if (v[i + 1] == v[i] - 1) a.down_positions.push_back(i + 1);
  }
  for (const auto* dir : {&a.up_positions, &a.down_positions})
    for (std::size_t j = 0; j + 1 < dir->size(); ++j)
      if ((*dir)[j + 1] == (*dir)[j] + 1) a.triple_positions.push_back((*dir)[j]);
  std::sort(a.triple_positions.begin(), a.triple_positions.end());
  return a;
}

bool has_opposing_adjacencies(const Perm& p) {
  bool up = false, down = false;
  const auto& v = p.entries();
  for (int i = 0; i + 1 < p.size(); ++i) {
    up |= v[i + 1] == v[i] + 1;
    down |= v[i + 1] == v[i] - 1;
  }
  return up && down;
}

bool has_triple_adjacency(const Perm& p) {
  const auto& v = p.entries();
  for (int i = 0; i + 2 < p.size(); ++i) {
    if (v[i + 1] == v[i] + 1 && v[i + 2] == v[i] + 2) return true;
    if (v[i + 1] == v[i] - 1 && v[i + 2] == v[i] - 2) return true;
  }
  return false;
}

bool is_adjacency_free(const Perm& p) {
  const auto& v = p.entries();
  for (int i = 0; i + 1 < p.size(); ++i)
    if (v[i + 1] == v[i] + 1 || v[i + 1] == v[i] - 1) return false;
  return true;
}

bool is_simple(const Perm& p) {
  const int n = p.size();
  const auto& v = p.entries();
  for (int i = 0; i < n; ++i) {
    int lo = v[i], hi = v[i];
    for (int j = i + 1; j < n; ++j) {
      lo = std::min(lo, v[j]);
      hi = std::max(hi, v[j]);
      const int len = j - i + 1;
      if (len == n) break;
      if (hi - lo + 1 == len) return false;
    }
  }
  return true;
}

PermCode encode_entries(const int* a, int n) {
  if (n > kMaxEncodedLength) throw std::domain_error("length above 15 cannot be encoded");
  PermCode c = 0;
  for (int k = 0; k < n; ++k) c |= static_cast<PermCode>(a[k]) << (4 * (15 - k));
  return c;
}

PermCode encode(const Perm& p) { return encode_entries(p.entries().data(), p.size()); }

int code_length(PermCode c) {
  int n = 0;
  while (n < kMaxEncodedLength && ((c >> (4 * (15 - n))) & 0xF) != 0) ++n;
  return n;
}

Perm decode(PermCode c) {
  const int n = code_length(c);
  std::vector<int> v(n);
  for (int k = 0; k < n; ++k) v[k] = static_cast<int>((c >> (4 * (15 - k))) & 0xF);
  return Perm{std::move(v)};
}

PermCode canonical_code(PermCode c) {
  const int n = code_length(c);
  if (n <= 1) return c;
  int a[16], b[16];
  for (int k = 0; k < n; ++k) a[k] = static_cast<int>((c >> (4 * (15 - k))) & 0xF);
  PermCode best = c;
  for (int use_inverse = 0; use_inverse < 2; ++use_inverse) {
    const int* base = a;
    if (use_inverse) {
      for (int k = 0; k < n; ++k) b[a[k] - 1] = k + 1;
      base = b;
    }
    int img[16];
    for (int rev = 0; rev < 2; ++rev)
      for (int comp = 0; comp < 2; ++comp) {
        for (int k = 0; k < n; ++k) {
          int x = base[rev ? n - 1 - k : k];
          img[k] = comp ? n + 1 - x : x;
        }
        best = std::min(best, encode_entries(img, n));
      }
  }
  return best;
}

} // namespace mobius

#include "doctest.h"

#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "mobius/inflation.hpp"
#include "mobius/perm.hpp"
#include "mobius/poset.hpp"
#include "mobius/strongly_zero.hpp"
#include "oracle.hpp"

using namespace mobius;

namespace {
Perm P(const std::string& s) { return parse_perm(s); }

std::set<Perm> S(std::initializer_list<const char*> xs) {
  std::set<Perm> out;
  for (const char* x : xs) out.insert(parse_perm(x));
  return out;
}

std::set<Perm> as_set(const std::vector<Perm>& v) {
  return std::set<Perm>(v.begin(), v.end());
}

std::set<Perm> member_set(const SZRegistry& reg, int n) {
  std::set<Perm> out;
  for (const auto& e : reg.nice_members(n)) out.insert(e.perm);
  return out;
}

long long sum_mu(const std::vector<Perm>& v, MobiusCache& cache) {
  long long s = 0;
  for (const Perm& p : v) s += principal_mobius(p, cache);
  return s;
}
} // namespace

TEST_CASE("interval copy detection") {
  CHECK(has_interval_copy(P("1234"), P("123")));
  CHECK(has_interval_copy(P("1432"), P("321")));
  CHECK(has_interval_copy(P("123"), P("123")));  // the whole window counts
  CHECK(!has_interval_copy(P("2413"), P("12")));
  CHECK(!has_interval_copy(P("12453"), P("123")));
  CHECK(has_interval_copy(P("213546"), P("21354")));
  CHECK(has_interval_copy(P("2457613"), P("1243")));
}

TEST_CASE("registry build counts per length") {
  MobiusCache cache;
  SZRegistry reg = build_registry(5, cache);
  CHECK(reg.max_length() == 5);
  CHECK(reg.lower_bound_sigma() == P("1"));
  CHECK(reg.counts(3).obviously_zero == 0);
  CHECK(reg.counts(3).new_members == 2);
  CHECK(reg.counts(4).obviously_zero == 10);
  CHECK(reg.counts(4).new_members == 0);
  CHECK(reg.counts(5).obviously_zero == 40);
  CHECK(reg.counts(5).new_members == 10);
}

TEST_CASE("registered nice members at small lengths") {
  MobiusCache cache;
  SZRegistry reg = build_registry(5, cache);
  CHECK(member_set(reg, 3) == S({"123", "321"}));
  CHECK(member_set(reg, 4).empty());
  // length 5: the symmetry class of 12453 (8 members) plus that of 45312 (2)
  CHECK(member_set(reg, 5) ==
        S({"12453", "35421", "54213", "31245", "12534", "43521", "54132", "23145",
           "45312", "21354"}));
  // closed under the eight symmetries, and every stored core covers its member
  for (int n = 3; n <= 5; ++n) {
    auto members = member_set(reg, n);
    for (const auto& e : reg.nice_members(n)) {
      for (const Perm& im : symmetry_orbit(e.perm).images) CHECK(members.count(im) == 1);
      auto cov = cover(e.perm);
      CHECK(std::find(cov.begin(), cov.end(), e.core) != cov.end());
      CHECK(reg.is_registered(encode(e.perm)));
    }
  }
  CHECK(!reg.is_registered(encode(P("2413"))));
}

TEST_CASE("ground removes certified strongly-zero permutations") {
  MobiusCache cache;
  SZRegistry reg = build_registry(5, cache);
  CHECK(ground({P("1243"), P("2134")}, reg) ==
        std::vector<Perm>{Perm{}, P("1"), P("12"), P("21"), P("132"), P("213")});
  CHECK(ground({P("123")}, reg) == std::vector<Perm>{Perm{}, P("1"), P("12")});
  CHECK(ground({}, reg).empty());
  // 21354 is itself registered, so it drops out of its own ground;
  // the uncertified cover member 2143 survives
  CHECK(as_set(ground({P("21354")}, reg)) ==
        S({"2143", "132", "213", "12", "21", "1", "e"}));
}

TEST_CASE("find_core") {
  MobiusCache cache;
  SZRegistry reg = build_registry(5, cache);
  CHECK(find_core(P("21354"), reg) == P("2143"));
  CHECK(find_core(P("123"), reg) == P("12"));
  CHECK(find_core(P("12453"), reg) == P("1342"));
  CHECK(find_core(P("1234"), reg) == P("123"));
  CHECK(!find_core(P("256143"), reg).has_value());
}

TEST_CASE("is_nice") {
  MobiusCache cache;
  SZRegistry reg = build_registry(5, cache);
  CHECK(is_nice(P("21354"), reg, cache));
  CHECK(is_nice(P("12453"), reg, cache));
  CHECK(is_nice(P("1234"), reg, cache));  // nice and also obviously zero
  CHECK(!is_nice(P("256143"), reg, cache));
  CHECK(!is_nice(P("132"), reg, cache));  // mu = 1
  CHECK(!is_nice(P("2413"), reg, cache)); // mu = -3
}

TEST_CASE("is_certified_strongly_zero") {
  MobiusCache cache;
  SZRegistry reg = build_registry(5, cache);

  auto c = is_certified_strongly_zero(P("1243"), reg);
  REQUIRE(c.has_value());
  CHECK(c->kind == SZCertificate::Kind::OpposingAdjacencies);
  CHECK(c->up_pos == 1);
  CHECK(c->down_pos == 3);

  c = is_certified_strongly_zero(P("1234"), reg);
  REQUIRE(c.has_value());
  CHECK(c->kind == SZCertificate::Kind::NiceInterval);
  CHECK(c->pattern == P("123"));
  CHECK(c->lo == 1);
  CHECK(c->hi == 3);

  c = is_certified_strongly_zero(P("1432"), reg);
  REQUIRE(c.has_value());
  CHECK(c->kind == SZCertificate::Kind::NiceInterval);
  CHECK(c->pattern == P("321"));
  CHECK(c->lo == 2);
  CHECK(c->hi == 4);

  // registered members certify themselves through the whole-window match
  c = is_certified_strongly_zero(P("12453"), reg);
  REQUIRE(c.has_value());
  CHECK(c->kind == SZCertificate::Kind::NiceInterval);
  CHECK(c->pattern == P("12453"));
  CHECK(c->lo == 1);
  CHECK(c->hi == 5);

  // 21354 is itself registered, so the whole-window rule applies to it too
  c = is_certified_strongly_zero(P("21354"), reg);
  REQUIRE(c.has_value());
  CHECK(c->kind == SZCertificate::Kind::NiceInterval);
  CHECK(c->pattern == P("21354"));

  CHECK(!is_certified_strongly_zero(P("2413"), reg).has_value());
}

TEST_CASE("classify") {
  MobiusCache cache;
  SZRegistry reg = build_registry(5, cache);

  auto r = classify(P("1243"), reg, cache);
  CHECK(r.category == Category::ObviouslyZero);
  REQUIRE(r.certificate.has_value());
  CHECK(r.certificate->kind == SZCertificate::Kind::OpposingAdjacencies);

  r = classify(P("12453"), reg, cache);
  CHECK(r.category == Category::New);
  CHECK(r.core == P("1342"));

  r = classify(P("21354"), reg, cache);
  CHECK(r.category == Category::New);
  CHECK(r.core == P("2143"));

  r = classify(P("132"), reg, cache);
  CHECK(r.category == Category::NonZero);
  CHECK(r.mu == 1);

  r = classify(P("2413"), reg, cache);
  CHECK(r.category == Category::NonZero);
  CHECK(r.mu == -3);

  r = classify(P("1432"), reg, cache);
  CHECK(r.category == Category::ObviouslyZero);
  REQUIRE(r.certificate.has_value());
  CHECK(r.certificate->kind == SZCertificate::Kind::NiceInterval);
  CHECK(r.certificate->pattern == P("321"));

  r = classify(P("12345"), reg, cache);
  CHECK(r.category == Category::ObviouslyZero);
}

TEST_CASE("length-5 classification census") {
  MobiusCache cache;
  SZRegistry reg = build_registry(5, cache);
  std::map<Category, int> tally;
  for (const auto& v : oracle::all_perms(5)) {
    Perm p{std::vector<int>(v)};
    auto r = classify(p, reg, cache);
    ++tally[r.category];
    if (r.category == Category::New) CHECK(reg.is_registered(encode(p)));
    if (r.category == Category::ZeroNotCertified) {
      CHECK(principal_mobius(p, cache) == 0);
      CHECK(!reg.is_registered(encode(p)));
    }
  }
  CHECK(tally[Category::ObviouslyZero] == 40);
  CHECK(tally[Category::New] == 10);
  CHECK(tally[Category::ZeroNotCertified] == 8);
  CHECK(tally[Category::NonZero] == 62);
}

TEST_CASE("registry is sound and matches the published counts at length 6") {
  MobiusCache cache;
  SZRegistry reg = build_registry(6, cache);
  CHECK(reg.counts(6).obviously_zero == 258);
  CHECK(reg.counts(6).new_members == 16);
  for (int n = 3; n <= 6; ++n)
    for (const auto& v : oracle::all_perms(n)) {
      Perm p{std::vector<int>(v)};
      if (is_certified_strongly_zero(p, reg))
        CHECK(principal_mobius(p, cache) == 0);
    }
}

TEST_CASE("registry build is monotone and thread-count independent") {
  MobiusCache c1, c2, c3;
  SZRegistry reg5 = build_registry(5, c1, 1);
  SZRegistry reg5b = build_registry(5, c2, 3);
  SZRegistry reg6 = build_registry(6, c3);
  for (int n = 3; n <= 5; ++n) {
    CHECK(member_set(reg5, n) == member_set(reg5b, n));
    CHECK(member_set(reg5, n) == member_set(reg6, n));
    CHECK(reg5.counts(n).obviously_zero == reg6.counts(n).obviously_zero);
    CHECK(reg5.counts(n).new_members == reg6.counts(n).new_members);
  }
}

TEST_CASE("every registered member passes the core condition against the final registry") {
  MobiusCache cache;
  SZRegistry reg = build_registry(6, cache);
  for (int n = 3; n <= 6; ++n)
    for (const auto& e : reg.nice_members(n)) {
      CHECK(principal_mobius(e.perm, cache) == 0);
      std::vector<Perm> rest;
      for (const Perm& c : cover(e.perm))
        if (!(c == e.core)) rest.push_back(c);
      auto g = ground(rest, reg);
      auto down = downset(e.core);
      std::set<Perm> downs(down.begin(), down.end());
      downs.insert(Perm{});
      for (const Perm& x : g) CHECK(downs.count(x) == 1);
    }
}

TEST_CASE("registry export format") {
  MobiusCache cache;
  SZRegistry reg = build_registry(5, cache);
  std::ostringstream out;
  reg.export_members(out);
  CHECK(out.str() == "3\t123\t12\n5\t12453\t1342\n5\t21354\t2143\n");
}

TEST_CASE("opposing-adjacency partition of 53128746") {
  MobiusCache cache;
  auto part = partition_opposing(P("53128746"), 3, 4, cache);
  CHECK(part.gamma == P("421635"));
  CHECK(part.ell == 3);
  CHECK(part.r == 4);
  CHECK(part.lambda == P("5312746"));
  CHECK(part.rho == P("4217635"));
  CHECK(as_set(part.G_x) == S({"4312"}));
  CHECK(part.sum_L == 0);
  CHECK(part.sum_R == 0);
  CHECK(part.sum_T == 0);
  CHECK(part.sum_G == 0);
  CHECK(principal_mobius(P("53128746"), cache) == 0);
}

TEST_CASE("opposing-adjacency partition of 367249815") {
  MobiusCache cache;
  auto part = partition_opposing(P("367249815"), 2, 5, cache);
  CHECK(part.gamma == P("3624715"));
  CHECK(part.sum_L == 0);
  CHECK(part.sum_R == 0);
  CHECK(part.sum_T == 0);
  CHECK(part.sum_G == 0);
}

TEST_CASE("partition_opposing rejects positions without the stated adjacencies") {
  MobiusCache cache;
  CHECK_THROWS_AS(partition_opposing(P("53128746"), 1, 4, cache), std::domain_error);
  CHECK_THROWS_AS(partition_opposing(P("53128746"), 3, 6, cache), std::domain_error);
  CHECK_THROWS_AS(partition_opposing(P("1234"), 1, 2, cache), std::domain_error);
}

TEST_CASE("opposing partition invariants, exhaustive to length 6") {
  MobiusCache cache;
  for (int n = 4; n <= 6; ++n)
    for (const auto& v : oracle::all_perms(n)) {
      Perm pi{std::vector<int>(v)};
      for (int a = 1; a + 1 <= n; ++a) {
        if (pi.at(a + 1) != pi.at(a) + 1) continue;  // need an ascent pair at a
        for (int b = a + 2; b + 1 <= n; ++b) {
          if (pi.at(b + 1) != pi.at(b) - 1) continue;  // and a descent pair at b
          auto part = partition_opposing(pi, a, b - 1, cache);
          CHECK(part.gamma.size() == n - 2);

          std::set<Perm> L = as_set(part.L), R = as_set(part.R), T = as_set(part.T);
          std::set<Perm> all;
          for (const Perm& q : downset(pi))
            if (!q.is_empty() && !(q == pi)) all.insert(q);
          std::set<Perm> uni = L;
          uni.insert(R.begin(), R.end());
          uni.insert(T.begin(), T.end());
          CHECK(uni == all);
          for (const Perm& t : part.T) {
            CHECK(L.count(t) == 0);
            CHECK(R.count(t) == 0);
            CHECK(has_opposing_adjacencies(t));
          }
          std::set<Perm> inter;
          for (const Perm& q : part.L)
            if (R.count(q)) inter.insert(q);
          std::set<Perm> gg = as_set(part.G_gamma), gx = as_set(part.G_x);
          std::set<Perm> gu = gg;
          gu.insert(gx.begin(), gx.end());
          CHECK(gu == inter);
          for (const Perm& q : part.G_x) {
            CHECK(gg.count(q) == 0);
            CHECK(has_opposing_adjacencies(q));
          }

          CHECK(part.sum_L == sum_mu(part.L, cache));
          CHECK(part.sum_L == 0);
          CHECK(part.sum_R == 0);
          CHECK(part.sum_T == 0);
          CHECK(part.sum_G == 0);
          CHECK(-part.sum_L - part.sum_R - part.sum_T + part.sum_G ==
                principal_mobius(pi, cache));
        }
      }
    }
}

TEST_CASE("nice partition of 1324657") {
  MobiusCache cache;
  SZRegistry reg = build_registry(5, cache);
  auto part = partition_nice(P("1324657"), 2, P("21354"), reg);
  CHECK(part.gamma == P("123"));
  CHECK(part.phi == P("21354"));
  CHECK(part.core == P("2143"));
  CHECK(part.lambda_tops == std::vector<Perm>{P("123546"), P("132456")});
  REQUIRE(part.L.size() == 2);

  std::set<Perm> Pset = as_set(part.P);
  CHECK(Pset.count(P("132546")) == 1);
  CHECK(as_set(part.L[0]).count(P("123546")) == 1);
  CHECK(as_set(part.L[1]).count(P("132456")) == 1);
  CHECK(as_set(part.R).count(P("213546")) == 1);

  // pairwise disjoint and exhaustive over [1, pi)
  std::vector<std::vector<Perm>> blocks{part.P, part.L[0], part.L[1], part.R};
  std::set<Perm> seen;
  size_t total = 0;
  for (const auto& b : blocks)
    for (const Perm& q : b) {
      CHECK(seen.insert(q).second);
      ++total;
    }
  std::set<Perm> all;
  for (const Perm& q : downset(P("1324657")))
    if (!q.is_empty() && !(q == P("1324657"))) all.insert(q);
  CHECK(seen == all);
  CHECK(total == all.size());

  CHECK(sum_mu(part.P, cache) == 0);
  CHECK(sum_mu(part.L[0], cache) == 0);
  CHECK(sum_mu(part.L[1], cache) == 0);
  CHECK(sum_mu(part.R, cache) == 0);
  for (const Perm& q : part.R) CHECK(has_interval_copy(q, P("21354")));
}

TEST_CASE("partition_nice validates its inputs") {
  MobiusCache cache;
  SZRegistry reg = build_registry(5, cache);
  // no interval copy of phi at that point
  CHECK_THROWS_AS(partition_nice(P("1324657"), 1, P("21354"), reg), std::domain_error);
  // 2143 is not a registered nice permutation
  CHECK_THROWS_AS(partition_nice(P("132546"), 2, P("2143"), reg), std::domain_error);
}

TEST_CASE("sigma registry seeding") {
  MobiusCache cache;
  SigmaRegistry sreg = build_sigma_registry(P("2413"), 5, cache);
  CHECK(sreg.sigma() == P("2413"));
  CHECK(sreg.seeded());  // 2413 is adjacency-free
  SigmaRegistry plain = build_sigma_registry(P("132"), 4, cache);
  CHECK(!plain.seeded());
}

TEST_CASE("inflating one point of an adjacency-free sigma by 1243 kills mu") {
  MobiusCache cache;
  for (const char* s : {"2413", "3142"}) {
    Perm sigma = P(s);
    for (int c = 1; c <= sigma.size(); ++c)
      CHECK(mobius::mobius(sigma, inflate_at(sigma, {c}, {P("1243")}), cache) == 0);
  }
}

TEST_CASE("sigma certification and ground") {
  MobiusCache cache;
  SigmaRegistry sreg = build_sigma_registry(P("2413"), 6, cache);
  Perm pi = inflate_at(P("2413"), {2}, {P("1243")});
  CHECK(pi == P("2457613"));
  CHECK(sigma_certified_strongly_zero(pi, sreg));
  CHECK(!sigma_certified_strongly_zero(P("23514"), sreg));
  CHECK(sigma_ground({}, P("2413"), sreg).empty());
  CHECK(as_set(sigma_ground({P("23514")}, P("2413"), sreg)) == S({"2413", "23514"}));
}

TEST_CASE("sigma core and niceness") {
  MobiusCache cache;
  SigmaRegistry sreg = build_sigma_registry(P("2413"), 6, cache);
  // 234615 = 2413 with its first point inflated by 123; its only cover
  // member above 2413 is 23514, which therefore is the core
  Perm phi = inflate_at(P("2413"), {1}, {P("123")});
  CHECK(phi == P("234615"));
  CHECK(find_sigma_core(phi, P("2413"), sreg) == P("23514"));
  CHECK(is_sigma_nice(phi, P("2413"), sreg, cache));
  CHECK(sreg.is_registered(encode(phi)));
  CHECK(!is_sigma_nice(P("23514"), P("2413"), sreg, cache));  // mu(2413, 23514) = -1
  CHECK(!is_sigma_nice(P("2413"), P("2413"), sreg, cache));   // not a proper extension
}

TEST_CASE("sigma registry certification is sound to length 7") {
  MobiusCache cache;
  Perm sigma = P("2413");
  SigmaRegistry sreg = build_sigma_registry(sigma, 7, cache);
  for (int n = 5; n <= 7; ++n)
    for (const auto& v : oracle::all_perms(n)) {
      Perm pi{std::vector<int>(v)};
      if (sigma_certified_strongly_zero(pi, sreg))
        CHECK(mobius::mobius(sigma, pi, cache) == 0);
    }
}

TEST_CASE("permutations with a 1243-symmetry interval have zero mu above 3142") {
  MobiusCache cache;
  Perm sigma = P("3142");
  const Perm seeds[] = {P("1243"), P("2134"), P("3421"), P("4312")};
  for (const auto& v : oracle::all_perms(7)) {
    Perm pi{std::vector<int>(v)};
    bool hit = false;
    for (const Perm& s : seeds)
      if (has_interval_copy(pi, s)) { hit = true; break; }
    if (hit) CHECK(mobius::mobius(sigma, pi, cache) == 0);
  }
}

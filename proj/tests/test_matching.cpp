#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <optional>
#include <random>

#include "grouptensor/errors.hpp"
#include "grouptensor/matching.hpp"
#include "oracles.hpp"

using namespace grouptensor;

namespace {

Matching ids(const Group& g, std::vector<std::uint32_t> a, std::vector<std::uint32_t> b,
             std::vector<std::uint32_t> c) {
  Matching m;
  for (auto i : a) m.a.push_back(g.element(i));
  for (auto i : b) m.b.push_back(g.element(i));
  for (auto i : c) m.c.push_back(g.element(i));
  return m;
}

}  // namespace

TEST_CASE("verify_matching examples") {
  Group z3 = Group::cyclic(3);
  CHECK(verify_matching(z3, ids(z3, {0, 1}, {0, 1}, {0, 1})).valid);

  Group g = Group::psl2(5);
  Matching identity_only{{g.identity()}, {g.identity()}, {g.identity()}};
  CHECK(verify_matching(g, identity_only).valid);

  VerifyResult bad = verify_matching(z3, ids(z3, {0, 1, 2}, {0, 1, 2}, {0, 1, 2}));
  CHECK_FALSE(bad.valid);
  REQUIRE(bad.violation.has_value());
  // first violation in lexicographic order: (0,1,2) since 0+1+2 = 0 mod 3
  CHECK(bad.violation->i == 0);
  CHECK(bad.violation->j == 1);
  CHECK(bad.violation->k == 2);

  // empty matching is vacuously valid
  CHECK(verify_matching(z3, Matching{}).valid);

  // structural errors come before the scan
  CHECK_THROWS_AS(verify_matching(z3, ids(z3, {0, 0}, {0, 1}, {0, 1})), ParamError);
  CHECK_THROWS_AS(verify_matching(z3, ids(z3, {0}, {0, 1}, {0, 1})), ParamError);
  Matching foreign{{ElementId{7}}, {ElementId{0}}, {ElementId{0}}};
  CHECK_THROWS_AS(verify_matching(z3, foreign), ParamError);
}

TEST_CASE("exact search small values") {
  CHECK(exact_max_matching(Group::cyclic(1)).m == 1);
  CHECK(exact_max_matching(Group::cyclic(2)).m == 1);
  CHECK(exact_max_matching(Group::cyclic(3)).m == 2);
}

TEST_CASE("exact search agrees with the naive enumerator up to order 12") {
  for (const char* desc :
       {"cyclic:1", "cyclic:2", "cyclic:3", "cyclic:4", "cyclic:5", "cyclic:6", "cyclic:7",
        "cyclic:8", "cyclic:9", "cyclic:10", "cyclic:11", "cyclic:12", "ea:2:2", "ea:2:3",
        "ea:3:2", "psl2:3", "prod:cyclic:2,cyclic:2", "prod:cyclic:2,cyclic:4",
        "prod:cyclic:2,cyclic:6", "prod:cyclic:2,prod:cyclic:2,cyclic:3"}) {
    Group g = Group::make(desc);
    ExactMatchingResult r = exact_max_matching(g);
    CHECK_MESSAGE(r.m == testsupport::naive_max_matching(g), desc);
    CHECK(verify_matching(g, r.witness).valid);
    CHECK(r.witness.size() == r.m);
  }
}

TEST_CASE("exact search depends only on the multiplication structure") {
  // isomorphic groups constructed through different element tables
  CHECK(exact_max_matching(Group::make("cyclic:6")).m ==
        exact_max_matching(Group::make("prod:cyclic:2,cyclic:3")).m);
  CHECK(exact_max_matching(Group::make("ea:3:2")).m ==
        exact_max_matching(Group::make("prod:cyclic:3,cyclic:3")).m);
  CHECK(exact_max_matching(Group::make("ea:2:3")).m ==
        exact_max_matching(Group::make("prod:cyclic:2,prod:cyclic:2,cyclic:2")).m);
}

TEST_CASE("exact search cap") {
  Limits lim;
  lim.exact_matching_cap = 10;
  CHECK_THROWS_AS(exact_max_matching(Group::cyclic(12), lim), ResourceError);
}

TEST_CASE("heuristic search") {
  // finds the optimum on cyclic(3) quickly, for several seeds
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 17ull, 99ull})
    CHECK(heuristic_matching(Group::cyclic(3), seed, 100).size() == 2);

  // deterministic given the seed
  Group g = Group::psl2(5);
  Matching m1 = heuristic_matching(g, 7, 5000);
  Matching m2 = heuristic_matching(g, 7, 5000);
  CHECK(m1.a == m2.a);
  CHECK(m1.b == m2.b);
  CHECK(m1.c == m2.c);

  // never beats the exact optimum where both run
  for (const char* desc : {"cyclic:5", "cyclic:8", "psl2:3"}) {
    Group h = Group::make(desc);
    CHECK(heuristic_matching(h, 5, 3000).size() <= exact_max_matching(h).m);
  }

  // always at least the identity matching
  CHECK(heuristic_matching(Group::cyclic(1), 1, 10).size() >= 1);
}

TEST_CASE("thirds reduction") {
  Group g = Group::psl2(5);
  Matching m = heuristic_matching(g, 11, 20000);
  REQUIRE(m.size() >= 6);
  ProductFreeTriple t = thirds_reduction(g, m);
  CHECK(t.A.size() == m.size() / 3);
  CHECK(t.B.size() == m.size() / 3);
  CHECK(t.C.size() == m.size() / 3);
  CHECK(count_products_to_identity(g, t.A, t.B, t.C) == 0);

  // size-3 matching reduces to singletons
  Group z7 = Group::cyclic(7);
  ExactMatchingResult r = exact_max_matching(z7);
  REQUIRE(r.m == 3);
  ProductFreeTriple s = thirds_reduction(z7, r.witness);
  CHECK(s.A.size() == 1);

  Group z3 = Group::cyclic(3);
  Matching m2 = ids(z3, {0, 1}, {0, 1}, {0, 1});
  CHECK_THROWS_AS(thirds_reduction(z3, m2), ParamError);
}

TEST_CASE("mixing upper bound") {
  CHECK(gowers_matching_upper(60, 1) == 60);
  CHECK(gowers_matching_upper(60, 2) == 60);    // 3*47+2 = 143 clamps to 60
  CHECK(gowers_matching_upper(1092, 6) == 1092);  // 3*600+2 clamps
  CHECK(floor_div_cbrt(60, 2) == 47);
  CHECK(floor_div_cbrt(1092, 6) == 600);
  CHECK(floor_div_cbrt(1000, 1) == 1000);
  CHECK(floor_div_cbrt(0, 5) == 0);
  // large-scale exactness: m = floor(x / d^(1/3)) satisfies the cube inequality
  std::uint64_t x = 500044998750003ull, d = 50001;
  std::uint64_t m = floor_div_cbrt(x, d);
  long double approx = (long double)x / std::cbrt((long double)d);
  CHECK(std::llabs((long long)m - (long long)approx) <= 1);
  CHECK_THROWS_AS(gowers_matching_upper(10, 0), ParamError);
}

TEST_CASE("first violation matches a brute-force lexicographic scan") {
  std::mt19937_64 rng(123);
  Group g = Group::cyclic(8);
  for (int trial = 0; trial < 200; ++trial) {
    // random candidate with distinct entries per list
    std::uint32_t m = 2 + rng() % 3;
    std::vector<std::uint32_t> pool(8);
    for (std::uint32_t i = 0; i < 8; ++i) pool[i] = i;
    auto pick = [&] {
      for (std::uint32_t i = 0; i < 8; ++i) std::swap(pool[i], pool[i + rng() % (8 - i)]);
      return std::vector<std::uint32_t>(pool.begin(), pool.begin() + m);
    };
    auto ai = pick(), bi = pick(), ci = pick();
    Matching cand;
    for (std::uint32_t i = 0; i < m; ++i) {
      cand.a.push_back(g.element(ai[i]));
      cand.b.push_back(g.element(bi[i]));
      cand.c.push_back(g.element(ci[i]));
    }
    // brute force: scan all m^3 triples in lexicographic order
    std::optional<MatchingViolation> expect;
    for (std::uint32_t i = 0; i < m && !expect; ++i)
      for (std::uint32_t j = 0; j < m && !expect; ++j)
        for (std::uint32_t k = 0; k < m && !expect; ++k) {
          bool identity = g.mul_index(g.mul_index(ai[i], bi[j]), ci[k]) == 0;
          if (identity != (i == j && j == k)) expect = MatchingViolation{i, j, k};
        }
    VerifyResult got = verify_matching(g, cand);
    CHECK(got.valid == !expect.has_value());
    if (expect) {
      REQUIRE(got.violation.has_value());
      CHECK(got.violation->i == expect->i);
      CHECK(got.violation->j == expect->j);
      CHECK(got.violation->k == expect->k);
    }
  }
}

TEST_CASE("heuristic sizes respect the mixing bound on psl2") {
  for (std::uint32_t p : {5u, 7u, 11u, 13u}) {
    Group g = Group::psl2(p);
    Matching m = heuristic_matching(g, 3, 20000);
    CHECK(m.size() <= gowers_matching_upper(g.order(), (p - 1) / 2));
  }
}

TEST_CASE("count_products_to_identity") {
  Group z5 = Group::cyclic(5);
  std::vector<ElementId> all;
  for (std::uint32_t i = 0; i < 5; ++i) all.push_back(z5.element(i));
  CHECK(count_products_to_identity(z5, all, all, all) == 25);
  std::vector<ElementId> e{z5.identity()};
  CHECK(count_products_to_identity(z5, e, e, e) == 1);
}

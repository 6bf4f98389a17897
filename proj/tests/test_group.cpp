#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "grouptensor/errors.hpp"
#include "grouptensor/group.hpp"

using namespace grouptensor;

TEST_CASE("family orders") {
  CHECK(Group::psl2(5).order() == 60);
  CHECK(Group::psl2(7).order() == 168);
  CHECK(Group::sl2(3).order() == 24);
  CHECK(Group::sl2(5).order() == 120);
  CHECK(Group::cyclic(1).order() == 1);
  CHECK(Group::cyclic(12).order() == 12);
  CHECK(Group::elem_abelian(3, 2).order() == 9);
  CHECK(Group::product(Group::cyclic(2), Group::cyclic(3)).order() == 6);
}

TEST_CASE("descriptor grammar") {
  CHECK(Group::make("cyclic:6").order() == 6);
  CHECK(Group::make("ea:2:3").order() == 8);
  CHECK(Group::make("sl2:3").order() == 24);
  CHECK(Group::make("psl2:5").order() == 60);
  Group p = Group::make("prod:cyclic:2,prod:cyclic:3,cyclic:5");
  CHECK(p.order() == 30);
  CHECK(p.descriptor() == "prod:cyclic:2,prod:cyclic:3,cyclic:5");

  CHECK_THROWS_AS(Group::make("cyclic:0"), ParamError);
  CHECK_THROWS_AS(Group::make("psl2:4"), ParamError);   // not prime
  CHECK_THROWS_AS(Group::make("psl2:2"), ParamError);   // even
  CHECK_THROWS_AS(Group::make("sl2:29"), ResourceError);
  CHECK_THROWS_AS(Group::make("dihedral:5"), ParamError);
  CHECK_THROWS_AS(Group::make("cyclic:5junk"), ParamError);
  CHECK_THROWS_AS(Group::make("ea:4:2"), ParamError);
}

TEST_CASE("multiplication examples") {
  Group c5 = Group::cyclic(5);
  CHECK(c5.mul(c5.element(3), c5.element(4)) == c5.element(2));

  Group s3 = Group::sl2(3);
  ElementId t1 = s3.element_from_matrix(1, 1, 0, 1);
  ElementId t2 = s3.element_from_matrix(1, 0, 1, 1);
  auto m = s3.matrix_of(s3.mul(t1, t2));
  CHECK(m == std::array<std::uint32_t, 4>{2, 1, 1, 1});

  // in psl2 the encoding of -I is the identity
  Group p5 = Group::psl2(5);
  CHECK(p5.element_from_matrix(4, 0, 0, 4) == p5.identity());
}

TEST_CASE("element orders") {
  Group c6 = Group::cyclic(6);
  CHECK(c6.element_order(c6.identity()) == 1);
  CHECK(c6.element_order(c6.element(2)) == 3);

  Group p5 = Group::psl2(5);
  std::uint64_t max_order = 0;
  std::map<std::uint64_t, int> hist;
  for (std::uint32_t i = 0; i < p5.order(); ++i) {
    std::uint64_t o = p5.element_order(p5.element(i));
    max_order = std::max(max_order, o);
    ++hist[o];
  }
  CHECK(max_order == 5);
  // the alternating group on 5 points has the same order multiset
  CHECK(hist == std::map<std::uint64_t, int>{{1, 1}, {2, 15}, {3, 20}, {5, 24}});
}

TEST_CASE("group axioms, exhaustive for small orders") {
  for (const char* desc : {"cyclic:8", "ea:2:3", "sl2:3", "psl2:5", "prod:cyclic:2,cyclic:6"}) {
    Group g = Group::make(desc);
    const std::uint32_t n = static_cast<std::uint32_t>(g.order());
    for (std::uint32_t i = 0; i < n; ++i) {
      CHECK(g.mul_index(i, 0) == i);
      CHECK(g.mul_index(0, i) == i);
      CHECK(g.mul_index(i, g.inv_index(i)) == 0);
    }
    for (std::uint32_t a = 0; a < n; ++a)
      for (std::uint32_t b = 0; b < n; ++b)
        for (std::uint32_t c = 0; c < n; ++c)
          REQUIRE(g.mul_index(g.mul_index(a, b), c) == g.mul_index(a, g.mul_index(b, c)));
  }
}

TEST_CASE("group axioms, sampled above 512") {
  Group g = Group::psl2(13);
  REQUIRE(g.order() == 1092);
  std::mt19937_64 rng(99);
  const std::uint32_t n = static_cast<std::uint32_t>(g.order());
  for (int trial = 0; trial < 10000; ++trial) {
    std::uint32_t a = rng() % n, b = rng() % n, c = rng() % n;
    REQUIRE(g.mul_index(g.mul_index(a, b), c) == g.mul_index(a, g.mul_index(b, c)));
  }
}

TEST_CASE("psl2 canonical encodings are idempotent and generator closure fills the table") {
  Group g = Group::psl2(7);
  std::set<std::uint64_t> codes;
  for (std::uint32_t i = 0; i < g.order(); ++i) {
    auto m = g.matrix_of(g.element(i));
    // re-encoding the stored representative must give back the same id
    CHECK(g.element_from_matrix(m[0], m[1], m[2], m[3]) == g.element(i));
    codes.insert(g.element(i).code);
  }
  CHECK(codes.size() == g.order());
}

TEST_CASE("foreign elements are rejected") {
  Group c4 = Group::cyclic(4);
  Group c6 = Group::cyclic(6);
  CHECK_THROWS_AS(c4.index_of(ElementId{5}), ParamError);
  CHECK_THROWS_AS(c4.mul(c4.element(1), ElementId{17}), ParamError);
  CHECK(c6.valid(ElementId{5}));
  CHECK_FALSE(c4.valid(ElementId{5}));
}

TEST_CASE("bfs words multiply back to their elements") {
  for (const char* desc : {"psl2:5", "ea:3:2", "prod:cyclic:4,cyclic:3"}) {
    Group g = Group::make(desc);
    auto gens = g.generators();
    for (std::uint32_t i = 0; i < g.order(); ++i) {
      ElementId acc = g.identity();
      for (std::uint32_t w : g.word_of(i)) acc = g.mul(acc, gens[w]);
      REQUIRE(acc == g.element(i));
    }
  }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "grouptensor/conjugacy.hpp"
#include "grouptensor/errors.hpp"

using namespace grouptensor;

TEST_CASE("class sizes for psl2(5) and psl2(7)") {
  ConjugacyData d5 = conjugacy_classes(Group::psl2(5));
  REQUIRE(d5.classes.size() == 5);
  std::multiset<std::uint64_t> sizes;
  for (const auto& c : d5.classes) sizes.insert(c.size);
  CHECK(sizes == std::multiset<std::uint64_t>{1, 15, 20, 12, 12});

  CHECK(conjugacy_classes(Group::psl2(7)).classes.size() == 6);
}

TEST_CASE("abelian groups split into singletons") {
  ConjugacyData d = conjugacy_classes(Group::cyclic(6));
  CHECK(d.classes.size() == 6);
  for (const auto& c : d.classes) CHECK(c.size == 1);
}

TEST_CASE("class structure invariants") {
  for (const char* desc : {"psl2:5", "sl2:3", "prod:cyclic:2,psl2:3", "ea:3:2"}) {
    Group g = Group::make(desc);
    ConjugacyData d = conjugacy_classes(g);
    std::uint64_t total = 0;
    for (std::uint32_t cls = 0; cls < d.classes.size(); ++cls) {
      const auto& c = d.classes[cls];
      total += c.size;
      CHECK(g.order() % c.size == 0);
      // the representative is the minimal member index
      for (std::uint32_t x = 0; x < c.rep; ++x) CHECK(d.class_of[x] != cls);
      // all members share the element order
      for (std::uint32_t x = 0; x < g.order(); ++x)
        if (d.class_of[x] == cls)
          CHECK(g.element_order(g.element(x)) == c.element_order);
    }
    CHECK(total == g.order());

    // centralizer order times class size equals the group order
    if (g.order() <= 2000) {
      for (const auto& c : d.classes) {
        std::uint32_t rep = c.rep;
        std::uint64_t centralizer = 0;
        for (std::uint32_t x = 0; x < g.order(); ++x)
          if (g.mul_index(x, rep) == g.mul_index(rep, x)) ++centralizer;
        CHECK(centralizer * c.size == g.order());
      }
    }
  }
}

TEST_CASE("ell-regular counts") {
  CHECK(ell_regular_count(Group::psl2(5), 2) == 4);
  CHECK(ell_regular_count(Group::cyclic(6), 3) == 2);
  CHECK(ell_regular_count(Group::psl2(5), 7) == 5);
  CHECK_THROWS_AS(ell_regular_count(Group::cyclic(6), 4), ParamError);
}

TEST_CASE("torus class counts satisfy the rational bounds") {
  for (std::uint32_t p : {5u, 7u, 11u, 13u, 17u, 19u, 23u}) {
    TorusClassCounts t = torus_class_counts(Group::psl2(p));
    CHECK(t.split_order == (p - 1) / 2);
    CHECK(t.nonsplit_order == (p + 1) / 2);
    CHECK(4 * t.split_count >= p - 3);
    CHECK(4 * t.nonsplit_count >= p - 5);
    // the identity meets both subgroups
    CHECK(t.split_count >= 1);
    CHECK(t.nonsplit_count >= 1);
    // torus orders are coprime
    CHECK(std::gcd(t.split_order, t.nonsplit_order) == 1);
  }
  // p = 5: split subgroup of order 2, non-split of order 3
  TorusClassCounts t5 = torus_class_counts(Group::psl2(5));
  CHECK(t5.split_order == 2);
  CHECK(t5.nonsplit_order == 3);
  CHECK_THROWS_AS(torus_class_counts(Group::cyclic(5)), ParamError);
}

TEST_CASE("ell-regular counts beat the torus floor for every ell dividing the order") {
  for (std::uint32_t p : {5u, 7u, 11u, 13u, 17u, 19u, 23u}) {
    Group g = Group::psl2(p);
    ConjugacyData d = conjugacy_classes(g);
    std::uint64_t n = g.order();
    for (std::uint64_t ell = 2; ell <= n; ++ell) {
      if (!is_prime_u64(ell) || n % ell != 0 || ell == p) continue;
      CHECK(4 * ell_regular_count(d, ell) >= p - 5);
    }
  }
}

TEST_CASE("conjugacy cap") {
  Limits lim;
  lim.conjugacy_cap = 50;
  CHECK_THROWS_AS(conjugacy_classes(Group::psl2(5), lim), ResourceError);
}

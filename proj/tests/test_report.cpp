#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <sstream>

#include "grouptensor/errors.hpp"
#include "grouptensor/report.hpp"

using namespace grouptensor;

namespace {

const PerEllRow* find_row(const BoundsReport& r, std::uint64_t ell) {
  for (const auto& row : r.per_ell)
    if (row.ell == ell) return &row;
  return nullptr;
}

}  // namespace

TEST_CASE("bounds report for psl2(5)") {
  BoundsReport r = bounds_report(Group::psl2(5), 1);
  CHECK(r.order == 60);
  CHECK(r.d_lower == 2);
  REQUIRE(r.per_ell.size() == 4);
  CHECK(find_row(r, 2)->dim_semisimple == 25);
  CHECK(find_row(r, 3)->dim_semisimple == 35);
  CHECK(find_row(r, 5)->dim_semisimple == 35);
  CHECK(find_row(r, 0)->dim_semisimple == 60);  // coprime row
  CHECK(r.sr_group_lower == 25);
  CHECK(r.matching_upper == 60);
  CHECK(r.matching_upper_vacuous);
  CHECK(r.matching_lower >= 1);
  CHECK(r.matching_lower <= r.matching_upper);
  bool flagged = false;
  for (const auto& f : r.vacuous_flags) flagged |= (f == "matching_upper");
  CHECK(flagged);
}

TEST_CASE("bounds report for cyclic(4)") {
  BoundsReport r = bounds_report(Group::cyclic(4), 1);
  REQUIRE(r.per_ell.size() == 2);
  CHECK(find_row(r, 2)->dim_semisimple == 1);
  CHECK(find_row(r, 0)->dim_semisimple == 4);
  CHECK(r.sr_group_lower == 1);
  CHECK(r.matching_lower_exact);  // order 4 is under the exact cap
}

TEST_CASE("sr_group_lower is the minimum of the per-ell rows") {
  for (const char* desc : {"psl2:5", "cyclic:12", "sl2:3"}) {
    BoundsReport r = bounds_report(Group::make(desc), 5);
    std::uint64_t expect = ~0ull;
    for (const auto& row : r.per_ell)
      if (row.dim_semisimple > 0) expect = std::min(expect, row.dim_semisimple);
    CHECK(r.sr_group_lower == expect);
  }
}

TEST_CASE("gap evaluation formulas") {
  GapCurve g5 = gap_eval(5);
  CHECK(g5.group_order == 60);
  CHECK(g5.sr_lb_char_p == 35);
  CHECK(g5.sr_lb_coprime == 60);
  CHECK(g5.sr_lb_char_ell == 1);

  GapCurve g7 = gap_eval(7);
  CHECK(g7.sr_lb_char_p == 84);

  GapCurve g13 = gap_eval(13);
  CHECK(g13.group_order == 1092);
  CHECK(g13.sr_lb_char_p == 455);
  CHECK(g13.sr_lb_char_ell == 37);
  CHECK(g13.sr_lb == 37);
  CHECK(g13.ratio < 1.0);
  CHECK_FALSE(g13.separated);

  GapCurve big = gap_eval(100003);
  CHECK(big.ratio > 1.0);
  CHECK(big.separated);

  // the char-p closed form agrees with the literal sum of odd squares
  for (std::uint64_t p : {3ull, 5ull, 7ull, 11ull, 13ull, 23ull, 101ull}) {
    std::uint64_t total = 0;
    for (std::uint64_t i = 0; i <= (p - 1) / 2; ++i) total += (2 * i + 1) * (2 * i + 1);
    CHECK(gap_eval(p).sr_lb_char_p == total);
  }

  CHECK_THROWS_AS(gap_eval(4), ParamError);
  CHECK_THROWS_AS(gap_eval(2), ParamError);
}

TEST_CASE("gap evaluation is a pure function") {
  GapCurve a = gap_eval(9973), b = gap_eval(9973);
  CHECK(a.sr_lb == b.sr_lb);
  CHECK(a.m_ub == b.m_ub);
  CHECK(a.ratio == b.ratio);
  CHECK(gap_curve_json(a) == gap_curve_json(b));
}

TEST_CASE("crossover prime regression") {
  // frozen by a full scan over odd primes
  auto cross = gap_crossover_prime(40000);
  REQUIRE(cross.has_value());
  CHECK(*cross == 27689);
  // no smaller prime separates; spot-check the primes right below
  CHECK_FALSE(gap_eval(27673).separated);
  CHECK(gap_eval(27689).separated);
}

TEST_CASE("probe values") {
  std::vector<Group> gs{Group::psl2(5), Group::cyclic(4), Group::psl2(7)};
  auto rows = quasirandom_probe(gs, 1);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].min_dim_semisimple == 25);
  CHECK(rows[0].order == 60);
  CHECK(rows[0].ratio == doctest::Approx(25.0 / 60.0));
  CHECK(rows[1].min_dim_semisimple == 1);
  CHECK(rows[1].ratio == doctest::Approx(0.25));
  // frozen regression: min over ell in {2,3,7} for psl2(7) is the char-2 value
  CHECK(rows[2].min_dim_semisimple == 83);
  CHECK(rows[2].min_ell == 2);
}

TEST_CASE("json roundtrip and schema") {
  BoundsReport r = bounds_report(Group::psl2(5), 1);
  std::string text = bounds_report_json(r);
  CHECK(text.find("\"schema\": \"grouptensor/v1\"") != std::string::npos);
  BoundsReport back = bounds_report_from_json_text(text);
  CHECK(back.group == r.group);
  CHECK(back.order == r.order);
  CHECK(back.sr_group_lower == r.sr_group_lower);
  CHECK(back.matching_upper == r.matching_upper);
  REQUIRE(back.per_ell.size() == r.per_ell.size());
  for (std::size_t i = 0; i < r.per_ell.size(); ++i) {
    CHECK(back.per_ell[i].ell == r.per_ell[i].ell);
    CHECK(back.per_ell[i].dim_semisimple == r.per_ell[i].dim_semisimple);
    CHECK(back.per_ell[i].dim_radical == r.per_ell[i].dim_radical);
  }
  CHECK(bounds_report_json(back) == text);
}

TEST_CASE("csv has one row per per-ell entry plus a header") {
  BoundsReport r = bounds_report(Group::psl2(5), 1);
  std::string csv = bounds_report_csv(r);
  std::size_t lines = 0;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++lines;
  CHECK(lines == r.per_ell.size() + 1);
}

TEST_CASE("emit writes files and reports path failures") {
  BoundsReport r = bounds_report(Group::cyclic(4), 1);
  std::string path = "test_report_emit.json";
  emit(r, EmitFormat::Json, path);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  BoundsReport back = bounds_report_from_json_text(ss.str());
  CHECK(back.order == 4);
  std::remove(path.c_str());
  CHECK_THROWS_AS(emit(r, EmitFormat::Json, "no/such/dir/report.json"), ParamError);
}

TEST_CASE("tensor and matching file formats roundtrip") {
  Tensor3 t = build_group_tensor(Group::cyclic(3), 2);
  Tensor3 back = tensor_from_json_text(tensor_to_json(t));
  CHECK(back == t);
  CHECK_THROWS_AS(tensor_from_json_text("{"), ParamError);
  CHECK_THROWS_AS(tensor_from_json_text("{\"dims\": [2,2], \"char\": 2, \"entries\": []}"),
                  ParamError);

  Group g = Group::cyclic(3);
  Matching m{{g.element(0), g.element(1)}, {g.element(0), g.element(1)}, {g.element(0), g.element(1)}};
  auto [desc, back_m] = matching_from_json_text(matching_to_json(g.descriptor(), m));
  CHECK(desc == "cyclic:3");
  CHECK(back_m.a == m.a);
  CHECK(back_m.b == m.b);
  CHECK(back_m.c == m.c);
}

TEST_CASE("formula fallback rows appear beyond the modrep cap") {
  Limits lim;
  lim.modrep_cap = 100;  // force the fallback for psl2(7)
  BoundsReport r = bounds_report(Group::psl2(7), 1, lim);
  const PerEllRow* row7 = find_row(r, 7);
  REQUIRE(row7 != nullptr);
  CHECK_FALSE(row7->exact);
  CHECK(row7->dim_semisimple == 84);  // the char-p formula value
  CHECK(find_row(r, 0)->dim_semisimple == 168);
}

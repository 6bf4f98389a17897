// Acceptance suite: runs every criterion at its stated tolerance and prints
// one PASS/FAIL line per criterion. Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "grouptensor/conjugacy.hpp"
#include "grouptensor/errors.hpp"
#include "grouptensor/group.hpp"
#include "grouptensor/matching.hpp"
#include "grouptensor/modrep.hpp"
#include "grouptensor/report.hpp"
#include "grouptensor/slicerank.hpp"
#include "oracles.hpp"

using namespace grouptensor;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void criterion(int number, const std::string& name, const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool ok = false;
  auto start = Clock::now();
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  double dt = seconds_since(start);
  std::printf("%s criterion %2d: %s (%.1fs)%s%s\n", ok ? "PASS" : "FAIL", number, name.c_str(), dt,
              detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

struct Check {
  bool ok = true;
  std::string why;
  void expect(bool cond, const std::string& message) {
    if (!cond && ok) {
      ok = false;
      why = message;
    }
  }
};

// shared heavy summaries, computed once
std::map<std::pair<std::string, std::uint16_t>, SimpleSummary> summary_cache;

const SimpleSummary& cached_summary(const Group& g, std::uint16_t ell) {
  auto key = std::make_pair(g.descriptor(), ell);
  auto it = summary_cache.find(key);
  if (it == summary_cache.end())
    it = summary_cache.emplace(key, semisimple_summary(g, ell, 1)).first;
  return it->second;
}

std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d) continue;
    out.push_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

std::string locate_cli(const char* argv0) {
  if (const char* env = std::getenv("GROUPTENSOR_CLI"); env != nullptr && *env != '\0')
    return env;
  // fall back to the sibling tools/ directory of this binary's build tree
  std::error_code ec;
  std::filesystem::path self(argv0);
  std::filesystem::path guess = self.parent_path().parent_path() / "tools" / "grouptensor";
  if (std::filesystem::exists(guess, ec)) return guess.string();
  return "";
}

int main(int, char** argv) {
  const std::string cli_path = locate_cli(argv[0]);

  // 1. Maschke at psl2(5), ell = 7
  criterion(1, "Maschke: dim_semisimple(psl2(5), 7) = 60 in under 60s", [](std::string& why) {
    auto start = Clock::now();
    SimpleSummary s = semisimple_summary(Group::psl2(5), 7, 1);
    double dt = seconds_since(start);
    Check c;
    c.expect(s.dim_semisimple == 60, "dim_semisimple = " + std::to_string(s.dim_semisimple));
    c.expect(dt < 60.0, "took " + std::to_string(dt) + "s");
    why = c.why;
    return c.ok;
  });

  // 2. p-group degeneracy
  criterion(2, "p-groups: dim_semisimple(cyclic(4),2) = dim_semisimple(cyclic(9),3) = 1",
            [](std::string& why) {
              Check c;
              c.expect(semisimple_summary(Group::cyclic(4), 2, 1).dim_semisimple == 1, "cyclic(4)");
              c.expect(semisimple_summary(Group::cyclic(9), 3, 1).dim_semisimple == 1, "cyclic(9)");
              why = c.why;
              return c.ok;
            });

  // 3. char-p formula
  criterion(3, "char-p: dim_semisimple(psl2(p), p) = sum of odd squares (35, 84)",
            [](std::string& why) {
              Check c;
              c.expect(cached_summary(Group::psl2(5), 5).dim_semisimple == 35, "p=5");
              auto start = Clock::now();
              c.expect(cached_summary(Group::psl2(7), 7).dim_semisimple == 84, "p=7");
              c.expect(seconds_since(start) < 300.0, "p=7 exceeded 5 minutes");
              why = c.why;
              return c.ok;
            });

  // 4. polynomial representations
  criterion(4, "even-degree polynomial reps: irreducible, distinct, dims 1,3,...,p",
            [](std::string& why) {
              Check c;
              for (std::uint32_t p : {5u, 7u}) {
                std::vector<GModule> reps;
                std::set<std::uint32_t> dims;
                std::uint64_t sum_sq = 0;
                for (std::uint32_t d = 0; d <= p - 1; d += 2) {
                  GModule m = sym_power_rep(p, d);
                  c.expect(is_irreducible(m, 101 + d), "reducible at p=" + std::to_string(p) +
                                                           " d=" + std::to_string(d));
                  dims.insert(m.dim);
                  sum_sq += std::uint64_t(m.dim) * m.dim;
                  reps.push_back(std::move(m));
                }
                for (std::size_t i = 0; i < reps.size(); ++i)
                  for (std::size_t j = i + 1; j < reps.size(); ++j)
                    c.expect(!are_isomorphic(reps[i], reps[j]), "isomorphic pair");
                std::set<std::uint32_t> want;
                for (std::uint32_t d = 1; d <= p; d += 2) want.insert(d);
                c.expect(dims == want, "dimension set mismatch");
                c.expect(sum_sq == cached_summary(Group::psl2(p), static_cast<std::uint16_t>(p)).dim_semisimple,
                         "sum of squares != dim_semisimple at p=" + std::to_string(p));
              }
              why = c.why;
              return c.ok;
            });

  // 5. dual radical oracles on the order <= 64 matrix
  criterion(5, "trace-chain radical = order - dim_semisimple on the full matrix, ell <= 7",
            [](std::string& why) {
              Check c;
              std::vector<std::string> matrix{
                  "cyclic:1",  "cyclic:2",  "cyclic:3", "cyclic:4",  "cyclic:6",
                  "cyclic:8",  "cyclic:9",  "cyclic:12", "cyclic:16", "cyclic:18",
                  "ea:2:2",    "ea:2:4",    "ea:3:2",   "ea:5:2",    "ea:2:5",
                  "sl2:3",     "psl2:3",    "psl2:5",   "prod:cyclic:2,cyclic:6",
                  "prod:cyclic:3,cyclic:9", "prod:psl2:3,cyclic:2", "prod:sl2:3,cyclic:2"};
              for (const std::string& desc : matrix) {
                Group g = Group::make(desc);
                if (g.order() > 64) {
                  c.expect(false, desc + " exceeds order 64");
                  continue;
                }
                for (std::uint16_t ell : {2, 3, 5, 7}) {
                  std::uint64_t trace = radical_trace_chain(g, ell);
                  std::uint64_t meataxe = g.order() - cached_summary(g, ell).dim_semisimple;
                  c.expect(trace == meataxe, desc + " ell=" + std::to_string(ell) + ": " +
                                                 std::to_string(trace) + " vs " +
                                                 std::to_string(meataxe));
                }
              }
              c.expect(cached_summary(Group::psl2(5), 2).dim_semisimple == 25,
                       "F_2[psl2(5)] semisimple dim");
              why = c.why;
              return c.ok;
            });

  // 6. Brauer counts up to order 700
  criterion(6, "sum of endomorphism degrees = ell-regular class count, orders <= 700",
            [](std::string& why) {
              Check c;
              std::vector<std::string> matrix{"psl2:5",  "psl2:7",  "sl2:3",  "sl2:5",
                                              "sl2:7",   "cyclic:60", "ea:3:3", "cyclic:63",
                                              "prod:psl2:3,cyclic:5", "psl2:11"};
              for (const std::string& desc : matrix) {
                Group g = Group::make(desc);
                if (g.order() > 700) {
                  c.expect(false, desc + " exceeds order 700");
                  continue;
                }
                ConjugacyData cd = conjugacy_classes(g);
                std::vector<std::uint64_t> ells = prime_divisors(g.order());
                ells.push_back(g.order() > 1 ? 101 : 2);  // one coprime characteristic
                for (std::uint64_t ell : ells) {
                  if (ell > 251) continue;
                  const SimpleSummary& s = cached_summary(g, static_cast<std::uint16_t>(ell));
                  std::uint64_t sum_e = 0;
                  for (const auto& si : s.simples) sum_e += si.e;
                  c.expect(sum_e == ell_regular_count(cd, ell),
                           desc + " ell=" + std::to_string(ell));
                }
              }
              why = c.why;
              return c.ok;
            });

  // 7. Landazuri-Seitz floor
  criterion(7, "nontrivial simples of psl2(p) mod ell != p have d/e >= (p-1)/2",
            [](std::string& why) {
              Check c;
              for (std::uint32_t p : {5u, 7u, 11u, 13u}) {
                Group g = Group::psl2(p);
                for (std::uint64_t ell : prime_divisors(g.order())) {
                  if (ell == p) continue;
                  const SimpleSummary& s = cached_summary(g, static_cast<std::uint16_t>(ell));
                  for (const auto& si : s.simples) {
                    if (si.d == 1) continue;
                    c.expect(si.d / si.e >= (p - 1) / 2,
                             "p=" + std::to_string(p) + " ell=" + std::to_string(ell) +
                                 " d=" + std::to_string(si.d) + " e=" + std::to_string(si.e));
                  }
                }
              }
              why = c.why;
              return c.ok;
            });

  // 8. torus and class bounds
  criterion(8, "split/non-split torus and ell-regular class bounds for p = 5..23",
            [](std::string& why) {
              Check c;
              for (std::uint32_t p : {5u, 7u, 11u, 13u, 17u, 19u, 23u}) {
                Group g = Group::psl2(p);
                TorusClassCounts t = torus_class_counts(g);
                c.expect(4 * t.split_count >= p - 3, "split bound p=" + std::to_string(p));
                c.expect(4 * t.nonsplit_count >= p - 5, "nonsplit bound p=" + std::to_string(p));
                ConjugacyData cd = conjugacy_classes(g);
                for (std::uint64_t ell : prime_divisors(g.order())) {
                  if (ell == p) continue;
                  c.expect(4 * ell_regular_count(cd, ell) >= p - 5,
                           "ell-regular bound p=" + std::to_string(p) + " ell=" + std::to_string(ell));
                }
              }
              why = c.why;
              return c.ok;
            });

  // 9. matching exactness vs the naive enumerator
  criterion(9, "exact matching agrees with the naive enumerator on all groups of order <= 12",
            [](std::string& why) {
              Check c;
              std::vector<std::string> matrix{
                  "cyclic:1", "cyclic:2", "cyclic:3", "cyclic:4",  "cyclic:5",  "cyclic:6",
                  "cyclic:7", "cyclic:8", "cyclic:9", "cyclic:10", "cyclic:11", "cyclic:12",
                  "ea:2:2",   "ea:2:3",   "ea:3:2",   "psl2:3",    "prod:cyclic:2,cyclic:4",
                  "prod:cyclic:2,cyclic:6", "prod:cyclic:2,prod:cyclic:2,cyclic:3"};
              for (const std::string& desc : matrix) {
                Group g = Group::make(desc);
                ExactMatchingResult r = exact_max_matching(g);
                std::uint32_t naive = testsupport::naive_max_matching(g);
                c.expect(r.m == naive, desc + ": " + std::to_string(r.m) + " vs naive " +
                                           std::to_string(naive));
                c.expect(verify_matching(g, r.witness).valid, desc + ": witness invalid");
              }
              c.expect(exact_max_matching(Group::cyclic(2)).m == 1, "M(Z2)");
              c.expect(exact_max_matching(Group::cyclic(3)).m == 2, "M(Z3)");
              why = c.why;
              return c.ok;
            });

  // 10. exact slice-rank oracle
  criterion(10, "slice-rank oracle: diagonals, F_2[Z_2], and the 2x2 matrix algebra",
            [](std::string& why) {
              Check c;
              for (std::uint32_t n : {1u, 2u, 3u, 4u}) {
                auto start = Clock::now();
                std::vector<Tensor3::Entry> es;
                for (std::uint32_t i = 0; i < n; ++i) es.push_back({i, i, i, 1});
                Tensor3 t = make_tensor3({n, n, n}, 2, std::move(es));
                c.expect(exact_slice_rank(t).value == n, "diagonal n=" + std::to_string(n));
                c.expect(seconds_since(start) < 30.0, "diagonal timing");
              }
              auto start = Clock::now();
              c.expect(exact_slice_rank(build_group_tensor(Group::cyclic(2), 2)).value == 2,
                       "T_{F_2[Z_2]}");
              c.expect(exact_slice_rank(
                           build_algebra_tensor(StructureConstants::matrix_algebra(2, 2))).value == 4,
                       "2x2 matrix algebra");
              c.expect(seconds_since(start) < 30.0, "algebra timing");
              why = c.why;
              return c.ok;
            });

  // 11. monotonicity under mode maps
  criterion(11, "slice rank never increases under 100 seeded random mode maps",
            [](std::string& why) {
              auto start = Clock::now();
              Check c;
              std::mt19937_64 rng(20240001);
              for (int trial = 0; trial < 100; ++trial) {
                std::vector<Tensor3::Entry> es;
                for (std::uint32_t i = 0; i < 3; ++i)
                  for (std::uint32_t j = 0; j < 3; ++j)
                    for (std::uint32_t k = 0; k < 3; ++k)
                      if (rng() & 1) es.push_back({i, j, k, 1});
                Tensor3 t = make_tensor3({3, 3, 3}, 2, std::move(es));
                FFMatrix maps[3] = {FFMatrix(3, 3, 2), FFMatrix(3, 3, 2), FFMatrix(3, 3, 2)};
                for (auto& m : maps)
                  for (std::uint32_t r = 0; r < 3; ++r)
                    for (std::uint32_t q = 0; q < 3; ++q) m.set(r, q, rng() & 1);
                c.expect(sr_monotonicity_check(t, maps[0], maps[1], maps[2]),
                         "increase at trial " + std::to_string(trial));
              }
              c.expect(seconds_since(start) < 300.0, "exceeded 5 minutes");
              why = c.why;
              return c.ok;
            });

  // 12. quotient construction
  criterion(12, "quotient tensor matches the direct quotient for F_2[Z_4] and F_5[psl2(5)]",
            [](std::string& why) {
              Check c;
              {
                Group z4 = Group::cyclic(4);
                SimpleSummary s = cached_summary(z4, 2);
                Subspace j = radical_basis(z4, 2, s);
                StructureConstants sc = StructureConstants::group_algebra(z4, 2);
                QuotientTensorResult q = quotient_tensor(sc, j);  // equality asserted inside
                c.expect(q.tensor.dims[0] == 1, "F_2[Z_4]/J should be one-dimensional");
              }
              {
                Group g = Group::psl2(5);
                SimpleSummary s = cached_summary(g, 5);
                Subspace j = radical_basis(g, 5, s);
                c.expect(j.dim() == 25, "radical dimension");
                StructureConstants sc = StructureConstants::group_algebra(g, 5);
                QuotientTensorResult q = quotient_tensor(sc, j);
                c.expect(q.tensor.dims[0] == 35, "F_5[psl2(5)]/J should have dimension 35");
              }
              why = c.why;
              return c.ok;
            });

  // 13. CLP values
  criterion(13, "clp_count(3,4) = (15,45); c_3 in [2.75,2.76]; c_p < p; growth rate", [](std::string& why) {
    Check c;
    ClpResult r = clp_count(3, 4);
    c.expect(r.count == 15 && r.bound == 45, "clp(3,4)");
    double c3 = c_p(3, 1e-6);
    c.expect(c3 >= 2.75 && c3 <= 2.76, "c_3 = " + std::to_string(c3));
    for (std::uint64_t p : {3ull, 5ull, 7ull, 11ull})
      c.expect(c_p(p, 1e-6) < double(p), "c_p >= p at " + std::to_string(p));
    ClpResult r40 = clp_count(3, 40);
    double rate = std::log(3.0 * double(r40.count)) / 40.0;
    c.expect(std::abs(rate - std::log(c3)) < 0.05,
             "growth gap = " + std::to_string(std::abs(rate - std::log(c3))));
    why = c.why;
    return c.ok;
  });

  // 14. gap evaluator
  criterion(14, "gap evaluator: formula/modrep agreement, ratios, frozen crossover 27689",
            [](std::string& why) {
              Check c;
              c.expect(gap_eval(5).sr_lb_char_p == cached_summary(Group::psl2(5), 5).dim_semisimple,
                       "p=5 row");
              c.expect(gap_eval(7).sr_lb_char_p == cached_summary(Group::psl2(7), 7).dim_semisimple,
                       "p=7 row");
              c.expect(gap_eval(13).ratio < 1.0, "p=13 ratio");
              c.expect(gap_eval(100003).ratio > 1.0, "p=100003 ratio");
              auto start = Clock::now();
              auto cross = gap_crossover_prime(100000);
              double dt = seconds_since(start);
              c.expect(cross.has_value() && *cross == 27689,
                       "crossover = " + std::to_string(cross ? *cross : 0));
              c.expect(dt < 10.0, "scan took " + std::to_string(dt) + "s");
              why = c.why;
              return c.ok;
            });

  // 15. end-to-end CLI report
  criterion(15, "CLI report --group psl2:5 emits the expected schema-valid JSON",
            [&](std::string& why) {
              if (cli_path.empty()) {
                why = "CLI binary not found (set GROUPTENSOR_CLI)";
                return false;
              }
              std::string out_path = "acceptance_report_psl2_5.json";
              std::string command = cli_path + " report --group psl2:5 --out " + out_path;
              int rc = std::system(command.c_str());
              Check c;
              c.expect(rc == 0, "CLI exited with " + std::to_string(rc));
              if (rc == 0) {
                std::ifstream in(out_path);
                std::stringstream ss;
                ss << in.rdbuf();
                BoundsReport r = bounds_report_from_json_text(ss.str());
                c.expect(r.order == 60, "order");
                c.expect(r.sr_group_lower == 25, "sr_group_lower");
                c.expect(r.matching_upper == 60 && r.matching_upper_vacuous, "matching_upper");
                std::map<std::uint64_t, std::uint64_t> rows;
                for (const auto& row : r.per_ell) rows[row.ell] = row.dim_semisimple;
                std::map<std::uint64_t, std::uint64_t> want{{2, 25}, {3, 35}, {5, 35}, {0, 60}};
                c.expect(rows == want, "per_ell rows");
                bool flagged = false;
                for (const auto& f : r.vacuous_flags) flagged |= (f == "matching_upper");
                c.expect(flagged, "vacuous flag");
              }
              std::remove(out_path.c_str());
              why = c.why;
              return c.ok;
            });

  if (failures) {
    std::printf("%d criterion(s) FAILED\n", failures);
    return 1;
  }
  std::printf("all 15 criteria passed\n");
  return 0;
}

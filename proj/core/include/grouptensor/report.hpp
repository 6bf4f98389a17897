#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "grouptensor/group.hpp"
#include "grouptensor/limits.hpp"
#include "grouptensor/matching.hpp"
#include "grouptensor/modrep.hpp"
#include "grouptensor/slicerank.hpp"

namespace grouptensor {

/// One modular row of a bounds report. ell == 0 denotes the single "coprime"
/// row summarizing all characteristics coprime to |G| (value |G| by Maschke).
struct PerEllRow {
  std::uint64_t ell = 0;
  std::uint64_t dim_semisimple = 0;
  std::uint64_t dim_radical = 0;
  bool exact = true;       ///< false when the row fell back to a formula bound
  std::string note;        ///< error marker or fallback explanation
};

struct BoundsReport {
  std::string group;
  std::uint64_t order = 0;
  std::uint64_t d_lower = 1;        ///< quasirandomness lower bound used
  std::uint32_t matching_lower = 1;
  bool matching_lower_exact = false;
  std::uint64_t matching_upper = 0;
  bool matching_upper_vacuous = false;
  std::vector<PerEllRow> per_ell;
  std::uint64_t sr_group_lower = 1;  ///< min of per-ell semisimple dims
  std::vector<std::string> vacuous_flags;
};

/// Full per-group report: conjugacy-driven modular rows for every prime
/// divisor plus the coprime row, matching bounds (exact under the cap,
/// heuristic otherwise), and the mixing upper bound. Row failures are
/// recorded in the row note rather than aborting the report.
BoundsReport bounds_report(const Group& g, std::uint64_t seed, const Limits& lim = Limits{});

/// Formula-level evaluation at an odd prime p, exact integer arithmetic:
/// order = (p-1)p(p+1)/2, the three slice-rank lower bounds, the matching
/// upper bound, and their ratio.
struct GapCurve {
  std::uint64_t p = 0;
  std::uint64_t group_order = 0;
  std::uint64_t sr_lb_coprime = 0;   ///< |G|
  std::uint64_t sr_lb_char_p = 0;    ///< sum of (2i+1)^2, i = 0..(p-1)/2
  std::uint64_t sr_lb_char_ell = 0;  ///< max(1, (ceil((p-5)/4)-1)((p-1)/2)^2 + 1)
  std::uint64_t sr_lb = 0;           ///< min of the three
  std::uint64_t m_ub = 0;            ///< min(|G|, 3 floor(|G|/D^(1/3)) + 2)
  double ratio = 0.0;                ///< sr_lb / m_ub
  bool separated = false;            ///< sr_lb > m_ub, exact comparison
};

GapCurve gap_eval(std::uint64_t p);

/// Smallest odd prime p <= limit with gap_eval(p).separated, or nullopt.
std::optional<std::uint64_t> gap_crossover_prime(std::uint64_t limit = 100000);

struct ProbeRow {
  std::string group;
  std::uint64_t order = 0;
  std::uint64_t min_ell = 0;              ///< characteristic attaining the min
  std::uint64_t min_dim_semisimple = 0;
  double ratio = 0.0;                     ///< min dim_semisimple / order
  std::string note;
};

/// min over prime divisors ell of dim_semisimple(G, ell) / |G| per group;
/// purely observational. Per-row failures land in the note.
std::vector<ProbeRow> quasirandom_probe(const std::vector<Group>& groups, std::uint64_t seed,
                                        const Limits& lim = Limits{});

// ---- emission ------------------------------------------------------------

enum class EmitFormat { Json, Csv };

std::string bounds_report_json(const BoundsReport& r);
std::string bounds_report_csv(const BoundsReport& r);
BoundsReport bounds_report_from_json_text(const std::string& text);
std::string gap_curve_json(const GapCurve& c);
std::string probe_json(const std::vector<ProbeRow>& rows);
std::string probe_csv(const std::vector<ProbeRow>& rows);

/// Writes the serialized report; I/O failures carry the path in the message.
void emit(const BoundsReport& r, EmitFormat format, const std::string& path);

// file formats shared with the CLI
std::string tensor_to_json(const Tensor3& t);
Tensor3 tensor_from_json_text(const std::string& text);
std::string matching_to_json(const std::string& group_desc, const Matching& m);
std::pair<std::string, Matching> matching_from_json_text(const std::string& text);

/// Schema tag stamped on every JSON document.
inline constexpr const char* kSchemaTag = "grouptensor/v1";

}  // namespace grouptensor

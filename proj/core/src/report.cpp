#include "grouptensor/report.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "grouptensor/conjugacy.hpp"
#include "grouptensor/errors.hpp"

namespace grouptensor {

namespace {

using Json = nlohmann::ordered_json;

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

// formula fallback rows for groups beyond the modular-representation cap
std::uint64_t formula_lower_bound(const Group& g, std::uint64_t ell) {
  if (g.family() != GroupFamily::Psl2) return 1;
  GapCurve c = gap_eval(g.field_p());
  return ell == g.field_p() ? c.sr_lb_char_p : c.sr_lb_char_ell;
}

}  // namespace

BoundsReport bounds_report(const Group& g, std::uint64_t seed, const Limits& lim) {
  BoundsReport r;
  r.group = g.descriptor();
  r.order = g.order();
  r.d_lower = g.family() == GroupFamily::Psl2 ? (g.field_p() - 1) / 2 : 1;
  if (r.d_lower < 1) r.d_lower = 1;

  if (g.order() <= lim.exact_matching_cap) {
    ExactMatchingResult ex = exact_max_matching(g, lim);
    r.matching_lower = ex.m;
    r.matching_lower_exact = true;
  } else {
    Matching h = heuristic_matching(g, seed, 20000);
    r.matching_lower = h.size();
    r.matching_lower_exact = false;
  }

  r.matching_upper = gowers_matching_upper(r.order, r.d_lower);
  r.matching_upper_vacuous = r.matching_upper >= r.order;
  if (r.matching_upper_vacuous) r.vacuous_flags.push_back("matching_upper");

  bool have_lower = false;
  for (std::uint64_t ell : prime_divisors(r.order)) {
    PerEllRow row;
    row.ell = ell;
    if (r.order <= lim.modrep_cap) {
      try {
        SimpleSummary s = semisimple_summary(g, static_cast<std::uint16_t>(ell), seed, lim);
        row.dim_semisimple = s.dim_semisimple;
        row.dim_radical = s.dim_radical;
      } catch (const std::exception& e) {
        row.exact = false;
        row.note = e.what();
      }
    } else {
      row.exact = false;
      row.dim_semisimple = formula_lower_bound(g, ell);
      row.dim_radical = 0;
      row.note = "formula lower bound (order exceeds modrep_cap)";
    }
    // rows that errored out entirely carry dim 0 and stay out of the minimum
    if (row.dim_semisimple > 0) {
      r.sr_group_lower = have_lower ? std::min(r.sr_group_lower, row.dim_semisimple)
                                    : row.dim_semisimple;
      have_lower = true;
    }
    r.per_ell.push_back(std::move(row));
  }
  // one coprime row stands for every characteristic not dividing the order
  PerEllRow coprime;
  coprime.ell = 0;
  coprime.dim_semisimple = r.order;
  coprime.dim_radical = 0;
  r.per_ell.push_back(coprime);
  r.sr_group_lower = have_lower ? std::min(r.sr_group_lower, r.order) : r.order;
  return r;
}

// ---- gap evaluation --------------------------------------------------------

GapCurve gap_eval(std::uint64_t p) {
  if (!is_prime_u64(p) || p == 2) throw ParamError("gap_eval: p must be an odd prime");
  if (p > 2000000) throw ResourceError("gap_eval: p too large for 64-bit arithmetic");
  GapCurve c;
  c.p = p;
  c.group_order = (p - 1) * p * (p + 1) / 2;
  c.sr_lb_coprime = c.group_order;
  // sum of squares of the first (p+1)/2 odd numbers = p(p+1)(p+2)/6
  c.sr_lb_char_p = p * (p + 1) * (p + 2) / 6;
  std::uint64_t half = (p - 1) / 2;
  std::uint64_t regular_classes_floor = p >= 5 ? (p - 5 + 3) / 4 : 0;  // ceil((p-5)/4)
  if (regular_classes_floor >= 1) {
    c.sr_lb_char_ell = (regular_classes_floor - 1) * half * half + 1;
    if (c.sr_lb_char_ell < 1) c.sr_lb_char_ell = 1;
  } else {
    c.sr_lb_char_ell = 1;
  }
  c.sr_lb = std::min({c.sr_lb_coprime, c.sr_lb_char_p, c.sr_lb_char_ell});
  std::uint64_t d = half >= 1 ? half : 1;
  c.m_ub = gowers_matching_upper(c.group_order, d);
  c.ratio = static_cast<double>(c.sr_lb) / static_cast<double>(c.m_ub);
  c.separated = c.sr_lb > c.m_ub;
  return c;
}

std::optional<std::uint64_t> gap_crossover_prime(std::uint64_t limit) {
  for (std::uint64_t p = 3; p <= limit; p += 2) {
    if (!is_prime_u64(p)) continue;
    if (gap_eval(p).separated) return p;
  }
  return std::nullopt;
}

std::vector<ProbeRow> quasirandom_probe(const std::vector<Group>& groups, std::uint64_t seed,
                                        const Limits& lim) {
  std::vector<ProbeRow> out;
  for (const Group& g : groups) {
    ProbeRow row;
    row.group = g.descriptor();
    row.order = g.order();
    try {
      bool first = true;
      for (std::uint64_t ell : prime_divisors(g.order())) {
        SimpleSummary s = semisimple_summary(g, static_cast<std::uint16_t>(ell), seed, lim);
        if (first || s.dim_semisimple < row.min_dim_semisimple) {
          row.min_dim_semisimple = s.dim_semisimple;
          row.min_ell = ell;
          first = false;
        }
      }
      if (first) {  // trivial group: no prime divisors
        row.min_dim_semisimple = g.order();
        row.min_ell = 0;
      }
      row.ratio = static_cast<double>(row.min_dim_semisimple) / static_cast<double>(row.order);
    } catch (const std::exception& e) {
      row.note = e.what();
    }
    out.push_back(std::move(row));
  }
  return out;
}

// ---- emission ----------------------------------------------------------------

namespace {

Json per_ell_to_json(const PerEllRow& row) {
  Json j;
  j["ell"] = row.ell == 0 ? Json("coprime") : Json(row.ell);
  j["dim_semisimple"] = row.dim_semisimple;
  j["dim_radical"] = row.dim_radical;
  j["exact"] = row.exact;
  if (!row.note.empty()) j["note"] = row.note;
  return j;
}

}  // namespace

std::string bounds_report_json(const BoundsReport& r) {
  Json j;
  j["schema"] = kSchemaTag;
  j["group"] = r.group;
  j["order"] = r.order;
  j["d_lower"] = r.d_lower;
  j["matching_lower"] = r.matching_lower;
  j["matching_lower_exact"] = r.matching_lower_exact;
  j["matching_upper"] = r.matching_upper;
  j["matching_upper_vacuous"] = r.matching_upper_vacuous;
  j["per_ell"] = Json::array();
  for (const PerEllRow& row : r.per_ell) j["per_ell"].push_back(per_ell_to_json(row));
  j["sr_group_lower"] = r.sr_group_lower;
  j["vacuous_flags"] = r.vacuous_flags;
  return j.dump(2);
}

BoundsReport bounds_report_from_json_text(const std::string& text) {
  Json j = Json::parse(text);
  if (j.at("schema").get<std::string>() != kSchemaTag)
    throw ParamError("bounds report: unexpected schema tag");
  BoundsReport r;
  r.group = j.at("group").get<std::string>();
  r.order = j.at("order").get<std::uint64_t>();
  r.d_lower = j.at("d_lower").get<std::uint64_t>();
  r.matching_lower = j.at("matching_lower").get<std::uint32_t>();
  r.matching_lower_exact = j.at("matching_lower_exact").get<bool>();
  r.matching_upper = j.at("matching_upper").get<std::uint64_t>();
  r.matching_upper_vacuous = j.at("matching_upper_vacuous").get<bool>();
  for (const Json& row : j.at("per_ell")) {
    PerEllRow p;
    p.ell = row.at("ell").is_string() ? 0 : row.at("ell").get<std::uint64_t>();
    p.dim_semisimple = row.at("dim_semisimple").get<std::uint64_t>();
    p.dim_radical = row.at("dim_radical").get<std::uint64_t>();
    p.exact = row.at("exact").get<bool>();
    if (row.contains("note")) p.note = row.at("note").get<std::string>();
    r.per_ell.push_back(std::move(p));
  }
  r.sr_group_lower = j.at("sr_group_lower").get<std::uint64_t>();
  for (const Json& f : j.at("vacuous_flags")) r.vacuous_flags.push_back(f.get<std::string>());
  return r;
}

std::string bounds_report_csv(const BoundsReport& r) {
  std::ostringstream out;
  out << "group,order,d_lower,matching_lower,matching_lower_exact,matching_upper,"
         "matching_upper_vacuous,sr_group_lower,ell,dim_semisimple,dim_radical,exact,note\n";
  for (const PerEllRow& row : r.per_ell) {
    out << r.group << ',' << r.order << ',' << r.d_lower << ',' << r.matching_lower << ','
        << (r.matching_lower_exact ? 1 : 0) << ',' << r.matching_upper << ','
        << (r.matching_upper_vacuous ? 1 : 0) << ',' << r.sr_group_lower << ',';
    if (row.ell == 0)
      out << "coprime";
    else
      out << row.ell;
    out << ',' << row.dim_semisimple << ',' << row.dim_radical << ',' << (row.exact ? 1 : 0)
        << ',' << row.note << '\n';
  }
  return out.str();
}

std::string gap_curve_json(const GapCurve& c) {
  Json j;
  j["schema"] = kSchemaTag;
  j["p"] = c.p;
  j["group_order"] = c.group_order;
  j["sr_lb_coprime"] = c.sr_lb_coprime;
  j["sr_lb_char_p"] = c.sr_lb_char_p;
  j["sr_lb_char_ell"] = c.sr_lb_char_ell;
  j["sr_lb"] = c.sr_lb;
  j["m_ub"] = c.m_ub;
  j["ratio"] = c.ratio;
  j["separated"] = c.separated;
  return j.dump(2);
}

std::string probe_json(const std::vector<ProbeRow>& rows) {
  Json arr = Json::array();
  for (const ProbeRow& r : rows) {
    Json j;
    j["group"] = r.group;
    j["order"] = r.order;
    j["min_ell"] = r.min_ell;
    j["min_dim_semisimple"] = r.min_dim_semisimple;
    j["ratio"] = r.ratio;
    if (!r.note.empty()) j["note"] = r.note;
    arr.push_back(std::move(j));
  }
  Json top;
  top["schema"] = kSchemaTag;
  top["rows"] = std::move(arr);
  return top.dump(2);
}

std::string probe_csv(const std::vector<ProbeRow>& rows) {
  std::ostringstream out;
  out << "group,order,min_ell,min_dim_semisimple,ratio,note\n";
  for (const ProbeRow& r : rows)
    out << r.group << ',' << r.order << ',' << r.min_ell << ',' << r.min_dim_semisimple << ','
        << r.ratio << ',' << r.note << '\n';
  return out.str();
}

void emit(const BoundsReport& r, EmitFormat format, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParamError("emit: cannot open " + path + " for writing");
  out << (format == EmitFormat::Json ? bounds_report_json(r) : bounds_report_csv(r));
  out.flush();
  if (!out) throw ParamError("emit: write failed for " + path);
}

// ---- shared file formats -------------------------------------------------------

std::string tensor_to_json(const Tensor3& t) {
  Json j;
  j["dims"] = {t.dims[0], t.dims[1], t.dims[2]};
  j["char"] = t.ell;
  Json entries = Json::array();
  for (const auto& e : t.entries) entries.push_back({e.i, e.j, e.k, e.v});
  j["entries"] = std::move(entries);
  return j.dump(2);
}

Tensor3 tensor_from_json_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    throw ParamError(std::string("tensor: invalid JSON: ") + e.what());
  }
  try {
    auto dims = j.at("dims");
    if (!dims.is_array() || dims.size() != 3) throw ParamError("tensor: dims must have 3 entries");
    std::array<std::uint32_t, 3> d{dims[0].get<std::uint32_t>(), dims[1].get<std::uint32_t>(),
                                   dims[2].get<std::uint32_t>()};
    std::uint16_t ell = j.at("char").get<std::uint16_t>();
    std::vector<Tensor3::Entry> entries;
    for (const Json& e : j.at("entries")) {
      if (!e.is_array() || e.size() != 4) throw ParamError("tensor: entry must be [i,j,k,v]");
      entries.push_back(Tensor3::Entry{e[0].get<std::uint32_t>(), e[1].get<std::uint32_t>(),
                                       e[2].get<std::uint32_t>(),
                                       static_cast<Fel>(e[3].get<std::uint32_t>())});
    }
    return make_tensor3(d, ell, std::move(entries));
  } catch (const ParamError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParamError(std::string("tensor: malformed document: ") + e.what());
  }
}

std::string matching_to_json(const std::string& group_desc, const Matching& m) {
  Json j;
  j["group"] = group_desc;
  Json a = Json::array(), b = Json::array(), c = Json::array();
  for (ElementId x : m.a) a.push_back(x.code);
  for (ElementId x : m.b) b.push_back(x.code);
  for (ElementId x : m.c) c.push_back(x.code);
  j["a"] = std::move(a);
  j["b"] = std::move(b);
  j["c"] = std::move(c);
  return j.dump(2);
}

std::pair<std::string, Matching> matching_from_json_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    throw ParamError(std::string("matching: invalid JSON: ") + e.what());
  }
  try {
    std::string desc = j.at("group").get<std::string>();
    Matching m;
    for (const Json& x : j.at("a")) m.a.push_back(ElementId{x.get<std::uint64_t>()});
    for (const Json& x : j.at("b")) m.b.push_back(ElementId{x.get<std::uint64_t>()});
    for (const Json& x : j.at("c")) m.c.push_back(ElementId{x.get<std::uint64_t>()});
    return {std::move(desc), std::move(m)};
  } catch (const ParamError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParamError(std::string("matching: malformed document: ") + e.what());
  }
}

}  // namespace grouptensor

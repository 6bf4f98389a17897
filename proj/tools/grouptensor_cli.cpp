// grouptensor: finite groups, 3-matchings, modular semisimple quotients,
// slice-rank bounds, and the per-prime gap report.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "grouptensor/conjugacy.hpp"
#include "grouptensor/errors.hpp"
#include "grouptensor/ffla.hpp"
#include "grouptensor/group.hpp"
#include "grouptensor/limits.hpp"
#include "grouptensor/matching.hpp"
#include "grouptensor/modrep.hpp"
#include "grouptensor/report.hpp"
#include "grouptensor/slicerank.hpp"

namespace gt = grouptensor;
using Json = nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw gt::ParamError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << std::endl;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw gt::ParamError("cannot open " + out_path + " for writing");
  out << text << '\n';
  if (!out) throw gt::ParamError("write failed for " + out_path);
}

Json matching_json(const gt::Group& g, const gt::Matching& m) {
  Json j;
  j["group"] = g.descriptor();
  Json a = Json::array(), b = Json::array(), c = Json::array();
  for (gt::ElementId x : m.a) a.push_back(x.code);
  for (gt::ElementId x : m.b) b.push_back(x.code);
  for (gt::ElementId x : m.c) c.push_back(x.code);
  j["a"] = std::move(a);
  j["b"] = std::move(b);
  j["c"] = std::move(c);
  return j;
}

struct Options {
  std::string config_path;
  gt::Limits lim;

  // per-command state
  std::string group_desc;
  std::uint64_t ell = 0;
  std::uint64_t seed = 1;
  std::uint32_t iters = 20000;
  std::string file_path;
  std::string out_path;
  std::string format = "json";
  std::uint64_t p = 0;
  std::uint32_t n = 1;
  double tol = 1e-6;
  bool scan = false;
  std::uint64_t scan_limit = 100000;
  std::string groups_csv;
};

void add_cap_flags(CLI::App& app, Options& opt) {
  app.add_option("--config", opt.config_path, "config file (overrides GROUPTENSOR_CONFIG)");
  app.add_option("--max-group-order", opt.lim.max_group_order, "group construction cap");
  app.add_option("--sl2-max-p", opt.lim.sl2_max_p, "largest p for sl2/psl2");
  app.add_option("--conjugacy-cap", opt.lim.conjugacy_cap, "conjugacy enumeration cap");
  app.add_option("--modrep-cap", opt.lim.modrep_cap, "regular module / tensor cap");
  app.add_option("--exact-matching-cap", opt.lim.exact_matching_cap, "exact matching search cap");
  app.add_option("--trace-chain-cap", opt.lim.trace_chain_cap, "trace-chain oracle cap");
  app.add_option("--subspace-enum-cap", opt.lim.subspace_enum_cap, "ell^n subspace enumeration cap");
  app.add_option("--chop-retry-budget", opt.lim.chop_retry_budget, "random elements per block");
}

int run(CLI::App& app, Options& opt, int argc, char** argv) {
  argv = app.ensure_utf8(argv);
  app.fallthrough(true);  // cap flags are accepted after the subcommand too

  // ---- group ----
  CLI::App* cmd_group = app.add_subcommand("group", "construct a group and print basic data");
  cmd_group->add_option("--group", opt.group_desc, "family descriptor")->required();
  cmd_group->callback([&] {
    gt::Group g = gt::Group::make(opt.group_desc, opt.lim);
    Json j;
    j["schema"] = gt::kSchemaTag;
    j["group"] = g.descriptor();
    j["order"] = g.order();
    Json gens = Json::array();
    for (gt::ElementId e : g.generators()) gens.push_back(e.code);
    j["generators"] = std::move(gens);
    std::map<std::uint64_t, std::uint64_t> hist;
    for (std::uint32_t i = 0; i < g.order(); ++i) ++hist[g.element_order(g.element(i))];
    Json h = Json::object();
    for (auto [o, c] : hist) h[std::to_string(o)] = c;
    j["element_order_histogram"] = std::move(h);
    write_output(j.dump(2), opt.out_path);
  });

  // ---- classes ----
  CLI::App* cmd_classes = app.add_subcommand("classes", "conjugacy classes and ell-regular count");
  cmd_classes->add_option("--group", opt.group_desc)->required();
  cmd_classes->add_option("--ell", opt.ell, "count classes with order coprime to this prime");
  cmd_classes->callback([&] {
    gt::Group g = gt::Group::make(opt.group_desc, opt.lim);
    gt::ConjugacyData data = gt::conjugacy_classes(g, opt.lim);
    Json j;
    j["schema"] = gt::kSchemaTag;
    j["group"] = g.descriptor();
    j["order"] = g.order();
    Json classes = Json::array();
    for (const auto& c : data.classes) {
      Json row;
      row["rep"] = g.element(c.rep).code;
      row["size"] = c.size;
      row["order"] = c.element_order;
      classes.push_back(std::move(row));
    }
    j["classes"] = std::move(classes);
    if (opt.ell) j["ell_regular_count"] = gt::ell_regular_count(data, opt.ell);
    write_output(j.dump(2), opt.out_path);
  });

  // ---- semisimple ----
  CLI::App* cmd_ss = app.add_subcommand("semisimple", "distinct simples and dim of F_ell[G]/J");
  cmd_ss->add_option("--group", opt.group_desc)->required();
  cmd_ss->add_option("--ell", opt.ell)->required();
  cmd_ss->add_option("--seed", opt.seed);
  cmd_ss->callback([&] {
    gt::Group g = gt::Group::make(opt.group_desc, opt.lim);
    gt::SimpleSummary s =
        gt::semisimple_summary(g, static_cast<std::uint16_t>(opt.ell), opt.seed, opt.lim);
    Json j;
    j["schema"] = gt::kSchemaTag;
    j["group"] = s.group;
    j["ell"] = s.ell;
    Json simples = Json::array();
    for (const auto& x : s.simples) {
      Json row;
      row["d"] = x.d;
      row["e"] = x.e;
      row["mult"] = x.mult;
      simples.push_back(std::move(row));
    }
    j["simples"] = std::move(simples);
    j["dim_semisimple"] = s.dim_semisimple;
    j["dim_radical"] = s.dim_radical;
    write_output(j.dump(2), opt.out_path);
  });

  // ---- radical-oracle ----
  CLI::App* cmd_oracle = app.add_subcommand("radical-oracle", "trace-chain radical dimension (small orders)");
  cmd_oracle->add_option("--group", opt.group_desc)->required();
  cmd_oracle->add_option("--ell", opt.ell)->required();
  cmd_oracle->callback([&] {
    gt::Group g = gt::Group::make(opt.group_desc, opt.lim);
    std::uint64_t dim = gt::radical_trace_chain(g, static_cast<std::uint16_t>(opt.ell), opt.lim);
    Json j;
    j["schema"] = gt::kSchemaTag;
    j["group"] = g.descriptor();
    j["ell"] = opt.ell;
    j["dim_radical"] = dim;
    write_output(j.dump(2), opt.out_path);
  });

  // ---- matching ----
  CLI::App* cmd_matching = app.add_subcommand("matching", "3-matching search, verification, bounds");
  cmd_matching->require_subcommand(1);
  CLI::App* m_exact = cmd_matching->add_subcommand("exact", "exact maximum by branch and bound");
  m_exact->add_option("--group", opt.group_desc)->required();
  m_exact->add_option("--out", opt.out_path, "write the witness matching JSON here");
  m_exact->callback([&] {
    gt::Group g = gt::Group::make(opt.group_desc, opt.lim);
    gt::ExactMatchingResult r = gt::exact_max_matching(g, opt.lim);
    Json j;
    j["schema"] = gt::kSchemaTag;
    j["m"] = r.m;
    j["witness"] = matching_json(g, r.witness);
    write_output(j.dump(2), opt.out_path);
  });
  CLI::App* m_heur = cmd_matching->add_subcommand("heuristic", "greedy + local search lower bound");
  m_heur->add_option("--group", opt.group_desc)->required();
  m_heur->add_option("--seed", opt.seed);
  m_heur->add_option("--iters", opt.iters);
  m_heur->add_option("--out", opt.out_path);
  m_heur->callback([&] {
    gt::Group g = gt::Group::make(opt.group_desc, opt.lim);
    gt::Matching m = gt::heuristic_matching(g, opt.seed, opt.iters);
    Json j;
    j["schema"] = gt::kSchemaTag;
    j["m"] = m.size();
    j["seed"] = opt.seed;
    j["iters"] = opt.iters;
    j["witness"] = matching_json(g, m);
    write_output(j.dump(2), opt.out_path);
  });
  CLI::App* m_verify = cmd_matching->add_subcommand("verify", "check a matching file");
  m_verify->add_option("--file", opt.file_path, "matching JSON {group, a, b, c}")->required();
  m_verify->callback([&] {
    auto [desc, m] = gt::matching_from_json_text(read_file(opt.file_path));
    gt::Group g = gt::Group::make(desc, opt.lim);
    gt::VerifyResult r = gt::verify_matching(g, m);
    Json j;
    j["schema"] = gt::kSchemaTag;
    j["group"] = g.descriptor();
    j["m"] = m.size();
    j["valid"] = r.valid;
    if (r.violation) j["violation"] = {r.violation->i, r.violation->j, r.violation->k};
    write_output(j.dump(2), opt.out_path);
  });
  CLI::App* m_bound = cmd_matching->add_subcommand("bound", "mixing upper bound on M(G)");
  m_bound->add_option("--group", opt.group_desc)->required();
  m_bound->callback([&] {
    gt::Group g = gt::Group::make(opt.group_desc, opt.lim);
    std::uint64_t d = g.family() == gt::GroupFamily::Psl2 ? (g.field_p() - 1) / 2 : 1;
    if (d < 1) d = 1;
    std::uint64_t upper = gt::gowers_matching_upper(g.order(), d);
    Json j;
    j["schema"] = gt::kSchemaTag;
    j["group"] = g.descriptor();
    j["order"] = g.order();
    j["d_lower"] = d;
    j["matching_upper"] = upper;
    j["vacuous"] = upper >= g.order();
    write_output(j.dump(2), opt.out_path);
  });

  // ---- slicerank ----
  CLI::App* cmd_sr = app.add_subcommand("slicerank", "slice-rank bounds and the exact oracle");
  cmd_sr->require_subcommand(1);
  CLI::App* sr_bounds = cmd_sr->add_subcommand("bounds", "lower bounds for the group tensor");
  sr_bounds->add_option("--group", opt.group_desc)->required();
  sr_bounds->add_option("--ell", opt.ell)->required();
  sr_bounds->add_option("--seed", opt.seed);
  sr_bounds->callback([&] {
    gt::Group g = gt::Group::make(opt.group_desc, opt.lim);
    gt::SimpleSummary s =
        gt::semisimple_summary(g, static_cast<std::uint16_t>(opt.ell), opt.seed, opt.lim);
    gt::Matching m = gt::heuristic_matching(g, opt.seed, opt.iters);
    gt::Tensor3 t = gt::build_group_tensor(g, static_cast<std::uint16_t>(opt.ell), opt.lim);
    std::uint32_t m_lower = gt::sr_lower_from_matching(g, t, m);
    std::uint64_t ss_lower = gt::sr_lower_semisimple(g, static_cast<std::uint16_t>(opt.ell), s);
    Json j;
    j["schema"] = gt::kSchemaTag;
    j["group"] = g.descriptor();
    j["ell"] = opt.ell;
    j["order"] = g.order();
    j["sr_lower_matching"] = m_lower;
    j["sr_lower_semisimple"] = ss_lower;
    j["best_lower"] = std::max<std::uint64_t>(m_lower, ss_lower);
    write_output(j.dump(2), opt.out_path);
  });
  CLI::App* sr_exact = cmd_sr->add_subcommand("exact", "exhaustive slice rank of a tensor file");
  sr_exact->add_option("--tensor", opt.file_path, "tensor JSON {dims, char, entries}")->required();
  sr_exact->callback([&] {
    gt::Tensor3 t = gt::tensor_from_json_text(read_file(opt.file_path));
    gt::ExactSliceRank r = gt::exact_slice_rank(t, opt.lim);
    Json j;
    j["schema"] = gt::kSchemaTag;
    j["value"] = r.value;
    j["codims"] = {r.witness.v1.codim(), r.witness.v2.codim(), r.witness.v3.codim()};
    write_output(j.dump(2), opt.out_path);
  });

  // ---- clp / cp ----
  CLI::App* cmd_clp = app.add_subcommand("clp", "monomial-count slice-rank bound for F_p^n");
  cmd_clp->add_option("--p", opt.p)->required();
  cmd_clp->add_option("--n", opt.n)->required();
  cmd_clp->callback([&] {
    gt::ClpResult r = gt::clp_count(opt.p, opt.n);
    Json j;
    j["schema"] = gt::kSchemaTag;
    j["p"] = opt.p;
    j["n"] = opt.n;
    j["count"] = r.count;
    j["bound"] = r.bound;
    j["clamped"] = r.clamped;
    write_output(j.dump(2), opt.out_path);
  });
  CLI::App* cmd_cp = app.add_subcommand("cp", "growth constant c_p of the monomial bound");
  cmd_cp->add_option("--p", opt.p)->required();
  cmd_cp->add_option("--tol", opt.tol);
  cmd_cp->callback([&] {
    double v = gt::c_p(opt.p, opt.tol);
    Json j;
    j["schema"] = gt::kSchemaTag;
    j["p"] = opt.p;
    j["tol"] = opt.tol;
    j["c_p"] = v;
    write_output(j.dump(2), opt.out_path);
  });

  // ---- report ----
  CLI::App* cmd_report = app.add_subcommand("report", "per-group bounds table");
  cmd_report->add_option("--group", opt.group_desc)->required();
  cmd_report->add_option("--seed", opt.seed);
  cmd_report->add_option("--format", opt.format)->check(CLI::IsMember({"json", "csv"}));
  cmd_report->add_option("--out", opt.out_path);
  cmd_report->callback([&] {
    gt::Group g = gt::Group::make(opt.group_desc, opt.lim);
    gt::BoundsReport r = gt::bounds_report(g, opt.seed, opt.lim);
    std::string text = opt.format == "csv" ? gt::bounds_report_csv(r) : gt::bounds_report_json(r);
    write_output(text, opt.out_path);
  });

  // ---- gap ----
  CLI::App* cmd_gap = app.add_subcommand("gap", "formula-level lower/upper bound curves");
  cmd_gap->add_option("--p", opt.p, "evaluate at a single odd prime");
  cmd_gap->add_flag("--scan", opt.scan, "find the first prime where the ratio exceeds 1");
  cmd_gap->add_option("--limit", opt.scan_limit, "scan limit");
  cmd_gap->callback([&] {
    if (opt.scan) {
      auto cross = gt::gap_crossover_prime(opt.scan_limit);
      Json j;
      j["schema"] = gt::kSchemaTag;
      if (cross) {
        j["crossover_prime"] = *cross;
        j["curve"] = Json::parse(gt::gap_curve_json(gt::gap_eval(*cross)));
      } else {
        j["crossover_prime"] = nullptr;
      }
      write_output(j.dump(2), opt.out_path);
      return;
    }
    if (!opt.p) throw gt::ParamError("gap: provide --p or --scan");
    write_output(gt::gap_curve_json(gt::gap_eval(opt.p)), opt.out_path);
  });

  // ---- probe ----
  CLI::App* cmd_probe = app.add_subcommand("probe", "min_ell dim_semisimple / order per group");
  cmd_probe->add_option("--groups", opt.groups_csv, "comma-separated descriptors")->required();
  cmd_probe->add_option("--seed", opt.seed);
  cmd_probe->add_option("--format", opt.format)->check(CLI::IsMember({"json", "csv"}));
  cmd_probe->add_option("--out", opt.out_path);
  cmd_probe->callback([&] {
    std::vector<gt::Group> groups;
    std::stringstream ss(opt.groups_csv);
    std::string item;
    std::vector<std::string> descs;
    // descriptors themselves contain commas inside prod:..., so split on
    // semicolons first and fall back to commas when unambiguous
    char sep = opt.groups_csv.find(';') != std::string::npos ? ';' : ',';
    if (sep == ',' && opt.groups_csv.find("prod:") != std::string::npos)
      throw gt::ParamError("probe: use ';' separators when listing product groups");
    while (std::getline(ss, item, sep))
      if (!item.empty()) groups.push_back(gt::Group::make(item, opt.lim));
    auto rows = gt::quasirandom_probe(groups, opt.seed, opt.lim);
    std::string text = opt.format == "csv" ? gt::probe_csv(rows) : gt::probe_json(rows);
    write_output(text, opt.out_path);
  });

  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"grouptensor: matchings, modular semisimple quotients, and slice-rank bounds for small finite groups"};
  Options opt;

  // config file first, cap flags second: flags win
  try {
    opt.lim = gt::limits_from_env();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  add_cap_flags(app, opt);
  app.parse_complete_callback([&] {
    if (!opt.config_path.empty()) {
      gt::Limits file_lim = gt::parse_limits_file(opt.config_path);
      gt::Limits defaults;
      // flags already wrote into opt.lim; only fill values left at defaults
      if (opt.lim.max_group_order == defaults.max_group_order) opt.lim.max_group_order = file_lim.max_group_order;
      if (opt.lim.sl2_max_p == defaults.sl2_max_p) opt.lim.sl2_max_p = file_lim.sl2_max_p;
      if (opt.lim.conjugacy_cap == defaults.conjugacy_cap) opt.lim.conjugacy_cap = file_lim.conjugacy_cap;
      if (opt.lim.modrep_cap == defaults.modrep_cap) opt.lim.modrep_cap = file_lim.modrep_cap;
      if (opt.lim.exact_matching_cap == defaults.exact_matching_cap) opt.lim.exact_matching_cap = file_lim.exact_matching_cap;
      if (opt.lim.trace_chain_cap == defaults.trace_chain_cap) opt.lim.trace_chain_cap = file_lim.trace_chain_cap;
      if (opt.lim.subspace_enum_cap == defaults.subspace_enum_cap) opt.lim.subspace_enum_cap = file_lim.subspace_enum_cap;
      if (opt.lim.chop_retry_budget == defaults.chop_retry_budget) opt.lim.chop_retry_budget = file_lim.chop_retry_budget;
    }
  });

  try {
    return run(app, opt, argc, argv);
  } catch (const gt::ResourceError& e) {
    std::cerr << "resource error: " << e.what() << '\n';
    return 2;
  } catch (const gt::ParamError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
}

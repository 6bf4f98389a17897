#include "grouptensor/limits.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "grouptensor/errors.hpp"

namespace grouptensor {

namespace {

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
  try {
    size_t used = 0;
    unsigned long long v = std::stoull(text, &used);
    if (used != text.size()) throw ParamError("config: trailing junk in value for " + key);
    return v;
  } catch (const ParamError&) {
    throw;
  } catch (const std::exception&) {
    throw ParamError("config: bad integer for key " + key + ": '" + text + "'");
  }
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Limits parse_limits_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParamError("config: cannot open " + path);
  Limits lim;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParamError("config: expected key = value, got '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key == "max_group_order") lim.max_group_order = parse_u64(key, val);
    else if (key == "sl2_max_p") lim.sl2_max_p = static_cast<std::uint32_t>(parse_u64(key, val));
    else if (key == "conjugacy_cap") lim.conjugacy_cap = parse_u64(key, val);
    else if (key == "modrep_cap") lim.modrep_cap = parse_u64(key, val);
    else if (key == "exact_matching_cap") lim.exact_matching_cap = parse_u64(key, val);
    else if (key == "trace_chain_cap") lim.trace_chain_cap = parse_u64(key, val);
    else if (key == "subspace_enum_cap") lim.subspace_enum_cap = parse_u64(key, val);
    else if (key == "chop_retry_budget") lim.chop_retry_budget = static_cast<std::uint32_t>(parse_u64(key, val));
    else throw ParamError("config: unknown key '" + key + "'");
  }
  return lim;
}

Limits limits_from_env() {
  const char* path = std::getenv("GROUPTENSOR_CONFIG");
  if (path == nullptr || *path == '\0') return Limits{};
  return parse_limits_file(path);
}

}  // namespace grouptensor

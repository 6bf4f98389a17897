#pragma once

#include <cstdint>
#include <string>

namespace grouptensor {

/// Resource caps shared across the library. Every potentially expensive
/// operation checks one of these and throws ResourceError when exceeded.
/// Values can be overridden by a key=value config file (one pair per line,
/// `#` comments) pointed to by the GROUPTENSOR_CONFIG environment variable,
/// and on top of that by CLI flags.
struct Limits {
  std::uint64_t max_group_order = 10000;   ///< cyclic / elem-abelian / product orders
  std::uint32_t sl2_max_p = 23;            ///< largest p accepted for sl2/psl2
  std::uint64_t conjugacy_cap = 10000;     ///< class enumeration guard
  std::uint64_t modrep_cap = 1200;         ///< regular-module / group-tensor guard
  std::uint64_t exact_matching_cap = 16;   ///< exact matching search guard
  std::uint64_t trace_chain_cap = 64;      ///< trace-chain radical oracle guard
  std::uint64_t subspace_enum_cap = 10000; ///< ell^n guard for subspace enumeration
  std::uint32_t chop_retry_budget = 200;   ///< random algebra elements per block
};

/// Parse a config file. Unknown keys are rejected (ParamError), as are
/// unparsable values.
Limits parse_limits_file(const std::string& path);

/// Limits from GROUPTENSOR_CONFIG if set, defaults otherwise.
Limits limits_from_env();

}  // namespace grouptensor

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "grouptensor/group.hpp"

namespace grouptensor {

/// A candidate multiplicative 3-matching: three equal-length lists with
/// pairwise-distinct entries within each list, aiming for
/// a_i b_j c_k = 1 iff i = j = k.
struct Matching {
  std::vector<ElementId> a, b, c;
  std::uint32_t size() const { return static_cast<std::uint32_t>(a.size()); }
};

struct MatchingViolation {
  std::uint32_t i, j, k;
};

struct VerifyResult {
  bool valid = false;
  std::optional<MatchingViolation> violation;  ///< first violating triple
};

/// Checks the defining condition over all m^3 triples (reported in
/// lexicographic order). Structural problems (length mismatch, duplicate
/// entries within a list, foreign ids) throw ParamError before the scan.
VerifyResult verify_matching(const Group& g, const Matching& cand);

struct ExactMatchingResult {
  std::uint32_t m = 0;
  Matching witness;
};

/// Exact maximum 3-matching by branch and bound: c is forced to (a*b)^-1,
/// partial products landing in C are rejected, and the two-sided translation
/// symmetry pins the first triple to (e, e, e). Guarded by
/// lim.exact_matching_cap on the group order.
ExactMatchingResult exact_max_matching(const Group& g, const Limits& lim = Limits{});

/// Randomized greedy insertion with remove-and-reinsert local search.
/// The result is always re-verified before returning and its size is a lower
/// bound on M(G). Deterministic given the seed.
Matching heuristic_matching(const Group& g, std::uint64_t seed, std::uint32_t iters);

struct ProductFreeTriple {
  std::vector<ElementId> A, B, C;
};

/// First/middle/last thirds of a valid matching of size >= 3; the disjoint
/// index blocks make the triple product-free (verified exhaustively).
ProductFreeTriple thirds_reduction(const Group& g, const Matching& cand);

/// min(order, 3*floor(order/D^(1/3)) + 2): the mixing bound
/// |A||B||C| <= |G|^3 / D on product-free triples caps the thirds at
/// order/D^(1/3), hence m <= 3*floor + 2. Exact integer arithmetic.
std::uint64_t gowers_matching_upper(std::uint64_t order, std::uint64_t quasirandom_degree);

/// Largest m with m^3 * d <= x^3, i.e. floor(x / d^(1/3)), exactly.
std::uint64_t floor_div_cbrt(std::uint64_t x, std::uint64_t d);

/// #{(a,b,c) in A x B x C : abc = 1}, via a membership bitmap on C.
std::uint64_t count_products_to_identity(const Group& g,
                                         const std::vector<ElementId>& A,
                                         const std::vector<ElementId>& B,
                                         const std::vector<ElementId>& C);

}  // namespace grouptensor

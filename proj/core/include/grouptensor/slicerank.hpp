#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "grouptensor/ffla.hpp"
#include "grouptensor/group.hpp"
#include "grouptensor/matching.hpp"
#include "grouptensor/modrep.hpp"

namespace grouptensor {

/// Sparse trilinear form over F_ell: sum of v * x_i y_j z_k terms.
/// Entries are sorted by (i, j, k), unique, with nonzero values.
struct Tensor3 {
  std::array<std::uint32_t, 3> dims{0, 0, 0};
  std::uint16_t ell = 2;
  struct Entry {
    std::uint32_t i, j, k;
    Fel v;
    friend bool operator==(const Entry&, const Entry&) = default;
  };
  std::vector<Entry> entries;

  friend bool operator==(const Tensor3&, const Tensor3&) = default;
};

/// Validates ranges and duplicates, reduces values mod ell, drops zeros,
/// sorts canonically.
Tensor3 make_tensor3(std::array<std::uint32_t, 3> dims, std::uint16_t ell,
                     std::vector<Tensor3::Entry> entries);

Fel tensor_coeff(const Tensor3& t, std::uint32_t i, std::uint32_t j, std::uint32_t k);

/// Structure constants of a finite-dimensional associative algebra:
/// e_i * e_j = sum over (k, v) pairs of v e_k.
class StructureConstants {
 public:
  static StructureConstants group_algebra(const Group& g, std::uint16_t ell,
                                          const Limits& lim = Limits{});
  static StructureConstants matrix_algebra(std::uint32_t d, std::uint16_t ell);
  static StructureConstants from_products(std::uint32_t dim, std::uint16_t ell,
                                          std::vector<std::vector<std::vector<std::pair<std::uint32_t, Fel>>>> products);

  std::uint32_t dim() const { return dim_; }
  std::uint16_t field_char() const { return ell_; }
  std::span<const std::pair<std::uint32_t, Fel>> product(std::uint32_t i, std::uint32_t j) const;
  FVec multiply(const FVec& u, const FVec& v) const;

 private:
  StructureConstants() = default;
  std::uint32_t dim_ = 0;
  std::uint16_t ell_ = 2;
  std::vector<std::uint64_t> offsets_;
  std::vector<std::pair<std::uint32_t, Fel>> entries_;
};

/// T_{F_ell[G]} = sum over g, h of x_g y_h z_{gh}; |G|^2 nonzeros.
Tensor3 build_group_tensor(const Group& g, std::uint16_t ell, const Limits& lim = Limits{});

/// Multiplication tensor of an algebra given by structure constants, with an
/// associativity spot-check on 100 random triples (ParamError on failure).
Tensor3 build_algebra_tensor(const StructureConstants& sc);

struct QuotientTensorResult {
  Tensor3 tensor;                       ///< multiplication tensor of A/I
  std::vector<std::uint32_t> kept;      ///< basis indices S whose images form a basis
  StructureConstants quotient_algebra;  ///< direct structure constants of A/I
};

/// Lemma-style quotient construction: verifies the ideal, selects the
/// complement basis S, transforms T_A by the coordinate projections (the
/// quotient map on the third mode), and asserts the result equals the
/// directly computed multiplication tensor of A/I.
QuotientTensorResult quotient_tensor(const StructureConstants& sc, const Subspace& ideal);

/// A matching of size m embeds an m x m x m unit diagonal into the group
/// tensor; returns m after re-verifying the matching and the diagonal
/// certificate.
std::uint32_t sr_lower_from_matching(const Group& g, const Tensor3& t, const Matching& cand);

/// dim of the semisimple quotient lower-bounds the slice rank of T_{F_ell[G]}.
std::uint64_t sr_lower_semisimple(const Group& g, std::uint16_t ell, const SimpleSummary& summary);

/// Subspace triple on which the tensor vanishes, with its codimension sum.
struct VanishingTriple {
  Subspace v1, v2, v3;
  std::uint32_t codim_sum = 0;
};

bool triple_vanishes(const Tensor3& t, const VanishingTriple& w);

struct ExactSliceRank {
  std::uint32_t value = 0;
  VanishingTriple witness;
};

/// Exhaustive minimum of codim(V1)+codim(V2)+codim(V3) over all vanishing
/// triples (for fixed V1, V2 the best V3 is the annihilator of the bilinear
/// slices, so only two modes are enumerated). Guarded by ell^dim per mode.
ExactSliceRank exact_slice_rank(const Tensor3& t, const Limits& lim = Limits{});

/// One term of a slice decomposition: covector on `mode`, matrix on the
/// remaining two modes (row index = lower mode, column = higher).
struct Slice {
  int mode = 0;  // 0, 1, or 2
  FVec covector;
  FFMatrix matrix;
};

/// Explicit decomposition with exactly codim_sum slices that re-sums to t
/// (asserted coefficientwise).
std::vector<Slice> vanishing_triple_to_slices(const Tensor3& t, const VanishingTriple& w);

/// Coefficient transform sum v * A(u_i) x B(v_j) x C(w_k).
Tensor3 transform_tensor(const Tensor3& t, const FFMatrix& a, const FFMatrix& b, const FFMatrix& c);

/// Exact slice rank after applying the mode maps never exceeds the original.
bool sr_monotonicity_check(const Tensor3& t, const FFMatrix& a, const FFMatrix& b,
                           const FFMatrix& c, const Limits& lim = Limits{});

struct ClpResult {
  std::uint64_t count = 0;  ///< N = #{x in {0..p-1}^n : 3 * sum(x) <= (p-1) n}
  std::uint64_t bound = 0;  ///< min(3N, p^n)
  bool clamped = false;     ///< true when the bound is the vacuous p^n
};

/// Monomial-count upper bound on the slice rank of T_{F_p[F_p^n]}.
ClpResult clp_count(std::uint64_t p, std::uint32_t n);

/// inf over 0 < t < 1 of (1 + t + ... + t^{p-1}) t^{-(p-1)/3}, by coarse scan
/// plus golden-section refinement to absolute tolerance tol; strictly below p.
double c_p(std::uint64_t p, double tol);

}  // namespace grouptensor

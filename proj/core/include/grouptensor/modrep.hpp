#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "grouptensor/ffla.hpp"
#include "grouptensor/group.hpp"

namespace grouptensor {

/// A module over the group algebra F_ell[G], given by one action matrix per
/// group generator in the column convention: rho(gh) = rho(g) * rho(h), and a
/// word g1..gk acts by rho(g1)*...*rho(gk).
struct GModule {
  Group group;
  std::uint16_t ell = 2;
  std::uint32_t dim = 0;
  std::vector<FFMatrix> actions;
  /// Nonempty iff every action is a permutation: perm[g][x] = y means
  /// rho(g) e_x = e_y. Used as a fast path when sampling algebra elements.
  std::vector<std::vector<std::uint32_t>> perm_actions;
  /// Set once a Norton-style irreducibility certificate has been produced.
  bool certified_simple = false;
};

/// dim = |G|; generator g acts by the permutation matrix of left
/// multiplication on the element table.
GModule regular_module(const Group& g, std::uint16_t ell, const Limits& lim = Limits{});

/// Action matrix of an arbitrary element: the product of the generator
/// actions along its factorization.
FFMatrix element_action(const GModule& m, std::uint32_t element_index);

/// Composition factors of m, with multiplicity, each carrying an
/// irreducibility certificate. Deterministic given the seed.
/// Throws ChopError when a block cannot be certified within the retry budget.
std::vector<GModule> chop(const GModule& m, std::uint64_t seed, const Limits& lim = Limits{});

/// Norton-style irreducibility test. Marks the module certified on success.
bool is_irreducible(GModule& m, std::uint64_t seed, const Limits& lim = Limits{});

/// F_ell-dimension of Hom_{F_ell[G]}(m1, m2) (solution space of the
/// intertwiner system X rho1(g) = rho2(g) X over all generators).
std::uint32_t hom_dimension(const GModule& m1, const GModule& m2);

/// Both modules must carry irreducibility certificates (contract violation
/// otherwise). For simples, nonzero Hom space <=> isomorphic.
bool are_isomorphic(const GModule& m1, const GModule& m2);

/// Endomorphism degree e = dim_F_ell End(m); the endomorphism ring of a
/// simple module over a finite field is the field F_{ell^e}.
std::uint32_t endo_degree(const GModule& m);

struct SimpleInfo {
  std::uint32_t d;     ///< F_ell dimension
  std::uint32_t e;     ///< endomorphism degree; e divides d
  std::uint32_t mult;  ///< multiplicity in the regular module
  GModule witness;
};

/// The distinct simple modules of F_ell[G] harvested from the regular module.
/// dim_semisimple = sum d^2/e = dim of F_ell[G]/J; dim_radical = |G| - that.
struct SimpleSummary {
  std::string group;
  std::uint16_t ell = 2;
  std::vector<SimpleInfo> simples;
  std::uint64_t dim_semisimple = 0;
  std::uint64_t dim_radical = 0;
};

SimpleSummary semisimple_summary(const Group& g, std::uint16_t ell, std::uint64_t seed,
                                 const Limits& lim = Limits{});

/// Basis of the Jacobson radical J = {a in F_ell[G] : a acts by zero on every
/// simple}, as the kernel of the map sending each group element to its joint
/// action on the distinct simples. Dimension must equal summary.dim_radical.
Subspace radical_basis(const Group& g, std::uint16_t ell, const SimpleSummary& summary,
                       const Limits& lim = Limits{});

/// Action of SL(2,p) (or PSL(2,p) for even d) on homogeneous polynomials of
/// degree d in two variables over F_p: basis x^d, x^{d-1}y, ..., y^d; the
/// generator [[a,b],[c,d]] substitutes x -> a x + c y, y -> b x + d y.
GModule sym_power_rep(std::uint32_t p, std::uint32_t d, const Limits& lim = Limits{});

/// Independent small-scale radical oracle: the positive-characteristic trace
/// chain I_0 = A, I_{i+1} = {x in I_i : Tr((x^ y^)^{ell^i}) / ell^i = 0 mod ell
/// for all y in I_i}, computed in the group algebra with integer lifts mod
/// ell^{i+1}, stopping at the first i with ell^i >= dim. Returns dim J.
std::uint64_t radical_trace_chain(const Group& g, std::uint16_t ell, const Limits& lim = Limits{});

}  // namespace grouptensor

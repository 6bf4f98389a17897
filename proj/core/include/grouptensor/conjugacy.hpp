#pragma once

#include <cstdint>
#include <vector>

#include "grouptensor/group.hpp"

namespace grouptensor {

struct ConjClass {
  std::uint32_t rep;             ///< minimal element index in the class
  std::uint64_t size;
  std::uint64_t element_order;   ///< common order of all class members
};

/// Partition of a group into conjugation orbits.
struct ConjugacyData {
  std::vector<ConjClass> classes;        ///< ordered by representative index
  std::vector<std::uint32_t> class_of;   ///< element index -> class index
};

/// Orbit enumeration by conjugating with the group generators, breadth first.
ConjugacyData conjugacy_classes(const Group& g, const Limits& lim = Limits{});

/// Number of classes whose element order is coprime to ell.
std::uint64_t ell_regular_count(const Group& g, std::uint64_t ell, const Limits& lim = Limits{});
std::uint64_t ell_regular_count(const ConjugacyData& data, std::uint64_t ell);

struct TorusClassCounts {
  std::uint64_t split_count;        ///< classes meeting the order-(p-1)/2 cyclic subgroup
  std::uint64_t nonsplit_count;     ///< classes meeting the order-(p+1)/2 cyclic subgroup
  std::uint64_t split_order;
  std::uint64_t nonsplit_order;
};

/// For psl2(p): how many conjugacy classes meet the split torus (the image of
/// the diagonal subgroup) and the non-split torus (a cyclic subgroup of order
/// (p+1)/2, located by element order).
TorusClassCounts torus_class_counts(const Group& g, const Limits& lim = Limits{});

/// Smallest primitive root modulo an odd prime p.
std::uint32_t primitive_root_mod(std::uint32_t p);

}  // namespace grouptensor

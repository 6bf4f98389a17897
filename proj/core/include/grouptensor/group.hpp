#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "grouptensor/limits.hpp"

namespace grouptensor {

/// Canonical 64-bit encoding of a group element. Two ids are equal iff the
/// elements are equal; for psl2 the encoding of M and -M coincide.
struct ElementId {
  std::uint64_t code = 0;
  friend bool operator==(ElementId, ElementId) = default;
  friend auto operator<=>(ElementId, ElementId) = default;
};

enum class GroupFamily { Cyclic, ElemAbelian, Sl2, Psl2, Product };

/// A small finite group with a fully materialized element table.
///
/// Construction enumerates all elements by BFS over the generators starting
/// at the identity, so index 0 is always the identity and every element
/// carries a factorization into generators (its BFS word). A Group is an
/// immutable value; copies share the underlying table and are safe to use
/// from concurrent threads.
///
/// Descriptor grammar accepted by make():
///   cyclic:n | ea:p:n | sl2:p | psl2:p | prod:<desc>,<desc>
class Group {
 public:
  static Group make(const std::string& descriptor, const Limits& lim = Limits{});
  static Group cyclic(std::uint64_t n, const Limits& lim = Limits{});
  static Group elem_abelian(std::uint32_t p, std::uint32_t n, const Limits& lim = Limits{});
  static Group sl2(std::uint32_t p, const Limits& lim = Limits{});
  static Group psl2(std::uint32_t p, const Limits& lim = Limits{});
  static Group product(const Group& g1, const Group& g2, const Limits& lim = Limits{});

  const std::string& descriptor() const;
  GroupFamily family() const;
  std::uint64_t order() const;

  /// Characteristic parameter p for sl2/psl2 families; ParamError otherwise.
  std::uint32_t field_p() const;

  ElementId element(std::uint32_t index) const;
  ElementId identity() const { return element(0); }

  /// Index of an element in the table; ParamError for foreign ids.
  std::uint32_t index_of(ElementId id) const;
  bool valid(ElementId id) const;

  ElementId mul(ElementId a, ElementId b) const;
  ElementId inv(ElementId a) const;
  std::uint32_t mul_index(std::uint32_t i, std::uint32_t j) const;
  std::uint32_t inv_index(std::uint32_t i) const;

  /// Least k >= 1 with a^k = identity.
  std::uint64_t element_order(ElementId a) const;

  const std::vector<std::uint32_t>& generator_indices() const;
  std::vector<ElementId> generators() const;

  /// Generator positions whose ordered product equals element(index);
  /// empty word for the identity.
  std::vector<std::uint32_t> word_of(std::uint32_t index) const;

  /// For sl2/psl2: the 2x2 matrix entries (row major, canonical representative
  /// for psl2) of an element. ParamError for other families.
  std::array<std::uint32_t, 4> matrix_of(ElementId id) const;

  /// For sl2/psl2: the element with these matrix entries (reduced mod p,
  /// det must be 1); psl2 returns the canonical representative of {M, -M}.
  ElementId element_from_matrix(std::uint32_t a, std::uint32_t b,
                                std::uint32_t c, std::uint32_t d) const;

  friend bool operator==(const Group& a, const Group& b) {
    return a.data_ == b.data_ || a.descriptor() == b.descriptor();
  }

  struct Data;  // opaque; defined in group.cpp

 private:
  explicit Group(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
  std::shared_ptr<const Data> data_;
};

/// Deterministic primality test for 64-bit inputs (trial division).
bool is_prime_u64(std::uint64_t n);

}  // namespace grouptensor

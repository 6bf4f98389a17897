#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "grouptensor/limits.hpp"

namespace grouptensor {

/// A field element of F_ell, always reduced to [0, ell).
using Fel = std::uint8_t;
/// A dense vector over F_ell (unpacked, one byte per entry).
using FVec = std::vector<Fel>;

/// Dense matrix over a prime field F_ell with ell < 256.
///
/// Rows over F_2 are stored bit-packed in 64-bit words and row operations use
/// word-wide XOR; other characteristics use byte rows with 32-bit accumulation
/// in the elimination kernels. Matrices are value types; all operations are
/// reentrant.
class FFMatrix {
 public:
  FFMatrix() = default;
  FFMatrix(std::uint32_t rows, std::uint32_t cols, std::uint16_t ell);

  static FFMatrix identity(std::uint32_t n, std::uint16_t ell);
  static FFMatrix from_rows(const std::vector<FVec>& rows, std::uint32_t cols, std::uint16_t ell);

  std::uint32_t rows() const { return rows_; }
  std::uint32_t cols() const { return cols_; }
  std::uint16_t field_char() const { return ell_; }

  Fel get(std::uint32_t r, std::uint32_t c) const;
  void set(std::uint32_t r, std::uint32_t c, Fel v);

  FVec row_vec(std::uint32_t r) const;
  void set_row(std::uint32_t r, const FVec& v);

  /// this * other; ParamError on dimension or characteristic mismatch.
  FFMatrix mul(const FFMatrix& other) const;
  FFMatrix add(const FFMatrix& other) const;
  FFMatrix scaled(Fel c) const;
  FFMatrix transpose() const;

  bool is_zero() const;
  bool is_permutation() const;

  friend bool operator==(const FFMatrix& a, const FFMatrix& b);

  // raw storage access for the elimination kernels
  std::span<const std::uint64_t> word_row(std::uint32_t r) const;
  std::span<std::uint64_t> word_row(std::uint32_t r);
  std::span<const Fel> byte_row(std::uint32_t r) const;
  std::span<Fel> byte_row(std::uint32_t r);

 private:
  std::uint32_t rows_ = 0, cols_ = 0;
  std::uint16_t ell_ = 2;
  std::uint32_t stride_ = 0;  // words (ell==2) or bytes per row
  std::vector<std::uint64_t> w_;
  std::vector<Fel> b_;
};

/// Row vector times matrix (v has size m.rows(), result size m.cols()).
FVec vec_mat(const FVec& v, const FFMatrix& m);

Fel inv_mod(Fel a, std::uint16_t ell);

struct RrefResult {
  FFMatrix rref;                      ///< unique reduced row-echelon form
  std::vector<std::uint32_t> pivots;  ///< pivot column per nonzero row
  std::uint32_t rank = 0;
};

RrefResult rref(const FFMatrix& m);

/// RREF basis rows of {x : m x = 0}; a (nullity x cols) matrix.
FFMatrix kernel_basis(const FFMatrix& m);

/// One solution of m x = rhs, or nullopt if inconsistent.
std::optional<FVec> solve(const FFMatrix& m, const FVec& rhs);

/// A subspace of F_ell^ambient in canonical reduced row-echelon form:
/// equal subspaces have identical basis matrices.
class Subspace {
 public:
  static Subspace zero(std::uint32_t ambient, std::uint16_t ell);
  static Subspace full(std::uint32_t ambient, std::uint16_t ell);
  /// Canonicalizes the row span of `rows`.
  static Subspace from_rows(const FFMatrix& rows);

  std::uint32_t dim() const { return basis_.rows(); }
  std::uint32_t ambient() const { return ambient_; }
  std::uint32_t codim() const { return ambient_ - dim(); }
  std::uint16_t field_char() const { return ell_; }
  const FFMatrix& basis() const { return basis_; }
  const std::vector<std::uint32_t>& pivots() const { return pivots_; }

  /// Remainder of v after eliminating all pivot coordinates; zero iff v lies
  /// in the subspace.
  FVec reduce_mod(const FVec& v) const;
  bool contains(const FVec& v) const;
  bool contains(const Subspace& other) const;

  /// Coordinates of a member vector with respect to the RREF basis
  /// (reads off pivot positions); nullopt if v is not in the subspace.
  std::optional<FVec> coords_of(const FVec& v) const;

  friend bool operator==(const Subspace& a, const Subspace& b);

 private:
  Subspace(FFMatrix basis, std::vector<std::uint32_t> pivots, std::uint32_t ambient, std::uint16_t ell)
      : basis_(std::move(basis)), pivots_(std::move(pivots)), ambient_(ambient), ell_(ell) {}
  FFMatrix basis_;
  std::vector<std::uint32_t> pivots_;
  std::uint32_t ambient_ = 0;
  std::uint16_t ell_ = 2;
};

/// Smallest subspace containing the seed rows and closed under right
/// multiplication by every action matrix.
Subspace spin(const FFMatrix& seed_rows, std::span<const FFMatrix> actions);

/// Visit every subspace of F_ell^n exactly once, in canonical RREF form.
/// Guarded by ell^n <= lim.subspace_enum_cap.
void enumerate_subspaces(std::uint32_t n, std::uint16_t ell,
                         const std::function<void(const Subspace&)>& fn,
                         const Limits& lim = Limits{});

}  // namespace grouptensor

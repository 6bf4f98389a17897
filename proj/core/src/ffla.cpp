#include "grouptensor/ffla.hpp"

#include <algorithm>

#include "grouptensor/errors.hpp"
#include "grouptensor/group.hpp"  // is_prime_u64

namespace grouptensor {

namespace {

std::uint32_t words_per_row(std::uint32_t cols) { return (cols + 63) / 64; }

void check_char(std::uint16_t ell) {
  if (ell < 2 || ell > 251 || !is_prime_u64(ell))
    throw ParamError("FFMatrix: characteristic must be a prime < 256, got " + std::to_string(ell));
}

}  // namespace

Fel inv_mod(Fel a, std::uint16_t ell) {
  if (a == 0) throw ParamError("inv_mod: zero has no inverse");
  std::uint32_t r = 1, base = a, e = ell - 2;
  while (e) {
    if (e & 1) r = r * base % ell;
    base = base * base % ell;
    e >>= 1;
  }
  return static_cast<Fel>(r);
}

FFMatrix::FFMatrix(std::uint32_t rows, std::uint32_t cols, std::uint16_t ell)
    : rows_(rows), cols_(cols), ell_(ell) {
  check_char(ell);
  if (ell == 2) {
    stride_ = words_per_row(cols);
    w_.assign(std::size_t(rows) * stride_, 0);
  } else {
    stride_ = cols;
    b_.assign(std::size_t(rows) * stride_, 0);
  }
}

FFMatrix FFMatrix::identity(std::uint32_t n, std::uint16_t ell) {
  FFMatrix m(n, n, ell);
  for (std::uint32_t i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

FFMatrix FFMatrix::from_rows(const std::vector<FVec>& rows, std::uint32_t cols, std::uint16_t ell) {
  FFMatrix m(static_cast<std::uint32_t>(rows.size()), cols, ell);
  for (std::uint32_t r = 0; r < rows.size(); ++r) m.set_row(r, rows[r]);
  return m;
}

Fel FFMatrix::get(std::uint32_t r, std::uint32_t c) const {
  if (ell_ == 2) return (w_[std::size_t(r) * stride_ + c / 64] >> (c % 64)) & 1;
  return b_[std::size_t(r) * stride_ + c];
}

void FFMatrix::set(std::uint32_t r, std::uint32_t c, Fel v) {
  if (ell_ == 2) {
    std::uint64_t& word = w_[std::size_t(r) * stride_ + c / 64];
    std::uint64_t bit = std::uint64_t(1) << (c % 64);
    word = (v & 1) ? (word | bit) : (word & ~bit);
  } else {
    b_[std::size_t(r) * stride_ + c] = static_cast<Fel>(v % ell_);
  }
}

FVec FFMatrix::row_vec(std::uint32_t r) const {
  FVec v(cols_);
  if (ell_ == 2) {
    for (std::uint32_t c = 0; c < cols_; ++c) v[c] = get(r, c);
  } else {
    auto row = byte_row(r);
    std::copy(row.begin(), row.end(), v.begin());
  }
  return v;
}

void FFMatrix::set_row(std::uint32_t r, const FVec& v) {
  if (v.size() != cols_) throw ParamError("set_row: length mismatch");
  for (std::uint32_t c = 0; c < cols_; ++c) set(r, c, static_cast<Fel>(v[c] % ell_));
}

std::span<const std::uint64_t> FFMatrix::word_row(std::uint32_t r) const {
  return {w_.data() + std::size_t(r) * stride_, stride_};
}
std::span<std::uint64_t> FFMatrix::word_row(std::uint32_t r) {
  return {w_.data() + std::size_t(r) * stride_, stride_};
}
std::span<const Fel> FFMatrix::byte_row(std::uint32_t r) const {
  return {b_.data() + std::size_t(r) * stride_, stride_};
}
std::span<Fel> FFMatrix::byte_row(std::uint32_t r) {
  return {b_.data() + std::size_t(r) * stride_, stride_};
}

FFMatrix FFMatrix::mul(const FFMatrix& other) const {
  if (cols_ != other.rows_ || ell_ != other.ell_)
    throw ParamError("FFMatrix::mul: dimension or characteristic mismatch");
  FFMatrix out(rows_, other.cols_, ell_);
  if (ell_ == 2) {
    for (std::uint32_t i = 0; i < rows_; ++i) {
      auto dst = out.word_row(i);
      for (std::uint32_t k = 0; k < cols_; ++k) {
        if (!get(i, k)) continue;
        auto src = other.word_row(k);
        for (std::uint32_t t = 0; t < src.size(); ++t) dst[t] ^= src[t];
      }
    }
  } else {
    // 32-bit accumulators; safe while inner_dim * (ell-1)^2 < 2^32
    if (std::uint64_t(cols_) * ell_ * ell_ >= (std::uint64_t(1) << 32))
      throw ResourceError("FFMatrix::mul: inner dimension too large for accumulation");
    std::vector<std::uint32_t> acc(other.cols_);
    for (std::uint32_t i = 0; i < rows_; ++i) {
      std::fill(acc.begin(), acc.end(), 0);
      auto arow = byte_row(i);
      for (std::uint32_t k = 0; k < cols_; ++k) {
        std::uint32_t a = arow[k];
        if (!a) continue;
        auto brow = other.byte_row(k);
        for (std::uint32_t j = 0; j < other.cols_; ++j) acc[j] += a * brow[j];
      }
      auto dst = out.byte_row(i);
      for (std::uint32_t j = 0; j < other.cols_; ++j) dst[j] = static_cast<Fel>(acc[j] % ell_);
    }
  }
  return out;
}

FFMatrix FFMatrix::add(const FFMatrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_ || ell_ != other.ell_)
    throw ParamError("FFMatrix::add: shape mismatch");
  FFMatrix out = *this;
  if (ell_ == 2) {
    for (std::size_t t = 0; t < w_.size(); ++t) out.w_[t] ^= other.w_[t];
  } else {
    for (std::size_t t = 0; t < b_.size(); ++t)
      out.b_[t] = static_cast<Fel>((out.b_[t] + other.b_[t]) % ell_);
  }
  return out;
}

FFMatrix FFMatrix::scaled(Fel c) const {
  FFMatrix out = *this;
  c = static_cast<Fel>(c % ell_);
  if (ell_ == 2) {
    if (c == 0) std::fill(out.w_.begin(), out.w_.end(), 0);
  } else {
    for (auto& x : out.b_) x = static_cast<Fel>(x * c % ell_);
  }
  return out;
}

FFMatrix FFMatrix::transpose() const {
  FFMatrix out(cols_, rows_, ell_);
  for (std::uint32_t r = 0; r < rows_; ++r)
    for (std::uint32_t c = 0; c < cols_; ++c) {
      Fel v = get(r, c);
      if (v) out.set(c, r, v);
    }
  return out;
}

bool FFMatrix::is_zero() const {
  if (ell_ == 2) return std::all_of(w_.begin(), w_.end(), [](std::uint64_t x) { return x == 0; });
  return std::all_of(b_.begin(), b_.end(), [](Fel x) { return x == 0; });
}

bool FFMatrix::is_permutation() const {
  if (rows_ != cols_) return false;
  std::vector<bool> col_seen(cols_, false);
  for (std::uint32_t r = 0; r < rows_; ++r) {
    std::uint32_t nnz = 0, where = 0;
    for (std::uint32_t c = 0; c < cols_; ++c) {
      Fel v = get(r, c);
      if (v == 0) continue;
      if (v != 1) return false;
      ++nnz;
      where = c;
    }
    if (nnz != 1 || col_seen[where]) return false;
    col_seen[where] = true;
  }
  return true;
}

bool operator==(const FFMatrix& a, const FFMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.ell_ == b.ell_ && a.w_ == b.w_ && a.b_ == b.b_;
}

FVec vec_mat(const FVec& v, const FFMatrix& m) {
  if (v.size() != m.rows()) throw ParamError("vec_mat: length mismatch");
  FVec out(m.cols(), 0);
  std::uint16_t ell = m.field_char();
  if (ell == 2) {
    std::vector<std::uint64_t> acc(words_per_row(m.cols()), 0);
    for (std::uint32_t i = 0; i < v.size(); ++i) {
      if (!(v[i] & 1)) continue;
      auto row = m.word_row(i);
      for (std::uint32_t t = 0; t < row.size(); ++t) acc[t] ^= row[t];
    }
    for (std::uint32_t c = 0; c < m.cols(); ++c) out[c] = (acc[c / 64] >> (c % 64)) & 1;
  } else {
    std::vector<std::uint32_t> acc(m.cols(), 0);
    for (std::uint32_t i = 0; i < v.size(); ++i) {
      std::uint32_t a = v[i] % ell;
      if (!a) continue;
      auto row = m.byte_row(i);
      for (std::uint32_t j = 0; j < m.cols(); ++j) acc[j] += a * row[j];
    }
    for (std::uint32_t j = 0; j < m.cols(); ++j) out[j] = static_cast<Fel>(acc[j] % ell);
  }
  return out;
}

// ---- elimination --------------------------------------------------------

namespace {

// Incremental echelonizer. Pivot rows are kept normalized (leading 1) with
// zeros at earlier pivot columns; call finish() for the canonical RREF.
struct Eliminator {
  std::uint32_t cols;
  std::uint16_t ell;
  std::vector<FVec> rows;                 // byte form, also used for ell == 2
  std::vector<std::uint32_t> pivots;      // pivot column of rows[i]; increasing
  std::vector<std::int32_t> pivot_row;    // column -> row index or -1

  Eliminator(std::uint32_t cols_, std::uint16_t ell_)
      : cols(cols_), ell(ell_), pivot_row(cols_, -1) {}

  // Reduce v against the current pivot rows; returns the remainder.
  FVec reduce(const FVec& v) const {
    if (ell == 2) {
      FVec work = v;
      for (std::uint32_t c = 0; c < cols; ++c) {
        if (!work[c] || pivot_row[c] < 0) continue;
        const FVec& src = rows[pivot_row[c]];
        for (std::uint32_t j = c; j < cols; ++j) work[j] ^= src[j];
      }
      return work;
    }
    std::vector<std::uint32_t> acc(v.begin(), v.end());
    for (std::uint32_t c = 0; c < cols; ++c) {
      std::uint32_t coeff = acc[c] % ell;
      if (!coeff || pivot_row[c] < 0) continue;
      std::uint32_t mult = ell - coeff;
      const FVec& src = rows[pivot_row[c]];
      for (std::uint32_t j = c; j < cols; ++j) acc[j] += mult * src[j];
    }
    FVec out(cols);
    for (std::uint32_t j = 0; j < cols; ++j) out[j] = static_cast<Fel>(acc[j] % ell);
    return out;
  }

  // Returns true if v enlarged the span.
  bool insert(const FVec& v) {
    FVec rem = reduce(v);
    std::uint32_t lead = cols;
    for (std::uint32_t c = 0; c < cols; ++c)
      if (rem[c]) { lead = c; break; }
    if (lead == cols) return false;
    if (ell != 2 && rem[lead] != 1) {
      Fel inv = inv_mod(rem[lead], ell);
      for (auto& x : rem) x = static_cast<Fel>(x * inv % ell);
    }
    // keep rows ordered by pivot column
    auto pos = std::upper_bound(pivots.begin(), pivots.end(), lead) - pivots.begin();
    rows.insert(rows.begin() + pos, std::move(rem));
    pivots.insert(pivots.begin() + pos, lead);
    for (std::uint32_t c = 0; c < cols; ++c)
      if (pivot_row[c] >= static_cast<std::int32_t>(pos)) ++pivot_row[c];
    pivot_row[lead] = static_cast<std::int32_t>(pos);
    return true;
  }

  // Back-substitute so every pivot column is zero outside its own row.
  void back_substitute() {
    if (rows.empty()) return;
    for (std::int32_t i = static_cast<std::int32_t>(rows.size()) - 2; i >= 0; --i) {
      if (ell == 2) {
        FVec& work = rows[i];
        for (std::uint32_t j = i + 1; j < rows.size(); ++j) {
          if (!work[pivots[j]]) continue;
          const FVec& src = rows[j];
          for (std::uint32_t c = pivots[j]; c < cols; ++c) work[c] ^= src[c];
        }
      } else {
        std::vector<std::uint32_t> acc(rows[i].begin(), rows[i].end());
        for (std::uint32_t j = i + 1; j < rows.size(); ++j) {
          std::uint32_t coeff = acc[pivots[j]] % ell;
          if (!coeff) continue;
          std::uint32_t mult = ell - coeff;
          const FVec& src = rows[j];
          for (std::uint32_t c = pivots[j]; c < cols; ++c) acc[c] += mult * src[c];
        }
        for (std::uint32_t c = 0; c < cols; ++c) rows[i][c] = static_cast<Fel>(acc[c] % ell);
      }
    }
  }

  FFMatrix to_matrix() const { return FFMatrix::from_rows(rows, cols, ell); }
};

}  // namespace

RrefResult rref(const FFMatrix& m) {
  Eliminator el(m.cols(), m.field_char());
  for (std::uint32_t r = 0; r < m.rows(); ++r) el.insert(m.row_vec(r));
  el.back_substitute();
  RrefResult res;
  res.pivots = el.pivots;
  res.rank = static_cast<std::uint32_t>(el.rows.size());
  // pad with zero rows to the original row count for a same-shape RREF
  FFMatrix out(m.rows(), m.cols(), m.field_char());
  for (std::uint32_t r = 0; r < el.rows.size(); ++r) out.set_row(r, el.rows[r]);
  res.rref = std::move(out);
  return res;
}

FFMatrix kernel_basis(const FFMatrix& m) {
  RrefResult rr = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (std::uint32_t p : rr.pivots) is_pivot[p] = true;
  std::uint16_t ell = m.field_char();
  std::vector<FVec> rows;
  for (std::uint32_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    FVec x(m.cols(), 0);
    x[f] = 1;
    for (std::uint32_t r = 0; r < rr.pivots.size(); ++r) {
      Fel v = rr.rref.get(r, f);
      if (v) x[rr.pivots[r]] = static_cast<Fel>((ell - v) % ell);
    }
    rows.push_back(std::move(x));
  }
  // canonicalize
  RrefResult canon = rref(FFMatrix::from_rows(rows, m.cols(), ell));
  FFMatrix out(canon.rank, m.cols(), ell);
  for (std::uint32_t r = 0; r < canon.rank; ++r) out.set_row(r, canon.rref.row_vec(r));
  return out;
}

std::optional<FVec> solve(const FFMatrix& m, const FVec& rhs) {
  if (rhs.size() != m.rows()) throw ParamError("solve: rhs length mismatch");
  // eliminate on the augmented matrix [m | rhs]
  FFMatrix aug(m.rows(), m.cols() + 1, m.field_char());
  for (std::uint32_t r = 0; r < m.rows(); ++r) {
    FVec row = m.row_vec(r);
    row.push_back(rhs[r]);
    aug.set_row(r, row);
  }
  RrefResult rr = rref(aug);
  FVec x(m.cols(), 0);
  for (std::uint32_t r = 0; r < rr.pivots.size(); ++r) {
    if (rr.pivots[r] == m.cols()) return std::nullopt;  // pivot in the rhs column
    x[rr.pivots[r]] = rr.rref.get(r, m.cols());
  }
  return x;
}

// ---- Subspace -----------------------------------------------------------

Subspace Subspace::zero(std::uint32_t ambient, std::uint16_t ell) {
  check_char(ell);
  return Subspace(FFMatrix(0, ambient, ell), {}, ambient, ell);
}

Subspace Subspace::full(std::uint32_t ambient, std::uint16_t ell) {
  FFMatrix id = FFMatrix::identity(ambient, ell);
  std::vector<std::uint32_t> piv(ambient);
  for (std::uint32_t i = 0; i < ambient; ++i) piv[i] = i;
  return Subspace(std::move(id), std::move(piv), ambient, ell);
}

Subspace Subspace::from_rows(const FFMatrix& rows) {
  RrefResult rr = rref(rows);
  FFMatrix basis(rr.rank, rows.cols(), rows.field_char());
  for (std::uint32_t r = 0; r < rr.rank; ++r) basis.set_row(r, rr.rref.row_vec(r));
  return Subspace(std::move(basis), rr.pivots, rows.cols(), rows.field_char());
}

FVec Subspace::reduce_mod(const FVec& v) const {
  if (v.size() != ambient_) throw ParamError("Subspace::reduce_mod: length mismatch");
  if (ell_ == 2) {
    FVec work = v;
    for (std::uint32_t r = 0; r < basis_.rows(); ++r) {
      std::uint32_t p = pivots_[r];
      if (!work[p]) continue;
      auto src = basis_.word_row(r);
      for (std::uint32_t c = 0; c < ambient_; ++c) work[c] ^= (src[c / 64] >> (c % 64)) & 1;
    }
    return work;
  }
  std::vector<std::uint32_t> acc(v.begin(), v.end());
  for (std::uint32_t r = 0; r < basis_.rows(); ++r) {
    std::uint32_t p = pivots_[r];
    std::uint32_t coeff = acc[p] % ell_;
    if (!coeff) continue;
    std::uint32_t mult = ell_ - coeff;
    auto src = basis_.byte_row(r);
    for (std::uint32_t c = p; c < ambient_; ++c) acc[c] += mult * src[c];
  }
  FVec out(ambient_);
  for (std::uint32_t c = 0; c < ambient_; ++c) out[c] = static_cast<Fel>(acc[c] % ell_);
  return out;
}

bool Subspace::contains(const FVec& v) const {
  FVec rem = reduce_mod(v);
  return std::all_of(rem.begin(), rem.end(), [](Fel x) { return x == 0; });
}

bool Subspace::contains(const Subspace& other) const {
  if (other.ambient_ != ambient_ || other.ell_ != ell_) return false;
  for (std::uint32_t r = 0; r < other.dim(); ++r)
    if (!contains(other.basis_.row_vec(r))) return false;
  return true;
}

std::optional<FVec> Subspace::coords_of(const FVec& v) const {
  if (!contains(v)) return std::nullopt;
  FVec coords(dim());
  for (std::uint32_t r = 0; r < dim(); ++r) coords[r] = v[pivots_[r]];
  return coords;
}

bool operator==(const Subspace& a, const Subspace& b) {
  return a.ambient_ == b.ambient_ && a.ell_ == b.ell_ && a.basis_ == b.basis_;
}

Subspace spin(const FFMatrix& seed_rows, std::span<const FFMatrix> actions) {
  std::uint32_t n = seed_rows.cols();
  std::uint16_t ell = seed_rows.field_char();
  for (const FFMatrix& a : actions)
    if (a.rows() != n || a.cols() != n || a.field_char() != ell)
      throw ParamError("spin: action matrices must be square of the ambient dimension");
  Eliminator el(n, ell);
  std::vector<FVec> queue;
  for (std::uint32_t r = 0; r < seed_rows.rows(); ++r) {
    FVec v = seed_rows.row_vec(r);
    if (el.insert(v)) queue.push_back(std::move(v));
  }
  // work-list closure under every action
  for (std::size_t head = 0; head < queue.size() && el.rows.size() < n; ++head) {
    FVec cur = queue[head];
    for (const FFMatrix& a : actions) {
      FVec img = vec_mat(cur, a);
      if (el.insert(img)) queue.push_back(std::move(img));
      if (el.rows.size() == n) break;
    }
  }
  el.back_substitute();
  return Subspace::from_rows(el.to_matrix());
}

void enumerate_subspaces(std::uint32_t n, std::uint16_t ell,
                         const std::function<void(const Subspace&)>& fn,
                         const Limits& lim) {
  check_char(ell);
  double size = 1;
  for (std::uint32_t i = 0; i < n; ++i) size *= ell;
  if (size > static_cast<double>(lim.subspace_enum_cap))
    throw ResourceError("enumerate_subspaces: ell^n exceeds subspace_enum_cap");

  fn(Subspace::zero(n, ell));
  for (std::uint32_t k = 1; k <= n; ++k) {
    // iterate pivot column combinations in lexicographic order
    std::vector<std::uint32_t> piv(k);
    for (std::uint32_t i = 0; i < k; ++i) piv[i] = i;
    while (true) {
      std::vector<bool> is_pivot(n, false);
      for (std::uint32_t p : piv) is_pivot[p] = true;
      // free cells: (row r, col c) with c > piv[r] and c not a pivot column
      std::vector<std::pair<std::uint32_t, std::uint32_t>> free_cells;
      for (std::uint32_t r = 0; r < k; ++r)
        for (std::uint32_t c = piv[r] + 1; c < n; ++c)
          if (!is_pivot[c]) free_cells.emplace_back(r, c);
      std::uint64_t combos = 1;
      for (std::size_t i = 0; i < free_cells.size(); ++i) combos *= ell;
      for (std::uint64_t code = 0; code < combos; ++code) {
        FFMatrix basis(k, n, ell);
        for (std::uint32_t r = 0; r < k; ++r) basis.set(r, piv[r], 1);
        std::uint64_t rest = code;
        for (const auto& [r, c] : free_cells) {
          basis.set(r, c, static_cast<Fel>(rest % ell));
          rest /= ell;
        }
        fn(Subspace::from_rows(basis));
      }
      // next combination
      std::int32_t i = static_cast<std::int32_t>(k) - 1;
      while (i >= 0 && piv[i] == n - k + i) --i;
      if (i < 0) break;
      ++piv[i];
      for (std::uint32_t j = i + 1; j < k; ++j) piv[j] = piv[j - 1] + 1;
    }
  }
}

}  // namespace grouptensor

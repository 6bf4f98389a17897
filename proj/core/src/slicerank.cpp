#include "grouptensor/slicerank.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <tuple>

#include "grouptensor/errors.hpp"

namespace grouptensor {

Tensor3 make_tensor3(std::array<std::uint32_t, 3> dims, std::uint16_t ell,
                     std::vector<Tensor3::Entry> entries) {
  Tensor3 t;
  t.dims = dims;
  t.ell = ell;
  for (Tensor3::Entry& e : entries) {
    if (e.i >= dims[0] || e.j >= dims[1] || e.k >= dims[2])
      throw ParamError("tensor: entry index out of range");
    e.v = static_cast<Fel>(e.v % ell);
    if (e.v) t.entries.push_back(e);
  }
  std::sort(t.entries.begin(), t.entries.end(), [](const auto& a, const auto& b) {
    return std::tie(a.i, a.j, a.k) < std::tie(b.i, b.j, b.k);
  });
  for (std::size_t s = 1; s < t.entries.size(); ++s) {
    const auto& a = t.entries[s - 1];
    const auto& b = t.entries[s];
    if (a.i == b.i && a.j == b.j && a.k == b.k)
      throw ParamError("tensor: duplicate entry at (" + std::to_string(a.i) + "," +
                       std::to_string(a.j) + "," + std::to_string(a.k) + ")");
  }
  return t;
}

Fel tensor_coeff(const Tensor3& t, std::uint32_t i, std::uint32_t j, std::uint32_t k) {
  Tensor3::Entry probe{i, j, k, 1};
  auto it = std::lower_bound(t.entries.begin(), t.entries.end(), probe,
                             [](const auto& a, const auto& b) {
                               return std::tie(a.i, a.j, a.k) < std::tie(b.i, b.j, b.k);
                             });
  if (it != t.entries.end() && it->i == i && it->j == j && it->k == k) return it->v;
  return 0;
}

// ---- structure constants --------------------------------------------------

StructureConstants StructureConstants::from_products(
    std::uint32_t dim, std::uint16_t ell,
    std::vector<std::vector<std::vector<std::pair<std::uint32_t, Fel>>>> products) {
  StructureConstants sc;
  sc.dim_ = dim;
  sc.ell_ = ell;
  sc.offsets_.reserve(std::size_t(dim) * dim + 1);
  sc.offsets_.push_back(0);
  for (std::uint32_t i = 0; i < dim; ++i)
    for (std::uint32_t j = 0; j < dim; ++j) {
      auto& lst = products[i][j];
      std::sort(lst.begin(), lst.end());
      for (auto& [k, v] : lst) {
        if (k >= dim) throw ParamError("structure constants: index out of range");
        v = static_cast<Fel>(v % ell);
        if (v) sc.entries_.emplace_back(k, v);
      }
      sc.offsets_.push_back(sc.entries_.size());
    }
  return sc;
}

StructureConstants StructureConstants::group_algebra(const Group& g, std::uint16_t ell,
                                                     const Limits& lim) {
  const std::uint64_t n = g.order();
  if (n > lim.modrep_cap)
    throw ResourceError("group_algebra: order exceeds modrep_cap");
  StructureConstants sc;
  sc.dim_ = static_cast<std::uint32_t>(n);
  sc.ell_ = ell;
  sc.offsets_.reserve(n * n + 1);
  sc.offsets_.push_back(0);
  sc.entries_.reserve(n * n);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j) {
      sc.entries_.emplace_back(g.mul_index(i, j), 1);
      sc.offsets_.push_back(sc.entries_.size());
    }
  return sc;
}

StructureConstants StructureConstants::matrix_algebra(std::uint32_t d, std::uint16_t ell) {
  // basis E_{ab} indexed a*d+b; E_{ab} E_{cd} = delta_{bc} E_{ad}
  StructureConstants sc;
  sc.dim_ = d * d;
  sc.ell_ = ell;
  sc.offsets_.push_back(0);
  for (std::uint32_t a = 0; a < d; ++a)
    for (std::uint32_t b = 0; b < d; ++b)
      for (std::uint32_t c = 0; c < d; ++c)
        for (std::uint32_t e = 0; e < d; ++e) {
          if (b == c) sc.entries_.emplace_back(a * d + e, 1);
          sc.offsets_.push_back(sc.entries_.size());
        }
  return sc;
}

std::span<const std::pair<std::uint32_t, Fel>> StructureConstants::product(std::uint32_t i,
                                                                           std::uint32_t j) const {
  std::size_t idx = std::size_t(i) * dim_ + j;
  return {entries_.data() + offsets_[idx],
          static_cast<std::size_t>(offsets_[idx + 1] - offsets_[idx])};
}

FVec StructureConstants::multiply(const FVec& u, const FVec& v) const {
  if (u.size() != dim_ || v.size() != dim_) throw ParamError("multiply: length mismatch");
  std::vector<std::uint32_t> acc(dim_, 0);
  for (std::uint32_t i = 0; i < dim_; ++i) {
    if (!u[i]) continue;
    for (std::uint32_t j = 0; j < dim_; ++j) {
      if (!v[j]) continue;
      std::uint32_t uv = u[i] * v[j] % ell_;
      if (!uv) continue;
      for (auto [k, c] : product(i, j)) acc[k] = (acc[k] + uv * c) % ell_;
    }
  }
  FVec out(dim_);
  for (std::uint32_t k = 0; k < dim_; ++k) out[k] = static_cast<Fel>(acc[k]);
  return out;
}

// ---- tensors ---------------------------------------------------------------

Tensor3 build_group_tensor(const Group& g, std::uint16_t ell, const Limits& lim) {
  const std::uint64_t n = g.order();
  if (n > lim.modrep_cap)
    throw ResourceError("build_group_tensor: order exceeds modrep_cap");
  Tensor3 t;
  t.dims = {static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(n),
            static_cast<std::uint32_t>(n)};
  t.ell = ell;
  t.entries.reserve(n * n);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j)
      t.entries.push_back(Tensor3::Entry{i, j, g.mul_index(i, j), 1});
  std::sort(t.entries.begin(), t.entries.end(), [](const auto& a, const auto& b) {
    return std::tie(a.i, a.j, a.k) < std::tie(b.i, b.j, b.k);
  });
  return t;
}

Tensor3 build_algebra_tensor(const StructureConstants& sc) {
  const std::uint32_t n = sc.dim();
  // associativity spot-check on 100 pseudo-random basis triples
  std::mt19937_64 rng(0x5eed5eedULL);
  for (int trial = 0; trial < 100; ++trial) {
    std::uint32_t i = static_cast<std::uint32_t>(rng() % n);
    std::uint32_t j = static_cast<std::uint32_t>(rng() % n);
    std::uint32_t k = static_cast<std::uint32_t>(rng() % n);
    FVec ei(n, 0), ej(n, 0), ek(n, 0);
    ei[i] = 1; ej[j] = 1; ek[k] = 1;
    if (sc.multiply(sc.multiply(ei, ej), ek) != sc.multiply(ei, sc.multiply(ej, ek)))
      throw ParamError("build_algebra_tensor: structure constants are not associative");
  }
  std::vector<Tensor3::Entry> entries;
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j)
      for (auto [k, v] : sc.product(i, j)) entries.push_back(Tensor3::Entry{i, j, k, v});
  return make_tensor3({n, n, n}, sc.field_char(), std::move(entries));
}

QuotientTensorResult quotient_tensor(const StructureConstants& sc, const Subspace& ideal) {
  const std::uint32_t n = sc.dim();
  const std::uint16_t ell = sc.field_char();
  if (ideal.ambient() != n || ideal.field_char() != ell)
    throw ParamError("quotient_tensor: ideal does not live in the algebra");

  // two-sided ideal check on basis products
  for (std::uint32_t r = 0; r < ideal.dim(); ++r) {
    FVec row = ideal.basis().row_vec(r);
    for (std::uint32_t i = 0; i < n; ++i) {
      FVec unit(n, 0);
      unit[i] = 1;
      if (!ideal.contains(sc.multiply(unit, row)) || !ideal.contains(sc.multiply(row, unit)))
        throw ParamError("quotient_tensor: subspace is not a two-sided ideal");
    }
  }

  // S = complement coordinates of the ideal's RREF; their images form a basis
  std::vector<std::uint32_t> kept;
  {
    std::vector<bool> is_pivot(n, false);
    for (std::uint32_t p : ideal.pivots()) is_pivot[p] = true;
    for (std::uint32_t c = 0; c < n; ++c)
      if (!is_pivot[c]) kept.push_back(c);
  }
  const std::uint32_t q = static_cast<std::uint32_t>(kept.size());
  std::vector<std::uint32_t> kept_pos(n, 0xffffffffu);
  for (std::uint32_t s = 0; s < q; ++s) kept_pos[kept[s]] = s;

  // route 1: transform T_A — keep modes 1-2 on S, push mode 3 through the
  // quotient map (reduce mod the ideal, read complement coordinates)
  std::vector<Tensor3::Entry> transformed;
  for (std::uint32_t s = 0; s < q; ++s)
    for (std::uint32_t t = 0; t < q; ++t) {
      FVec prod(n, 0);
      for (auto [k, v] : sc.product(kept[s], kept[t]))
        prod[k] = static_cast<Fel>((prod[k] + v) % ell);
      FVec red = ideal.reduce_mod(prod);
      for (std::uint32_t u = 0; u < q; ++u)
        if (red[kept[u]])
          transformed.push_back(Tensor3::Entry{s, t, u, red[kept[u]]});
    }
  Tensor3 route1 = make_tensor3({q, q, q}, ell, std::move(transformed));

  // route 2: direct structure constants of A/I
  std::vector<std::vector<std::vector<std::pair<std::uint32_t, Fel>>>> products(
      q, std::vector<std::vector<std::pair<std::uint32_t, Fel>>>(q));
  for (std::uint32_t s = 0; s < q; ++s)
    for (std::uint32_t t = 0; t < q; ++t) {
      FVec es(n, 0), et(n, 0);
      es[kept[s]] = 1;
      et[kept[t]] = 1;
      FVec red = ideal.reduce_mod(sc.multiply(es, et));
      for (std::uint32_t c = 0; c < n; ++c) {
        if (!red[c]) continue;
        if (kept_pos[c] == 0xffffffffu)
          throw InternalError("quotient_tensor: residue has support on a pivot coordinate");
        products[s][t].emplace_back(kept_pos[c], red[c]);
      }
    }
  StructureConstants qsc = StructureConstants::from_products(q, ell, std::move(products));
  Tensor3 route2 = build_algebra_tensor(qsc);

  if (!(route1 == route2))
    throw InternalError("quotient_tensor: transformed tensor disagrees with the direct quotient");
  return QuotientTensorResult{std::move(route1), std::move(kept), std::move(qsc)};
}

// ---- slice rank bounds ------------------------------------------------------

std::uint32_t sr_lower_from_matching(const Group& g, const Tensor3& t, const Matching& cand) {
  VerifyResult check = verify_matching(g, cand);
  if (!check.valid) {
    auto v = *check.violation;
    throw ParamError("sr_lower_from_matching: invalid matching, first violation at (" +
                     std::to_string(v.i) + "," + std::to_string(v.j) + "," + std::to_string(v.k) + ")");
  }
  const std::uint32_t m = cand.size();
  // certificate: restricting mode 3 to the inverses of the c-list embeds the
  // m x m x m unit diagonal, since the (i,j,k) coefficient is
  // [c_k^-1 = a_i b_j] = [a_i b_j c_k = 1]
  for (std::uint32_t i = 0; i < m; ++i)
    for (std::uint32_t j = 0; j < m; ++j)
      for (std::uint32_t k = 0; k < m; ++k) {
        Fel expect = (i == j && j == k) ? 1 : 0;
        if (tensor_coeff(t, g.index_of(cand.a[i]), g.index_of(cand.b[j]),
                         g.inv_index(g.index_of(cand.c[k]))) != expect)
          throw ParamError("sr_lower_from_matching: tensor does not embed the unit diagonal");
      }
  return m;
}

std::uint64_t sr_lower_semisimple(const Group& g, std::uint16_t ell, const SimpleSummary& summary) {
  if (summary.group != g.descriptor() || summary.ell != ell)
    throw ParamError("sr_lower_semisimple: summary does not match group/characteristic");
  return summary.dim_semisimple;
}

// ---- exact oracle ------------------------------------------------------------

namespace {

// T(u, ., .) as a dense dims[1] x dims[2] matrix
FFMatrix mode1_slice(const Tensor3& t, const FVec& u) {
  FFMatrix s(t.dims[1], t.dims[2], t.ell);
  for (const auto& e : t.entries) {
    if (!u[e.i]) continue;
    Fel cur = s.get(e.j, e.k);
    s.set(e.j, e.k, static_cast<Fel>((cur + std::uint32_t(u[e.i]) * e.v) % t.ell));
  }
  return s;
}

void check_guard(const Tensor3& t, const Limits& lim) {
  for (std::uint32_t d : t.dims) {
    double size = 1;
    for (std::uint32_t i = 0; i < d; ++i) size *= t.ell;
    if (size > static_cast<double>(lim.subspace_enum_cap))
      throw ResourceError("exact_slice_rank: ell^dim exceeds subspace_enum_cap");
  }
}

}  // namespace

bool triple_vanishes(const Tensor3& t, const VanishingTriple& w) {
  if (w.v1.ambient() != t.dims[0] || w.v2.ambient() != t.dims[1] || w.v3.ambient() != t.dims[2])
    throw ParamError("triple_vanishes: ambient dimension mismatch");
  for (std::uint32_t a = 0; a < w.v1.dim(); ++a) {
    FFMatrix s = mode1_slice(t, w.v1.basis().row_vec(a));
    for (std::uint32_t b = 0; b < w.v2.dim(); ++b) {
      FVec row = vec_mat(w.v2.basis().row_vec(b), s);
      for (std::uint32_t c = 0; c < w.v3.dim(); ++c) {
        FVec wv = w.v3.basis().row_vec(c);
        std::uint32_t dot = 0;
        for (std::uint32_t x = 0; x < row.size(); ++x) dot += std::uint32_t(row[x]) * wv[x];
        if (dot % t.ell) return false;
      }
    }
  }
  return true;
}

ExactSliceRank exact_slice_rank(const Tensor3& t, const Limits& lim) {
  check_guard(t, lim);
  std::vector<Subspace> mode1, mode2;
  enumerate_subspaces(t.dims[0], t.ell, [&](const Subspace& s) { mode1.push_back(s); }, lim);
  enumerate_subspaces(t.dims[1], t.ell, [&](const Subspace& s) { mode2.push_back(s); }, lim);
  // visit large subspaces (small codim) first so pruning bites early
  auto by_codim = [](const Subspace& a, const Subspace& b) { return a.codim() < b.codim(); };
  std::stable_sort(mode1.begin(), mode1.end(), by_codim);
  std::stable_sort(mode2.begin(), mode2.end(), by_codim);

  // the all-zero triple vanishes on every tensor; start from it
  std::uint32_t best = t.dims[0] + t.dims[1] + t.dims[2];
  VanishingTriple witness{Subspace::zero(t.dims[0], t.ell), Subspace::zero(t.dims[1], t.ell),
                          Subspace::zero(t.dims[2], t.ell), best};
  for (const Subspace& v1 : mode1) {
    if (v1.codim() >= best) break;
    std::vector<FFMatrix> slices;
    slices.reserve(v1.dim());
    for (std::uint32_t a = 0; a < v1.dim(); ++a)
      slices.push_back(mode1_slice(t, v1.basis().row_vec(a)));
    for (const Subspace& v2 : mode2) {
      std::uint32_t base = v1.codim() + v2.codim();
      if (base >= best) break;
      // stack T(u_a, v_b, .) rows; the best V3 is their annihilator
      std::vector<FVec> rows;
      rows.reserve(std::size_t(v1.dim()) * v2.dim());
      for (const FFMatrix& s : slices)
        for (std::uint32_t b = 0; b < v2.dim(); ++b)
          rows.push_back(vec_mat(v2.basis().row_vec(b), s));
      FFMatrix stacked = FFMatrix::from_rows(rows, t.dims[2], t.ell);
      RrefResult rr = rref(stacked);
      std::uint32_t total = base + rr.rank;
      if (total < best) {
        best = total;
        witness.v1 = v1;
        witness.v2 = v2;
        witness.v3 = Subspace::from_rows(kernel_basis(stacked));
        witness.codim_sum = total;
      }
    }
  }
  if (!triple_vanishes(t, witness))
    throw InternalError("exact_slice_rank: witness does not vanish");
  return ExactSliceRank{best, std::move(witness)};
}

// ---- constructive slice decomposition ----------------------------------------

namespace {

// complement coordinates (non-pivot columns) of a subspace
std::vector<std::uint32_t> complement_coords(const Subspace& s) {
  std::vector<bool> is_pivot(s.ambient(), false);
  for (std::uint32_t p : s.pivots()) is_pivot[p] = true;
  std::vector<std::uint32_t> out;
  for (std::uint32_t c = 0; c < s.ambient(); ++c)
    if (!is_pivot[c]) out.push_back(c);
  return out;
}

// projection onto the subspace along the complement coordinates, applied to a
// unit vector e_a: equals the basis row with pivot a, or zero
FVec project_unit(const Subspace& s, std::uint32_t a) {
  for (std::uint32_t r = 0; r < s.dim(); ++r)
    if (s.pivots()[r] == a) return s.basis().row_vec(r);
  return FVec(s.ambient(), 0);
}

}  // namespace

std::vector<Slice> vanishing_triple_to_slices(const Tensor3& t, const VanishingTriple& w) {
  if (!triple_vanishes(t, w))
    throw ParamError("vanishing_triple_to_slices: triple does not vanish on the tensor");
  const std::uint16_t ell = t.ell;
  const std::uint32_t n1 = t.dims[0], n2 = t.dims[1], n3 = t.dims[2];
  std::vector<Slice> out;

  auto covector_for = [ell](const Subspace& s, std::uint32_t j) {
    // complement covector: coefficient of e_j in the complement component,
    // gamma_j = e_j^* - sum_r basis[r][j] e_{pivot_r}^*
    FVec gamma(s.ambient(), 0);
    gamma[j] = 1;
    for (std::uint32_t r = 0; r < s.dim(); ++r) {
      Fel v = s.basis().get(r, j);
      if (v) gamma[s.pivots()[r]] = static_cast<Fel>((ell - v) % ell);
    }
    return gamma;
  };

  // mode-1 slices: T(c1(x), y, z) = sum_j gamma_j(x) T(e_j, y, z)
  for (std::uint32_t j : complement_coords(w.v1)) {
    FFMatrix m(n2, n3, ell);
    for (const auto& e : t.entries) {
      if (e.i != j) continue;
      m.set(e.j, e.k, static_cast<Fel>((m.get(e.j, e.k) + e.v) % ell));
    }
    out.push_back(Slice{0, covector_for(w.v1, j), std::move(m)});
  }
  // mode-2 slices: T(pi1(x), c2(y), z)
  std::vector<FVec> pi1(n1);
  for (std::uint32_t a = 0; a < n1; ++a) pi1[a] = project_unit(w.v1, a);
  for (std::uint32_t j : complement_coords(w.v2)) {
    FFMatrix m(n1, n3, ell);
    for (const auto& e : t.entries) {
      if (e.j != j) continue;
      for (std::uint32_t a = 0; a < n1; ++a) {
        Fel u = pi1[a][e.i];
        if (u) m.set(a, e.k, static_cast<Fel>((m.get(a, e.k) + std::uint32_t(u) * e.v) % ell));
      }
    }
    out.push_back(Slice{1, covector_for(w.v2, j), std::move(m)});
  }
  // mode-3 slices: T(pi1(x), pi2(y), c3(z))
  std::vector<FVec> pi2(n2);
  for (std::uint32_t b = 0; b < n2; ++b) pi2[b] = project_unit(w.v2, b);
  for (std::uint32_t j : complement_coords(w.v3)) {
    FFMatrix m(n1, n2, ell);
    for (const auto& e : t.entries) {
      if (e.k != j) continue;
      for (std::uint32_t a = 0; a < n1; ++a) {
        Fel u = pi1[a][e.i];
        if (!u) continue;
        for (std::uint32_t b = 0; b < n2; ++b) {
          Fel v = pi2[b][e.j];
          if (v)
            m.set(a, b,
                  static_cast<Fel>((m.get(a, b) + std::uint32_t(u) * v % ell * e.v) % ell));
        }
      }
    }
    out.push_back(Slice{2, covector_for(w.v3, j), std::move(m)});
  }

  if (out.size() != w.codim_sum)
    throw InternalError("vanishing_triple_to_slices: slice count != codim sum");

  // reconstruction check, coefficient by coefficient
  for (std::uint32_t a = 0; a < n1; ++a)
    for (std::uint32_t b = 0; b < n2; ++b)
      for (std::uint32_t c = 0; c < n3; ++c) {
        std::uint32_t acc = 0;
        for (const Slice& s : out) {
          if (s.mode == 0) acc += std::uint32_t(s.covector[a]) * s.matrix.get(b, c);
          else if (s.mode == 1) acc += std::uint32_t(s.covector[b]) * s.matrix.get(a, c);
          else acc += std::uint32_t(s.covector[c]) * s.matrix.get(a, b);
          acc %= ell;
        }
        if (acc != tensor_coeff(t, a, b, c))
          throw InternalError("vanishing_triple_to_slices: reconstruction mismatch");
      }
  return out;
}

Tensor3 transform_tensor(const Tensor3& t, const FFMatrix& a, const FFMatrix& b,
                         const FFMatrix& c) {
  if (a.cols() != t.dims[0] || b.cols() != t.dims[1] || c.cols() != t.dims[2] ||
      a.field_char() != t.ell || b.field_char() != t.ell || c.field_char() != t.ell)
    throw ParamError("transform_tensor: map shapes must match the tensor modes");
  const std::uint16_t ell = t.ell;
  std::array<std::uint32_t, 3> nd{a.rows(), b.rows(), c.rows()};
  std::vector<std::uint32_t> dense(std::size_t(nd[0]) * nd[1] * nd[2], 0);
  for (const auto& e : t.entries)
    for (std::uint32_t x = 0; x < nd[0]; ++x) {
      Fel av = a.get(x, e.i);
      if (!av) continue;
      for (std::uint32_t y = 0; y < nd[1]; ++y) {
        Fel bv = b.get(y, e.j);
        if (!bv) continue;
        std::uint32_t partial = std::uint32_t(e.v) * av % ell * bv % ell;
        for (std::uint32_t z = 0; z < nd[2]; ++z) {
          Fel cv = c.get(z, e.k);
          if (cv)
            dense[(std::size_t(x) * nd[1] + y) * nd[2] + z] =
                (dense[(std::size_t(x) * nd[1] + y) * nd[2] + z] + partial * cv) % ell;
        }
      }
    }
  std::vector<Tensor3::Entry> entries;
  for (std::uint32_t x = 0; x < nd[0]; ++x)
    for (std::uint32_t y = 0; y < nd[1]; ++y)
      for (std::uint32_t z = 0; z < nd[2]; ++z) {
        Fel v = static_cast<Fel>(dense[(std::size_t(x) * nd[1] + y) * nd[2] + z]);
        if (v) entries.push_back(Tensor3::Entry{x, y, z, v});
      }
  return make_tensor3(nd, ell, std::move(entries));
}

bool sr_monotonicity_check(const Tensor3& t, const FFMatrix& a, const FFMatrix& b,
                           const FFMatrix& c, const Limits& lim) {
  std::uint32_t before = exact_slice_rank(t, lim).value;
  std::uint32_t after = exact_slice_rank(transform_tensor(t, a, b, c), lim).value;
  return after <= before;
}

// ---- CLP counting -------------------------------------------------------------

ClpResult clp_count(std::uint64_t p, std::uint32_t n) {
  if (!is_prime_u64(p) || p == 2) throw ParamError("clp_count: p must be an odd prime");
  if (n < 1) throw ParamError("clp_count: n must be >= 1");
  if (static_cast<double>(n) * std::log2(static_cast<double>(p)) > 120.0)
    throw ResourceError("clp_count: p^n too large to count exactly");

  using BigU = unsigned __int128;
  const std::uint64_t max_sum = (p - 1) * n;
  std::vector<BigU> counts(max_sum + 1, 0);
  counts[0] = 1;
  for (std::uint32_t coord = 0; coord < n; ++coord) {
    std::vector<BigU> next(max_sum + 1, 0);
    for (std::uint64_t s = 0; s <= (p - 1) * coord; ++s) {
      if (!counts[s]) continue;
      for (std::uint64_t d = 0; d < p; ++d) next[s + d] += counts[s];
    }
    counts = std::move(next);
  }
  BigU total = 0;
  for (std::uint64_t s = 0; s <= max_sum; ++s)
    if (3 * s <= std::uint64_t(p - 1) * n) total += counts[s];

  if (total > BigU(~std::uint64_t(0)))
    throw ResourceError("clp_count: count exceeds 64-bit range");
  ClpResult out;
  out.count = static_cast<std::uint64_t>(total);

  BigU pn = 1;
  for (std::uint32_t i = 0; i < n; ++i) pn *= p;
  BigU bound = 3 * total;
  if (bound >= pn) {
    out.clamped = true;
    bound = pn;
  }
  if (bound > BigU(~std::uint64_t(0)))
    throw ResourceError("clp_count: bound exceeds 64-bit range");
  out.bound = static_cast<std::uint64_t>(bound);
  return out;
}

double c_p(std::uint64_t p, double tol) {
  if (!is_prime_u64(p) || p == 2) throw ParamError("c_p: p must be an odd prime");
  if (!(tol > 0)) throw ParamError("c_p: tol must be positive");

  auto f = [p](double t) {
    double sum = 0, power = 1;
    for (std::uint64_t i = 0; i < p; ++i) {
      sum += power;
      power *= t;
    }
    return sum * std::pow(t, -double(p - 1) / 3.0);
  };

  // coarse scan for a bracket
  double best_t = 0.5, best_f = f(0.5);
  for (double t = 0.005; t < 0.9995; t += 0.002) {
    double v = f(t);
    if (v < best_f) {
      best_f = v;
      best_t = t;
    }
  }
  double lo = std::max(1e-9, best_t - 0.002), hi = std::min(1.0 - 1e-9, best_t + 0.002);

  // golden-section refinement
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double width_target = std::max(tol * 1e-3, 1e-14);
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > width_target) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = f(x2);
    }
  }
  return f((lo + hi) / 2);
}

}  // namespace grouptensor

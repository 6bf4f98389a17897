#include "grouptensor/matching.hpp"

#include <algorithm>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include "grouptensor/errors.hpp"

namespace grouptensor {

namespace {

std::vector<std::uint32_t> to_indices(const Group& g, const std::vector<ElementId>& ids,
                                      const char* which) {
  std::vector<std::uint32_t> out;
  out.reserve(ids.size());
  std::unordered_set<std::uint32_t> seen;
  for (ElementId id : ids) {
    std::uint32_t idx = g.index_of(id);
    if (!seen.insert(idx).second)
      throw ParamError(std::string("matching: duplicate entry in list ") + which);
    out.push_back(idx);
  }
  return out;
}

}  // namespace

VerifyResult verify_matching(const Group& g, const Matching& cand) {
  if (cand.a.size() != cand.b.size() || cand.a.size() != cand.c.size())
    throw ParamError("matching: lists must have equal length");
  auto ai = to_indices(g, cand.a, "a");
  auto bi = to_indices(g, cand.b, "b");
  auto ci = to_indices(g, cand.c, "c");
  const std::uint32_t m = static_cast<std::uint32_t>(ai.size());

  std::unordered_map<std::uint32_t, std::uint32_t> c_pos;
  for (std::uint32_t k = 0; k < m; ++k) c_pos.emplace(ci[k], k);

  // scan (i, j) lexicographically; for fixed (i, j) there is at most one k
  // with a_i b_j c_k = 1, namely the position of (a_i b_j)^-1 in c
  for (std::uint32_t i = 0; i < m; ++i)
    for (std::uint32_t j = 0; j < m; ++j) {
      std::uint32_t z = g.inv_index(g.mul_index(ai[i], bi[j]));
      auto it = c_pos.find(z);
      std::uint32_t first_bad = m;  // smallest violating k for this (i, j)
      if (it != c_pos.end()) {
        std::uint32_t k = it->second;
        if (!(i == j && k == i)) first_bad = k;
      }
      if (i == j && (it == c_pos.end() || it->second != i))
        first_bad = std::min(first_bad, i);  // diagonal triple fails to hit 1
      if (first_bad != m)
        return VerifyResult{false, MatchingViolation{i, j, first_bad}};
    }
  return VerifyResult{true, std::nullopt};
}

// ---- exact search ---------------------------------------------------------

namespace {

struct MatchingSearch {
  const Group& g;
  std::uint32_t n;
  std::vector<std::uint32_t> mul, inv;  // dense tables
  std::vector<std::uint32_t> as, bs, cs;
  std::vector<char> used_a, used_b, in_c;
  std::vector<std::uint32_t> zoff;  // multiset of off-diagonal (a_i b_j)^-1
  std::uint32_t best = 0;
  std::vector<std::uint32_t> best_a, best_b, best_c;

  explicit MatchingSearch(const Group& group)
      : g(group), n(static_cast<std::uint32_t>(group.order())) {
    mul.resize(std::size_t(n) * n);
    inv.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      inv[i] = g.inv_index(i);
      for (std::uint32_t j = 0; j < n; ++j) mul[std::size_t(i) * n + j] = g.mul_index(i, j);
    }
    used_a.assign(n, 0);
    used_b.assign(n, 0);
    in_c.assign(n, 0);
    zoff.assign(n, 0);
  }

  std::uint32_t product_inv(std::uint32_t x, std::uint32_t y) const {
    return inv[mul[std::size_t(x) * n + y]];
  }

  bool can_push(std::uint32_t x, std::uint32_t y, std::uint32_t& z_out) const {
    if (used_a[x] || used_b[y]) return false;
    std::uint32_t z = product_inv(x, y);
    if (in_c[z] || zoff[z]) return false;
    for (std::uint32_t j = 0; j < bs.size(); ++j) {
      std::uint32_t zn = product_inv(x, bs[j]);
      if (in_c[zn] || zn == z) return false;
    }
    for (std::uint32_t i = 0; i < as.size(); ++i) {
      std::uint32_t zn = product_inv(as[i], y);
      if (in_c[zn] || zn == z) return false;
    }
    z_out = z;
    return true;
  }

  void push(std::uint32_t x, std::uint32_t y, std::uint32_t z) {
    for (std::uint32_t j = 0; j < bs.size(); ++j) ++zoff[product_inv(x, bs[j])];
    for (std::uint32_t i = 0; i < as.size(); ++i) ++zoff[product_inv(as[i], y)];
    as.push_back(x);
    bs.push_back(y);
    cs.push_back(z);
    used_a[x] = used_b[y] = 1;
    in_c[z] = 1;
  }

  void pop() {
    std::uint32_t x = as.back(), y = bs.back(), z = cs.back();
    as.pop_back();
    bs.pop_back();
    cs.pop_back();
    used_a[x] = used_b[y] = 0;
    in_c[z] = 0;
    for (std::uint32_t j = 0; j < bs.size(); ++j) --zoff[product_inv(x, bs[j])];
    for (std::uint32_t i = 0; i < as.size(); ++i) --zoff[product_inv(as[i], y)];
  }

  void record() {
    if (as.size() > best) {
      best = static_cast<std::uint32_t>(as.size());
      best_a = as;
      best_b = bs;
      best_c = cs;
    }
  }

  // extend with a_t > as.back(); b_t unrestricted
  void dfs() {
    record();
    std::uint32_t last_a = as.back();
    if (as.size() + (n - 1 - last_a) <= best) return;  // bound: a is strictly increasing
    for (std::uint32_t x = last_a + 1; x < n; ++x) {
      for (std::uint32_t y = 0; y < n; ++y) {
        std::uint32_t z;
        if (!can_push(x, y, z)) continue;
        push(x, y, z);
        dfs();
        pop();
      }
    }
  }
};

}  // namespace

ExactMatchingResult exact_max_matching(const Group& g, const Limits& lim) {
  if (g.order() > lim.exact_matching_cap)
    throw ResourceError("exact_max_matching: order " + std::to_string(g.order()) +
                        " exceeds exact_matching_cap; use heuristic_matching");
  MatchingSearch search(g);
  // normalization: the two-sided translation symmetry lets the first triple
  // be (e, e, e), and simultaneous reindexing sorts the a-list
  search.push(0, 0, 0);
  search.dfs();
  ExactMatchingResult out;
  out.m = search.best;
  for (std::uint32_t i = 0; i < search.best; ++i) {
    out.witness.a.push_back(g.element(search.best_a[i]));
    out.witness.b.push_back(g.element(search.best_b[i]));
    out.witness.c.push_back(g.element(search.best_c[i]));
  }
  VerifyResult check = verify_matching(g, out.witness);
  if (!check.valid) throw InternalError("exact_max_matching: witness failed verification");
  return out;
}

Matching heuristic_matching(const Group& g, std::uint64_t seed, std::uint32_t iters) {
  MatchingSearch state(g);
  std::mt19937_64 rng(seed);
  const std::uint32_t n = state.n;

  std::uint32_t stale = 0;
  for (std::uint32_t it = 0; it < iters; ++it) {
    std::uint32_t x = static_cast<std::uint32_t>(rng() % n);
    std::uint32_t y = static_cast<std::uint32_t>(rng() % n);
    std::uint32_t z;
    if (state.can_push(x, y, z)) {
      state.push(x, y, z);
      state.record();
      stale = 0;
      continue;
    }
    if (++stale >= 25 && state.as.size() >= 1) {
      // remove one or two random triples and keep searching
      std::uint32_t r = 1 + static_cast<std::uint32_t>(rng() % 2);
      for (std::uint32_t t = 0; t < r && !state.as.empty(); ++t) {
        std::uint32_t pos = static_cast<std::uint32_t>(rng() % state.as.size());
        // move the victim to the back, preserving triple alignment
        std::swap(state.as[pos], state.as.back());
        std::swap(state.bs[pos], state.bs.back());
        std::swap(state.cs[pos], state.cs.back());
        state.pop();
      }
      stale = 0;
    }
  }

  Matching out;
  if (state.best == 0) {
    // the identity triple is always a valid size-1 matching
    out.a = {g.identity()};
    out.b = {g.identity()};
    out.c = {g.identity()};
  } else {
    for (std::uint32_t i = 0; i < state.best; ++i) {
      out.a.push_back(g.element(state.best_a[i]));
      out.b.push_back(g.element(state.best_b[i]));
      out.c.push_back(g.element(state.best_c[i]));
    }
  }
  VerifyResult check = verify_matching(g, out);
  if (!check.valid) throw InternalError("heuristic_matching: result failed verification");
  return out;
}

ProductFreeTriple thirds_reduction(const Group& g, const Matching& cand) {
  const std::uint32_t m = cand.size();
  if (m < 3) throw ParamError("thirds_reduction: matching size must be >= 3");
  VerifyResult check = verify_matching(g, cand);
  if (!check.valid) throw ParamError("thirds_reduction: candidate is not a valid matching");
  const std::uint32_t third = m / 3;
  ProductFreeTriple out;
  out.A.assign(cand.a.begin(), cand.a.begin() + third);
  out.B.assign(cand.b.begin() + third, cand.b.begin() + 2 * third);
  out.C.assign(cand.c.begin() + 2 * third, cand.c.begin() + 3 * third);
  if (count_products_to_identity(g, out.A, out.B, out.C) != 0)
    throw InternalError("thirds_reduction: triple is not product-free");
  return out;
}

// ---- exact integer cube-root bound ----------------------------------------

namespace {

// 192-bit little-endian value for comparing m^3 * d against x^3
struct U192 {
  std::uint64_t w0 = 0, w1 = 0, w2 = 0;

  static U192 from_u128(unsigned __int128 v) {
    return U192{static_cast<std::uint64_t>(v), static_cast<std::uint64_t>(v >> 64), 0};
  }

  U192 times(std::uint64_t f) const {
    unsigned __int128 p0 = (unsigned __int128)w0 * f;
    unsigned __int128 p1 = (unsigned __int128)w1 * f + (std::uint64_t)(p0 >> 64);
    unsigned __int128 p2 = (unsigned __int128)w2 * f + (std::uint64_t)(p1 >> 64);
    return U192{static_cast<std::uint64_t>(p0), static_cast<std::uint64_t>(p1),
                static_cast<std::uint64_t>(p2)};
  }

  bool operator<=(const U192& o) const {
    if (w2 != o.w2) return w2 < o.w2;
    if (w1 != o.w1) return w1 < o.w1;
    return w0 <= o.w0;
  }
};

U192 cube(std::uint64_t x) {
  unsigned __int128 sq = (unsigned __int128)x * x;
  return U192::from_u128(sq).times(x);
}

}  // namespace

std::uint64_t floor_div_cbrt(std::uint64_t x, std::uint64_t d) {
  if (d == 0) throw ParamError("floor_div_cbrt: d must be >= 1");
  U192 target = cube(x);
  std::uint64_t lo = 0, hi = x;  // m <= x since d >= 1
  while (lo < hi) {
    std::uint64_t mid = lo + (hi - lo + 1) / 2;
    if (cube(mid).times(d) <= target)
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

std::uint64_t gowers_matching_upper(std::uint64_t order, std::uint64_t quasirandom_degree) {
  if (quasirandom_degree < 1) throw ParamError("gowers_matching_upper: D must be >= 1");
  std::uint64_t third = floor_div_cbrt(order, quasirandom_degree);
  std::uint64_t bound = 3 * third + 2;
  return std::min(order, bound);
}

std::uint64_t count_products_to_identity(const Group& g,
                                         const std::vector<ElementId>& A,
                                         const std::vector<ElementId>& B,
                                         const std::vector<ElementId>& C) {
  std::vector<char> in_c(g.order(), 0);
  for (ElementId c : C) in_c[g.index_of(c)] = 1;
  std::uint64_t count = 0;
  for (ElementId a : A) {
    std::uint32_t ai = g.index_of(a);
    for (ElementId b : B) {
      std::uint32_t ab = g.mul_index(ai, g.index_of(b));
      count += in_c[g.inv_index(ab)];
    }
  }
  return count;
}

}  // namespace grouptensor

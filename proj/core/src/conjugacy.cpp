#include "grouptensor/conjugacy.hpp"

#include <numeric>

#include "grouptensor/errors.hpp"

namespace grouptensor {

ConjugacyData conjugacy_classes(const Group& g, const Limits& lim) {
  const std::uint64_t n = g.order();
  if (n > lim.conjugacy_cap)
    throw ResourceError("conjugacy_classes: order " + std::to_string(n) + " exceeds conjugacy_cap");

  const auto& gens = g.generator_indices();
  std::vector<std::uint32_t> gen_inv(gens.size());
  for (std::size_t i = 0; i < gens.size(); ++i) gen_inv[i] = g.inv_index(gens[i]);

  ConjugacyData out;
  out.class_of.assign(n, 0xffffffffu);
  std::vector<std::uint32_t> orbit;
  for (std::uint32_t x = 0; x < n; ++x) {
    if (out.class_of[x] != 0xffffffffu) continue;
    std::uint32_t cls = static_cast<std::uint32_t>(out.classes.size());
    orbit.clear();
    orbit.push_back(x);
    out.class_of[x] = cls;
    // conjugation by the whole group is the closure of conjugation by generators
    for (std::size_t head = 0; head < orbit.size(); ++head) {
      std::uint32_t y = orbit[head];
      for (std::size_t i = 0; i < gens.size(); ++i) {
        std::uint32_t z = g.mul_index(gens[i], g.mul_index(y, gen_inv[i]));
        if (out.class_of[z] != 0xffffffffu) continue;
        out.class_of[z] = cls;
        orbit.push_back(z);
      }
    }
    out.classes.push_back(ConjClass{x, orbit.size(), g.element_order(g.element(x))});
  }

  std::uint64_t total = 0;
  for (const auto& c : out.classes) {
    total += c.size;
    if (n % c.size != 0) throw InternalError("conjugacy_classes: class size does not divide order");
  }
  if (total != n) throw InternalError("conjugacy_classes: class sizes do not sum to order");
  return out;
}

std::uint64_t ell_regular_count(const ConjugacyData& data, std::uint64_t ell) {
  if (!is_prime_u64(ell)) throw ParamError("ell_regular_count: ell must be prime");
  std::uint64_t count = 0;
  for (const auto& c : data.classes)
    if (std::gcd(c.element_order, ell) == 1) ++count;
  return count;
}

std::uint64_t ell_regular_count(const Group& g, std::uint64_t ell, const Limits& lim) {
  return ell_regular_count(conjugacy_classes(g, lim), ell);
}

std::uint32_t primitive_root_mod(std::uint32_t p) {
  if (!is_prime_u64(p) || p < 3) throw ParamError("primitive_root_mod: need an odd prime");
  std::vector<std::uint32_t> prime_factors;
  std::uint32_t m = p - 1;
  for (std::uint32_t d = 2; d * d <= m; ++d) {
    if (m % d) continue;
    prime_factors.push_back(d);
    while (m % d == 0) m /= d;
  }
  if (m > 1) prime_factors.push_back(m);

  auto pow_mod = [p](std::uint64_t b, std::uint64_t e) {
    std::uint64_t r = 1;
    b %= p;
    while (e) {
      if (e & 1) r = r * b % p;
      b = b * b % p;
      e >>= 1;
    }
    return r;
  };
  for (std::uint32_t a = 2; a < p; ++a) {
    bool ok = true;
    for (std::uint32_t q : prime_factors)
      if (pow_mod(a, (p - 1) / q) == 1) { ok = false; break; }
    if (ok) return a;
  }
  throw InternalError("primitive_root_mod: no generator found");
}

TorusClassCounts torus_class_counts(const Group& g, const Limits& lim) {
  if (g.family() != GroupFamily::Psl2)
    throw ParamError("torus_class_counts: group must be psl2(p)");
  const std::uint32_t p = g.field_p();
  ConjugacyData data = conjugacy_classes(g, lim);

  auto count_subgroup_classes = [&](std::uint32_t gen_index, std::uint64_t expected_order) {
    std::vector<bool> seen(data.classes.size(), false);
    std::uint64_t members = 0, distinct = 0;
    std::uint32_t cur = 0;  // identity
    do {
      if (!seen[data.class_of[cur]]) {
        seen[data.class_of[cur]] = true;
        ++distinct;
      }
      ++members;
      cur = g.mul_index(cur, gen_index);
    } while (cur != 0);
    if (members != expected_order)
      throw InternalError("torus_class_counts: generator order mismatch");
    return distinct;
  };

  TorusClassCounts out{};
  out.split_order = (p - 1) / 2;
  out.nonsplit_order = (p + 1) / 2;

  // split torus: image of diag(a, a^-1) for a primitive root a of F_p
  std::uint32_t a = primitive_root_mod(p);
  std::uint64_t ainv = 1;
  for (std::uint32_t t = 0; t < p - 2; ++t) ainv = ainv * a % p;  // a^(p-2) = a^-1
  ElementId diag = g.element_from_matrix(a, 0, 0, static_cast<std::uint32_t>(ainv));
  out.split_count = count_subgroup_classes(g.index_of(diag), out.split_order);

  // non-split torus: any element of order (p+1)/2 generates one
  std::uint32_t nonsplit_rep = 0xffffffffu;
  for (const auto& c : data.classes)
    if (c.element_order == out.nonsplit_order) { nonsplit_rep = c.rep; break; }
  if (nonsplit_rep == 0xffffffffu) {
    if (out.nonsplit_order == 1) {
      nonsplit_rep = 0;
    } else {
      throw InternalError("torus_class_counts: no element of order (p+1)/2 found");
    }
  }
  out.nonsplit_count = count_subgroup_classes(nonsplit_rep, out.nonsplit_order);
  return out;
}

}  // namespace grouptensor

#include "grouptensor/modrep.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <random>

#include "grouptensor/errors.hpp"

namespace grouptensor {

GModule regular_module(const Group& g, std::uint16_t ell, const Limits& lim) {
  const std::uint64_t n = g.order();
  if (n > lim.modrep_cap)
    throw ResourceError("regular_module: order " + std::to_string(n) + " exceeds modrep_cap");
  GModule m{g, ell, static_cast<std::uint32_t>(n), {}, {}, false};
  for (std::uint32_t gi : g.generator_indices()) {
    std::vector<std::uint32_t> perm(n);
    FFMatrix act(m.dim, m.dim, ell);
    for (std::uint32_t x = 0; x < n; ++x) {
      std::uint32_t y = g.mul_index(gi, x);  // left multiplication
      perm[x] = y;
      act.set(y, x, 1);
    }
    m.actions.push_back(std::move(act));
    m.perm_actions.push_back(std::move(perm));
  }
  return m;
}

FFMatrix element_action(const GModule& m, std::uint32_t element_index) {
  FFMatrix acc = FFMatrix::identity(m.dim, m.ell);
  for (std::uint32_t gi : m.group.word_of(element_index)) acc = acc.mul(m.actions[gi]);
  return acc;
}

// ---- polynomial arithmetic over F_ell (for the minimal-polynomial route) ---

namespace poly {

// dense coefficients, low degree first, trailing zeros trimmed
using Poly = FVec;

void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

int degree(const Poly& p) { return static_cast<int>(p.size()) - 1; }

Poly monic(Poly p, std::uint16_t ell) {
  trim(p);
  if (p.empty()) return p;
  Fel inv = inv_mod(p.back(), ell);
  for (auto& c : p) c = static_cast<Fel>(c * inv % ell);
  return p;
}

Poly add(const Poly& a, const Poly& b, std::uint16_t ell) {
  Poly out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint32_t v = (i < a.size() ? a[i] : 0) + (i < b.size() ? b[i] : 0);
    out[i] = static_cast<Fel>(v % ell);
  }
  trim(out);
  return out;
}

Poly sub(const Poly& a, const Poly& b, std::uint16_t ell) {
  Poly out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint32_t v = (i < a.size() ? a[i] : 0) + ell - (i < b.size() ? b[i] : 0);
    out[i] = static_cast<Fel>(v % ell);
  }
  trim(out);
  return out;
}

Poly mul(const Poly& a, const Poly& b, std::uint16_t ell) {
  if (a.empty() || b.empty()) return {};
  std::vector<std::uint64_t> acc(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j) acc[i + j] += std::uint64_t(a[i]) * b[j];
  }
  Poly out(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) out[i] = static_cast<Fel>(acc[i] % ell);
  trim(out);
  return out;
}

// remainder of a modulo the monic divisor m
Poly mod(Poly a, const Poly& m, std::uint16_t ell) {
  trim(a);
  const int dm = degree(m);
  while (degree(a) >= dm) {
    Fel lead = a.back();
    int shift = degree(a) - dm;
    if (lead) {
      for (int i = 0; i <= dm; ++i) {
        std::uint32_t v = a[shift + i] + ell - static_cast<Fel>(std::uint32_t(lead) * m[i] % ell);
        a[shift + i] = static_cast<Fel>(v % ell);
      }
    }
    a.pop_back();
    trim(a);
  }
  return a;
}

Poly divide(const Poly& a, const Poly& m, std::uint16_t ell) {
  // exact quotient of a by monic m
  Poly rem = a;
  trim(rem);
  const int dm = degree(m);
  if (degree(rem) < dm) return {};
  Poly q(degree(rem) - dm + 1, 0);
  while (degree(rem) >= dm) {
    Fel lead = rem.back();
    int shift = degree(rem) - dm;
    q[shift] = lead;
    if (lead) {
      for (int i = 0; i <= dm; ++i) {
        std::uint32_t v = rem[shift + i] + ell - static_cast<Fel>(std::uint32_t(lead) * m[i] % ell);
        rem[shift + i] = static_cast<Fel>(v % ell);
      }
    }
    rem.pop_back();
    trim(rem);
  }
  trim(q);
  return q;
}

Poly gcd(Poly a, Poly b, std::uint16_t ell) {
  a = monic(std::move(a), ell);
  b = monic(std::move(b), ell);
  while (!b.empty()) {
    Poly r = mod(a, b, ell);
    a = std::move(b);
    b = monic(std::move(r), ell);
  }
  return a;
}

Poly derivative(const Poly& a, std::uint16_t ell) {
  Poly out;
  for (std::size_t i = 1; i < a.size(); ++i)
    out.push_back(static_cast<Fel>(std::uint64_t(a[i]) * (i % ell) % ell));
  trim(out);
  return out;
}

Poly pow_mod(Poly base, std::uint64_t exp, const Poly& m, std::uint16_t ell) {
  Poly acc{1};
  base = mod(std::move(base), m, ell);
  while (exp) {
    if (exp & 1) acc = mod(mul(acc, base, ell), m, ell);
    base = mod(mul(base, base, ell), m, ell);
    exp >>= 1;
  }
  return acc;
}

// a monic factor plus whether it is certified irreducible
struct Piece {
  Poly f;
  bool irreducible = false;
  friend bool operator==(const Piece& a, const Piece& b) { return a.f == b.f; }
};

// Cantor-Zassenhaus split of a squarefree product of degree-d irreducibles.
void equal_degree_split(const Poly& g, std::uint32_t d, std::uint16_t ell, std::mt19937_64& rng,
                        std::vector<Piece>& out) {
  if (degree(g) == static_cast<int>(d)) {
    out.push_back(Piece{monic(g, ell), true});
    return;
  }
  for (int tries = 0; tries < 200; ++tries) {
    Poly r(degree(g), 0);
    for (auto& c : r) c = static_cast<Fel>(rng() % ell);
    trim(r);
    if (r.empty()) continue;
    Poly s;
    if (ell == 2) {
      Poly t = mod(r, g, 2);
      s = t;
      for (std::uint32_t i = 1; i < d; ++i) {
        t = mod(mul(t, t, 2), g, 2);
        s = add(s, t, 2);
      }
    } else {
      // r^((ell^d - 1)/2) as the product over i < d of (r^((ell-1)/2))^(ell^i),
      // avoiding any large exponent
      Poly base = pow_mod(r, (ell - 1) / 2, g, ell);
      Poly acc = base;
      Poly t = base;
      for (std::uint32_t i = 1; i < d; ++i) {
        t = pow_mod(t, ell, g, ell);
        acc = mod(mul(acc, t, ell), g, ell);
      }
      s = sub(acc, Poly{1}, ell);
    }
    Poly h = gcd(s, g, ell);
    if (degree(h) > 0 && degree(h) < degree(g)) {
      equal_degree_split(h, d, ell, rng, out);
      equal_degree_split(divide(g, h, ell), d, ell, rng, out);
      return;
    }
  }
  out.push_back(Piece{monic(g, ell), false});  // unsplit; still a valid element source
}

// Distinct monic factor pieces of f: genuinely irreducible up to the DDF cap,
// possibly-composite leftovers beyond it. Every piece divides f.
void distinct_pieces(Poly f, std::uint16_t ell, std::mt19937_64& rng, std::uint32_t ddf_cap,
                     std::vector<Piece>& out) {
  f = monic(std::move(f), ell);
  if (degree(f) < 1) return;
  Poly fp = derivative(f, ell);
  if (fp.empty()) {
    // f = g(x^ell); over the prime field g has the same coefficients spread out
    Poly g;
    for (std::size_t i = 0; i < f.size(); i += ell) g.push_back(f[i]);
    distinct_pieces(std::move(g), ell, rng, ddf_cap, out);
    return;
  }
  Poly repeated = gcd(f, fp, ell);
  Poly w = divide(f, repeated, ell);  // squarefree
  // distinct-degree stage
  Poly h{0, 1};  // x
  h = mod(h, w, ell);
  bool complete = true;
  for (std::uint32_t d = 1; 2 * d <= static_cast<std::uint32_t>(degree(w)); ++d) {
    if (d > ddf_cap) {
      complete = false;
      break;
    }
    h = pow_mod(h, ell, w, ell);
    Poly g = gcd(sub(h, Poly{0, 1}, ell), w, ell);
    if (degree(g) > 0) {
      equal_degree_split(g, d, ell, rng, out);
      w = divide(w, g, ell);
      if (degree(w) < 1) break;
      h = mod(h, w, ell);
    }
  }
  // after a full distinct-degree pass the leftover is irreducible
  if (degree(w) > 0) out.push_back(Piece{monic(w, ell), complete});
  if (degree(repeated) > 0) distinct_pieces(std::move(repeated), ell, rng, ddf_cap, out);
}

std::vector<Piece> distinct_factor_pieces(const Poly& f, std::uint16_t ell, std::mt19937_64& rng,
                                          std::uint32_t ddf_cap) {
  std::vector<Piece> out;
  distinct_pieces(f, ell, rng, ddf_cap, out);
  std::sort(out.begin(), out.end(), [](const Piece& a, const Piece& b) {
    if (a.f.size() != b.f.size()) return a.f.size() < b.f.size();
    return a.f < b.f;
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace poly

// ---- MeatAxe ------------------------------------------------------------

namespace {

constexpr std::uint32_t kCertEnumCap = 4096;   // projective kernel vectors to spin
constexpr std::uint32_t kSplitTrials = 8;      // kernel vectors tried when not certifying

FFMatrix rows_matrix(const FVec& v, std::uint16_t ell) {
  return FFMatrix::from_rows({v}, static_cast<std::uint32_t>(v.size()), ell);
}

// local minimal polynomial of v under theta (column convention), via the
// Krylov sequence with coefficient tracking
poly::Poly krylov_local_min_poly(const FFMatrix& theta_t, const FVec& v, std::uint16_t ell) {
  const std::uint32_t n = static_cast<std::uint32_t>(v.size());
  std::vector<FVec> basis;                 // reduced rows, leading entry 1
  std::vector<std::uint32_t> lead_of;      // leading position per basis row
  std::vector<poly::Poly> combo;           // polynomial producing each row
  FVec raw = v;
  for (std::uint32_t step = 0;; ++step) {
    std::vector<std::uint32_t> acc(raw.begin(), raw.end());
    poly::Poly cpoly(step + 1, 0);
    cpoly[step] = 1;
    for (std::size_t r = 0; r < basis.size(); ++r) {
      std::uint32_t c = acc[lead_of[r]] % ell;
      if (!c) continue;
      std::uint32_t m = ell - c;
      const FVec& src = basis[r];
      for (std::uint32_t j = lead_of[r]; j < n; ++j) acc[j] += m * src[j];
      poly::Poly scaled = combo[r];
      for (auto& x : scaled) x = static_cast<Fel>(std::uint32_t(x) * m % ell);
      cpoly = poly::add(cpoly, scaled, ell);
    }
    FVec work(n);
    bool zero = true;
    std::uint32_t lead = n;
    for (std::uint32_t j = 0; j < n; ++j) {
      work[j] = static_cast<Fel>(acc[j] % ell);
      if (work[j] && zero) {
        zero = false;
        lead = j;
      }
    }
    if (zero) return poly::monic(std::move(cpoly), ell);
    Fel inv = inv_mod(work[lead], ell);
    for (auto& x : work) x = static_cast<Fel>(x * inv % ell);
    for (auto& x : cpoly) x = static_cast<Fel>(std::uint32_t(x) * inv % ell);
    basis.push_back(std::move(work));
    lead_of.push_back(lead);
    combo.push_back(std::move(cpoly));
    if (step == n) throw InternalError("krylov: no dependence after n+1 steps");
    raw = vec_mat(raw, theta_t);
  }
}

// Horner evaluation of p(theta) applied to u; theta is given transposed so
// that row vectors stand for columns
FVec apply_poly_vec(const FFMatrix& theta_t, const poly::Poly& p, const FVec& u,
                    std::uint16_t ell) {
  const std::uint32_t n = static_cast<std::uint32_t>(u.size());
  FVec w(n, 0);
  for (int i = poly::degree(p); i >= 0; --i) {
    w = vec_mat(w, theta_t);
    if (p[i]) {
      for (std::uint32_t j = 0; j < n; ++j)
        w[j] = static_cast<Fel>((w[j] + std::uint32_t(p[i]) * u[j]) % ell);
    }
  }
  return w;
}

bool is_zero_vec(const FVec& v) {
  return std::all_of(v.begin(), v.end(), [](Fel x) { return x == 0; });
}

// lcm of local minimal polynomials; always a divisor of the true minimal
// polynomial, and equal to it once the lcm annihilates random vectors
poly::Poly probable_min_poly(const FFMatrix& theta, std::uint16_t ell, std::mt19937_64& rng) {
  const std::uint32_t n = theta.rows();
  FFMatrix theta_t = theta.transpose();
  poly::Poly f{1};
  for (int round = 0; round < 5; ++round) {
    FVec v(n, 0);
    if (round == 0) {
      v[0] = 1;
    } else {
      for (auto& x : v) x = static_cast<Fel>(rng() % ell);
    }
    if (is_zero_vec(v)) continue;
    poly::Poly local = krylov_local_min_poly(theta_t, v, ell);
    poly::Poly g = poly::gcd(f, local, ell);
    f = poly::divide(poly::mul(f, local, ell), g, ell);  // lcm
    if (poly::degree(f) >= static_cast<int>(n)) break;
    bool annihilates = true;
    for (int check = 0; check < 2 && annihilates; ++check) {
      FVec u(n);
      for (auto& x : u) x = static_cast<Fel>(rng() % ell);
      annihilates = is_zero_vec(apply_poly_vec(theta_t, f, u, ell));
    }
    if (annihilates) break;
  }
  return f;
}

FFMatrix eval_poly_at(const FFMatrix& theta, const poly::Poly& f) {
  const std::uint32_t n = theta.rows();
  const std::uint16_t ell = theta.field_char();
  FFMatrix acc(n, n, ell);
  for (int i = poly::degree(f); i >= 0; --i) {
    acc = acc.mul(theta);
    if (f[i]) acc = acc.add(FFMatrix::identity(n, ell).scaled(f[i]));
  }
  return acc;
}

// theta = sum of 1..3 terms, each a nonzero scalar times the action of a word
// of length 0..3 in the generators
FFMatrix random_algebra_element(const GModule& m, std::mt19937_64& rng) {
  const std::uint32_t n = m.dim;
  const std::uint16_t ell = m.ell;
  const std::size_t ngens = m.actions.size();
  std::uint32_t terms = 1 + rng() % 3;
  if (!m.perm_actions.empty()) {
    // permutation fast path: each word is itself a permutation
    FFMatrix theta(n, n, ell);
    for (std::uint32_t t = 0; t < terms; ++t) {
      Fel c = static_cast<Fel>(1 + rng() % (ell - 1));
      std::uint32_t len = rng() % 4;
      std::vector<std::uint32_t> word(n);
      std::iota(word.begin(), word.end(), 0);
      for (std::uint32_t s = 0; s < len; ++s) {
        const auto& perm = m.perm_actions[rng() % ngens];
        // compose: new[x] = word_so_far[perm_applied] in column convention,
        // rho(w * g) e_x = rho(w) e_{perm_g(x)}
        std::vector<std::uint32_t> next(n);
        for (std::uint32_t x = 0; x < n; ++x) next[x] = word[perm[x]];
        word = std::move(next);
      }
      for (std::uint32_t x = 0; x < n; ++x)
        theta.set(word[x], x, static_cast<Fel>((theta.get(word[x], x) + c) % ell));
    }
    return theta;
  }
  FFMatrix theta(n, n, ell);
  for (std::uint32_t t = 0; t < terms; ++t) {
    Fel c = static_cast<Fel>(1 + rng() % (ell - 1));
    std::uint32_t len = rng() % 4;
    FFMatrix w = FFMatrix::identity(n, ell);
    for (std::uint32_t s = 0; s < len; ++s) w = w.mul(m.actions[rng() % ngens]);
    theta = theta.add(w.scaled(c));
  }
  return theta;
}

// number of 1-dimensional subspaces of F_ell^k, clamped at cap+1
std::uint64_t projective_count(std::uint32_t k, std::uint16_t ell, std::uint64_t cap) {
  std::uint64_t count = 0, power = 1;
  for (std::uint32_t i = 0; i < k; ++i) {
    count += power;
    power *= ell;
    if (count > cap) return cap + 1;
  }
  return count;
}

// Outcome of examining one singular algebra element.
struct KernelVerdict {
  bool decided = false;
  std::optional<Subspace> split;  // engaged on split; disengaged+decided = irreducible
};

// Either a proper nonzero invariant subspace, or nullopt once irreducibility
// is certified (all projective kernel vectors of some singular theta spin to
// the full space and one transpose-kernel vector spins to the full dual).
// Random elements that come out invertible are recycled through their minimal
// polynomial: f(theta) is singular for every irreducible factor f.
std::optional<Subspace> meataxe_split(const GModule& m, std::mt19937_64& rng,
                                      const Limits& lim) {
  const std::uint32_t n = m.dim;
  const std::uint16_t ell = m.ell;
  std::vector<FFMatrix> transposed;
  transposed.reserve(m.actions.size());
  for (const FFMatrix& a : m.actions) transposed.push_back(a.transpose());

  // dual check shared by both certificates: one transpose-kernel vector spun
  // under the original actions; proper dual spins annihilate to submodules
  auto dual_verdict = [&](const FFMatrix& theta) -> KernelVerdict {
    KernelVerdict verdict;
    verdict.decided = true;
    FFMatrix tker = kernel_basis(theta.transpose());
    if (tker.rows() == 0) throw InternalError("meataxe: transpose kernel empty");
    Subspace dual = spin(rows_matrix(tker.row_vec(0), ell), m.actions);
    if (dual.dim() < n) {
      FFMatrix ann = kernel_basis(dual.basis());
      if (ann.rows() == 0 || ann.rows() == n)
        throw InternalError("meataxe: annihilator not proper");
      verdict.split = Subspace::from_rows(ann);
    }
    return verdict;  // no split recorded = certified irreducible
  };

  // single_spin: the kernel is known to carry an irreducible theta-module
  // structure (nullity equals the degree of an irreducible minimal-polynomial
  // factor), so one forward spin plus the dual check decides
  auto examine = [&](const FFMatrix& theta, const FFMatrix& ker,
                     bool single_spin) -> KernelVerdict {
    const std::uint32_t k = ker.rows();
    KernelVerdict verdict;
    if (single_spin) {
      Subspace w = spin(rows_matrix(ker.row_vec(0), ell), transposed);
      if (w.dim() < n) {
        verdict.decided = true;
        verdict.split = std::move(w);
        return verdict;
      }
      return dual_verdict(theta);
    }
    std::uint64_t reps = projective_count(k, ell, kCertEnumCap);
    if (reps > kCertEnumCap) {
      // too many kernel vectors to certify with; still cheap to try a few splits
      for (std::uint32_t t = 0; t < std::min(k, kSplitTrials); ++t) {
        Subspace w = spin(rows_matrix(ker.row_vec(t), ell), transposed);
        if (w.dim() < n) {
          verdict.decided = true;
          verdict.split = std::move(w);
          return verdict;
        }
      }
      return verdict;  // undecided
    }

    // enumerate kernel vectors up to scalar: coefficient tuples with leading 1
    std::optional<Subspace> found;
    FVec coeff(k, 0);
    std::function<void(std::uint32_t, bool)> walk = [&](std::uint32_t pos, bool started) {
      if (found) return;
      if (pos == k) {
        if (!started) return;
        FVec v(n, 0);
        for (std::uint32_t r = 0; r < k; ++r) {
          if (!coeff[r]) continue;
          FVec row = ker.row_vec(r);
          for (std::uint32_t c = 0; c < n; ++c)
            v[c] = static_cast<Fel>((v[c] + coeff[r] * row[c]) % ell);
        }
        Subspace w = spin(rows_matrix(v, ell), transposed);
        if (w.dim() < n) found = w;
        return;
      }
      if (!started) {
        // leading coefficient is 0 or 1
        coeff[pos] = 0;
        walk(pos + 1, false);
        coeff[pos] = 1;
        walk(pos + 1, true);
      } else {
        for (std::uint32_t c = 0; c < ell; ++c) {
          coeff[pos] = static_cast<Fel>(c);
          walk(pos + 1, true);
        }
      }
      coeff[pos] = 0;
    };
    walk(0, false);
    if (found) {
      verdict.decided = true;
      verdict.split = std::move(found);
      return verdict;
    }
    return dual_verdict(theta);
  };

  // factor degrees worth materializing as f(theta): the Horner evaluation
  // costs deg * n^3 field operations
  const std::uint64_t n3 = std::uint64_t(n) * n * n;
  const std::uint32_t factor_deg_cap =
      static_cast<std::uint32_t>(std::min<std::uint64_t>(n, std::max<std::uint64_t>(8, 2000000000ull / n3)));
  const std::uint32_t ddf_cap = n <= 640 ? n : 8;

  for (std::uint32_t attempt = 0; attempt < lim.chop_retry_budget; ++attempt) {
    FFMatrix theta = random_algebra_element(m, rng);
    FFMatrix ker = kernel_basis(theta);
    if (ker.rows() > 0) {
      KernelVerdict verdict = examine(theta, ker, false);
      if (verdict.decided) return verdict.split;
    }
    if (attempt == 0) continue;  // cheap retry before the polynomial route

    // Walk the factors of the minimal polynomial: f(theta) is singular for
    // every factor, and irreducible factors of nullity deg f allow the
    // single-spin certificate. The lcm of local minimal polynomials divides
    // the true minimal polynomial, so deg == n pins it to the characteristic
    // polynomial, where multiplicity-1 factors have nullity deg f exactly and
    // kernel vectors come from the cofactor without materializing f(theta).
    poly::Poly mp = probable_min_poly(theta, ell, rng);
    bool mp_is_charpoly = poly::degree(mp) == static_cast<int>(n);
    FFMatrix theta_t = theta.transpose();
    for (const poly::Piece& piece : poly::distinct_factor_pieces(mp, ell, rng, ddf_cap)) {
      int df = poly::degree(piece.f);
      if (df < 1) continue;

      if (mp_is_charpoly && piece.irreducible) {
        poly::Poly cofactor = poly::divide(mp, piece.f, ell);
        bool multiplicity_one = !poly::mod(cofactor, piece.f, ell).empty();
        if (multiplicity_one) {
          FVec v;
          for (int tries = 0; tries < 5 && v.empty(); ++tries) {
            FVec u(n);
            for (auto& x : u) x = static_cast<Fel>(rng() % ell);
            FVec cand = apply_poly_vec(theta_t, cofactor, u, ell);
            if (!is_zero_vec(cand)) v = std::move(cand);
          }
          if (v.empty()) continue;
          Subspace w = spin(rows_matrix(v, ell), transposed);
          if (w.dim() < n) return w;
          // dual side: a kernel vector of f(theta)^T from the same cofactor
          FVec dual_seed;
          for (int tries = 0; tries < 5 && dual_seed.empty(); ++tries) {
            FVec u(n);
            for (auto& x : u) x = static_cast<Fel>(rng() % ell);
            FVec cand = apply_poly_vec(theta, cofactor, u, ell);
            if (!is_zero_vec(cand)) dual_seed = std::move(cand);
          }
          if (dual_seed.empty()) continue;
          Subspace dual = spin(rows_matrix(dual_seed, ell), m.actions);
          if (dual.dim() < n) {
            FFMatrix ann = kernel_basis(dual.basis());
            if (ann.rows() == 0 || ann.rows() == n)
              throw InternalError("meataxe: annihilator not proper");
            return Subspace::from_rows(ann);
          }
          return std::nullopt;  // certified irreducible
        }
      }

      if (df > static_cast<int>(factor_deg_cap)) continue;
      FFMatrix shifted = eval_poly_at(theta, piece.f);
      FFMatrix sker = kernel_basis(shifted);
      if (sker.rows() == 0) continue;  // f missed the true minimal polynomial
      bool single = piece.irreducible && sker.rows() == static_cast<std::uint32_t>(df);
      KernelVerdict verdict = examine(shifted, sker, single);
      if (verdict.decided) return verdict.split;
    }
  }
  throw ChopError("meataxe: failed to certify a block of dim " + std::to_string(n) +
                  " over F_" + std::to_string(ell) + " for " + m.group.descriptor() +
                  " within the retry budget");
}

// restriction of the module to an invariant subspace (rows of w are the basis)
GModule submodule(const GModule& m, const Subspace& w) {
  GModule out{m.group, m.ell, w.dim(), {}, {}, false};
  for (const FFMatrix& a : m.actions) {
    FFMatrix at = a.transpose();
    FFMatrix restricted(w.dim(), w.dim(), m.ell);  // row convention while built
    for (std::uint32_t j = 0; j < w.dim(); ++j) {
      FVec img = vec_mat(w.basis().row_vec(j), at);
      auto coords = w.coords_of(img);
      if (!coords) throw InternalError("submodule: subspace is not invariant");
      restricted.set_row(j, *coords);
    }
    out.actions.push_back(restricted.transpose());
  }
  return out;
}

GModule quotient_module(const GModule& m, const Subspace& w) {
  const std::uint32_t n = m.dim, q = n - w.dim();
  std::vector<std::uint32_t> complement;  // non-pivot coordinates
  {
    std::vector<bool> is_pivot(n, false);
    for (std::uint32_t p : w.pivots()) is_pivot[p] = true;
    for (std::uint32_t c = 0; c < n; ++c)
      if (!is_pivot[c]) complement.push_back(c);
  }
  GModule out{m.group, m.ell, q, {}, {}, false};
  for (const FFMatrix& a : m.actions) {
    FFMatrix at = a.transpose();
    FFMatrix qact(q, q, m.ell);  // row convention while built
    for (std::uint32_t j = 0; j < q; ++j) {
      FVec unit(n, 0);
      unit[complement[j]] = 1;
      FVec img = w.reduce_mod(vec_mat(unit, at));
      FVec row(q);
      for (std::uint32_t i = 0; i < q; ++i) row[i] = img[complement[i]];
      qact.set_row(j, row);
    }
    out.actions.push_back(qact.transpose());
  }
  return out;
}

void chop_into(const GModule& m, std::mt19937_64& rng, const Limits& lim,
               std::vector<GModule>& out) {
  if (m.dim == 0) return;
  if (m.dim == 1) {
    GModule leaf = m;
    leaf.certified_simple = true;
    out.push_back(std::move(leaf));
    return;
  }
  std::optional<Subspace> w = meataxe_split(m, rng, lim);
  if (!w) {
    GModule leaf = m;
    leaf.certified_simple = true;
    out.push_back(std::move(leaf));
    return;
  }
  chop_into(submodule(m, *w), rng, lim, out);
  chop_into(quotient_module(m, *w), rng, lim, out);
}

}  // namespace

std::vector<GModule> chop(const GModule& m, std::uint64_t seed, const Limits& lim) {
  if (m.dim < 1) throw ParamError("chop: module dimension must be >= 1");
  std::mt19937_64 rng(seed);
  std::vector<GModule> out;
  chop_into(m, rng, lim, out);
  std::uint64_t total = 0;
  for (const GModule& f : out) total += f.dim;
  if (total != m.dim) throw InternalError("chop: factor dimensions do not sum");
  return out;
}

bool is_irreducible(GModule& m, std::uint64_t seed, const Limits& lim) {
  if (m.dim < 1) throw ParamError("is_irreducible: module dimension must be >= 1");
  if (m.dim == 1) {
    m.certified_simple = true;
    return true;
  }
  std::mt19937_64 rng(seed);
  std::optional<Subspace> w = meataxe_split(m, rng, lim);
  if (w) return false;
  m.certified_simple = true;
  return true;
}

std::uint32_t hom_dimension(const GModule& m1, const GModule& m2) {
  if (!(m1.group == m2.group) || m1.ell != m2.ell)
    throw ParamError("hom_dimension: modules must share group and characteristic");
  const std::uint32_t d1 = m1.dim, d2 = m2.dim;
  const std::uint16_t ell = m1.ell;
  const std::uint32_t unknowns = d1 * d2;  // X is d2 x d1, X rho1(g) = rho2(g) X
  std::vector<FVec> eqs;
  for (std::size_t g = 0; g < m1.actions.size(); ++g) {
    const FFMatrix& r1 = m1.actions[g];
    const FFMatrix& r2 = m2.actions[g];
    for (std::uint32_t i = 0; i < d2; ++i)
      for (std::uint32_t j = 0; j < d1; ++j) {
        FVec eq(unknowns, 0);
        for (std::uint32_t b = 0; b < d1; ++b) {
          Fel v = r1.get(b, j);
          if (v) {
            std::uint32_t u = i * d1 + b;
            eq[u] = static_cast<Fel>((eq[u] + v) % ell);
          }
        }
        for (std::uint32_t a = 0; a < d2; ++a) {
          Fel v = r2.get(i, a);
          if (v) {
            std::uint32_t u = a * d1 + j;
            eq[u] = static_cast<Fel>((eq[u] + ell - v) % ell);
          }
        }
        eqs.push_back(std::move(eq));
      }
  }
  RrefResult rr = rref(FFMatrix::from_rows(eqs, unknowns, ell));
  return unknowns - rr.rank;
}

bool are_isomorphic(const GModule& m1, const GModule& m2) {
  if (!m1.certified_simple || !m2.certified_simple)
    throw ParamError("are_isomorphic: both modules must carry irreducibility certificates");
  if (!(m1.group == m2.group) || m1.ell != m2.ell)
    throw ParamError("are_isomorphic: modules must share group and characteristic");
  if (m1.dim != m2.dim) return false;
  return hom_dimension(m1, m2) > 0;
}

std::uint32_t endo_degree(const GModule& m) {
  if (!m.certified_simple)
    throw ParamError("endo_degree: module must carry an irreducibility certificate");
  return hom_dimension(m, m);
}

SimpleSummary semisimple_summary(const Group& g, std::uint16_t ell, std::uint64_t seed,
                                 const Limits& lim) {
  GModule reg = regular_module(g, ell, lim);
  std::vector<GModule> factors = chop(reg, seed, lim);

  SimpleSummary out;
  out.group = g.descriptor();
  out.ell = ell;
  for (GModule& f : factors) {
    bool matched = false;
    for (SimpleInfo& s : out.simples) {
      if (s.d == f.dim && are_isomorphic(s.witness, f)) {
        ++s.mult;
        matched = true;
        break;
      }
    }
    if (!matched) out.simples.push_back(SimpleInfo{f.dim, 0, 1, std::move(f)});
  }
  std::uint64_t check = 0;
  for (SimpleInfo& s : out.simples) {
    s.e = endo_degree(s.witness);
    if (s.e == 0 || s.d % s.e != 0)
      throw InternalError("semisimple_summary: endomorphism degree does not divide dimension");
    out.dim_semisimple += std::uint64_t(s.d) * s.d / s.e;
    check += std::uint64_t(s.d) * s.mult;
  }
  if (check != g.order())
    throw InternalError("semisimple_summary: factor dimensions do not sum to |G|");
  out.dim_radical = g.order() - out.dim_semisimple;
  std::sort(out.simples.begin(), out.simples.end(),
            [](const SimpleInfo& a, const SimpleInfo& b) { return a.d < b.d; });
  return out;
}

Subspace radical_basis(const Group& g, std::uint16_t ell, const SimpleSummary& summary,
                       const Limits& lim) {
  if (summary.group != g.descriptor() || summary.ell != ell)
    throw ParamError("radical_basis: summary does not match group/characteristic");
  const std::uint32_t n = static_cast<std::uint32_t>(g.order());
  if (n > lim.modrep_cap) throw ResourceError("radical_basis: order exceeds modrep_cap");

  std::uint32_t total_cols = 0;
  for (const SimpleInfo& s : summary.simples) total_cols += s.d * s.d;

  FFMatrix phi(n, total_cols, ell);
  std::uint32_t col_base = 0;
  for (const SimpleInfo& s : summary.simples) {
    const GModule& w = s.witness;
    // element actions along the BFS tree (parents precede children):
    // rho(parent * gen) = rho(parent) * rho(gen)
    std::vector<FFMatrix> acts(n);
    acts[0] = FFMatrix::identity(w.dim, ell);
    for (std::uint32_t x = 1; x < n; ++x) {
      std::uint32_t gen = g.word_of(x).back();
      std::uint32_t parent = g.mul_index(x, g.inv_index(g.generator_indices()[gen]));
      acts[x] = acts[parent].mul(w.actions[gen]);
    }
    for (std::uint32_t x = 0; x < n; ++x)
      for (std::uint32_t r = 0; r < w.dim; ++r)
        for (std::uint32_t c = 0; c < w.dim; ++c)
          phi.set(x, col_base + r * w.dim + c, acts[x].get(r, c));
    col_base += s.d * s.d;
  }
  // left kernel: rows a with a * phi = 0
  FFMatrix j_basis = kernel_basis(phi.transpose());
  Subspace j = Subspace::from_rows(j_basis);
  if (j.dim() != summary.dim_radical)
    throw InternalError("radical_basis: dimension disagrees with the semisimple summary");
  return j;
}

// ---- symmetric power representations -------------------------------------

namespace {

// coefficients of (a x + c y)^k: entry j is the coefficient of x^{k-j} y^j
FVec linear_form_power(std::uint32_t a, std::uint32_t c, std::uint32_t k, std::uint16_t p) {
  FVec coeffs{1};
  for (std::uint32_t s = 0; s < k; ++s) {
    FVec next(coeffs.size() + 1, 0);
    for (std::uint32_t j = 0; j < coeffs.size(); ++j) {
      next[j] = static_cast<Fel>((next[j] + std::uint32_t(coeffs[j]) * a) % p);
      next[j + 1] = static_cast<Fel>((next[j + 1] + std::uint32_t(coeffs[j]) * c) % p);
    }
    coeffs = std::move(next);
  }
  return coeffs;
}

}  // namespace

GModule sym_power_rep(std::uint32_t p, std::uint32_t d, const Limits& lim) {
  if (!is_prime_u64(p) || p == 2) throw ParamError("sym_power_rep: p must be an odd prime");
  if (d > p - 1) throw ParamError("sym_power_rep: degree must satisfy 0 <= d <= p-1");
  Group g = (d % 2 == 0) ? Group::psl2(p, lim) : Group::sl2(p, lim);
  GModule m{g, static_cast<std::uint16_t>(p), d + 1, {}, {}, false};
  for (ElementId gen : g.generators()) {
    auto mat = g.matrix_of(gen);
    std::uint32_t a = mat[0], b = mat[1], c = mat[2], dd = mat[3];
    FFMatrix act(m.dim, m.dim, m.ell);
    for (std::uint32_t j = 0; j <= d; ++j) {
      // image of x^{d-j} y^j is (a x + c y)^{d-j} (b x + d y)^j
      FVec p1 = linear_form_power(a, c, d - j, m.ell);
      FVec p2 = linear_form_power(b, dd, j, m.ell);
      for (std::uint32_t r = 0; r < p1.size(); ++r)
        for (std::uint32_t s = 0; s < p2.size(); ++s) {
          std::uint32_t i = r + s;
          act.set(i, j, static_cast<Fel>((act.get(i, j) + std::uint32_t(p1[r]) * p2[s]) % m.ell));
        }
    }
    m.actions.push_back(std::move(act));
  }
  return m;
}

// ---- trace-chain radical oracle ------------------------------------------

namespace {

// group algebra convolution over Z/M using a precomputed index table
std::vector<std::uint64_t> convolve(const std::vector<std::uint64_t>& u,
                                    const std::vector<std::uint64_t>& v,
                                    const std::vector<std::uint32_t>& mul_table,
                                    std::uint32_t n, std::uint64_t M) {
  std::vector<std::uint64_t> out(n, 0);
  for (std::uint32_t i = 0; i < n; ++i) {
    if (!u[i]) continue;
    const std::uint32_t* row = mul_table.data() + std::size_t(i) * n;
    for (std::uint32_t j = 0; j < n; ++j) {
      if (!v[j]) continue;
      out[row[j]] += u[i] * v[j] % M;
    }
  }
  for (auto& x : out) x %= M;
  return out;
}

std::vector<std::uint64_t> convolution_power(std::vector<std::uint64_t> base, std::uint64_t exp,
                                             const std::vector<std::uint32_t>& mul_table,
                                             std::uint32_t n, std::uint64_t M) {
  std::vector<std::uint64_t> acc(n, 0);
  acc[0] = 1 % M;  // identity element has index 0
  while (exp) {
    if (exp & 1) acc = convolve(acc, base, mul_table, n, M);
    base = convolve(base, base, mul_table, n, M);
    exp >>= 1;
  }
  return acc;
}

}  // namespace

std::uint64_t radical_trace_chain(const Group& g, std::uint16_t ell, const Limits& lim) {
  const std::uint32_t n = static_cast<std::uint32_t>(g.order());
  if (n > lim.trace_chain_cap)
    throw ResourceError("radical_trace_chain: order " + std::to_string(n) +
                        " exceeds trace_chain_cap");
  if (!is_prime_u64(ell)) throw ParamError("radical_trace_chain: ell must be prime");

  std::vector<std::uint32_t> mul_table(std::size_t(n) * n);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j)
      mul_table[std::size_t(i) * n + j] = g.mul_index(i, j);

  FFMatrix basis = FFMatrix::identity(n, ell);  // I_0 = whole algebra
  std::uint64_t q = 1;                          // ell^i
  for (std::uint32_t i = 0;; ++i) {
    const std::uint32_t dim = basis.rows();
    if (dim == 0) break;
    const std::uint64_t M = q * ell;  // ell^{i+1}

    FFMatrix form(dim, dim, ell);
    std::vector<std::vector<std::uint64_t>> lifts(dim);
    for (std::uint32_t r = 0; r < dim; ++r) {
      lifts[r].resize(n);
      for (std::uint32_t c = 0; c < n; ++c) lifts[r][c] = basis.get(r, c);
    }
    for (std::uint32_t r = 0; r < dim; ++r)
      for (std::uint32_t s = 0; s < dim; ++s) {
        auto prod = convolve(lifts[r], lifts[s], mul_table, n, M);
        auto powed = convolution_power(std::move(prod), q, mul_table, n, M);
        std::uint64_t tr = (n % M) * powed[0] % M;
        if (tr % q != 0)
          throw InternalError("radical_trace_chain: trace not divisible by ell^i");
        form.set(r, s, static_cast<Fel>((tr / q) % ell));
      }

    // I_{i+1} in coordinates: left kernel of the form matrix
    FFMatrix coords = kernel_basis(form.transpose());
    FFMatrix next = coords.mul(basis);
    RrefResult rr = rref(next);
    FFMatrix reduced(rr.rank, n, ell);
    for (std::uint32_t r = 0; r < rr.rank; ++r) reduced.set_row(r, rr.rref.row_vec(r));
    basis = std::move(reduced);

    if (q >= n) break;
    q *= ell;
  }
  return basis.rows();
}

}  // namespace grouptensor

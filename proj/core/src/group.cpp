#include "grouptensor/group.hpp"

#include <algorithm>
#include <cctype>

#include "grouptensor/errors.hpp"

namespace grouptensor {

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

namespace {
constexpr std::uint32_t kInvalidIndex = 0xffffffffu;
}  // namespace

struct Group::Data {
  GroupFamily fam;
  std::string desc;
  std::uint64_t order = 0;

  // family parameters
  std::uint64_t n = 0;                    // cyclic modulus
  std::uint32_t p = 0, rank = 0;          // elem-abelian p^rank; sl2/psl2 p
  std::shared_ptr<const Data> g1, g2;     // product factors

  std::vector<std::uint64_t> elements;            // code by table index, BFS order
  std::vector<std::uint32_t> code_to_index;       // dense inverse, kInvalidIndex = absent
  std::vector<std::uint64_t> generator_codes;
  std::vector<std::uint32_t> generator_indices;
  // BFS factorization: element i = element(parent) * generator(gen_pos)
  std::vector<std::uint32_t> bfs_parent;
  std::vector<std::uint32_t> bfs_gen;

  // ---- code arithmetic -----------------------------------------------

  std::uint64_t sl2_encode(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) const {
    return ((a * p + b) * p + c) * p + d;
  }

  std::array<std::uint32_t, 4> sl2_decode(std::uint64_t code) const {
    std::array<std::uint32_t, 4> m;
    m[3] = static_cast<std::uint32_t>(code % p); code /= p;
    m[2] = static_cast<std::uint32_t>(code % p); code /= p;
    m[1] = static_cast<std::uint32_t>(code % p); code /= p;
    m[0] = static_cast<std::uint32_t>(code);
    return m;
  }

  // in PSL(2,p), pick the representative of {M, -M} whose first nonzero
  // entry in row-major order lies in {1, ..., (p-1)/2}
  std::uint64_t psl2_canon(std::array<std::uint32_t, 4> m) const {
    for (std::uint32_t e : m) {
      if (e == 0) continue;
      if (e > (p - 1) / 2) {
        for (auto& x : m) x = (p - x) % p;
      }
      break;
    }
    return sl2_encode(m[0], m[1], m[2], m[3]);
  }

  std::uint64_t mul_code(std::uint64_t a, std::uint64_t b) const {
    switch (fam) {
      case GroupFamily::Cyclic:
        return (a + b) % n;
      case GroupFamily::ElemAbelian: {
        std::uint64_t out = 0, place = 1;
        for (std::uint32_t i = 0; i < rank; ++i) {
          out += ((a % p) + (b % p)) % p * place;
          a /= p; b /= p; place *= p;
        }
        return out;
      }
      case GroupFamily::Sl2:
      case GroupFamily::Psl2: {
        auto x = sl2_decode(a), y = sl2_decode(b);
        std::array<std::uint32_t, 4> z;
        z[0] = (x[0] * y[0] + x[1] * y[2]) % p;
        z[1] = (x[0] * y[1] + x[1] * y[3]) % p;
        z[2] = (x[2] * y[0] + x[3] * y[2]) % p;
        z[3] = (x[2] * y[1] + x[3] * y[3]) % p;
        if (fam == GroupFamily::Psl2) return psl2_canon(z);
        return sl2_encode(z[0], z[1], z[2], z[3]);
      }
      case GroupFamily::Product: {
        std::uint64_t o2 = g2->order;
        std::uint32_t i1 = static_cast<std::uint32_t>(a / o2), i2 = static_cast<std::uint32_t>(a % o2);
        std::uint32_t j1 = static_cast<std::uint32_t>(b / o2), j2 = static_cast<std::uint32_t>(b % o2);
        std::uint64_t k1 = g1->index_of_code(g1->mul_code(g1->elements[i1], g1->elements[j1]));
        std::uint64_t k2 = g2->index_of_code(g2->mul_code(g2->elements[i2], g2->elements[j2]));
        return k1 * o2 + k2;
      }
    }
    return 0;
  }

  std::uint64_t inv_code(std::uint64_t a) const {
    switch (fam) {
      case GroupFamily::Cyclic:
        return (n - a) % n;
      case GroupFamily::ElemAbelian: {
        std::uint64_t out = 0, place = 1;
        for (std::uint32_t i = 0; i < rank; ++i) {
          out += (p - (a % p)) % p * place;
          a /= p; place *= p;
        }
        return out;
      }
      case GroupFamily::Sl2:
      case GroupFamily::Psl2: {
        auto m = sl2_decode(a);
        // det = 1, so inverse is [[d,-b],[-c,a]]
        std::array<std::uint32_t, 4> z{m[3], (p - m[1]) % p, (p - m[2]) % p, m[0]};
        if (fam == GroupFamily::Psl2) return psl2_canon(z);
        return sl2_encode(z[0], z[1], z[2], z[3]);
      }
      case GroupFamily::Product: {
        std::uint64_t o2 = g2->order;
        std::uint32_t i1 = static_cast<std::uint32_t>(a / o2), i2 = static_cast<std::uint32_t>(a % o2);
        std::uint64_t k1 = g1->index_of_code(g1->inv_code(g1->elements[i1]));
        std::uint64_t k2 = g2->index_of_code(g2->inv_code(g2->elements[i2]));
        return k1 * o2 + k2;
      }
    }
    return 0;
  }

  std::uint64_t identity_code() const {
    switch (fam) {
      case GroupFamily::Cyclic:
      case GroupFamily::ElemAbelian:
        return 0;
      case GroupFamily::Sl2:
      case GroupFamily::Psl2:
        return sl2_encode(1, 0, 0, 1);
      case GroupFamily::Product:
        return 0;  // (index 0, index 0)
    }
    return 0;
  }

  std::uint32_t index_of_code(std::uint64_t code) const {
    if (code >= code_to_index.size()) return kInvalidIndex;
    return code_to_index[code];
  }

  void enumerate_by_bfs(std::uint64_t max_code) {
    code_to_index.assign(max_code + 1, kInvalidIndex);
    std::uint64_t id = identity_code();
    elements.push_back(id);
    code_to_index[id] = 0;
    bfs_parent.push_back(0);
    bfs_gen.push_back(kInvalidIndex);
    for (std::uint32_t head = 0; head < elements.size(); ++head) {
      for (std::uint32_t gi = 0; gi < generator_codes.size(); ++gi) {
        std::uint64_t next = mul_code(elements[head], generator_codes[gi]);
        if (code_to_index[next] != kInvalidIndex) continue;
        code_to_index[next] = static_cast<std::uint32_t>(elements.size());
        elements.push_back(next);
        bfs_parent.push_back(head);
        bfs_gen.push_back(gi);
      }
    }
    for (std::uint64_t g : generator_codes) generator_indices.push_back(code_to_index[g]);
  }
};

namespace {

void require_prime(std::uint64_t p, const std::string& ctx) {
  if (!is_prime_u64(p)) throw ParamError(ctx + ": " + std::to_string(p) + " is not prime");
}

}  // namespace

using Data = Group::Data;

Group Group::cyclic(std::uint64_t n, const Limits& lim) {
  if (n < 1) throw ParamError("cyclic: n must be >= 1");
  if (n > lim.max_group_order)
    throw ResourceError("cyclic: order " + std::to_string(n) + " exceeds max_group_order");
  auto d = std::make_shared<Data>();
  d->fam = GroupFamily::Cyclic;
  d->n = n;
  d->order = n;
  d->desc = "cyclic:" + std::to_string(n);
  d->generator_codes = {1 % n};
  d->enumerate_by_bfs(n - 1);
  if (d->elements.size() != n) throw InternalError("cyclic: enumeration mismatch");
  return Group(std::move(d));
}

Group Group::elem_abelian(std::uint32_t p, std::uint32_t n, const Limits& lim) {
  require_prime(p, "ea");
  if (n < 1) throw ParamError("ea: rank must be >= 1");
  std::uint64_t order = 1;
  for (std::uint32_t i = 0; i < n; ++i) {
    order *= p;
    if (order > lim.max_group_order)
      throw ResourceError("ea: order p^n exceeds max_group_order");
  }
  auto d = std::make_shared<Data>();
  d->fam = GroupFamily::ElemAbelian;
  d->p = p;
  d->rank = n;
  d->order = order;
  d->desc = "ea:" + std::to_string(p) + ":" + std::to_string(n);
  std::uint64_t place = 1;
  for (std::uint32_t i = 0; i < n; ++i) {
    d->generator_codes.push_back(place);
    place *= p;
  }
  d->enumerate_by_bfs(order - 1);
  if (d->elements.size() != order) throw InternalError("ea: enumeration mismatch");
  return Group(std::move(d));
}

namespace {

std::shared_ptr<const Data> build_sl2_like(GroupFamily fam, std::uint32_t p, const Limits& lim) {
  const char* name = fam == GroupFamily::Sl2 ? "sl2" : "psl2";
  require_prime(p, name);
  if (p == 2) throw ParamError(std::string(name) + ": p must be odd");
  if (p > lim.sl2_max_p)
    throw ResourceError(std::string(name) + ": p exceeds configured cap " + std::to_string(lim.sl2_max_p));
  auto d = std::make_shared<Data>();
  d->fam = fam;
  d->p = p;
  std::uint64_t sl2_order = std::uint64_t(p) * (p - 1) * (p + 1);
  d->order = fam == GroupFamily::Sl2 ? sl2_order : sl2_order / 2;
  d->desc = std::string(name) + ":" + std::to_string(p);
  // standard transvections; both are their own canonical psl2 representatives
  d->generator_codes = {d->sl2_encode(1, 1, 0, 1), d->sl2_encode(1, 0, 1, 1)};
  std::uint64_t max_code = std::uint64_t(p) * p * p * p;
  d->enumerate_by_bfs(max_code);
  if (d->elements.size() != d->order)
    throw InternalError(std::string(name) + ": generators produced " +
                        std::to_string(d->elements.size()) + " elements, expected " +
                        std::to_string(d->order));
  return d;
}

}  // namespace

Group Group::sl2(std::uint32_t p, const Limits& lim) { return Group(build_sl2_like(GroupFamily::Sl2, p, lim)); }
Group Group::psl2(std::uint32_t p, const Limits& lim) { return Group(build_sl2_like(GroupFamily::Psl2, p, lim)); }

Group Group::product(const Group& g1, const Group& g2, const Limits& lim) {
  std::uint64_t order = g1.order() * g2.order();
  if (order > lim.max_group_order)
    throw ResourceError("prod: order exceeds max_group_order");
  auto d = std::make_shared<Data>();
  d->fam = GroupFamily::Product;
  d->g1 = g1.data_;
  d->g2 = g2.data_;
  d->order = order;
  d->desc = "prod:" + g1.descriptor() + "," + g2.descriptor();
  for (std::uint32_t gi : g1.generator_indices())
    d->generator_codes.push_back(std::uint64_t(gi) * g2.order());
  for (std::uint32_t gi : g2.generator_indices())
    d->generator_codes.push_back(gi);
  d->enumerate_by_bfs(order - 1);
  if (d->elements.size() != order) throw InternalError("prod: enumeration mismatch");
  return Group(std::move(d));
}

// ---- descriptor grammar ----------------------------------------------

namespace {

std::uint64_t parse_number(const std::string& s, size_t& pos) {
  size_t start = pos;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
  if (pos == start) throw ParamError("group descriptor: expected a number at position " + std::to_string(start) + " in '" + s + "'");
  return std::stoull(s.substr(start, pos - start));
}

void expect(const std::string& s, size_t& pos, char c) {
  if (pos >= s.size() || s[pos] != c)
    throw ParamError(std::string("group descriptor: expected '") + c + "' at position " + std::to_string(pos) + " in '" + s + "'");
  ++pos;
}

Group parse_descriptor(const std::string& s, size_t& pos, const Limits& lim) {
  auto starts_with = [&](const char* kw) {
    size_t len = std::string(kw).size();
    return s.compare(pos, len, kw) == 0;
  };
  if (starts_with("cyclic:")) {
    pos += 7;
    return Group::cyclic(parse_number(s, pos), lim);
  }
  if (starts_with("ea:")) {
    pos += 3;
    std::uint64_t p = parse_number(s, pos);
    expect(s, pos, ':');
    std::uint64_t n = parse_number(s, pos);
    return Group::elem_abelian(static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(n), lim);
  }
  if (starts_with("sl2:")) {
    pos += 4;
    return Group::sl2(static_cast<std::uint32_t>(parse_number(s, pos)), lim);
  }
  if (starts_with("psl2:")) {
    pos += 5;
    return Group::psl2(static_cast<std::uint32_t>(parse_number(s, pos)), lim);
  }
  if (starts_with("prod:")) {
    pos += 5;
    Group g1 = parse_descriptor(s, pos, lim);
    expect(s, pos, ',');
    Group g2 = parse_descriptor(s, pos, lim);
    return Group::product(g1, g2, lim);
  }
  throw ParamError("group descriptor: unknown family at position " + std::to_string(pos) + " in '" + s + "'");
}

}  // namespace

Group Group::make(const std::string& descriptor, const Limits& lim) {
  size_t pos = 0;
  Group g = parse_descriptor(descriptor, pos, lim);
  if (pos != descriptor.size())
    throw ParamError("group descriptor: trailing characters in '" + descriptor + "'");
  return g;
}

// ---- accessors ---------------------------------------------------------

const std::string& Group::descriptor() const { return data_->desc; }
GroupFamily Group::family() const { return data_->fam; }
std::uint64_t Group::order() const { return data_->order; }

std::uint32_t Group::field_p() const {
  if (data_->fam != GroupFamily::Sl2 && data_->fam != GroupFamily::Psl2)
    throw ParamError("field_p: group " + data_->desc + " is not sl2/psl2");
  return data_->p;
}

ElementId Group::element(std::uint32_t index) const {
  if (index >= data_->elements.size())
    throw ParamError("element: index out of range for " + data_->desc);
  return ElementId{data_->elements[index]};
}

bool Group::valid(ElementId id) const {
  return data_->index_of_code(id.code) != kInvalidIndex;
}

std::uint32_t Group::index_of(ElementId id) const {
  std::uint32_t idx = data_->index_of_code(id.code);
  if (idx == kInvalidIndex)
    throw ParamError("element id " + std::to_string(id.code) + " does not belong to " + data_->desc);
  return idx;
}

ElementId Group::mul(ElementId a, ElementId b) const {
  index_of(a);
  index_of(b);
  return ElementId{data_->mul_code(a.code, b.code)};
}

ElementId Group::inv(ElementId a) const {
  index_of(a);
  return ElementId{data_->inv_code(a.code)};
}

std::uint32_t Group::mul_index(std::uint32_t i, std::uint32_t j) const {
  const auto& d = *data_;
  return d.index_of_code(d.mul_code(d.elements.at(i), d.elements.at(j)));
}

std::uint32_t Group::inv_index(std::uint32_t i) const {
  const auto& d = *data_;
  return d.index_of_code(d.inv_code(d.elements.at(i)));
}

std::uint64_t Group::element_order(ElementId a) const {
  index_of(a);
  std::uint64_t id = data_->identity_code();
  std::uint64_t acc = a.code, k = 1;
  while (acc != id) {
    acc = data_->mul_code(acc, a.code);
    ++k;
    if (k > order()) throw InternalError("element_order: did not reach identity");
  }
  return k;
}

const std::vector<std::uint32_t>& Group::generator_indices() const { return data_->generator_indices; }

std::vector<ElementId> Group::generators() const {
  std::vector<ElementId> out;
  for (std::uint64_t c : data_->generator_codes) out.push_back(ElementId{c});
  return out;
}

std::vector<std::uint32_t> Group::word_of(std::uint32_t index) const {
  if (index >= data_->elements.size())
    throw ParamError("word_of: index out of range");
  std::vector<std::uint32_t> word;
  while (index != 0) {
    word.push_back(data_->bfs_gen[index]);
    index = data_->bfs_parent[index];
  }
  std::reverse(word.begin(), word.end());
  return word;
}

std::array<std::uint32_t, 4> Group::matrix_of(ElementId id) const {
  if (data_->fam != GroupFamily::Sl2 && data_->fam != GroupFamily::Psl2)
    throw ParamError("matrix_of: group " + data_->desc + " is not sl2/psl2");
  index_of(id);
  return data_->sl2_decode(id.code);
}

ElementId Group::element_from_matrix(std::uint32_t a, std::uint32_t b,
                                     std::uint32_t c, std::uint32_t d) const {
  if (data_->fam != GroupFamily::Sl2 && data_->fam != GroupFamily::Psl2)
    throw ParamError("element_from_matrix: group " + data_->desc + " is not sl2/psl2");
  std::uint32_t p = data_->p;
  a %= p; b %= p; c %= p; d %= p;
  std::uint64_t det = (std::uint64_t(a) * d % p + std::uint64_t(p) * p - std::uint64_t(b) * c % p) % p;
  if (det != 1)
    throw ParamError("element_from_matrix: determinant must be 1 mod p");
  if (data_->fam == GroupFamily::Psl2) return ElementId{data_->psl2_canon({a, b, c, d})};
  return ElementId{data_->sl2_encode(a, b, c, d)};
}

}  // namespace grouptensor

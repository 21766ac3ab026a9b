#include "neighborlat/disc_form.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <numeric>
#include <unordered_set>

namespace neighborlat {

namespace {

using Index = Eigen::Index;
using i128 = __int128;

std::int64_t mod64(i128 a, std::int64_t m) {
  i128 r = a % m;
  if (r < 0) r += m;
  return static_cast<std::int64_t>(r);
}

std::size_t idx(Index i) { return static_cast<std::size_t>(i); }

// Polynomials over Z as coefficient vectors, lowest degree first.
using Poly = std::vector<Integer>;

void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// Remainder of p modulo a monic polynomial m.
Poly poly_mod(Poly p, const Poly& m) {
  trim(p);
  const std::size_t dm = m.size() - 1;
  while (p.size() > dm) {
    const Integer lead = p.back();
    const std::size_t shift = p.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) p[shift + i] -= lead * m[i];
    trim(p);
  }
  return p;
}

// Exact quotient of p by a monic divisor m.
Poly poly_div(Poly p, const Poly& m) {
  trim(p);
  const std::size_t dm = m.size() - 1;
  if (p.size() <= dm) return {};
  Poly q(p.size() - dm, 0);
  while (p.size() > dm) {
    const Integer lead = p.back();
    const std::size_t shift = p.size() - 1 - dm;
    q[shift] = lead;
    for (std::size_t i = 0; i <= dm; ++i) p[shift + i] -= lead * m[i];
    trim(p);
  }
  return q;
}

Poly cyclotomic(std::int64_t n) {
  Poly p(static_cast<std::size_t>(n) + 1, 0);
  p[0] = -1;
  p.back() = 1;
  for (std::int64_t k = 1; k < n; ++k) {
    if (n % k == 0) p = poly_div(p, cyclotomic(k));
  }
  return p;
}

}  // namespace

std::int64_t FiniteQuadForm::order() const {
  std::int64_t n = 1;
  for (auto d : divisors) {
    if (__builtin_mul_overflow(n, d, &n)) {
      throw LatticeError(ErrorCode::kOverflow, "discriminant group too large");
    }
  }
  return n;
}

std::int64_t FiniteQuadForm::q(const Element& x) const {
  const std::int64_t m = 2 * q_den;
  i128 s = 0;
  const std::size_t k = divisors.size();
  for (std::size_t i = 0; i < k; ++i) {
    if (x[i] == 0) continue;
    s += static_cast<i128>(x[i]) * x[i] % m * q_num(Index(i), Index(i));
    for (std::size_t j = i + 1; j < k; ++j) {
      s += static_cast<i128>(2 * x[i]) * x[j] % m * q_num(Index(i), Index(j));
    }
    s %= m;
  }
  return mod64(s, m);
}

std::int64_t FiniteQuadForm::b(const Element& x, const Element& y) const {
  i128 s = 0;
  const std::size_t k = divisors.size();
  for (std::size_t i = 0; i < k; ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < k; ++j) {
      s += static_cast<i128>(x[i]) * y[j] % q_den * q_num(Index(i), Index(j));
    }
    s %= q_den;
  }
  return mod64(s, q_den);
}

Element FiniteQuadForm::add(const Element& x, const Element& y) const {
  Element r(divisors.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = (x[i] + y[i]) % divisors[i];
  return r;
}

Element FiniteQuadForm::scale(std::int64_t k, const Element& x) const {
  Element r(divisors.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = mod64(static_cast<i128>(k) * x[i], divisors[i]);
  return r;
}

std::int64_t FiniteQuadForm::element_order(const Element& x) const {
  std::int64_t o = 1;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    o = std::lcm(o, divisors[i] / std::gcd(divisors[i], x[i]));
  }
  return o;
}

std::int64_t FiniteQuadForm::encode(const Element& x) const {
  std::int64_t code = 0;
  for (std::size_t i = x.size(); i-- > 0;) code = code * divisors[i] + x[i];
  return code;
}

Element FiniteQuadForm::decode(std::int64_t code) const {
  Element x(divisors.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = code % divisors[i];
    code /= divisors[i];
  }
  return x;
}

Element FiniteQuadForm::generator(std::size_t i) const {
  Element x = zero();
  x[i] = 1;
  return x;
}

std::vector<Element> FiniteQuadForm::elements(std::int64_t bound) const {
  const std::int64_t n = order();
  if (n > bound) {
    throw LatticeError(ErrorCode::kBudgetExceeded,
                       "discriminant group of order " + std::to_string(n) + " exceeds bound " +
                           std::to_string(bound));
  }
  std::vector<Element> out;
  out.reserve(static_cast<std::size_t>(n));
  Element x = zero();
  for (std::int64_t c = 0; c < n; ++c) {
    out.push_back(x);
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (++x[i] < divisors[i]) break;
      x[i] = 0;
    }
  }
  return out;
}

FiniteQuadForm make_finite_form(std::vector<std::int64_t> divisors, const I64Matrix& num,
                                std::int64_t den) {
  const Index k = static_cast<Index>(divisors.size());
  if (num.rows() != k || num.cols() != k) {
    throw LatticeError(ErrorCode::kDimensionMismatch, "q matrix must be k x k");
  }
  if (den <= 0) throw LatticeError(ErrorCode::kInvalidInput, "q denominator must be positive");
  for (Index i = 0; i < k; ++i) {
    if (divisors[idx(i)] < 2) {
      throw LatticeError(ErrorCode::kInvalidInput, "elementary divisors must exceed 1");
    }
    if (i > 0 && divisors[idx(i)] % divisors[idx(i - 1)] != 0) {
      throw LatticeError(ErrorCode::kInvalidInput, "elementary divisors must form a chain");
    }
  }
  if (num != num.transpose()) {
    throw LatticeError(ErrorCode::kNotSymmetric, "q matrix is not symmetric");
  }
  FiniteQuadForm f;
  f.divisors = std::move(divisors);
  f.q_den = k == 0 ? 1 : f.divisors.back();
  const std::int64_t e = f.q_den;
  f.q_num = I64Matrix::Zero(k, k);
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < k; ++j) {
      const i128 scaled = static_cast<i128>(num(i, j)) * e;
      if (scaled % den != 0) {
        throw LatticeError(ErrorCode::kInvalidInput, "form values do not fit the group exponent");
      }
      f.q_num(i, j) = mod64(scaled / den, i == j ? 2 * e : e);
    }
  }
  for (Index i = 0; i < k; ++i) {
    const std::int64_t di = f.divisors[idx(i)];
    for (Index j = 0; j < k; ++j) {
      if (static_cast<i128>(di) * f.q_num(i, j) % e != 0) {
        throw LatticeError(ErrorCode::kInvalidInput, "bilinear values incompatible with orders");
      }
    }
    if (static_cast<i128>(di) * di % (2 * e) * f.q_num(i, i) % (2 * e) != 0) {
      throw LatticeError(ErrorCode::kInvalidInput, "quadratic values incompatible with orders");
    }
  }
  return f;
}

FiniteQuadForm negate(const FiniteQuadForm& a) {
  FiniteQuadForm r = a;
  const Index k = static_cast<Index>(a.length());
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < k; ++j) {
      const std::int64_t m = i == j ? 2 * a.q_den : a.q_den;
      r.q_num(i, j) = mod64(-static_cast<i128>(a.q_num(i, j)), m);
    }
  }
  return r;
}

FiniteQuadForm orthogonal_sum(const FiniteQuadForm& a, const FiniteQuadForm& b) {
  // The direct sum is generally not in invariant-factor shape; re-derive it.
  FiniteQuadForm raw;
  raw.divisors = a.divisors;
  raw.divisors.insert(raw.divisors.end(), b.divisors.begin(), b.divisors.end());
  const Index ka = static_cast<Index>(a.length()), kb = static_cast<Index>(b.length());
  const std::int64_t e = std::lcm(a.q_den, b.q_den);
  raw.q_den = e;
  raw.q_num = I64Matrix::Zero(ka + kb, ka + kb);
  raw.q_num.topLeftCorner(ka, ka) = a.q_num * (e / a.q_den);
  raw.q_num.bottomRightCorner(kb, kb) = b.q_num * (e / b.q_den);
  std::vector<Element> gens;
  for (std::size_t i = 0; i < raw.divisors.size(); ++i) {
    Element g(raw.divisors.size(), 0);
    g[i] = 1;
    gens.push_back(g);
  }
  return subgroup_form(raw, gens).form;
}

DiscriminantGroup::DiscriminantGroup(EmbeddedLattice m) : lattice_(std::move(m)) {
  const RationalMatrix g = lattice_.gram();
  if (g.den != 1) throw LatticeError(ErrorCode::kNotIntegral, "lattice is not integral");
  if (!lattice_.is_even()) {
    throw LatticeError(ErrorCode::kOddLattice, "discriminant form needs an even lattice");
  }
  const Index n = lattice_.rank();
  auto snf = smith_form(g.num);
  std::vector<Index> sel;
  std::vector<std::int64_t> divisors;
  for (Index i = 0; i < n; ++i) {
    const Integer& d = snf.diagonal[idx(i)];
    if (d == 0) throw InvariantError("singular gram in discriminant group");
    if (d > 1) {
      sel.push_back(i);
      divisors.push_back(to_int64(d));
    }
  }
  const Index k = static_cast<Index>(sel.size());
  const std::int64_t e = k == 0 ? 1 : divisors.back();

  const IntMatrix c = product(snf.v.transpose(), g.num, snf.v);
  I64Matrix num(k, k);
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < k; ++j) {
      const Integer di = divisors[idx(i)], dj = divisors[idx(j)];
      const Integer v = c(sel[idx(i)], sel[idx(j)]) * e / (di * dj);
      num(i, j) = to_int64(mod_floor(v, Integer(i == j ? 2 * e : e)));
    }
  }
  form_ = make_finite_form(divisors, num, e);

  const RationalMatrix& basis = lattice_.basis();
  IntMatrix lift_num(k, n);
  for (Index i = 0; i < k; ++i) {
    lift_num.row(i) = snf.v.col(sel[idx(i)]).transpose() * Integer(e / divisors[idx(i)]);
  }
  lifts_ = RationalMatrix{product(lift_num, basis.num), basis.den * e};
  lifts_.normalize();

  const IntMatrix vinv = unimodular_inverse(snf.v);
  IntMatrix pick(n, k);
  for (Index i = 0; i < k; ++i) {
    pick.col(i) = vinv.row(sel[idx(i)]).transpose() * Integer(divisors[idx(i)]);
  }
  to_coords_ = inverse(basis) * pick;
}

RationalMatrix DiscriminantGroup::lift(const Element& x) const {
  const Index k = static_cast<Index>(form_.length());
  IntMatrix row(1, k);
  for (Index i = 0; i < k; ++i) row(0, i) = x[idx(i)];
  if (k == 0) {
    return RationalMatrix{IntMatrix::Zero(1, lattice_.rank()), 1};
  }
  return row * lifts_;
}

Element DiscriminantGroup::coords(const RationalMatrix& row) const {
  return coords_rows(row).front();
}

std::vector<Element> DiscriminantGroup::coords_rows(const RationalMatrix& rows) const {
  const Index k = static_cast<Index>(form_.length());
  std::vector<Element> out;
  if (k == 0) {
    if (!dual_lattice(lattice_).contains(rows)) {
      throw LatticeError(ErrorCode::kNotContained, "vector is not in the dual lattice");
    }
    out.assign(static_cast<std::size_t>(rows.rows()), Element{});
    return out;
  }
  RationalMatrix w = rows * to_coords_;
  if (w.den != 1) {
    throw LatticeError(ErrorCode::kNotContained, "vector is not in the dual lattice");
  }
  for (Index r = 0; r < w.rows(); ++r) {
    Element x(idx(k));
    for (Index i = 0; i < k; ++i) {
      x[idx(i)] = to_int64(mod_floor(w.num(r, i), Integer(form_.divisors[idx(i)])));
    }
    out.push_back(std::move(x));
  }
  return out;
}

DiscriminantGroup discriminant_group(const EmbeddedLattice& m) { return DiscriminantGroup(m); }

FiniteQuadForm discriminant_form(const Lattice& l) {
  return DiscriminantGroup(EmbeddedLattice::whole(l)).form();
}

std::vector<Element> isotropic_elements(const FiniteQuadForm& a, std::int64_t bound) {
  std::vector<Element> out;
  for (auto& x : a.elements(bound)) {
    if (a.q(x) == 0) out.push_back(std::move(x));
  }
  return out;
}

std::vector<Element> subgroup_elements(const FiniteQuadForm& a, const std::vector<Element>& gens) {
  std::unordered_set<std::int64_t> seen = {0};
  std::vector<Element> group = {a.zero()};
  for (const auto& g : gens) {
    const std::size_t base = group.size();
    Element step = g;
    while (!seen.count(a.encode(step))) {
      for (std::size_t i = 0; i < base; ++i) {
        Element y = a.add(group[i], step);
        seen.insert(a.encode(y));
        group.push_back(std::move(y));
      }
      step = a.add(step, g);
    }
  }
  std::sort(group.begin(), group.end(),
            [&](const Element& x, const Element& y) { return a.encode(x) < a.encode(y); });
  return group;
}

bool is_isotropic_subgroup(const FiniteQuadForm& a, const std::vector<Element>& gens) {
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (a.q(gens[i]) != 0) return false;
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      if (a.b(gens[i], gens[j]) != 0) return false;
    }
  }
  return true;
}

SubgroupForm subgroup_form(const FiniteQuadForm& a, const std::vector<Element>& gens) {
  const Index k = static_cast<Index>(a.length());
  SubgroupForm out;
  if (k == 0) {
    out.form = make_finite_form({}, I64Matrix(0, 0), 1);
    return out;
  }
  const Index m = static_cast<Index>(gens.size());
  IntMatrix rows = IntMatrix::Zero(m + k, k);
  for (Index r = 0; r < m; ++r) {
    for (Index i = 0; i < k; ++i) rows(r, i) = gens[idx(r)][idx(i)];
  }
  for (Index i = 0; i < k; ++i) rows(m + i, i) = a.divisors[idx(i)];
  const IntMatrix lam = hermite_form(rows);
  IntMatrix dmat = IntMatrix::Zero(k, k);
  for (Index i = 0; i < k; ++i) dmat(i, i) = a.divisors[idx(i)];
  const RationalMatrix rel = dmat * inverse(lam);
  if (rel.den != 1) throw InvariantError("relation matrix is not integral");
  auto snf = smith_form(rel.num);
  const IntMatrix vinv = unimodular_inverse(snf.v);
  const IntMatrix images = product(vinv, lam);

  std::vector<std::int64_t> divisors;
  for (Index i = 0; i < k; ++i) {
    if (snf.diagonal[idx(i)] > 1) {
      divisors.push_back(to_int64(snf.diagonal[idx(i)]));
      Element x(idx(k));
      for (Index j = 0; j < k; ++j) {
        x[idx(j)] = to_int64(mod_floor(images(i, j), Integer(a.divisors[idx(j)])));
      }
      out.basis.push_back(std::move(x));
    }
  }
  const Index r = static_cast<Index>(divisors.size());
  I64Matrix num(r, r);
  for (Index i = 0; i < r; ++i) {
    for (Index j = 0; j < r; ++j) {
      num(i, j) = i == j ? a.q(out.basis[idx(i)]) : a.b(out.basis[idx(i)], out.basis[idx(j)]);
    }
  }
  out.form = make_finite_form(std::move(divisors), num, a.q_den);
  return out;
}

std::vector<Element> orthogonal_complement(const FiniteQuadForm& a,
                                           const std::vector<Element>& gens, std::int64_t) {
  const Index k = static_cast<Index>(a.length());
  if (k == 0) return {};
  // x is orthogonal to g iff sum_i x_i b(g_i, g) = 0 mod e.
  IntMatrix f(k, static_cast<Index>(gens.size()));
  for (Index c = 0; c < f.cols(); ++c) {
    for (Index i = 0; i < k; ++i) f(i, c) = a.b(a.generator(idx(i)), gens[idx(c)]);
  }
  const IntMatrix basis = kernel_mod_columns(f, Integer(a.q_den));
  std::vector<Element> out;
  for (Index r = 0; r < basis.rows(); ++r) {
    Element x(idx(k));
    for (Index i = 0; i < k; ++i) {
      x[idx(i)] = to_int64(mod_floor(basis(r, i), Integer(a.divisors[idx(i)])));
    }
    out.push_back(std::move(x));
  }
  return out;
}

std::optional<std::vector<Element>> finite_form_isomorphic(const FiniteQuadForm& a,
                                                           const FiniteQuadForm& b,
                                                           std::int64_t bound) {
  if (a.divisors != b.divisors) return std::nullopt;
  const std::size_t k = a.length();
  if (k == 0) return std::vector<Element>{};
  const auto elems_a = a.elements(bound);
  const auto elems_b = b.elements(bound);

  std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> profile;
  for (const auto& x : elems_a) ++profile[{a.element_order(x), a.q(x)}];
  std::map<std::pair<std::int64_t, std::int64_t>, std::vector<std::size_t>> buckets;
  for (std::size_t i = 0; i < elems_b.size(); ++i) {
    const auto& y = elems_b[i];
    const std::pair key{b.element_order(y), b.q(y)};
    buckets[key].push_back(i);
    if (--profile[key] < 0) return std::nullopt;
  }

  std::vector<std::vector<std::size_t>> candidates(k);
  for (std::size_t i = 0; i < k; ++i) {
    const Element g = a.generator(i);
    auto it = buckets.find({a.divisors[i], a.q(g)});
    if (it == buckets.end()) return std::nullopt;
    candidates[i] = it->second;
  }

  const std::size_t n = elems_b.size();
  std::vector<Element> images(k);
  // span[i] marks the subgroup generated by images[0..i).
  std::vector<std::vector<char>> span(k + 1, std::vector<char>(n, 0));
  span[0][0] = 1;
  std::vector<std::int64_t> span_size(k + 1, 1);

  auto extend = [&](std::size_t level, const Element& y) {
    std::vector<char>& next = span[level + 1];
    next = span[level];
    std::vector<std::size_t> members;
    for (std::size_t c = 0; c < n; ++c) {
      if (next[c]) members.push_back(c);
    }
    const std::size_t base = members.size();
    Element step = y;
    while (!next[static_cast<std::size_t>(b.encode(step))]) {
      for (std::size_t i = 0; i < base; ++i) {
        const auto code = static_cast<std::size_t>(b.encode(b.add(elems_b[members[i]], step)));
        next[code] = 1;
        members.push_back(code);
      }
      step = b.add(step, y);
    }
    span_size[level + 1] = static_cast<std::int64_t>(members.size());
  };

  std::int64_t expected = 1;
  std::vector<std::int64_t> target(k + 1, 1);
  for (std::size_t i = 0; i < k; ++i) target[i + 1] = (expected *= a.divisors[i]);

  std::vector<Element> gens_a;
  for (std::size_t i = 0; i < k; ++i) gens_a.push_back(a.generator(i));

  auto search = [&](auto&& self, std::size_t level) -> bool {
    if (level == k) return true;
    for (std::size_t c : candidates[level]) {
      const Element& y = elems_b[c];
      bool ok = true;
      for (std::size_t j = 0; j < level && ok; ++j) {
        ok = b.b(y, images[j]) == a.b(gens_a[level], gens_a[j]);
      }
      if (!ok) continue;
      if (span[level][c]) continue;
      extend(level, y);
      if (span_size[level + 1] != target[level + 1]) continue;
      images[level] = y;
      if (self(self, level + 1)) return true;
    }
    return false;
  };
  if (!search(search, 0)) return std::nullopt;
  return images;
}

int milgram_signature(const FiniteQuadForm& a, std::int64_t bound) {
  const std::int64_t e = a.q_den;
  const std::int64_t period = 2 * e;
  std::vector<std::int64_t> counts(static_cast<std::size_t>(period), 0);
  for (const auto& x : a.elements(bound)) ++counts[static_cast<std::size_t>(a.q(x))];

  // Work in Z[zeta_N], N = 4e, where exp(pi i q) = zeta_N^(2 q_num) and
  // i = zeta_N^e.
  const std::int64_t n = 4 * e;
  std::vector<i128> square(static_cast<std::size_t>(n), 0);
  for (std::int64_t s = 0; s < period; ++s) {
    if (counts[idx(s)] == 0) continue;
    for (std::int64_t t = 0; t < period; ++t) {
      if (counts[idx(t)] == 0) continue;
      square[idx((2 * (s + t)) % n)] += static_cast<i128>(counts[idx(s)]) * counts[idx(t)];
    }
  }
  const Poly phi = cyclotomic(n);
  auto reduce = [&](const std::vector<i128>& c) {
    Poly p(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      p[i] = Integer(static_cast<std::int64_t>(c[i]));
    }
    return poly_mod(std::move(p), phi);
  };
  if (reduce(square).empty()) {
    throw LatticeError(ErrorCode::kGaussSumVanishes, "Gauss sum of the form vanishes");
  }
  const std::int64_t size = a.order();
  int base = -1;
  for (int s = 0; s < 4 && base < 0; ++s) {
    std::vector<i128> diff = square;
    diff[idx((e * s) % n)] -= size;
    if (reduce(diff).empty()) base = s;
  }
  if (base < 0) {
    throw LatticeError(ErrorCode::kInvalidInput, "Gauss sum has the wrong absolute value");
  }
  // The square fixes sigma mod 4; the sign of the sum itself decides the rest.
  std::complex<double> sum = 0;
  for (std::int64_t s = 0; s < period; ++s) {
    if (counts[idx(s)] == 0) continue;
    sum += static_cast<double>(counts[idx(s)]) *
           std::polar(1.0, std::numbers::pi * static_cast<double>(s) / static_cast<double>(e));
  }
  const double radius = std::sqrt(static_cast<double>(size));
  auto expect = [&](int sigma) { return std::polar(radius, std::numbers::pi * sigma / 4.0); };
  return std::abs(sum - expect(base)) <= std::abs(sum - expect(base + 4)) ? base : base + 4;
}

EmbeddedLattice overlattice_from_isotropic(const DiscriminantGroup& am,
                                           const std::vector<Element>& gens) {
  const FiniteQuadForm& f = am.form();
  if (!is_isotropic_subgroup(f, gens)) {
    throw LatticeError(ErrorCode::kNotIsotropic, "subgroup is not isotropic");
  }
  if (gens.empty() || f.length() == 0) return am.lattice();
  const Index n = am.lattice().rank();
  RationalMatrix rows{IntMatrix::Zero(0, n), 1};
  for (const auto& g : gens) {
    RationalMatrix r = am.lift(g);
    const Integer den = lcm_value(rows.den, r.den);
    IntMatrix stacked(rows.rows() + 1, n);
    stacked.topRows(rows.rows()) = rows.num * Integer(den / rows.den);
    stacked.bottomRows(1) = r.num * Integer(den / r.den);
    rows = RationalMatrix{std::move(stacked), den};
  }
  return lattice_sum(am.lattice(), rows);
}

FormIsomorphism natural_disc_iso(const EmbeddedLattice& l1, const EmbeddedLattice& l2,
                                 std::int64_t bound) {
  const EmbeddedLattice l = intersect(l1, l2);
  const DiscriminantGroup al(l), a1(l1), a2(l2);
  const FiniteQuadForm& f = al.form();
  const auto h1 = al.coords_rows(l1.basis());
  const auto h2 = al.coords_rows(l2.basis());
  const auto h1_elems = subgroup_elements(f, h1);
  const auto h2_elems = subgroup_elements(f, h2);
  if (static_cast<std::int64_t>(h1_elems.size()) > bound) {
    throw LatticeError(ErrorCode::kBudgetExceeded, "glue subgroup exceeds bound");
  }

  auto pairs_trivially = [&](const Element& x, const std::vector<Element>& gens) {
    for (const auto& g : gens) {
      if (f.b(x, g) != 0) return false;
    }
    return true;
  };
  for (const auto& h : h1_elems) {
    if (h != f.zero() && pairs_trivially(h, h2)) {
      throw LatticeError(ErrorCode::kHypothesisFailed,
                         "glue subgroups are not in perfect duality");
    }
  }
  for (const auto& h : h2_elems) {
    if (h != f.zero() && pairs_trivially(h, h1)) {
      throw LatticeError(ErrorCode::kHypothesisFailed,
                         "glue subgroups are not in perfect duality");
    }
  }

  FormIsomorphism out{a1.form(), a2.form(), {}};
  for (std::size_t i = 0; i < a1.form().length(); ++i) {
    const Element x = al.coords(a1.lift(a1.form().generator(i)));
    bool found = false;
    for (const auto& h : h1_elems) {
      const Element y = f.add(x, h);
      if (!pairs_trivially(y, h2)) continue;
      out.images.push_back(a2.coords(al.lift(y)));
      found = true;
      break;
    }
    if (!found) throw InvariantError("natural map has no representative");
  }
  if (!is_isometry(out)) throw InvariantError("natural map is not an isometry");
  return out;
}

bool is_isometry(const FormIsomorphism& f) {
  const FiniteQuadForm& a = f.source;
  const FiniteQuadForm& b = f.target;
  if (a.divisors != b.divisors || f.images.size() != a.length()) return false;
  for (std::size_t i = 0; i < a.length(); ++i) {
    const Element gi = a.generator(i);
    if (b.element_order(f.images[i]) != a.divisors[i]) return false;
    if (b.q(f.images[i]) != a.q(gi)) return false;
    for (std::size_t j = 0; j < i; ++j) {
      if (b.b(f.images[i], f.images[j]) != a.b(gi, a.generator(j))) return false;
    }
  }
  return static_cast<std::int64_t>(subgroup_elements(b, f.images).size()) == b.order();
}

}  // namespace neighborlat

#include "neighborlat/neighbors.hpp"

#include <algorithm>
#include <cstdlib>
#include <future>
#include <numeric>
#include <set>
#include <thread>

namespace neighborlat {

namespace {

using Index = Eigen::Index;

std::size_t idx(Index i) { return static_cast<std::size_t>(i); }

bool lex_less(const IntVector& a, const IntVector& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

void require_even(const Lattice& l) {
  if (!l.is_even()) throw LatticeError(ErrorCode::kOddLattice, "lattice is not even");
}

Integer gcd_with(const IntVector& v, const Integer& d) {
  Integer g = d;
  for (Index i = 0; i < v.size() && g != 1; ++i) g = gcd_value(g, v(i));
  return g;
}

struct PrimePowerSearch {
  std::int64_t p;
  std::int64_t m;
  Index r;
  std::vector<std::int64_t> half;   // G_ii / 2 mod m
  std::vector<std::int64_t> off;    // G_ij mod m, row-major
  std::vector<std::vector<std::int64_t>>* out;

  std::int64_t g(Index i, Index j) const { return off[idx(i * r + j)]; }

  // Value added to q~ by fixing coordinate j to t, given coordinates < j.
  std::int64_t delta(const std::vector<std::int64_t>& v, Index j, std::int64_t t) const {
    __int128 lin = 0;
    for (Index i = 0; i < j; ++i) lin += static_cast<__int128>(g(i, j)) * v[idx(i)];
    lin %= m;
    __int128 s = static_cast<__int128>(half[idx(j)]) * t % m * t + lin * t;
    return static_cast<std::int64_t>(s % m);
  }

  void run(std::vector<std::int64_t>& v, Index j, Index first_unit, std::int64_t value) {
    if (j == r) {
      if (value == 0) out->push_back(v);
      return;
    }
    if (j < first_unit) {
      for (std::int64_t t = 0; t < m; t += p) {
        v[idx(j)] = t;
        run(v, j + 1, first_unit, (value + delta(v, j, t)) % m);
      }
    } else if (j == first_unit) {
      v[idx(j)] = 1;
      run(v, j + 1, first_unit, (value + delta(v, j, 1)) % m);
    } else {
      for (std::int64_t t = 0; t < m; ++t) {
        v[idx(j)] = t;
        run(v, j + 1, first_unit, (value + delta(v, j, t)) % m);
      }
    }
    v[idx(j)] = 0;
  }
};

}  // namespace

unsigned worker_count() {
  if (const char* env = std::getenv("NEIGHBORLAT_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

Integer half_norm(const Lattice& l, const IntVector& v) {
  require_even(l);
  return pairing(l, v, v) / 2;
}

std::vector<std::int64_t> canonical_small(const std::vector<std::int64_t>& v, std::int64_t d) {
  std::vector<std::int64_t> best, w(v.size());
  for (std::int64_t u = 1; u < d; ++u) {
    if (std::gcd(u, d) != 1) continue;
    for (std::size_t i = 0; i < v.size(); ++i) w[i] = static_cast<std::int64_t>(static_cast<__int128>(v[i]) * u % d);
    if (best.empty() || w < best) best = w;
  }
  return best;
}

IntVector canonical_generator(const IntVector& v, std::int64_t d) {
  IntVector best;
  for (std::int64_t u = 1; u < d; ++u) {
    if (std::gcd(u, d) != 1) continue;
    IntVector w(v.size());
    for (Index i = 0; i < v.size(); ++i) w(i) = mod_floor(Integer(v(i) * u), Integer(d));
    if (best.size() == 0 || lex_less(w, best)) best = std::move(w);
  }
  if (d == 1) best = IntVector::Zero(v.size());
  return best;
}

IsotropicLine make_line(const Lattice& l, std::int64_t d, const IntVector& v) {
  if (d < 2) throw LatticeError(ErrorCode::kInvalidInput, "line modulus must be at least 2");
  require_even(l);
  if (v.size() != l.rank()) {
    throw LatticeError(ErrorCode::kDimensionMismatch, "generator length differs from rank");
  }
  if (gcd_value(l.det(), Integer(d)) != 1) {
    throw LatticeError(ErrorCode::kGcdViolation, "d is not coprime to the discriminant");
  }
  if (gcd_with(v, Integer(d)) != 1) {
    throw LatticeError(ErrorCode::kInvalidInput, "generator does not have order d");
  }
  if (half_norm(l, v) % d != 0) {
    throw LatticeError(ErrorCode::kNotIsotropic, "generator is not isotropic mod d");
  }
  return IsotropicLine{l, d, canonical_generator(v, d)};
}

std::vector<std::vector<std::int64_t>> isotropic_classes_prime_power(const IntMatrix& gram,
                                                                     std::int64_t p, int n,
                                                                     std::int64_t max_classes) {
  const Index r = gram.rows();
  const std::int64_t m = ipow(p, n);
  if (m > (std::int64_t{1} << 31)) {
    throw LatticeError(ErrorCode::kOverflow, "prime power too large for enumeration");
  }
  double classes = 1;
  for (Index i = 0; i < r; ++i) classes *= static_cast<double>(m);
  if (classes > static_cast<double>(max_classes)) {
    throw LatticeError(ErrorCode::kBudgetExceeded,
                       "enumeration needs " + std::to_string(static_cast<long double>(classes)) +
                           " classes, budget is " + std::to_string(max_classes));
  }
  PrimePowerSearch base{p, m, r, {}, {}, nullptr};
  for (Index i = 0; i < r; ++i) {
    if (gram(i, i) % 2 != 0) throw LatticeError(ErrorCode::kOddLattice, "form is not even");
    base.half.push_back(to_int64(mod_floor(Integer(gram(i, i) / 2), Integer(m))));
  }
  for (Index i = 0; i < r; ++i) {
    for (Index j = 0; j < r; ++j) base.off.push_back(to_int64(mod_floor(gram(i, j), Integer(m))));
  }

  // One task per position of the first unit coordinate.
  std::vector<std::vector<std::vector<std::int64_t>>> parts(idx(r));
  auto work = [&](Index f) {
    PrimePowerSearch s = base;
    s.out = &parts[idx(f)];
    std::vector<std::int64_t> v(idx(r), 0);
    s.run(v, 0, f, 0);
  };
  const unsigned workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(r));
  if (workers <= 1) {
    for (Index f = 0; f < r; ++f) work(f);
  } else {
    std::vector<std::future<void>> jobs;
    for (Index f = 0; f < r; ++f) jobs.push_back(std::async(std::launch::async, work, f));
    for (auto& j : jobs) j.get();
  }
  std::vector<std::vector<std::int64_t>> out;
  for (auto& part : parts) {
    for (auto& v : part) out.push_back(std::move(v));
  }
  return out;
}

std::vector<IsotropicLine> enumerate_isotropic_lines(const Lattice& l, std::int64_t d,
                                                     std::int64_t max_classes) {
  if (d < 2) throw LatticeError(ErrorCode::kInvalidInput, "line modulus must be at least 2");
  require_even(l);
  if (gcd_value(l.det(), Integer(d)) != 1) {
    throw LatticeError(ErrorCode::kGcdViolation, "d is not coprime to the discriminant");
  }
  const Index r = l.rank();
  std::vector<std::vector<std::int64_t>> combined = {std::vector<std::int64_t>(idx(r), 0)};
  std::int64_t modulus = 1;
  for (auto [p, n] : factorize(d)) {
    const auto local = isotropic_classes_prime_power(l.gram(), p, n, max_classes);
    const std::int64_t pn = ipow(p, n);
    const std::int64_t inv = mod_inverse(modulus % pn, pn);
    std::vector<std::vector<std::int64_t>> next;
    next.reserve(combined.size() * local.size());
    for (const auto& x : combined) {
      for (const auto& y : local) {
        std::vector<std::int64_t> z(idx(r));
        for (std::size_t i = 0; i < z.size(); ++i) {
          const std::int64_t t = mod_floor<std::int64_t>((y[i] - x[i] % pn) % pn * inv % pn, pn);
          z[i] = x[i] + modulus * t;
        }
        next.push_back(std::move(z));
      }
    }
    combined = std::move(next);
    modulus *= pn;
  }
  for (auto& v : combined) v = canonical_small(v, d);
  std::sort(combined.begin(), combined.end());
  std::vector<IsotropicLine> out;
  out.reserve(combined.size());
  for (const auto& v : combined) {
    IntVector g(r);
    for (Index i = 0; i < r; ++i) g(i) = v[idx(i)];
    out.push_back(IsotropicLine{l, d, std::move(g)});
  }
  return out;
}

IntVector normalize_vector(const Lattice& l, std::int64_t d, const IntVector& v) {
  const Integer dd = d;
  const Integer q = half_norm(l, v);
  if (q % dd != 0) throw LatticeError(ErrorCode::kNotIsotropic, "vector is not isotropic mod d");
  const Integer k = q / dd;
  if (k % dd == 0) return v;
  // Solve (v, w) = -k mod d through a gcd combination of the pairing values.
  const IntVector u = product(l.gram(), IntMatrix(v));
  Integer g = 0;
  IntVector coeff = IntVector::Zero(u.size());
  for (Index i = 0; i < u.size(); ++i) {
    auto [h, s, t] = ext_gcd(g, u(i));
    for (Index j = 0; j < i; ++j) coeff(j) *= s;
    coeff(i) = t;
    g = h;
  }
  if (gcd_value(g, dd) != 1) {
    throw LatticeError(ErrorCode::kGcdViolation, "pairing with the generator is not surjective mod d");
  }
  const Integer scale = mod_floor(Integer(-k * mod_inverse(mod_floor(g, dd), dd)), dd);
  IntVector w(u.size());
  for (Index i = 0; i < u.size(); ++i) w(i) = mod_floor(Integer(coeff(i) * scale), dd);
  IntVector out = v + w * dd;
  if (pairing(l, out, out) % (2 * dd * dd) != 0) throw InvariantError("normalization failed");
  return out;
}

IntVector normalize_generator(const IsotropicLine& line) {
  return normalize_vector(line.parent, line.d, line.generator);
}

EmbeddedLattice split_from_vector(const Lattice& l, std::int64_t d, const IntVector& v) {
  const EmbeddedLattice whole = EmbeddedLattice::whole(l);
  return kernel_of_hom(whole, product(l.gram(), IntMatrix(v)), Integer(d));
}

EmbeddedLattice neighbor_from_vector(const Lattice& l, std::int64_t d, const IntVector& v) {
  const IntVector w = normalize_vector(l, d, v);
  const Index n = l.rank();
  const Integer dd = d;
  const IntMatrix k = kernel_mod(product(l.gram(), IntMatrix(w)), dd);
  IntMatrix rows(n + 1, n);
  rows.topRows(n) = k * dd;
  rows.row(n) = w.transpose();
  return EmbeddedLattice(l, RationalMatrix{std::move(rows), dd});
}

EmbeddedLattice split_sublattice(const IsotropicLine& line) {
  return split_from_vector(line.parent, line.d, line.generator);
}

EmbeddedLattice neighbor_from_line(const IsotropicLine& line) {
  return neighbor_from_vector(line.parent, line.d, line.generator);
}

IsotropicLine line_from_neighbor(const Lattice& l, const EmbeddedLattice& neighbor) {
  if (!(neighbor.ambient() == l)) {
    throw LatticeError(ErrorCode::kDimensionMismatch, "neighbor lives in a different ambient");
  }
  const Index n = l.rank();
  const IntMatrix& num = neighbor.basis().num;
  const Integer& den = neighbor.basis().den;
  // L cap L' in coordinates of L': rows y with y * num = 0 mod den.
  const IntMatrix k = den == 1 ? identity_matrix(n) : kernel_mod_columns(num, den);
  const IntMatrix m = product(k, num) / den;
  Integer det_k = 1, det_num = 1, den_pow = 1;
  for (Index i = 0; i < n; ++i) {
    det_k *= k(i, i);
    det_num *= num(i, i);
    den_pow *= den;
  }
  const Integer d = det_k;
  if (d < 2 || det_k * det_num != d * den_pow) {
    throw LatticeError(ErrorCode::kNotNeighbor, "index conditions of a neighbor fail");
  }
  auto cyclic = [](const IntMatrix& rel) {
    int nontrivial = 0;
    for (const auto& c : smith_form(rel).diagonal) nontrivial += c > 1;
    return nontrivial <= 1;
  };
  if (!cyclic(k) || !cyclic(m)) {
    throw LatticeError(ErrorCode::kNotNeighbor, "quotients by the intersection are not cyclic");
  }
  if (!fits_int64(d)) throw LatticeError(ErrorCode::kOverflow, "neighbor index too large");
  const std::int64_t dd = to_int64(d);
  // Image of d L' in L / d L.
  RationalMatrix image{num * d, den};
  image.normalize();
  if (image.den != 1) throw InvariantError("d L' is not contained in L");
  IntVector best = IntVector::Zero(n);
  auto order_of = [&](const IntVector& x) { return d / gcd_with(x, d); };
  for (Index r = 0; r < image.rows(); ++r) {
    const IntVector row = image.num.row(r).transpose();
    IntVector pick = best;
    Integer pick_order = order_of(best);
    for (std::int64_t t = 1; t < dd && pick_order != d; ++t) {
      IntVector cand = best + row * Integer(t);
      const Integer o = order_of(cand);
      if (o > pick_order) {
        pick = cand;
        pick_order = o;
      }
    }
    best = pick;
  }
  IntMatrix span(image.rows() + n, n);
  span.topRows(image.rows()) = image.num;
  span.bottomRows(n) = identity_matrix(n) * d;
  const IntMatrix h = hermite_form(span);
  Integer covolume = 1, full = 1;
  for (Index i = 0; i < n; ++i) {
    covolume *= h(i, i);
    full *= d;
  }
  if (order_of(best) != d || covolume * d != full) {
    throw LatticeError(ErrorCode::kNotNeighbor, "image of dL' is not cyclic of order d");
  }
  return make_line(l, dd, best);
}

std::vector<std::vector<Element>> transversal_subgroups(
    const FiniteQuadForm& a, const std::vector<Element>& h, std::int64_t bound,
    const std::function<bool(const std::vector<Element>&)>& accept) {
  const auto h_elems = subgroup_elements(a, h);
  const std::int64_t size = static_cast<std::int64_t>(h_elems.size());
  if (size == 1) {
    std::vector<std::vector<Element>> out;
    if (!accept || accept({})) out.push_back({});
    return out;
  }
  std::set<std::int64_t> in_h;
  std::int64_t exponent = 1;
  std::multiset<std::int64_t> h_orders;
  for (const auto& x : h_elems) {
    in_h.insert(a.encode(x));
    exponent = std::lcm(exponent, a.element_order(x));
    h_orders.insert(a.element_order(x));
  }

  // Candidates: nonzero isotropic x whose cyclic group meets H trivially.
  std::vector<Element> cand;
  for (const auto& x : isotropic_elements(a, bound)) {
    const std::int64_t o = a.element_order(x);
    if (o == 1 || exponent % o != 0) continue;
    bool clean = true;
    Element y = x;
    for (std::int64_t t = 1; t < o && clean; ++t, y = a.add(y, x)) clean = !in_h.count(a.encode(y));
    if (clean) cand.push_back(x);
  }

  std::set<std::vector<std::int64_t>> seen;
  std::vector<std::vector<Element>> out;
  auto codes_of = [&](const std::vector<Element>& gens) {
    std::vector<std::int64_t> codes;
    for (const auto& x : subgroup_elements(a, gens)) codes.push_back(a.encode(x));
    return codes;
  };
  auto search = [&](auto&& self, std::vector<Element>& gens, std::int64_t current) -> void {
    if (current == size) {
      const auto elems = subgroup_elements(a, gens);
      std::multiset<std::int64_t> orders;
      for (const auto& x : elems) orders.insert(a.element_order(x));
      if (orders != h_orders) return;
      if (accept && !accept(gens)) return;
      out.push_back(gens);
      return;
    }
    for (const auto& x : cand) {
      bool ok = true;
      for (const auto& g : gens) ok = ok && a.b(x, g) == 0;
      if (!ok) continue;
      gens.push_back(x);
      const auto codes = codes_of(gens);
      const auto grown = static_cast<std::int64_t>(codes.size());
      bool fine = grown > current && size % grown == 0 && !seen.count(codes);
      for (std::size_t i = 0; fine && i < codes.size(); ++i) {
        fine = codes[i] == 0 || !in_h.count(codes[i]);
      }
      if (fine) {
        seen.insert(codes);
        self(self, gens, grown);
      }
      gens.pop_back();
    }
  };
  std::vector<Element> gens;
  search(search, gens, 1);
  return out;
}

std::vector<Element> transverse_subgroup(const DiscriminantGroup& am, const std::vector<Element>& h,
                                         std::int64_t bound) {
  auto found = transversal_subgroups(am.form(), h, bound);
  if (found.size() != 1) {
    throw LatticeError(ErrorCode::kNonSplit,
                       "found " + std::to_string(found.size()) + " transversal subgroups");
  }
  return found.front();
}

bool same_genus_invariants(const Lattice& a, const Lattice& b, std::int64_t bound) {
  require_even(a);
  require_even(b);
  if (a.rank() != b.rank()) return false;
  if (signature(a) != signature(b)) return false;
  if (abs_value(a.det()) != abs_value(b.det())) return false;
  if (abs_value(a.det()) > bound) {
    throw LatticeError(ErrorCode::kBudgetExceeded, "discriminant exceeds the isomorphism bound");
  }
  return finite_form_isomorphic(discriminant_form(a), discriminant_form(b), bound).has_value();
}

}  // namespace neighborlat

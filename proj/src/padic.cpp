#include "neighborlat/padic.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace neighborlat {

namespace {

using Index = Eigen::Index;

std::size_t idx(Index i) { return static_cast<std::size_t>(i); }

void require_odd_prime(std::int64_t p) {
  if (p == 2) throw LatticeError(ErrorCode::kUnsupportedPrime, "p = 2 is not supported here");
  if (!is_prime(p)) throw LatticeError(ErrorCode::kInvalidInput, std::to_string(p) + " is not prime");
}

int valuation_capped(const Integer& x, std::int64_t p, int cap) {
  if (x == 0) return cap;
  return std::min(cap, valuation(x, p));
}

// Working form W = T G T^T mod m, updated together with the rows of T.
struct Work {
  IntMatrix w;
  IntMatrix t;
  Integer m;
  Index frozen;  // rows of t below this index are never reduced

  void add_row(Index i, Index j, const Integer& c) {
    if (c == 0) return;
    t.row(i) += t.row(j) * c;
    w.row(i) += w.row(j) * c;
    w.col(i) += w.col(j) * c;
    reduce(i);
  }
  void swap_rows(Index i, Index j) {
    if (i == j) return;
    t.row(i).swap(t.row(j));
    w.row(i).swap(w.row(j));
    w.col(i).swap(w.col(j));
  }
  void reduce(Index i) {
    for (Index j = 0; j < w.cols(); ++j) {
      w(i, j) = mod_floor(w(i, j), m);
      w(j, i) = w(i, j);
    }
    if (i >= frozen) {
      for (Index j = 0; j < t.cols(); ++j) t(i, j) = mod_floor(t(i, j), m);
    }
  }
};

// Diagonalizes rows start.. of the working form by pivoting on the entry of
// least valuation.
void diagonalize(Work& s, std::int64_t p, int precision, Index start) {
  const Index r = s.w.rows();
  for (Index k = start; k < r; ++k) {
    int best = precision;
    Index bi = -1, bj = -1;
    for (Index i = k; i < r; ++i) {
      for (Index j = i; j < r; ++j) {
        const int v = valuation_capped(s.w(i, j), p, precision);
        if (v < best || (v == best && bi >= 0 && i == j && bi != bj)) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    }
    if (bi < 0) {
      throw LatticeError(ErrorCode::kInsufficientPrecision, "form vanishes mod p^N; raise precision");
    }
    if (bi != bj) {
      // p odd: the new diagonal entry keeps the least valuation.
      s.add_row(bi, bj, 1);
    }
    s.swap_rows(k, bi);
    const Integer pv = ipow(Integer(p), best);
    const Integer unit = s.w(k, k) / pv;
    const Integer inv = mod_inverse(mod_floor(unit, s.m), s.m);
    for (Index j = k + 1; j < r; ++j) {
      if (s.w(j, k) == 0) continue;
      const Integer c = mod_floor(Integer(s.w(j, k) / pv * inv), s.m);
      s.add_row(j, k, -c);
    }
  }
}

std::vector<JordanBlock> collect_blocks(Work& s, std::int64_t p, int precision, Index start) {
  const Index r = s.w.rows();
  std::vector<std::pair<int, Index>> order;
  for (Index i = start; i < r; ++i) {
    order.emplace_back(valuation_capped(s.w(i, i), p, precision), i);
  }
  std::stable_sort(order.begin(), order.end());
  IntMatrix t = s.t, w = s.w;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Index dst = start + static_cast<Index>(k), src = order[k].second;
    s.t.row(dst) = t.row(src);
    for (Index j = 0; j < r; ++j) {
      const Index sj = j < start ? j : order[idx(j - start)].second;
      s.w(dst, j) = w(src, sj);
    }
  }
  for (Index i = 0; i < r; ++i) {
    for (Index j = 0; j < i; ++j) s.w(j, i) = s.w(i, j);
  }
  std::vector<JordanBlock> blocks;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const int scale = order[k].first;
    const Index row = start + static_cast<Index>(k);
    if (blocks.empty() || blocks.back().scale != scale) blocks.push_back({scale, IntMatrix(), {}});
    blocks.back().rows.push_back(row);
  }
  for (auto& b : blocks) {
    const Index n = static_cast<Index>(b.rows.size());
    const Integer pv = ipow(Integer(p), b.scale);
    const Integer mod = ipow(Integer(p), precision - b.scale);
    b.gram = IntMatrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) b.gram(i, i) = mod_floor(Integer(s.w(b.rows[idx(i)], b.rows[idx(i)]) / pv), mod);
  }
  return blocks;
}

Work start_work(const Lattice& l, IntMatrix t, const Integer& m, Index frozen) {
  Work s{product(t, l.gram(), IntMatrix(t.transpose())), std::move(t), m, frozen};
  for (Index i = 0; i < s.w.rows(); ++i) s.reduce(i);
  return s;
}

IntMatrix rows_of(const IntMatrix& t, const std::vector<Index>& rows) {
  IntMatrix out(static_cast<Index>(rows.size()), t.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = t.row(rows[i]);
  return out;
}

UnimodularPart make_part(const Lattice& l, std::int64_t p, IntMatrix basis) {
  IntMatrix gram = product(basis, l.gram(), IntMatrix(basis.transpose()));
  if (basis.rows() > 0 && determinant(gram) % p == 0) {
    throw InvariantError("unimodular part has determinant divisible by p");
  }
  return UnimodularPart{l, p, std::move(basis), std::move(gram)};
}

std::int64_t mod64(const Integer& x, std::int64_t m) { return to_int64(mod_floor(x, Integer(m))); }

}  // namespace

int working_precision(const Lattice& l, std::int64_t p, int n) {
  return n + valuation(l.det(), p) + 4;
}

ModularDecomposition jordan_decomposition(const Lattice& l, std::int64_t p, int precision) {
  require_odd_prime(p);
  const int need = valuation(l.det(), p) + 1;
  if (precision < need) {
    throw LatticeError(ErrorCode::kInsufficientPrecision,
                       "precision must exceed v_p(disc) = " + std::to_string(need - 1));
  }
  Work s = start_work(l, identity_matrix(l.rank()), ipow(Integer(p), precision), 0);
  diagonalize(s, p, precision, 0);
  auto blocks = collect_blocks(s, p, precision, 0);
  int total = 0;
  for (const auto& b : blocks) total += b.scale * static_cast<int>(b.rows.size());
  if (total != need - 1) {
    throw LatticeError(ErrorCode::kInsufficientPrecision, "pivot valuations lost precision");
  }
  return ModularDecomposition{p, precision, std::move(s.t), std::move(blocks)};
}

UnimodularPart maximal_unimodular_sublattice(const Lattice& l, std::int64_t p) {
  require_odd_prime(p);
  if (l.det() % p != 0) return make_part(l, p, identity_matrix(l.rank()));
  const auto jd = jordan_decomposition(l, p, working_precision(l, p, 1));
  if (jd.blocks.front().scale != 0) {
    throw LatticeError(ErrorCode::kNoUnimodularPart, "form has positive scale at p");
  }
  return make_part(l, p, rows_of(jd.transform, jd.blocks.front().rows));
}

UnimodularPart hosting_unimodular(const Lattice& l, std::int64_t p, int n, const IntVector& v) {
  if (p != 2) require_odd_prime(p);
  if (!l.is_even()) throw LatticeError(ErrorCode::kOddLattice, "lattice is not even");
  if (p == 2 && l.det() % 2 == 0) {
    throw LatticeError(ErrorCode::kUnsupportedPrime, "p = 2 divides the discriminant");
  }
  const Index r = l.rank();
  if (v.size() != r) throw LatticeError(ErrorCode::kDimensionMismatch, "generator length differs from rank");
  const Integer pn = ipow(Integer(p), n);
  const IntVector gv = product(l.gram(), IntMatrix(v));
  Index k = -1, j = -1;
  for (Index i = 0; i < r; ++i) {
    if (k < 0 && v(i) % p != 0) k = i;
  }
  if (k < 0) throw LatticeError(ErrorCode::kInvalidInput, "generator does not have order p^n");
  if (pairing(l, v, v) / 2 % pn != 0) {
    throw LatticeError(ErrorCode::kNotIsotropic, "generator is not isotropic mod p^n");
  }
  for (Index i = 0; i < r; ++i) {
    if (j < 0 && i != k && gv(i) % p != 0) j = i;
  }
  if (j < 0) {
    throw LatticeError(ErrorCode::kInvalidInput, "generator lies in no non-degenerate subgroup");
  }
  // Basis v, e_j, remaining e_i (i != k, j); invertible mod p.
  IntMatrix t = IntMatrix::Zero(r, r);
  t.row(0) = v.transpose();
  t(1, j) = 1;
  Index next = 2;
  for (Index i = 0; i < r; ++i) {
    if (i != k && i != j) t(next++, i) = 1;
  }
  if (l.det() % p != 0) return make_part(l, p, t);

  const int precision = working_precision(l, p, n);
  Work s = start_work(l, std::move(t), ipow(Integer(p), precision), 2);
  const Integer& m = s.m;
  // Split off the plane spanned by the first two rows.
  const Integer a = s.w(0, 0), b = s.w(0, 1), c = s.w(1, 1);
  const Integer inv = mod_inverse(mod_floor(Integer(a * c - b * b), m), m);
  for (Index i = 2; i < r; ++i) {
    const Integer x = s.w(i, 0), y = s.w(i, 1);
    const Integer alpha = mod_floor(Integer((c * x - b * y) % m * inv), m);
    const Integer beta = mod_floor(Integer((a * y - b * x) % m * inv), m);
    s.add_row(i, 0, -alpha);
    s.add_row(i, 1, -beta);
  }
  diagonalize(s, p, precision, 2);
  const auto blocks = collect_blocks(s, p, precision, 2);
  std::vector<Index> rows = {0, 1};
  if (!blocks.empty() && blocks.front().scale == 0) {
    rows.insert(rows.end(), blocks.front().rows.begin(), blocks.front().rows.end());
  }
  UnimodularPart out = make_part(l, p, rows_of(s.t, rows));
  if (out.rank() != maximal_unimodular_sublattice(l, p).rank()) {
    throw InvariantError("hosting unimodular part is not maximal");
  }
  return out;
}

GeneralizedLine make_generalized_line(const Lattice& l, std::int64_t d, const IntVector& v) {
  if (d < 1) throw LatticeError(ErrorCode::kInvalidInput, "line modulus must be positive");
  if (!l.is_even()) throw LatticeError(ErrorCode::kOddLattice, "lattice is not even");
  if (v.size() != l.rank()) {
    throw LatticeError(ErrorCode::kDimensionMismatch, "generator length differs from rank");
  }
  GeneralizedLine out{l, d, canonical_generator(v, d), {}};
  for (auto [p, n] : factorize(d)) {
    const std::int64_t pn = ipow(p, n);
    IntVector gen(v.size());
    for (Index i = 0; i < v.size(); ++i) gen(i) = mod_floor(out.generator(i), Integer(pn));
    UnimodularPart host = hosting_unimodular(l, p, n, gen);
    out.parts.push_back(
        LocalLineData{p, n, std::move(gen), std::make_shared<const IntMatrix>(std::move(host.basis))});
  }
  return out;
}

std::vector<GeneralizedLine> generalized_isotropic_lines(const Lattice& l, std::int64_t d,
                                                         std::int64_t max_classes,
                                                         std::int64_t limit) {
  if (d < 1) throw LatticeError(ErrorCode::kInvalidInput, "line modulus must be positive");
  if (!l.is_even()) throw LatticeError(ErrorCode::kOddLattice, "lattice is not even");
  const Index r = l.rank();
  if (d == 1) return {make_generalized_line(l, 1, IntVector::Zero(r))};
  std::vector<std::vector<std::int64_t>> combined = {std::vector<std::int64_t>(idx(r), 0)};
  std::int64_t modulus = 1;
  std::map<std::int64_t, std::shared_ptr<const IntMatrix>> hosts;
  for (auto [p, n] : factorize(d)) {
    if (p == 2 && l.det() % 2 == 0) {
      throw LatticeError(ErrorCode::kUnsupportedPrime, "p = 2 divides the discriminant");
    }
    const IntMatrix basis =
        p == 2 ? identity_matrix(r) : maximal_unimodular_sublattice(l, p).basis;
    hosts[p] = std::make_shared<const IntMatrix>(basis);
    const IntMatrix gram = product(basis, l.gram(), IntMatrix(basis.transpose()));
    const auto local = isotropic_classes_prime_power(gram, p, n, max_classes);
    const std::int64_t pn = ipow(p, n);
    std::vector<std::int64_t> reduced(idx(basis.size()));
    for (Index i = 0; i < basis.rows(); ++i) {
      for (Index j = 0; j < r; ++j) reduced[idx(i * r + j)] = mod64(basis(i, j), pn);
    }
    const std::int64_t inv = mod_inverse(modulus % pn, pn);
    std::vector<std::vector<std::int64_t>> next;
    next.reserve(combined.size() * local.size());
    for (const auto& y : local) {
      std::vector<std::int64_t> img(idx(r), 0);
      for (Index i = 0; i < basis.rows(); ++i) {
        if (y[idx(i)] == 0) continue;
        for (Index j = 0; j < r; ++j) {
          img[idx(j)] = static_cast<std::int64_t>(
              (img[idx(j)] + static_cast<__int128>(y[idx(i)]) * reduced[idx(i * r + j)]) % pn);
        }
      }
      for (const auto& x : combined) {
        std::vector<std::int64_t> z(idx(r));
        for (std::size_t i = 0; i < z.size(); ++i) {
          const std::int64_t t = mod_floor<std::int64_t>(
              static_cast<std::int64_t>(static_cast<__int128>(img[i] - x[i] % pn) * inv % pn), pn);
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
  combined.erase(std::unique(combined.begin(), combined.end()), combined.end());
  if (limit >= 0 && static_cast<std::size_t>(limit) < combined.size()) {
    combined.resize(static_cast<std::size_t>(limit));
  }

  std::vector<GeneralizedLine> out;
  out.reserve(combined.size());
  for (const auto& v : combined) {
    GeneralizedLine line{l, d, IntVector(r), {}};
    for (Index i = 0; i < r; ++i) line.generator(i) = v[idx(i)];
    for (auto [p, n] : factorize(d)) {
      const std::int64_t pn = ipow(p, n);
      IntVector gen(r);
      for (Index i = 0; i < r; ++i) gen(i) = v[idx(i)] % pn;
      line.parts.push_back(LocalLineData{p, n, std::move(gen), hosts[p]});
    }
    out.push_back(std::move(line));
  }
  return out;
}

EmbeddedLattice generalized_neighbor(const GeneralizedLine& line) {
  if (line.d == 1) return EmbeddedLattice::whole(line.parent);
  return neighbor_from_vector(line.parent, line.d, line.generator);
}

EmbeddedLattice generalized_split(const GeneralizedLine& line) {
  if (line.d == 1) return EmbeddedLattice::whole(line.parent);
  return split_from_vector(line.parent, line.d, line.generator);
}

namespace {

bool complement_condition(const FiniteQuadForm& a, const std::vector<Element>& gens,
                          const FiniteQuadForm& a_l, std::int64_t bound) {
  const auto perp = subgroup_form(a, orthogonal_complement(a, gens, bound)).form;
  const auto target = orthogonal_sum(subgroup_form(a, gens).form, a_l);
  return finite_form_isomorphic(perp, target, bound).has_value();
}

}  // namespace

std::vector<std::vector<Element>> abstract_transversals(const DiscriminantGroup& am,
                                                        const std::vector<Element>& h,
                                                        const FiniteQuadForm& a_l,
                                                        std::int64_t bound) {
  const FiniteQuadForm& a = am.form();
  return transversal_subgroups(a, h, bound, [&](const std::vector<Element>& gens) {
    return complement_condition(a, gens, a_l, bound);
  });
}

std::vector<Element> generalized_transverse(const GeneralizedLine& line,
                                            const DiscriminantGroup& am,
                                            const std::vector<Element>& h, std::int64_t bound) {
  const FiniteQuadForm& a = am.form();
  const FiniteQuadForm a_l = discriminant_form(line.parent);
  const Lattice& l = line.parent;
  const EmbeddedLattice dual = dual_lattice(am.lattice());
  // Classes of M^dual lying in the span of U_0^perp, one list per prime,
  // already projected to the p-primary part.
  std::vector<Element> outside;
  const std::int64_t e = a.exponent();
  for (const auto& part : line.parts) {
    if (!part.host) throw LatticeError(ErrorCode::kInvalidInput, "line part carries no host basis");
    if (part.host->rows() == l.rank()) continue;
    const IntMatrix values =
        product(dual.basis().num, l.gram(), IntMatrix(part.host->transpose()));
    const IntMatrix k = left_kernel(values);
    if (k.rows() == 0) continue;
    std::int64_t f = e;
    while (f % part.p == 0) f /= part.p;
    for (const auto& c : am.coords_rows(k * dual.basis())) outside.push_back(a.scale(f, c));
  }
  auto accept = [&](const std::vector<Element>& gens) {
    for (const auto& x : gens) {
      for (const auto& c : outside) {
        if (a.b(x, c) != 0) return false;
      }
    }
    return complement_condition(a, gens, a_l, bound);
  };
  auto found = transversal_subgroups(a, h, bound, accept);
  if (found.size() != 1) {
    throw LatticeError(ErrorCode::kNonSplit,
                       "found " + std::to_string(found.size()) + " generalized transversals");
  }
  return found.front();
}

EmbeddedLattice glue_localizations(const Lattice& l, const std::vector<LocalLineData>& changes) {
  const EmbeddedLattice whole = EmbeddedLattice::whole(l);
  if (changes.empty()) return whole;
  std::set<std::int64_t> primes;
  Integer d = 1;
  for (const auto& c : changes) {
    if (!primes.insert(c.p).second) {
      throw LatticeError(ErrorCode::kInconsistentLocalData, "prime " + std::to_string(c.p) + " given twice");
    }
    if (c.n < 1) throw LatticeError(ErrorCode::kInvalidInput, "local exponent must be positive");
    d *= ipow(Integer(c.p), c.n);
  }
  std::vector<EmbeddedLattice> local;
  std::optional<EmbeddedLattice> glued;
  for (const auto& c : changes) {
    if (!is_prime(c.p)) throw LatticeError(ErrorCode::kInvalidInput, "local datum at a non-prime");
    const std::int64_t pn = ipow(c.p, c.n);
    local.push_back(generalized_neighbor(make_generalized_line(l, pn, c.gen)));
    // Scaling by the other prime powers leaves the p-part intact and lands
    // inside the neighbor at every other changed prime.
    RationalMatrix rows = local.back().basis();
    rows.num *= d / pn;
    rows.normalize();
    glued = glued ? lattice_sum(*glued, rows) : EmbeddedLattice(l, rows);
  }
  for (std::size_t i = 0; i < changes.size(); ++i) {
    const EmbeddedLattice meet = intersect(*glued, local[i]);
    if (index(meet, *glued) % changes[i].p == 0 || index(meet, local[i]) % changes[i].p == 0) {
      throw LatticeError(ErrorCode::kInconsistentLocalData, "glued lattice differs at a changed prime");
    }
  }
  const EmbeddedLattice meet = intersect(*glued, whole);
  for (Integer k : {index(meet, *glued), index(meet, whole)}) {
    for (auto p : primes) {
      while (k % p == 0) k /= p;
    }
    if (k != 1) throw LatticeError(ErrorCode::kInconsistentLocalData, "glued lattice differs at an unchanged prime");
  }
  return *glued;
}

}  // namespace neighborlat

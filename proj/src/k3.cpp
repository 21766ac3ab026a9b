#include "neighborlat/k3.hpp"

#include <cmath>

#include "neighborlat/kummer.hpp"

namespace neighborlat {

namespace {

using Index = Eigen::Index;

void require_even(const Lattice& l) {
  if (!l.is_even()) throw LatticeError(ErrorCode::kOddLattice, "lattice is not even");
}

Lattice neg(const Lattice& l) { return lattices::scaled(l, -1); }

// Row [x | y] over a common denominator.
RationalMatrix join_rows(const RationalMatrix& x, const RationalMatrix& y) {
  RationalMatrix out{IntMatrix(1, x.cols() + y.cols()), x.den * y.den};
  out.num.leftCols(x.cols()) = x.num * y.den;
  out.num.rightCols(y.cols()) = y.num * x.den;
  return out.normalize();
}

}  // namespace

Lattice k3_lattice() {
  using namespace lattices;
  const Lattice u = hyperbolic_plane();
  const Lattice e8 = neg(e_root(8));
  return orthogonal_sum({u, u, u, e8, e8});
}

int discriminant_length(const Lattice& l) {
  int length = 0;
  for (const auto& c : smith_form(l.gram()).diagonal) length += c > 1;
  return length;
}

Embeddable embeds_primitively_sufficient(const Lattice& l, const std::optional<SplitContext>& context,
                                         std::int64_t) {
  require_even(l);
  const auto [pos, neg_count] = signature(l);
  if (pos != 2 || neg_count > 19) {
    throw LatticeError(ErrorCode::kWrongSignature, "expected signature (2, k) with k <= 19");
  }
  const int rank = static_cast<int>(l.rank());
  if (rank <= 10) return Embeddable::kYes;
  if (discriminant_length(l) <= 22 - rank - 2) return Embeddable::kYes;
  if (context) {
    if (!context->generalized && context->rho >= 3) return Embeddable::kYes;
    if (context->generalized && context->parent_length + 3 <= context->rho) return Embeddable::kYes;
  }
  return Embeddable::kUnknown;
}

bool is_maximal(const Lattice& l, std::int64_t bound) {
  require_even(l);
  return isotropic_elements(discriminant_form(l), bound).size() == 1;
}

EmbeddedLattice maximalize(const EmbeddedLattice& m, std::int64_t bound) {
  EmbeddedLattice current = m;
  const Integer start = abs_value(discriminant(current.as_lattice()));
  int steps = 0;
  while (true) {
    DiscriminantGroup am(current);
    const auto iso = isotropic_elements(am.form(), bound);
    if (iso.size() == 1) break;
    current = overlattice_from_isotropic(am, {iso[1]});
    ++steps;
  }
  if (steps > 0 && std::ldexp(1.0, steps) > start.convert_to<double>() + 0.5) {
    throw InvariantError("overlattice chain longer than log2 |A|");
  }
  return current;
}

EmbeddedLattice brauer_kernel(const Lattice& t, const RationalMatrix& functionals) {
  if (functionals.cols() != t.rank()) {
    throw LatticeError(ErrorCode::kDimensionMismatch, "functionals need one value per basis vector");
  }
  if (functionals.rows() == 0) return EmbeddedLattice::whole(t);
  RationalMatrix f = functionals;
  f.normalize();
  const IntMatrix k = kernel_mod_columns(IntMatrix(f.num.transpose()), f.den);
  return EmbeddedLattice(t, RationalMatrix{k, 1});
}

RationalMatrix line_functional(const IsotropicLine& line) {
  RationalMatrix out{IntMatrix(product(line.parent.gram(), IntMatrix(line.generator)).transpose()),
                     line.d};
  return out.normalize();
}

K3LatticePair make_k3_pair(const Lattice& ns, const Lattice& t, std::int64_t bound) {
  auto images = finite_form_isomorphic(discriminant_form(ns), negate(discriminant_form(t)), bound);
  if (!images) {
    throw LatticeError(ErrorCode::kHypothesisFailed, "A_ns is not anti-isometric to A_t");
  }
  return K3LatticePair{ns, t, std::move(*images)};
}

EmbeddedLattice glued_lattice(const K3LatticePair& pair) {
  const EmbeddedLattice ns = EmbeddedLattice::whole(pair.ns);
  const EmbeddedLattice t = EmbeddedLattice::whole(pair.t);
  const DiscriminantGroup ans(ns), at(t);
  const FormIsomorphism glue{ans.form(), negate(at.form()), pair.glue};
  if (!is_isometry(glue)) {
    throw LatticeError(ErrorCode::kHypothesisFailed, "glue is not an anti-isometry A_ns -> A_t");
  }
  const Lattice ambient = lattices::orthogonal_sum(pair.ns, pair.t);
  const Index n = ambient.rank();
  IntMatrix num = IntMatrix::Zero(static_cast<Index>(pair.glue.size()), n);
  Integer den = 1;
  std::vector<RationalMatrix> rows;
  for (std::size_t i = 0; i < pair.glue.size(); ++i) {
    rows.push_back(join_rows(ans.lift(ans.form().generator(i)), at.lift(pair.glue[i])));
    den = lcm_value(den, rows.back().den);
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    num.row(static_cast<Index>(i)) = rows[i].num * (den / rows[i].den);
  }
  const EmbeddedLattice whole = EmbeddedLattice::whole(ambient);
  if (rows.empty()) return whole;
  return lattice_sum(whole, RationalMatrix{num, den});
}

bool k3_pair_check(const K3LatticePair& pair, std::string* reason) {
  auto fail = [&](const std::string& why) {
    if (reason) *reason = why;
    return false;
  };
  const int rho = static_cast<int>(pair.ns.rank());
  if (rho + pair.t.rank() != 22) return fail("ranks do not add up to 22");
  if (signature(pair.ns) != std::pair<int, int>{1, rho - 1}) return fail("ns is not hyperbolic");
  if (signature(pair.t) != std::pair<int, int>{2, 20 - rho}) return fail("t has wrong signature");
  try {
    const EmbeddedLattice g = glued_lattice(pair);
    if (!g.is_integral() || !g.is_even()) return fail("glued lattice is not even");
    const Lattice gl = g.as_lattice();
    if (abs_value(gl.det()) != 1) return fail("glued lattice is not unimodular");
    if (signature(gl) != std::pair<int, int>{3, 19}) return fail("glued lattice has wrong signature");
  } catch (const LatticeError& e) {
    return fail(e.what());
  }
  if (reason) reason->clear();
  return true;
}

K3LatticePair k3_neighbor_data(const K3LatticePair& pair, const EmbeddedLattice& neighbor,
                               std::int64_t bound) {
  if (!(neighbor.ambient() == pair.t)) {
    throw LatticeError(ErrorCode::kDimensionMismatch, "neighbor must live in pair.t");
  }
  const FormIsomorphism f = natural_disc_iso(EmbeddedLattice::whole(pair.t), neighbor, bound);
  const Lattice t2 = neighbor.as_lattice();
  if (!(f.target == discriminant_form(t2))) throw InvariantError("generator choice drifted");
  K3LatticePair out{pair.ns, t2, {}};
  for (const auto& y : pair.glue) {
    Element image = f.target.zero();
    for (std::size_t j = 0; j < y.size(); ++j) {
      image = f.target.add(image, f.target.scale(y[j], f.images[j]));
    }
    out.glue.push_back(std::move(image));
  }
  std::string why;
  if (!k3_pair_check(out, &why)) throw InvariantError("transported pair does not glue: " + why);
  return out;
}

K3LatticePair k3_neighbor_data(const K3LatticePair& pair, const IsotropicLine& line,
                               std::int64_t bound) {
  return k3_neighbor_data(pair, neighbor_from_line(line), bound);
}

K3LatticePair k3_neighbor_data(const K3LatticePair& pair, const GeneralizedLine& line,
                               std::int64_t bound) {
  if (line.d == 1) return pair;
  return k3_neighbor_data(pair, generalized_neighbor(line), bound);
}

namespace {

K3SplitData split_data(const K3LatticePair& pair, const EmbeddedLattice& kernel, bool generalized) {
  const Lattice ts = kernel.as_lattice();
  const SplitContext context{static_cast<int>(pair.ns.rank()), generalized,
                             discriminant_length(pair.t)};
  return K3SplitData{ts, embeds_primitively_sufficient(ts, context), abs_value(ts.det())};
}

}  // namespace

K3SplitData k3_split_data(const K3LatticePair& pair, const IsotropicLine& line) {
  if (!(line.parent == pair.t)) throw LatticeError(ErrorCode::kDimensionMismatch, "line must live on pair.t");
  return split_data(pair, split_sublattice(line), false);
}

K3SplitData k3_split_data(const K3LatticePair& pair, const GeneralizedLine& line) {
  if (!(line.parent == pair.t)) throw LatticeError(ErrorCode::kDimensionMismatch, "line must live on pair.t");
  return split_data(pair, generalized_split(line), true);
}

std::vector<NamedPair> k3_fixtures() {
  using namespace lattices;
  const Lattice u = hyperbolic_plane();
  const Lattice e8 = neg(e_root(8));
  const Lattice two = diagonal({2}), minus_two = diagonal({-2});
  std::vector<NamedPair> out;
  auto add = [&](std::string name, const Lattice& ns, const Lattice& t) {
    out.push_back({std::move(name), make_k3_pair(ns, t)});
  };
  add("rho1", two, orthogonal_sum({u, u, e8, e8, minus_two}));
  add("rho2", orthogonal_sum(two, minus_two), orthogonal_sum({two, minus_two, u, e8, e8}));
  add("rho3", orthogonal_sum(u, minus_two), orthogonal_sum({u, u, e8, neg(e_root(7))}));
  add("rho4", orthogonal_sum(u, neg(a_root(2))), orthogonal_sum({u, u, e8, neg(e_root(6))}));
  add("rho18", orthogonal_sum({scaled(u, 2), e8, e8}), orthogonal_sum(u, scaled(u, 2)));
  add("kummer", orthogonal_sum({u, neg(d_root(4)), neg(d_root(4)), e8}),
      scaled(kummer_transcendental(), 2));
  add("rho19", orthogonal_sum({u, e8, e8, minus_two}), orthogonal_sum(u, two));
  add("rho20", orthogonal_sum({u, e8, e8, neg(a_root(2))}), a_root(2));
  return out;
}

}  // namespace neighborlat

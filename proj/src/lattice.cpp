#include "neighborlat/lattice.hpp"

namespace neighborlat {

namespace {

using Index = Eigen::Index;

bool diagonal_even(const IntMatrix& g) {
  for (Index i = 0; i < g.rows(); ++i) {
    if (g(i, i) % 2 != 0) return false;
  }
  return true;
}

Lattice from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  IntMatrix g = IntMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) g(i, i) = 2;
  for (auto [a, b] : edges) {
    g(a, b) = -1;
    g(b, a) = -1;
  }
  return Lattice(std::move(g));
}

}  // namespace

Lattice::Lattice(IntMatrix gram) {
  if (gram.rows() == 0 || gram.rows() != gram.cols()) {
    throw LatticeError(ErrorCode::kDimensionMismatch, "gram must be square of size >= 1");
  }
  if (gram != gram.transpose()) {
    throw LatticeError(ErrorCode::kNotSymmetric, "gram matrix is not symmetric");
  }
  Integer det = determinant(gram);
  if (det == 0) {
    throw LatticeError(ErrorCode::kDegenerateForm, "gram matrix is singular");
  }
  bool even = diagonal_even(gram);
  data_ = std::make_shared<const Data>(Data{std::move(gram), std::move(det), even});
}

EmbeddedLattice::EmbeddedLattice(Lattice ambient, RationalMatrix basis, bool)
    : ambient_(std::move(ambient)), basis_(std::move(basis)) {}

EmbeddedLattice::EmbeddedLattice(Lattice ambient, RationalMatrix generators)
    : ambient_(std::move(ambient)) {
  const Index n = ambient_.rank();
  if (generators.cols() != n) {
    throw LatticeError(ErrorCode::kDimensionMismatch,
                       "generator rows do not match the ambient rank");
  }
  generators.normalize();
  IntMatrix h = hermite_form(generators.num);
  if (h.rows() != n) {
    throw LatticeError(ErrorCode::kDegenerateForm, "generators do not span a full-rank lattice");
  }
  basis_ = RationalMatrix{std::move(h), generators.den};
  basis_.normalize();
}

EmbeddedLattice EmbeddedLattice::whole(const Lattice& ambient) {
  return EmbeddedLattice(ambient, RationalMatrix{identity_matrix(ambient.rank()), 1}, true);
}

RationalMatrix EmbeddedLattice::gram() const {
  RationalMatrix g{product(basis_.num, ambient_.gram(), basis_.num.transpose()),
                   basis_.den * basis_.den};
  return g.normalize();
}

bool EmbeddedLattice::is_integral() const { return gram().is_integral(); }

bool EmbeddedLattice::is_even() const {
  RationalMatrix g = gram();
  return g.den == 1 && diagonal_even(g.num);
}

Lattice EmbeddedLattice::as_lattice() const {
  RationalMatrix g = gram();
  if (g.den != 1) {
    throw LatticeError(ErrorCode::kNotIntegral, "induced form is not integral");
  }
  return Lattice(std::move(g.num));
}

RationalMatrix EmbeddedLattice::coordinates(const RationalMatrix& rows) const {
  return rows * inverse(basis_);
}

bool EmbeddedLattice::contains(const RationalMatrix& rows) const {
  return coordinates(rows).is_integral();
}

bool EmbeddedLattice::contains(const EmbeddedLattice& other) const {
  return contains(other.basis_);
}

Integer discriminant(const Lattice& l) { return l.det(); }

std::pair<int, int> signature(const Lattice& l) { return inertia(l.gram()); }

EmbeddedLattice dual_lattice(const EmbeddedLattice& m) {
  const IntMatrix& num = m.basis().num;
  IntMatrix gnum = product(num, m.ambient().gram(), num.transpose());
  auto [adj, det] = adjugate(gnum);
  RationalMatrix dual{product(adj, num) * m.basis().den, det};
  return EmbeddedLattice(m.ambient(), dual.normalize());
}

EmbeddedLattice intersect(const EmbeddedLattice& a, const EmbeddedLattice& b) {
  if (!(a.ambient() == b.ambient())) {
    throw LatticeError(ErrorCode::kDimensionMismatch, "lattices live in different ambients");
  }
  // y * Ba lies in b iff y * Ba * Bb^{-1} is integral.
  RationalMatrix r = a.basis() * inverse(b.basis());
  if (r.den == 1) return a;
  IntMatrix k = kernel_mod_columns(r.num, r.den);
  return EmbeddedLattice(a.ambient(), k * a.basis());
}

EmbeddedLattice lattice_sum(const EmbeddedLattice& a, const RationalMatrix& rows) {
  if (rows.rows() == 0) return a;
  const Integer den = lcm_value(a.basis().den, rows.den);
  IntMatrix stacked(a.rank() + rows.rows(), a.rank());
  stacked.topRows(a.rank()) = a.basis().num * Integer(den / a.basis().den);
  stacked.bottomRows(rows.rows()) = rows.num * Integer(den / rows.den);
  return EmbeddedLattice(a.ambient(), RationalMatrix{std::move(stacked), den});
}

EmbeddedLattice lattice_sum(const EmbeddedLattice& a, const EmbeddedLattice& b) {
  if (!(a.ambient() == b.ambient())) {
    throw LatticeError(ErrorCode::kDimensionMismatch, "lattices live in different ambients");
  }
  return lattice_sum(a, b.basis());
}

Integer index(const EmbeddedLattice& sub, const EmbeddedLattice& sup) {
  if (!(sub.ambient() == sup.ambient())) {
    throw LatticeError(ErrorCode::kDimensionMismatch, "lattices live in different ambients");
  }
  RationalMatrix r = sub.basis() * inverse(sup.basis());
  if (r.den != 1) {
    throw LatticeError(ErrorCode::kNotContained, "sublattice is not contained in the lattice");
  }
  return abs_value(determinant(r.num));
}

EmbeddedLattice kernel_of_hom(const EmbeddedLattice& m, const IntVector& values,
                              const Integer& d) {
  if (values.size() != m.rank()) {
    throw LatticeError(ErrorCode::kDimensionMismatch, "one value per basis vector expected");
  }
  if (d <= 0) throw LatticeError(ErrorCode::kInvalidInput, "modulus must be positive");
  IntMatrix k = kernel_mod(values, d);
  return EmbeddedLattice(m.ambient(), k * m.basis());
}

IntVector pairing_values(const EmbeddedLattice& m, const RationalMatrix& v) {
  if (v.rows() != 1 || v.cols() != m.rank()) {
    throw LatticeError(ErrorCode::kDimensionMismatch, "expected one ambient row vector");
  }
  RationalMatrix p{product(m.basis().num, m.ambient().gram(), v.num.transpose()),
                   m.basis().den * v.den};
  p.normalize();
  if (p.den != 1) {
    throw LatticeError(ErrorCode::kNotIntegral, "pairing is not integral on the lattice");
  }
  return p.num.col(0);
}

Integer pairing(const Lattice& l, const IntVector& x, const IntVector& y) {
  return product(IntMatrix(x.transpose()), l.gram(), IntMatrix(y))(0, 0);
}

namespace lattices {

Lattice hyperbolic_plane() {
  IntMatrix g(2, 2);
  g << 0, 1, 1, 0;
  return Lattice(std::move(g));
}

Lattice a_root(int n) {
  if (n < 1) throw LatticeError(ErrorCode::kInvalidInput, "A_n needs n >= 1");
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return from_edges(n, edges);
}

Lattice d_root(int n) {
  if (n < 2) throw LatticeError(ErrorCode::kInvalidInput, "D_n needs n >= 2");
  if (n == 2) return diagonal({2, 2});
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 2 < n; ++i) edges.emplace_back(i, i + 1);
  edges.emplace_back(n - 3, n - 1);
  return from_edges(n, edges);
}

Lattice e_root(int n) {
  if (n < 6 || n > 8) throw LatticeError(ErrorCode::kInvalidInput, "E_n needs n in {6,7,8}");
  // Bourbaki labels 1..n, shifted to 0-based: chain 1-3-4-...-n, node 2 on 4.
  std::vector<std::pair<int, int>> edges = {{0, 2}, {2, 3}, {1, 3}};
  for (int i = 3; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return from_edges(n, edges);
}

Lattice diagonal(const std::vector<Integer>& entries) {
  const Index n = static_cast<Index>(entries.size());
  IntMatrix g = IntMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) g(i, i) = entries[static_cast<std::size_t>(i)];
  return Lattice(std::move(g));
}

Lattice orthogonal_sum(const std::vector<Lattice>& parts) {
  Index n = 0;
  for (const auto& p : parts) n += p.rank();
  IntMatrix g = IntMatrix::Zero(n, n);
  Index at = 0;
  for (const auto& p : parts) {
    g.block(at, at, p.rank(), p.rank()) = p.gram();
    at += p.rank();
  }
  return Lattice(std::move(g));
}

Lattice orthogonal_sum(const Lattice& a, const Lattice& b) { return orthogonal_sum({a, b}); }

Lattice scaled(const Lattice& l, const Integer& k) {
  IntMatrix g = l.gram() * k;
  return Lattice(std::move(g));
}

}  // namespace lattices

}  // namespace neighborlat

#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "neighborlat/k3.hpp"
#include "neighborlat/neighbors.hpp"
#include "oracles.hpp"

namespace {

using namespace neighborlat;

IntMatrix mat(std::initializer_list<std::initializer_list<int>> rows) {
  IntMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index k = 0;
    for (int x : row) m(i, k++) = x;
    ++i;
  }
  return m;
}

RationalMatrix rows(std::initializer_list<std::initializer_list<int>> r, int den = 1) {
  return RationalMatrix{mat(r), den};
}

const Lattice kU = lattices::hyperbolic_plane();

TEST(Lattice, RejectsBadGram) {
  EXPECT_THROW(Lattice(mat({{0, 1}, {2, 0}})), LatticeError);
  EXPECT_THROW(Lattice(mat({{2, 2}, {2, 2}})), LatticeError);
  EXPECT_THROW(Lattice(IntMatrix(2, 3)), LatticeError);
  EXPECT_FALSE(Lattice(mat({{1}})).is_even());
}

TEST(Lattice, Discriminants) {
  EXPECT_EQ(discriminant(kU), -1);
  EXPECT_EQ(discriminant(lattices::diagonal({2})), 2);
  EXPECT_EQ(discriminant(lattices::e_root(8)), 1);
  EXPECT_EQ(discriminant(lattices::e_root(7)), 2);
  EXPECT_EQ(discriminant(lattices::e_root(6)), 3);
  for (int n = 1; n <= 8; ++n) EXPECT_EQ(discriminant(lattices::a_root(n)), n + 1);
  for (int n = 4; n <= 8; ++n) EXPECT_EQ(discriminant(lattices::d_root(n)), 4);
}

TEST(Lattice, Signatures) {
  EXPECT_EQ(signature(kU), (std::pair{1, 1}));
  EXPECT_EQ(signature(lattices::scaled(lattices::e_root(8), -1)), (std::pair{0, 8}));
  EXPECT_EQ(signature(k3_lattice()), (std::pair{3, 19}));
  EXPECT_EQ(abs_value(discriminant(k3_lattice())), 1);
  EXPECT_TRUE(k3_lattice().is_even());
}

// Exact inertia against floating eigenvalues on well-conditioned random forms.
TEST(Lattice, SignatureMatchesEigenvalues) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> dist(-4, 4);
  int tested = 0;
  while (tested < 200) {
    const int n = 2 + tested % 5;
    IntMatrix g(n, n);
    for (int i = 0; i < n; ++i) {
      for (int k = i; k < n; ++k) g(i, k) = g(k, i) = dist(rng);
    }
    if (determinant(g) == 0) continue;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.cast<double>());
    int pos = 0, neg = 0;
    bool clear = true;
    for (int i = 0; i < n; ++i) {
      const double e = es.eigenvalues()(i);
      if (std::abs(e) < 1e-6) clear = false;
      (e > 0 ? pos : neg)++;
    }
    if (!clear) continue;
    EXPECT_EQ(signature(Lattice(g)), (std::pair{pos, neg}));
    ++tested;
  }
}

TEST(Lattice, Duals) {
  const auto u = EmbeddedLattice::whole(kU);
  EXPECT_EQ(dual_lattice(u), u);
  const auto two = EmbeddedLattice::whole(lattices::diagonal({2}));
  EXPECT_EQ(dual_lattice(two), EmbeddedLattice(lattices::diagonal({2}), rows({{1}}, 2)));
  const EmbeddedLattice m(kU, rows({{1, 0}, {0, 2}}));
  const EmbeddedLattice md = dual_lattice(m);
  EXPECT_EQ(md, EmbeddedLattice(kU, rows({{1, 0}, {0, 2}}, 2)));
  EXPECT_EQ(index(m, md), 4);
}

TEST(Lattice, IntersectSumIndex) {
  const auto u = EmbeddedLattice::whole(kU);
  EXPECT_EQ(intersect(u, u), u);
  const EmbeddedLattice n(kU, rows({{1, 0}, {0, 4}}, 2));
  EXPECT_EQ(intersect(u, n), EmbeddedLattice(kU, rows({{1, 0}, {0, 2}})));
  EXPECT_EQ(lattice_sum(u, n), EmbeddedLattice(kU, rows({{1, 0}, {0, 2}}, 2)));
  EXPECT_EQ(index(u, u), 1);
  EXPECT_EQ(index(EmbeddedLattice(kU, rows({{1, 0}, {0, 2}})), u), 2);
  EXPECT_THROW(index(n, u), LatticeError);
}

TEST(Lattice, KernelOfHom) {
  const auto u = EmbeddedLattice::whole(kU);
  IntVector zero = IntVector::Zero(2);
  EXPECT_EQ(kernel_of_hom(u, zero, 5), u);
  IntVector h(2);
  h << 0, 1;  // (e, .) = second coordinate
  EXPECT_EQ(kernel_of_hom(u, h, 2), EmbeddedLattice(kU, rows({{1, 0}, {0, 2}})));
  const Lattice e8 = lattices::e_root(8);
  IntVector v = IntVector::Zero(8);
  v(3) = 1;
  const IntVector values = product(e8.gram(), IntMatrix(v)).col(0);
  EXPECT_EQ(index(kernel_of_hom(EmbeddedLattice::whole(e8), values, 2), EmbeddedLattice::whole(e8)), 2);
}

TEST(Lattice, SplitIndexMatchesDiscRatio) {
  const Lattice l = lattices::orthogonal_sum(kU, lattices::a_root(2));
  for (std::int64_t d : {2, 4, 5, 7}) {
    for (const auto& line : enumerate_isotropic_lines(l, d)) {
      const EmbeddedLattice m = split_sublattice(line);
      EXPECT_EQ(index(m, EmbeddedLattice::whole(l)), d);
      EXPECT_EQ(m.as_lattice().det(), l.det() * d * d);
    }
  }
}

TEST(Matrix, HermiteAndSmith) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> dist(-9, 9);
  for (int trial = 0; trial < 100; ++trial) {
    IntMatrix a(3, 4);
    for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = dist(rng);
    const auto s = smith_form(a);
    IntMatrix diag = product(s.u, a, s.v);
    for (Eigen::Index i = 0; i < diag.rows(); ++i) {
      for (Eigen::Index k = 0; k < diag.cols(); ++k) {
        const Integer expect = i == k && static_cast<std::size_t>(i) < s.diagonal.size() ? s.diagonal[i] : Integer(0);
        EXPECT_EQ(diag(i, k), expect);
      }
    }
    for (std::size_t i = 1; i < s.diagonal.size(); ++i) {
      if (s.diagonal[i] != 0) EXPECT_EQ(s.diagonal[i] % s.diagonal[i - 1], 0);
    }
    EXPECT_EQ(abs_value(determinant(s.u)), 1);
    EXPECT_EQ(abs_value(determinant(s.v)), 1);
    // Same row lattice, so the same invariant factors.
    const IntMatrix h = hermite_form(a);
    EXPECT_EQ(smith_form(h).diagonal, s.diagonal);
  }
}

TEST(Matrix, BigEntriesFallBackToBignum) {
  IntMatrix a(2, 2);
  a << Integer("123456789012345678901"), 3, 5, Integer("98765432109876543210");
  const Integer det = determinant(a);
  EXPECT_EQ(det, Integer("123456789012345678901") * Integer("98765432109876543210") - 15);
  const auto [adj, d] = adjugate(a);
  EXPECT_EQ(product(a, adj), IntMatrix(identity_matrix(2) * d));
}

}  // namespace

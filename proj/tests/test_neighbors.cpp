#include <gtest/gtest.h>

#include "neighborlat/corpus.hpp"
#include "neighborlat/isometry.hpp"
#include "neighborlat/neighbors.hpp"
#include "oracles.hpp"

namespace {

using namespace neighborlat;

const Lattice kU = lattices::hyperbolic_plane();

IntVector vec(std::initializer_list<int> xs) {
  IntVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (int x : xs) v(i++) = x;
  return v;
}

oracle::Tuple tuple(const IntVector& v) {
  oracle::Tuple t;
  for (Eigen::Index i = 0; i < v.size(); ++i) t.push_back(v(i).convert_to<std::int64_t>());
  return t;
}

struct Case {
  Lattice l;
  std::int64_t d;
};

// Small enough for the d^(2n) neighbor oracle.
std::vector<Case> oracle_cases() {
  using namespace lattices;
  return {{kU, 2},
          {kU, 3},
          {kU, 6},
          {a_root(2), 7},
          {diagonal({2, -2}), 3},
          {a_root(3), 3},
          {a_root(3), 5},
          {orthogonal_sum(kU, diagonal({2})), 3},
          {orthogonal_sum(kU, kU), 2},
          {orthogonal_sum(kU, kU), 3},
          {d_root(4), 3},
          {orthogonal_sum(kU, scaled(a_root(2), -1)), 2},
          {a_root(4), 2}};
}

TEST(Lines, Examples) {
  const auto lines = enumerate_isotropic_lines(kU, 3);
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0].generator, vec({0, 1}));
  EXPECT_EQ(lines[1].generator, vec({1, 0}));
  EXPECT_EQ(enumerate_isotropic_lines(lattices::e_root(8), 2).size(), 135u);
  try {
    enumerate_isotropic_lines(lattices::diagonal({2}), 2);
    FAIL();
  } catch (const LatticeError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kGcdViolation);
  }
  EXPECT_THROW(enumerate_isotropic_lines(lattices::e_root(8), 9, 1000), LatticeError);
}

TEST(Lines, MatchBruteForce) {
  for (const auto& entry : classical_corpus()) {
    if (entry.lattice.rank() > 5) continue;
    for (std::int64_t d : kCorpusModuli) {
      if (gcd_value(Integer(d), entry.lattice.det()) != 1) continue;
      std::set<oracle::Tuple> got;
      for (const auto& line : enumerate_isotropic_lines(entry.lattice, d)) got.insert(tuple(line.generator));
      EXPECT_EQ(got, oracle::lines(entry.lattice, d)) << entry.name << " d=" << d;
    }
  }
}

TEST(Lines, SortedAndCanonical) {
  const auto lines = enumerate_isotropic_lines(lattices::d_root(4), 9);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    EXPECT_LT(tuple(lines[i - 1].generator), tuple(lines[i].generator));
  }
  for (const auto& line : lines) EXPECT_EQ(canonical_generator(line.generator, 9), line.generator);
}

TEST(Lines, Normalize) {
  const IsotropicLine e = make_line(kU, 2, vec({1, 0}));
  EXPECT_EQ(normalize_generator(e), vec({1, 0}));
  const Lattice e8 = lattices::e_root(8);
  for (const auto& line : enumerate_isotropic_lines(e8, 2)) {
    const IntVector w = normalize_generator(line);
    EXPECT_EQ(pairing(e8, w, w) % 8, 0);
    for (Eigen::Index i = 0; i < w.size(); ++i) EXPECT_EQ(mod_floor(Integer(w(i) - line.generator(i)), Integer(2)), 0);
  }
  // q~(v) = 0 mod 3 but (v, v) not in 18Z.
  const Lattice l = lattices::orthogonal_sum(kU, lattices::diagonal({4}));
  const IsotropicLine line = make_line(l, 3, vec({1, 1, 1}));
  const IntVector w = normalize_generator(line);
  EXPECT_EQ(pairing(l, w, w) % 18, 0);
}

TEST(Neighbors, HyperbolicPlane) {
  const EmbeddedLattice n = neighbor_from_line(make_line(kU, 2, vec({1, 0})));
  RationalMatrix expect{IntMatrix(2, 2), 2};
  expect.num << 1, 0, 0, 4;
  EXPECT_EQ(n, EmbeddedLattice(kU, expect));
  EXPECT_EQ(n.as_lattice().gram(), kU.gram());
  EXPECT_EQ(line_from_neighbor(kU, n), make_line(kU, 2, vec({1, 0})));
  EXPECT_THROW(line_from_neighbor(kU, EmbeddedLattice::whole(kU)), LatticeError);
  const EmbeddedLattice m = split_sublattice(make_line(kU, 2, vec({1, 0})));
  EXPECT_EQ(m.as_lattice().det(), -4);
}

// The line map is a bijection onto the full set of d-neighbors.
TEST(Neighbors, BijectionAgainstOracle) {
  for (const auto& c : oracle_cases()) {
    std::set<std::string> got;
    for (const auto& line : enumerate_isotropic_lines(c.l, c.d)) {
      const EmbeddedLattice n = neighbor_from_line(line);
      EXPECT_EQ(line_from_neighbor(c.l, n), line);
      got.insert(oracle::key(n));
    }
    EXPECT_EQ(got, oracle::neighbors(c.l, c.d)) << c.l.gram() << " d=" << c.d;
  }
}

TEST(Neighbors, GenusPreserved) {
  for (const auto& c : oracle_cases()) {
    for (const auto& line : enumerate_isotropic_lines(c.l, c.d)) {
      EXPECT_TRUE(same_genus_invariants(c.l, neighbor_from_line(line).as_lattice()));
    }
  }
  EXPECT_TRUE(same_genus_invariants(kU, kU));
  EXPECT_FALSE(same_genus_invariants(lattices::diagonal({2}), lattices::diagonal({-2})));
}

TEST(Neighbors, E8NeighborsAreE8) {
  const Lattice e8 = lattices::e_root(8);
  for (const auto& line : enumerate_isotropic_lines(e8, 2)) {
    const Lattice n = neighbor_from_line(line).as_lattice();
    EXPECT_TRUE(n.is_even());
    EXPECT_EQ(n.det(), 1);
    const auto x = find_isometry(n, e8);
    ASSERT_TRUE(x.has_value());
    EXPECT_EQ(product(*x, e8.gram(), IntMatrix(x->transpose())), n.gram());
  }
}

TEST(Transverse, HyperbolicPlane) {
  const DiscriminantGroup am(split_sublattice(make_line(kU, 2, vec({1, 0}))));
  const auto h = am.coords_rows(RationalMatrix{identity_matrix(2), 1});
  const auto t = transverse_subgroup(am, h);
  ASSERT_EQ(t.size(), 1u);
  const auto iso = isotropic_elements(am.form());
  EXPECT_EQ(iso.size(), 3u);
  EXPECT_EQ(am.form().element_order(t[0]), 2);
  EXPECT_TRUE(std::find(h.begin(), h.end(), t[0]) == h.end());
  EXPECT_EQ(overlattice_from_isotropic(am, t), neighbor_from_line(make_line(kU, 2, vec({1, 0}))));
}

TEST(Transverse, TrivialAndNonCyclic) {
  const DiscriminantGroup whole(EmbeddedLattice::whole(lattices::a_root(2)));
  EXPECT_TRUE(transverse_subgroup(whole, {}).empty());
  for (const Lattice& l : {kU, lattices::orthogonal_sum(kU, kU), lattices::a_root(2)}) {
    const DiscriminantGroup am(EmbeddedLattice(l, RationalMatrix{IntMatrix(identity_matrix(l.rank()) * Integer(2)), 1}));
    const auto h = am.coords_rows(RationalMatrix{identity_matrix(l.rank()), 1});
    try {
      transverse_subgroup(am, h);
      FAIL() << l.gram();
    } catch (const LatticeError& e) {
      EXPECT_EQ(e.code(), ErrorCode::kNonSplit);
    }
  }
}

TEST(Transverse, UniqueForSplitSublattices) {
  for (const auto& c : oracle_cases()) {
    for (const auto& line : enumerate_isotropic_lines(c.l, c.d)) {
      const DiscriminantGroup am(split_sublattice(line));
      const auto h = am.coords_rows(RationalMatrix{identity_matrix(c.l.rank()), 1});
      EXPECT_EQ(transversal_subgroups(am.form(), h).size(), 1u);
      EXPECT_EQ(overlattice_from_isotropic(am, transverse_subgroup(am, h)), neighbor_from_line(line));
    }
  }
}

TEST(Threads, OutputIndependentOfWorkerCount) {
  const Lattice l = lattices::a_root(6);
  setenv("NEIGHBORLAT_THREADS", "1", 1);
  const auto one = enumerate_isotropic_lines(l, 9);
  setenv("NEIGHBORLAT_THREADS", "4", 1);
  const auto four = enumerate_isotropic_lines(l, 9);
  unsetenv("NEIGHBORLAT_THREADS");
  ASSERT_EQ(one.size(), four.size());
  for (std::size_t i = 0; i < one.size(); ++i) EXPECT_EQ(one[i], four[i]);
}

}  // namespace

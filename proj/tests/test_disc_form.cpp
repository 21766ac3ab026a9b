#include <gtest/gtest.h>

#include "neighborlat/corpus.hpp"
#include "neighborlat/neighbors.hpp"
#include "oracles.hpp"

namespace {

using namespace neighborlat;

std::multiset<std::pair<std::int64_t, std::int64_t>> values(const FiniteQuadForm& a) {
  std::multiset<std::pair<std::int64_t, std::int64_t>> out;
  for (const auto& x : a.elements()) {
    std::int64_t num = a.q(x), den = a.q_den;
    const std::int64_t g = std::gcd(num, den);
    out.insert({num / g, den / g});
  }
  return out;
}

std::vector<Lattice> small_lattices() {
  using namespace lattices;
  const Lattice u = hyperbolic_plane();
  std::vector<Lattice> out;
  for (const auto& e : classical_corpus()) {
    if (e.lattice.rank() <= 5 && abs_value(e.lattice.det()) <= 64) out.push_back(e.lattice);
  }
  out.push_back(diagonal({2, -2}));
  out.push_back(diagonal({6, 10}));
  out.push_back(orthogonal_sum(diagonal({18}), u));
  out.push_back(orthogonal_sum(scaled(u, 3), diagonal({-4})));
  out.push_back(scaled(a_root(2), 2));
  return out;
}

TEST(DiscForm, SmallExamples) {
  EXPECT_EQ(discriminant_form(lattices::hyperbolic_plane()).order(), 1);
  const FiniteQuadForm two = discriminant_form(lattices::diagonal({2}));
  ASSERT_EQ(two.divisors, std::vector<std::int64_t>{2});
  EXPECT_EQ(two.q({1}), 1);  // 1/2
  EXPECT_EQ(two.q_den, 2);
  const FiniteQuadForm minus = discriminant_form(lattices::diagonal({-2}));
  EXPECT_EQ(minus.q({1}), 3);  // 3/2
}

// Value distribution of q against the naive y^T G^-1 y enumeration.
TEST(DiscForm, ValuesMatchOracle) {
  for (const auto& l : small_lattices()) {
    const FiniteQuadForm a = discriminant_form(l);
    EXPECT_EQ(a.order(), abs_value(l.det()));
    EXPECT_EQ(values(a), oracle::disc_values(l)) << l.gram();
  }
}

TEST(DiscForm, FormLaws) {
  for (const auto& l : small_lattices()) {
    const FiniteQuadForm a = discriminant_form(l);
    const auto elems = a.elements();
    for (const auto& x : elems) {
      for (std::int64_t k = 0; k < 4; ++k) {
        const std::int64_t m = 2 * a.q_den;
        EXPECT_EQ(a.q(a.scale(k, x)), (k * k * a.q(x)) % m);
      }
      bool pairs_to_zero = true;
      for (const auto& y : elems) {
        const std::int64_t m = 2 * a.q_den;
        const std::int64_t lhs = ((a.q(a.add(x, y)) - a.q(x) - a.q(y)) % m + m) % m;
        EXPECT_EQ(lhs, (2 * a.b(x, y)) % m);
        pairs_to_zero = pairs_to_zero && a.b(x, y) == 0;
      }
      // Nondegenerate pairing.
      if (x != a.zero()) EXPECT_FALSE(pairs_to_zero);
    }
  }
}

TEST(DiscForm, IsotropicElements) {
  EXPECT_EQ(isotropic_elements(discriminant_form(lattices::hyperbolic_plane())).size(), 1u);
  EXPECT_EQ(isotropic_elements(discriminant_form(lattices::diagonal({2}))).size(), 1u);
  const FiniteQuadForm a = discriminant_form(lattices::diagonal({2, -2}));
  const auto iso = isotropic_elements(a);
  ASSERT_EQ(iso.size(), 2u);
  EXPECT_EQ(a.element_order(iso[1]), 2);
}

TEST(DiscForm, Isomorphism) {
  const FiniteQuadForm plus = discriminant_form(lattices::diagonal({2}));
  const FiniteQuadForm minus = discriminant_form(lattices::diagonal({-2}));
  EXPECT_TRUE(finite_form_isomorphic(plus, plus).has_value());
  EXPECT_FALSE(finite_form_isomorphic(plus, minus).has_value());
  // A3 and D3 are the same lattice in different bases.
  const FiniteQuadForm a3 = discriminant_form(lattices::a_root(3));
  IntMatrix d3(3, 3);
  d3 << 2, -1, -1, -1, 2, 0, -1, 0, 2;
  const auto iso = finite_form_isomorphic(a3, discriminant_form(Lattice(d3)));
  ASSERT_TRUE(iso.has_value());
  EXPECT_TRUE(is_isometry({a3, discriminant_form(Lattice(d3)), *iso}));
  // q = 1/6 against 11/6: 11 is not a square mod 12.
  EXPECT_FALSE(finite_form_isomorphic(discriminant_form(lattices::diagonal({6})),
                                      discriminant_form(lattices::diagonal({-6})))
                   .has_value());
}

TEST(DiscForm, MilgramMatchesGaussSum) {
  EXPECT_EQ(milgram_signature(discriminant_form(lattices::hyperbolic_plane())), 0);
  EXPECT_EQ(milgram_signature(discriminant_form(lattices::diagonal({2}))), 1);
  EXPECT_EQ(milgram_signature(discriminant_form(lattices::diagonal({-2}))), 7);
  for (const auto& l : small_lattices()) {
    const FiniteQuadForm a = discriminant_form(l);
    EXPECT_EQ(milgram_signature(a), oracle::gauss_signature(oracle::disc_values(l)));
    const auto [pos, neg] = signature(l);
    EXPECT_EQ(milgram_signature(a), ((pos - neg) % 8 + 8) % 8);
  }
}

TEST(DiscForm, Overlattices) {
  const Lattice u = lattices::hyperbolic_plane();
  // M = Ze + 2Zf.
  const DiscriminantGroup am(EmbeddedLattice(u, [] {
    RationalMatrix r{IntMatrix(2, 2), 1};
    r.num << 1, 0, 0, 2;
    return r;
  }()));
  std::set<std::string> found;
  for (const auto& x : isotropic_elements(am.form())) {
    if (x == am.form().zero()) continue;
    const EmbeddedLattice over = overlattice_from_isotropic(am, {x});
    EXPECT_TRUE(over.is_even());
    EXPECT_EQ(abs_value(over.as_lattice().det()), 1);
    found.insert(oracle::key(over));
  }
  // U itself and the neighbor spanned by e/2, 2f.
  EXPECT_EQ(found.size(), 2u);
  EXPECT_TRUE(found.count(oracle::key(EmbeddedLattice::whole(u))));
  EXPECT_EQ(overlattice_from_isotropic(am, {}), am.lattice());
}

TEST(DiscForm, NaturalIsoForNeighbors) {
  const Lattice l = lattices::orthogonal_sum(lattices::hyperbolic_plane(), lattices::a_root(2));
  const auto whole = EmbeddedLattice::whole(l);
  const FormIsomorphism same = natural_disc_iso(whole, whole);
  EXPECT_TRUE(is_isometry(same));
  for (std::int64_t d : {2, 5}) {
    for (const auto& line : enumerate_isotropic_lines(l, d)) {
      const EmbeddedLattice n = neighbor_from_line(line);
      const FormIsomorphism f = natural_disc_iso(whole, n);
      EXPECT_TRUE(is_isometry(f));
      EXPECT_TRUE(finite_form_isomorphic(f.source, f.target).has_value());
    }
  }
}

}  // namespace

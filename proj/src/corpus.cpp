#include "neighborlat/corpus.hpp"

namespace neighborlat {

namespace {

Lattice neg(const Lattice& l) { return lattices::scaled(l, -1); }

}  // namespace

std::vector<CorpusEntry> classical_corpus() {
  using namespace lattices;
  const Lattice u = hyperbolic_plane();
  const Lattice a2 = a_root(2), a6 = a_root(6);
  IntMatrix b(2, 2);
  b << 2, 1, 1, 4;
  return {
      {"U", u},
      {"A2", a2},
      {"B7", Lattice(b)},
      {"<2>+<-2>", diagonal({2, -2})},
      {"A3", a_root(3)},
      {"U+<2>", orthogonal_sum(u, diagonal({2}))},
      {"A1+A2", orthogonal_sum(a_root(1), a2)},
      {"D4", d_root(4)},
      {"A4", a_root(4)},
      {"U+U", orthogonal_sum(u, u)},
      {"U+A2(-1)", orthogonal_sum(u, neg(a2))},
      {"A5", a_root(5)},
      {"D5", d_root(5)},
      {"U+A3(-1)", orthogonal_sum(u, neg(a_root(3)))},
      {"E6", e_root(6)},
      {"A6", a6},
      {"U+D4(-1)", orthogonal_sum(u, neg(d_root(4)))},
      {"A6+<6>", orthogonal_sum(a6, diagonal({6}))},
      {"A6+<-6>", orthogonal_sum(a6, diagonal({-6}))},
      {"A2+A6", orthogonal_sum(a2, a6)},
      {"A2(-1)+A6", orthogonal_sum(neg(a2), a6)},
  };
}

std::vector<LocalEntry> local_corpus() {
  using namespace lattices;
  const Lattice u = hyperbolic_plane();
  const Lattice a2 = a_root(2), a4 = a_root(4);
  return {
      {"A2+U", orthogonal_sum(a2, u), {3, 9, 15}},
      {"A2+U+U", orthogonal_sum({a2, u, u}), {3, 9}},
      {"<18>+U+U", orthogonal_sum({diagonal({18}), u, u}), {3, 9, 15}},
      {"U(3)+U", orthogonal_sum(scaled(u, 3), u), {3, 9, 15}},
      {"A2+A2+U", orthogonal_sum({a2, a2, u}), {3, 9}},
      {"<6>+U+U", orthogonal_sum({diagonal({6}), u, u}), {3, 9}},
      {"E6", e_root(6), {3, 9}},
      {"A4", a4, {5, 25, 15}},
      {"A4+U", orthogonal_sum(a4, u), {5}},
      {"<10>+U+U", orthogonal_sum({diagonal({10}), u, u}), {5, 25}},
      {"<50>+U", orthogonal_sum(diagonal({50}), u), {5, 25}},
      {"<30>+U+U", orthogonal_sum({diagonal({30}), u, u}), {3, 9, 5, 25, 15}},
  };
}

}  // namespace neighborlat

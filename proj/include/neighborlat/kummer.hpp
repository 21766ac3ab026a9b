#pragma once

#include <array>
#include <vector>

#include "neighborlat/neighbors.hpp"

namespace neighborlat {

/// Antidiagonal (1, -1, -1, 1) Gram on v1..v4.
Lattice kummer_transcendental();

/// 2x2 matrix [[a, b], [c, d]] of a map H^1(E1) -> H^1(E2) in the bases {e, f}.
using HomMatrix = std::array<std::array<Integer, 2>, 2>;
using Cyclic2 = std::array<std::int64_t, 2>;

/// b v1 + d v2 - a v3 - c v4; its half norm is det(m).
IntVector hom_to_vector(const HomMatrix& m);
HomMatrix vector_to_hom(const IntVector& v);

/// Canonical generator of a cyclic order-d subgroup of (Z/d)^2.
Cyclic2 canonical_cyclic(const Cyclic2& x, std::int64_t d);
/// Kernel and image of a primitive singular hom mod d.
std::pair<Cyclic2, Cyclic2> kernel_and_image(const HomMatrix& m, std::int64_t d);
/// The line whose hom has kernel C1 and image C2.
IsotropicLine line_of_pair(const Cyclic2& c1, const Cyclic2& c2, std::int64_t d);

struct DictionaryRow {
  IsotropicLine line;
  HomMatrix hom;
  Cyclic2 c1;
  Cyclic2 c2;
};

/// Every d-isotropic line of T(A) with its (C1, C2); odd d only.
std::vector<DictionaryRow> line_subgroup_dictionary(std::int64_t d);

struct KummerNeighbor {
  EmbeddedLattice lattice;        // T'
  RationalMatrix natural_basis;   // d v1', v2', v3', v4'/d
  IntMatrix natural_gram;
  RationalMatrix meet_basis;      // d v1', v2', v3', v4'
  IsotropicLine line;
};

/// (1/d)(H1 (x) H2) for H_i the preimage of C_i in Z^2; odd d only.
KummerNeighbor kummer_neighbor(const Cyclic2& c1, const Cyclic2& c2, std::int64_t d);

}  // namespace neighborlat

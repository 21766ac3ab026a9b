#pragma once

#include <optional>
#include <string>
#include <vector>

#include "neighborlat/padic.hpp"

namespace neighborlat {

/// U^3 + E8(-1)^2.
Lattice k3_lattice();

enum class Embeddable { kYes, kUnknown };

/// Extra knowledge about a kernel sublattice ker(l) of a transcendental
/// lattice T with Picard number rho.
struct SplitContext {
  int rho;
  bool generalized;
  int parent_length;  // l(A_T)
};

/// One-sided test for a primitive embedding into the K3 lattice; never
/// answers no. Requires signature (2, k), k <= 19.
Embeddable embeds_primitively_sufficient(const Lattice& l,
                                         const std::optional<SplitContext>& context = {},
                                         std::int64_t bound = kDefaultIsoBound);

/// Length of A_L: number of elementary divisors above 1.
int discriminant_length(const Lattice& l);

/// No proper even overlattice, i.e. no nonzero isotropic class in A_L.
bool is_maximal(const Lattice& l, std::int64_t bound = kDefaultIsoBound);
EmbeddedLattice maximalize(const EmbeddedLattice& m, std::int64_t bound = kDefaultIsoBound);

/// Kernel of finitely many functionals t -> Q/Z, each row giving the values
/// on the basis of t.
EmbeddedLattice brauer_kernel(const Lattice& t, const RationalMatrix& functionals);
/// The functional (., v)/d of a line.
RationalMatrix line_functional(const IsotropicLine& line);

/// NS and T glued along an anti-isometry A_ns -> A_t; `glue` holds the image
/// in A_t of each generator of A_ns, in the generators of discriminant_form.
struct K3LatticePair {
  Lattice ns;
  Lattice t;
  std::vector<Element> glue;
};

/// Finds some glue map; throws hypothesis_failed when none exists.
K3LatticePair make_k3_pair(const Lattice& ns, const Lattice& t,
                           std::int64_t bound = kDefaultIsoBound);
/// The overlattice of ns + t cut out by the glue; throws on malformed glue.
EmbeddedLattice glued_lattice(const K3LatticePair& pair);
/// Glued lattice is even, unimodular, of signature (3, 19), and ranks and
/// signatures of the parts have K3 type.
bool k3_pair_check(const K3LatticePair& pair, std::string* reason = nullptr);

K3LatticePair k3_neighbor_data(const K3LatticePair& pair, const EmbeddedLattice& neighbor,
                               std::int64_t bound = kDefaultIsoBound);
K3LatticePair k3_neighbor_data(const K3LatticePair& pair, const IsotropicLine& line,
                               std::int64_t bound = kDefaultIsoBound);
K3LatticePair k3_neighbor_data(const K3LatticePair& pair, const GeneralizedLine& line,
                               std::int64_t bound = kDefaultIsoBound);

struct K3SplitData {
  Lattice t_split;
  Embeddable embeddable;
  /// |disc NS(Y)|, equal to |disc(t_split)| by the gluing.
  Integer ns_disc_abs;
};
K3SplitData k3_split_data(const K3LatticePair& pair, const IsotropicLine& line);
K3SplitData k3_split_data(const K3LatticePair& pair, const GeneralizedLine& line);

struct NamedPair {
  std::string name;
  K3LatticePair pair;
};
/// Built-in pairs for Picard numbers 1, 2, 3, 4, 18 (two), 19 and 20.
std::vector<NamedPair> k3_fixtures();

}  // namespace neighborlat

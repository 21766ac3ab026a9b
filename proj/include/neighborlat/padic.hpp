#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "neighborlat/neighbors.hpp"

namespace neighborlat {

/// One Jordan constituent p^scale * U at an odd prime, U a diagonal unit form
/// mod p^(precision - scale). `rows` index rows of the transform.
struct JordanBlock {
  int scale;
  IntMatrix gram;
  std::vector<Eigen::Index> rows;
};

/// transform * gram * transform^T is block diagonal mod p^precision, with
/// block scales strictly increasing.
struct ModularDecomposition {
  std::int64_t p;
  int precision;
  IntMatrix transform;
  std::vector<JordanBlock> blocks;
};

ModularDecomposition jordan_decomposition(const Lattice& l, std::int64_t p, int precision);
/// n + v_p(disc) + 4.
int working_precision(const Lattice& l, std::int64_t p, int n);

/// Integer rows of L spanning a maximal unimodular sublattice of L (x) Z_p.
/// This has rank below rank(L) whenever p | disc(L), so it is kept as a
/// plain basis rather than a full-rank EmbeddedLattice.
struct UnimodularPart {
  Lattice parent;
  std::int64_t p;
  IntMatrix basis;
  IntMatrix gram;  // basis * G * basis^T, unit determinant mod p

  Eigen::Index rank() const { return basis.rows(); }
};

UnimodularPart maximal_unimodular_sublattice(const Lattice& l, std::int64_t p);
/// A maximal unimodular sublattice at p whose first basis row is v; throws
/// not_isotropic or invalid_input when v is not generalized isotropic mod p^n.
UnimodularPart hosting_unimodular(const Lattice& l, std::int64_t p, int n, const IntVector& v);

/// p-part of a generalized line: generator mod p^n and the basis of the
/// unimodular part hosting it (shared between lines; may be null for raw
/// input data).
struct LocalLineData {
  std::int64_t p;
  int n;
  IntVector gen;
  std::shared_ptr<const IntMatrix> host;
};

struct GeneralizedLine {
  Lattice parent;
  std::int64_t d;
  IntVector generator;  // canonical mod d, as for classical lines
  std::vector<LocalLineData> parts;
};

GeneralizedLine make_generalized_line(const Lattice& l, std::int64_t d, const IntVector& v);
/// Lines inside U_0 / p^n U_0 for the computed U_0 at each p | d, joined by
/// CRT and sorted by generator. `limit` >= 0 keeps only the first lines.
std::vector<GeneralizedLine> generalized_isotropic_lines(
    const Lattice& l, std::int64_t d, std::int64_t max_classes = kDefaultMaxClasses,
    std::int64_t limit = -1);

EmbeddedLattice generalized_neighbor(const GeneralizedLine& line);
EmbeddedLattice generalized_split(const GeneralizedLine& line);

/// The unique isotropic H' in A_M, cyclic of the same order as H, with
/// H cap H' = 0, (H')^perp isomorphic to H' + A_L, and H' orthogonal to the
/// classes coming from the complement of each recorded U_0. Without the last
/// condition the transversal need not be unique. Throws non_split.
std::vector<Element> generalized_transverse(const GeneralizedLine& line,
                                            const DiscriminantGroup& am,
                                            const std::vector<Element>& h,
                                            std::int64_t bound = kDefaultIsoBound);
/// Transversals passing only the isomorphism condition.
std::vector<std::vector<Element>> abstract_transversals(const DiscriminantGroup& am,
                                                        const std::vector<Element>& h,
                                                        const FiniteQuadForm& a_l,
                                                        std::int64_t bound = kDefaultIsoBound);

/// The lattice agreeing with the p^n-neighbor for each datum at p and with L
/// at every other prime. Data must name distinct primes.
EmbeddedLattice glue_localizations(const Lattice& l, const std::vector<LocalLineData>& changes);

}  // namespace neighborlat

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "neighborlat/disc_form.hpp"

namespace neighborlat {

inline constexpr std::int64_t kDefaultMaxClasses = 1000000;

/// Cyclic order-d subgroup of L/dL on which q~(x) = (x, x)/2 vanishes mod d.
/// The generator is canonical: entries in [0, d), lexicographically least
/// among its unit multiples.
struct IsotropicLine {
  Lattice parent;
  std::int64_t d;
  IntVector generator;

  friend bool operator==(const IsotropicLine& a, const IsotropicLine& b) {
    return a.d == b.d && a.parent == b.parent && a.generator == b.generator;
  }
};

/// q~(v) = (v, v) / 2 on an even lattice.
Integer half_norm(const Lattice& l, const IntVector& v);

/// Validates v (isotropic, order d, gcd(d, disc) = 1) and canonicalizes it.
IsotropicLine make_line(const Lattice& l, std::int64_t d, const IntVector& v);
/// Lexicographically least unit multiple of v mod d.
IntVector canonical_generator(const IntVector& v, std::int64_t d);
std::vector<std::int64_t> canonical_small(const std::vector<std::int64_t>& v, std::int64_t d);

/// All d-isotropic lines of L, sorted by generator.
std::vector<IsotropicLine> enumerate_isotropic_lines(const Lattice& l, std::int64_t d,
                                                     std::int64_t max_classes = kDefaultMaxClasses);

/// Canonical generators of the order p^n isotropic lines in (Z/p^n)^r for the
/// form with the given Gram matrix: first unit coordinate 1, earlier ones
/// divisible by p. Used by both the classical and the generalized pipeline.
std::vector<std::vector<std::int64_t>> isotropic_classes_prime_power(
    const IntMatrix& gram, std::int64_t p, int n, std::int64_t max_classes);

/// Representative v + d w with (v, v) in 2 d^2 Z.
IntVector normalize_generator(const IsotropicLine& line);
IntVector normalize_vector(const Lattice& l, std::int64_t d, const IntVector& v);

EmbeddedLattice neighbor_from_line(const IsotropicLine& line);
IsotropicLine line_from_neighbor(const Lattice& l, const EmbeddedLattice& neighbor);
EmbeddedLattice split_sublattice(const IsotropicLine& line);

/// The same constructions from a bare vector v: the kernel of (., v) mod d,
/// and that kernel plus w/d for the normalized w. No gcd check on disc(L);
/// (., v) must be surjective mod d.
EmbeddedLattice split_from_vector(const Lattice& l, std::int64_t d, const IntVector& v);
EmbeddedLattice neighbor_from_vector(const Lattice& l, std::int64_t d, const IntVector& v);

/// Every isotropic H' in A with |H'| = |H|, H' isomorphic to H, H cap H' = 0,
/// and passing `accept` (when given). Each returned as generators.
std::vector<std::vector<Element>> transversal_subgroups(
    const FiniteQuadForm& a, const std::vector<Element>& h, std::int64_t bound = kDefaultIsoBound,
    const std::function<bool(const std::vector<Element>&)>& accept = {});

/// The unique transversal of H in A_M; throws non_split otherwise.
std::vector<Element> transverse_subgroup(const DiscriminantGroup& am, const std::vector<Element>& h,
                                         std::int64_t bound = kDefaultIsoBound);

/// Rank, signature and discriminant forms agree.
bool same_genus_invariants(const Lattice& a, const Lattice& b,
                           std::int64_t bound = kDefaultIsoBound);

/// Worker count from NEIGHBORLAT_THREADS (default: hardware concurrency).
unsigned worker_count();

}  // namespace neighborlat

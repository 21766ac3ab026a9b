#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "neighborlat/lattice.hpp"

namespace neighborlat {

using I64Matrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
/// Group element as coordinates a_i in Z/d_i.
using Element = std::vector<std::int64_t>;

inline constexpr std::int64_t kDefaultIsoBound = 10000;

/// Finite abelian group  Z/d_1 + ... + Z/d_k  (d_1 | ... | d_k, d_i > 1) with
/// a Q/2Z-valued quadratic form q and Q/Z-valued bilinear form b, where
/// 2b(x, y) = q(x + y) - q(x) - q(y). All values are stored as numerators
/// over q_den, the exponent d_k: q(g_i) = q_num(i, i) / q_den mod 2 and
/// b(g_i, g_j) = q_num(i, j) / q_den mod 1.
struct FiniteQuadForm {
  std::vector<std::int64_t> divisors;
  I64Matrix q_num;
  std::int64_t q_den = 1;

  std::size_t length() const { return divisors.size(); }
  /// |A|; throws overflow past 2^63.
  std::int64_t order() const;
  std::int64_t exponent() const { return q_den; }

  /// q(x) numerator in [0, 2 q_den).
  std::int64_t q(const Element& x) const;
  /// b(x, y) numerator in [0, q_den).
  std::int64_t b(const Element& x, const Element& y) const;
  Element add(const Element& x, const Element& y) const;
  Element scale(std::int64_t k, const Element& x) const;
  Element zero() const { return Element(divisors.size(), 0); }
  std::int64_t element_order(const Element& x) const;

  /// Mixed-radix index of x in [0, |A|).
  std::int64_t encode(const Element& x) const;
  Element decode(std::int64_t code) const;
  Element generator(std::size_t i) const;
  /// Every element, in code order; throws budget_exceeded past `bound`.
  std::vector<Element> elements(std::int64_t bound = kDefaultIsoBound) const;

  friend bool operator==(const FiniteQuadForm&, const FiniteQuadForm&) = default;
};

/// Builds and validates a form from rational values over an arbitrary
/// denominator; re-expresses them over the exponent.
FiniteQuadForm make_finite_form(std::vector<std::int64_t> divisors, const I64Matrix& num,
                                std::int64_t den);
FiniteQuadForm negate(const FiniteQuadForm& a);
FiniteQuadForm orthogonal_sum(const FiniteQuadForm& a, const FiniteQuadForm& b);

/// A_M together with explicit lifts of its generators to M^dual.
class DiscriminantGroup {
 public:
  explicit DiscriminantGroup(EmbeddedLattice m);

  const EmbeddedLattice& lattice() const { return lattice_; }
  const FiniteQuadForm& form() const { return form_; }
  /// Ambient row lifting x.
  RationalMatrix lift(const Element& x) const;
  /// Class of an ambient row of M^dual; throws not_contained otherwise.
  Element coords(const RationalMatrix& row) const;
  /// Classes of every row (rows must lie in M^dual).
  std::vector<Element> coords_rows(const RationalMatrix& rows) const;

 private:
  EmbeddedLattice lattice_;
  FiniteQuadForm form_;
  RationalMatrix lifts_;     // k x n ambient rows
  RationalMatrix to_coords_; // n x k; row * to_coords_ gives integer coordinates
};

DiscriminantGroup discriminant_group(const EmbeddedLattice& m);
FiniteQuadForm discriminant_form(const Lattice& l);

/// Every element with q = 0, including 0.
std::vector<Element> isotropic_elements(const FiniteQuadForm& a,
                                        std::int64_t bound = kDefaultIsoBound);

/// All elements of the subgroup generated by `gens`, sorted by code.
std::vector<Element> subgroup_elements(const FiniteQuadForm& a, const std::vector<Element>& gens);
bool is_isotropic_subgroup(const FiniteQuadForm& a, const std::vector<Element>& gens);

/// Invariant-factor description of the subgroup generated by `gens`, with
/// the restricted (possibly degenerate) form. `basis` holds the chosen
/// generators as elements of a.
struct SubgroupForm {
  FiniteQuadForm form;
  std::vector<Element> basis;
};
SubgroupForm subgroup_form(const FiniteQuadForm& a, const std::vector<Element>& gens);

/// Generators of the b-orthogonal complement of the subgroup generated by `gens`.
std::vector<Element> orthogonal_complement(const FiniteQuadForm& a,
                                           const std::vector<Element>& gens,
                                           std::int64_t bound = kDefaultIsoBound);

/// Images of a's generators under an isometry a -> b, or nothing.
std::optional<std::vector<Element>> finite_form_isomorphic(
    const FiniteQuadForm& a, const FiniteQuadForm& b, std::int64_t bound = kDefaultIsoBound);

/// sigma mod 8 with sum_x exp(pi i q(x)) = sqrt|A| exp(2 pi i sigma / 8).
int milgram_signature(const FiniteQuadForm& a, std::int64_t bound = kDefaultIsoBound);

/// L + lifts of H, for an isotropic subgroup H of A_M given by generators.
EmbeddedLattice overlattice_from_isotropic(const DiscriminantGroup& am,
                                           const std::vector<Element>& gens);

struct FormIsomorphism {
  FiniteQuadForm source;
  FiniteQuadForm target;
  std::vector<Element> images;  // image of each source generator
};

/// The natural map A_{L1} -> A_{L2} through A_{L1 cap L2}.
FormIsomorphism natural_disc_iso(const EmbeddedLattice& l1, const EmbeddedLattice& l2,
                                 std::int64_t bound = kDefaultIsoBound);

/// Checks that `images` define an isometry source -> target.
bool is_isometry(const FormIsomorphism& f);

}  // namespace neighborlat

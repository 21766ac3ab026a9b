#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "neighborlat/matrix.hpp"

namespace neighborlat {

/// Nondegenerate integral symmetric bilinear form on Z^n, given by its Gram
/// matrix. Copies share the immutable data.
class Lattice {
 public:
  explicit Lattice(IntMatrix gram);

  const IntMatrix& gram() const { return data_->gram; }
  Eigen::Index rank() const { return data_->gram.rows(); }
  bool is_even() const { return data_->even; }
  /// det(gram).
  const Integer& det() const { return data_->det; }

  friend bool operator==(const Lattice& a, const Lattice& b) {
    return a.data_ == b.data_ || a.gram() == b.gram();
  }

 private:
  struct Data {
    IntMatrix gram;
    Integer det;
    bool even;
  };
  std::shared_ptr<const Data> data_;
};

/// Full-rank lattice inside the rational span of an ambient Lattice. The
/// basis rows are stored in canonical row Hermite form over a reduced common
/// denominator, so two values are equal iff the lattices are.
class EmbeddedLattice {
 public:
  /// Spanned by the rows of `generators` (any number of rows, must span).
  EmbeddedLattice(Lattice ambient, RationalMatrix generators);
  /// The ambient lattice itself.
  static EmbeddedLattice whole(const Lattice& ambient);

  const Lattice& ambient() const { return ambient_; }
  const RationalMatrix& basis() const { return basis_; }
  Eigen::Index rank() const { return basis_.rows(); }

  /// basis * G * basis^T.
  RationalMatrix gram() const;
  bool is_integral() const;
  bool is_even() const;
  /// The induced form as a standalone Lattice; throws if not integral.
  Lattice as_lattice() const;

  /// Coordinates of ambient rational row vectors with respect to the basis.
  RationalMatrix coordinates(const RationalMatrix& rows) const;
  bool contains(const RationalMatrix& rows) const;
  bool contains(const EmbeddedLattice& other) const;

  friend bool operator==(const EmbeddedLattice& a, const EmbeddedLattice& b) {
    return a.ambient_ == b.ambient_ && a.basis_.den == b.basis_.den &&
           a.basis_.num == b.basis_.num;
  }

 private:
  EmbeddedLattice(Lattice ambient, RationalMatrix basis, bool canonical);

  Lattice ambient_;
  RationalMatrix basis_;
};

Integer discriminant(const Lattice& l);
/// (positive, negative) inertia, exact.
std::pair<int, int> signature(const Lattice& l);

EmbeddedLattice dual_lattice(const EmbeddedLattice& m);
EmbeddedLattice intersect(const EmbeddedLattice& a, const EmbeddedLattice& b);
EmbeddedLattice lattice_sum(const EmbeddedLattice& a, const EmbeddedLattice& b);
/// Adjoin extra generators (ambient rows) to a lattice.
EmbeddedLattice lattice_sum(const EmbeddedLattice& a, const RationalMatrix& rows);
/// [sup : sub]; throws not_contained.
Integer index(const EmbeddedLattice& sub, const EmbeddedLattice& sup);

/// Kernel of the map M -> Z/d sending the i-th basis vector to values(i).
EmbeddedLattice kernel_of_hom(const EmbeddedLattice& m, const IntVector& values,
                              const Integer& d);
/// Values (x_i, v) of the pairing with an ambient vector v on the basis of m.
/// Throws not_integral if some value is not an integer.
IntVector pairing_values(const EmbeddedLattice& m, const RationalMatrix& v);

/// (x, y) for integer coordinate vectors in l.
Integer pairing(const Lattice& l, const IntVector& x, const IntVector& y);

namespace lattices {

Lattice hyperbolic_plane();
Lattice a_root(int n);
Lattice d_root(int n);
Lattice e_root(int n);  // n in {6, 7, 8}
Lattice diagonal(const std::vector<Integer>& entries);
Lattice orthogonal_sum(const Lattice& a, const Lattice& b);
Lattice orthogonal_sum(const std::vector<Lattice>& parts);
/// L(k): the form multiplied by k.
Lattice scaled(const Lattice& l, const Integer& k);

}  // namespace lattices

}  // namespace neighborlat

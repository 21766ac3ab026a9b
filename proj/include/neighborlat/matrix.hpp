#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "neighborlat/integer.hpp"
#include "neighborlat/matrix_kernels.hpp"

namespace neighborlat {

/// Exact rational matrix stored as an integer numerator over a common
/// positive denominator.
struct RationalMatrix {
  IntMatrix num;
  Integer den{1};

  Eigen::Index rows() const { return num.rows(); }
  Eigen::Index cols() const { return num.cols(); }

  /// Makes den positive and removes the common content of num and den.
  RationalMatrix& normalize();
  bool is_integral() const;
  Rational operator()(Eigen::Index i, Eigen::Index j) const;

  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b);
};

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
RationalMatrix operator*(const RationalMatrix& a, const IntMatrix& b);
RationalMatrix operator*(const IntMatrix& a, const RationalMatrix& b);
RationalMatrix transpose(const RationalMatrix& a);

Integer content(const IntMatrix& a);

/// Exact a * b; runs in 64-bit arithmetic when nothing overflows.
IntMatrix product(const IntMatrix& a, const IntMatrix& b);
IntMatrix product(const IntMatrix& a, const IntMatrix& b, const IntMatrix& c);

// Exact kernels on bignum matrices. Each first runs the scalar-templated
// kernel on checked 64-bit integers and falls back to Integer on overflow.

Integer determinant(const IntMatrix& a);
IntMatrix hermite_form(const IntMatrix& a);
kernels::SmithForm<Integer> smith_form(const IntMatrix& a);
IntMatrix kernel_mod(const IntVector& u, const Integer& modulus);
std::pair<int, int> inertia(const IntMatrix& a);
/// (adj(a), det(a)) with a * adj(a) = det(a) * I.
std::pair<IntMatrix, Integer> adjugate(const IntMatrix& a);
/// Exact inverse of a nonsingular integer matrix.
RationalMatrix inverse(const IntMatrix& a);
RationalMatrix inverse(const RationalMatrix& a);

/// Basis rows of {c in Z^n : c . u_k = 0 mod modulus for every column u_k}.
IntMatrix kernel_mod_columns(const IntMatrix& values, const Integer& modulus);
/// Basis rows (in Hermite form) of {c in Z^m : c * a = 0}.
IntMatrix left_kernel(const IntMatrix& a);

/// Unimodular integer inverse; throws if det(a) != +-1.
IntMatrix unimodular_inverse(const IntMatrix& a);

std::optional<Matrix<CheckedInt>> to_checked(const IntMatrix& a);
IntMatrix from_checked(const Matrix<CheckedInt>& a);

IntMatrix identity_matrix(Eigen::Index n);

}  // namespace neighborlat

#include "neighborlat/matrix.hpp"

namespace neighborlat {

namespace {

// Runs `fast` on checked 64-bit copies of the inputs when they fit, and
// `slow` on the bignum inputs otherwise or on overflow.
template <typename Fast, typename Slow>
auto dispatch(const IntMatrix& a, Fast&& fast, Slow&& slow) -> decltype(slow(a)) {
  if (auto small = to_checked(a)) {
    try {
      return fast(*small);
    } catch (const CheckedInt::Overflow&) {
    }
  }
  return slow(a);
}

Integer to_integer(CheckedInt x) { return Integer(x.value()); }

}  // namespace

std::optional<Matrix<CheckedInt>> to_checked(const IntMatrix& a) {
  Matrix<CheckedInt> out(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (!fits_int64(a(i, j))) return std::nullopt;
      out(i, j) = CheckedInt(a(i, j).convert_to<std::int64_t>());
    }
  }
  return out;
}

IntMatrix from_checked(const Matrix<CheckedInt>& a) {
  IntMatrix out(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out(i, j) = to_integer(a(i, j));
  }
  return out;
}

IntMatrix identity_matrix(Eigen::Index n) {
  IntMatrix out = IntMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) out(i, i) = 1;
  return out;
}

Integer content(const IntMatrix& a) {
  Integer g = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (a(i, j) != 0) g = gcd_value(g, a(i, j));
      if (g == 1) return g;
    }
  }
  return g;
}

IntMatrix product(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) {
    throw LatticeError(ErrorCode::kDimensionMismatch, "matrix product of incompatible shapes");
  }
  const Eigen::Index m = a.rows(), k = a.cols(), n = b.cols();
  auto sa = to_checked(a);
  auto sb = sa ? to_checked(b) : std::nullopt;
  if (sa && sb) {
    try {
      IntMatrix out(m, n);
      for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
          CheckedInt s = 0;
          for (Eigen::Index t = 0; t < k; ++t) s += (*sa)(i, t) * (*sb)(t, j);
          out(i, j) = s.value();
        }
      }
      return out;
    } catch (const CheckedInt::Overflow&) {
    }
  }
  IntMatrix out = IntMatrix::Zero(m, n);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index t = 0; t < k; ++t) {
      if (a(i, t) == 0) continue;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (b(t, j) != 0) out(i, j) += a(i, t) * b(t, j);
      }
    }
  }
  return out;
}

IntMatrix product(const IntMatrix& a, const IntMatrix& b, const IntMatrix& c) {
  return product(product(a, b), c);
}

RationalMatrix& RationalMatrix::normalize() {
  if (den == 0) throw InvariantError("rational matrix with zero denominator");
  if (den < 0) {
    den = -den;
    num = (-num).eval();
  }
  Integer g = gcd_value(content(num), den);
  if (g > 1) {
    den /= g;
    for (Eigen::Index i = 0; i < num.rows(); ++i) {
      for (Eigen::Index j = 0; j < num.cols(); ++j) num(i, j) /= g;
    }
  }
  return *this;
}

bool RationalMatrix::is_integral() const {
  for (Eigen::Index i = 0; i < num.rows(); ++i) {
    for (Eigen::Index j = 0; j < num.cols(); ++j) {
      if (num(i, j) % den != 0) return false;
    }
  }
  return true;
}

Rational RationalMatrix::operator()(Eigen::Index i, Eigen::Index j) const {
  return Rational(num(i, j)) / Rational(den);
}

bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  RationalMatrix x = a, y = b;
  x.normalize();
  y.normalize();
  return x.den == y.den && x.num == y.num;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
  RationalMatrix out{product(a.num, b.num), a.den * b.den};
  return out.normalize();
}

RationalMatrix operator*(const RationalMatrix& a, const IntMatrix& b) {
  RationalMatrix out{product(a.num, b), a.den};
  return out.normalize();
}

RationalMatrix operator*(const IntMatrix& a, const RationalMatrix& b) {
  RationalMatrix out{product(a, b.num), b.den};
  return out.normalize();
}

RationalMatrix transpose(const RationalMatrix& a) {
  return RationalMatrix{a.num.transpose(), a.den};
}

Integer determinant(const IntMatrix& a) {
  if (a.rows() != a.cols()) {
    throw LatticeError(ErrorCode::kDimensionMismatch, "determinant of a non-square matrix");
  }
  return dispatch(
      a, [](const Matrix<CheckedInt>& m) { return to_integer(kernels::determinant(m)); },
      [](const IntMatrix& m) { return kernels::determinant(m); });
}

IntMatrix hermite_form(const IntMatrix& a) {
  return dispatch(
      a, [](const Matrix<CheckedInt>& m) { return from_checked(kernels::hermite_form(m)); },
      [](const IntMatrix& m) { return kernels::hermite_form(m); });
}

kernels::SmithForm<Integer> smith_form(const IntMatrix& a) {
  return dispatch(
      a,
      [](const Matrix<CheckedInt>& m) {
        auto s = kernels::smith_form(m);
        kernels::SmithForm<Integer> out{from_checked(s.u), from_checked(s.v), {}};
        for (auto d : s.diagonal) out.diagonal.push_back(to_integer(d));
        return out;
      },
      [](const IntMatrix& m) { return kernels::smith_form(m); });
}

IntMatrix kernel_mod(const IntVector& u, const Integer& modulus) {
  if (modulus <= 0) {
    throw LatticeError(ErrorCode::kInvalidInput, "kernel modulus must be positive");
  }
  IntMatrix packed(u.size(), 1);
  packed.col(0) = u;
  return dispatch(
      packed,
      [&](const Matrix<CheckedInt>& m) -> IntMatrix {
        if (!fits_int64(modulus)) throw CheckedInt::Overflow{};
        Vector<CheckedInt> v = m.col(0);
        return from_checked(
            kernels::kernel_mod(v, CheckedInt(modulus.convert_to<std::int64_t>())));
      },
      [&](const IntMatrix& m) -> IntMatrix {
        IntVector v = m.col(0);
        return kernels::kernel_mod(v, modulus);
      });
}

IntMatrix kernel_mod_columns(const IntMatrix& values, const Integer& modulus) {
  const Eigen::Index n = values.rows();
  IntMatrix basis = identity_matrix(n);
  for (Eigen::Index k = 0; k < values.cols(); ++k) {
    // Restrict the k-th functional to the current kernel and shrink it.
    IntVector restricted = product(basis, IntMatrix(values.col(k)));
    IntMatrix step = kernel_mod(restricted, modulus);
    basis = hermite_form(product(step, basis));
  }
  return basis;
}

IntMatrix left_kernel(const IntMatrix& a) {
  const auto s = smith_form(a);
  Eigen::Index rank = 0;
  for (const auto& d : s.diagonal) rank += d != 0;
  const Eigen::Index m = a.rows();
  if (rank == m) return IntMatrix(0, m);
  return hermite_form(IntMatrix(s.u.bottomRows(m - rank)));
}

std::pair<int, int> inertia(const IntMatrix& a) {
  return dispatch(
      a, [](const Matrix<CheckedInt>& m) { return kernels::inertia(m); },
      [](const IntMatrix& m) { return kernels::inertia(m); });
}

std::pair<IntMatrix, Integer> adjugate(const IntMatrix& a) {
  if (a.rows() != a.cols()) {
    throw LatticeError(ErrorCode::kDimensionMismatch, "adjugate of a non-square matrix");
  }
  return dispatch(
      a,
      [](const Matrix<CheckedInt>& m) {
        auto [adj, det] = kernels::adjugate(m);
        return std::pair<IntMatrix, Integer>{from_checked(adj), to_integer(det)};
      },
      [](const IntMatrix& m) { return kernels::adjugate(m); });
}

RationalMatrix inverse(const IntMatrix& a) {
  auto [adj, det] = adjugate(a);
  RationalMatrix out{std::move(adj), det};
  return out.normalize();
}

RationalMatrix inverse(const RationalMatrix& a) {
  RationalMatrix inv = inverse(a.num);
  inv.num *= a.den;
  return inv.normalize();
}

IntMatrix unimodular_inverse(const IntMatrix& a) {
  auto [adj, det] = adjugate(a);
  if (det == 1) return adj;
  if (det == -1) return -adj;
  throw InvariantError("matrix is not unimodular");
}

}  // namespace neighborlat

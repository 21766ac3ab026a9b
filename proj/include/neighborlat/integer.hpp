#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <tuple>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/eigen.hpp>

#include "neighborlat/error.hpp"

// Eigen 3.4 expressions expose `const_iterator = void`, which trips the byte
// container probe of Boost 1.74 under C++20.
namespace boost::multiprecision::detail {
template <class C>
  requires std::is_void_v<typename C::const_iterator>
struct is_byte_container_imp<C, true> : public boost::false_type {};
}  // namespace boost::multiprecision::detail

namespace neighborlat {

using Integer = boost::multiprecision::number<
    boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<
    boost::multiprecision::cpp_rational_backend, boost::multiprecision::et_off>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using IntMatrix = Matrix<Integer>;
using IntVector = Vector<Integer>;

/// 64-bit signed integer whose arithmetic throws `CheckedInt::Overflow`
/// instead of wrapping. Used as the fast scalar for the templated matrix
/// kernels; callers retry with `Integer` when it throws.
class CheckedInt {
 public:
  struct Overflow {};

  constexpr CheckedInt() = default;
  constexpr CheckedInt(std::int64_t v) : v_(v) {}  // NOLINT(implicit)

  constexpr std::int64_t value() const { return v_; }

  friend CheckedInt operator+(CheckedInt a, CheckedInt b) {
    std::int64_t r;
    if (__builtin_add_overflow(a.v_, b.v_, &r)) throw Overflow{};
    return r;
  }
  friend CheckedInt operator-(CheckedInt a, CheckedInt b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a.v_, b.v_, &r)) throw Overflow{};
    return r;
  }
  friend CheckedInt operator*(CheckedInt a, CheckedInt b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a.v_, b.v_, &r)) throw Overflow{};
    return r;
  }
  friend CheckedInt operator/(CheckedInt a, CheckedInt b) {
    if (b.v_ == -1 && a.v_ == std::numeric_limits<std::int64_t>::min()) {
      throw Overflow{};
    }
    return a.v_ / b.v_;
  }
  friend CheckedInt operator%(CheckedInt a, CheckedInt b) {
    if (b.v_ == -1) return 0;
    return a.v_ % b.v_;
  }
  CheckedInt operator-() const {
    if (v_ == std::numeric_limits<std::int64_t>::min()) throw Overflow{};
    return -v_;
  }
  CheckedInt& operator+=(CheckedInt o) { return *this = *this + o; }
  CheckedInt& operator-=(CheckedInt o) { return *this = *this - o; }
  CheckedInt& operator*=(CheckedInt o) { return *this = *this * o; }
  CheckedInt& operator/=(CheckedInt o) { return *this = *this / o; }
  CheckedInt& operator%=(CheckedInt o) { return *this = *this % o; }

  friend constexpr auto operator<=>(CheckedInt, CheckedInt) = default;

 private:
  std::int64_t v_ = 0;
};

inline CheckedInt abs(CheckedInt a) { return a < 0 ? -a : a; }

// Scalar-generic helpers. All work for Integer, CheckedInt and builtin ints.

template <typename S>
S abs_value(const S& a) {
  return a < S(0) ? S(-a) : a;
}

/// Floor division (rounds toward negative infinity).
template <typename S>
S floor_div(const S& a, const S& b) {
  S q = a / b;
  S r = a - q * b;
  if (r != S(0) && ((r < S(0)) != (b < S(0)))) q -= S(1);
  return q;
}

/// Representative of a modulo |m| in [0, |m|).
template <typename S>
S mod_floor(const S& a, const S& m) {
  S r = a % m;
  if (r < S(0)) r += abs_value(m);
  return r;
}

template <typename S>
S gcd_value(S a, S b) {
  a = abs_value(a);
  b = abs_value(b);
  while (b != S(0)) {
    S t = a % b;
    a = b;
    b = t;
  }
  return a;
}

template <typename S>
S lcm_value(const S& a, const S& b) {
  if (a == S(0) || b == S(0)) return S(0);
  return abs_value(a / gcd_value(a, b) * b);
}

/// Extended Euclid: returns (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0.
template <typename S>
std::tuple<S, S, S> ext_gcd(const S& a, const S& b) {
  S old_r = a, r = b;
  S old_s = 1, s = 0;
  S old_t = 0, t = 1;
  while (r != S(0)) {
    S q = floor_div(old_r, r);
    S tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < S(0)) return {S(-old_r), S(-old_s), S(-old_t)};
  return {old_r, old_s, old_t};
}

/// Inverse of a modulo m; requires gcd(a, m) = 1.
template <typename S>
S mod_inverse(const S& a, const S& m) {
  auto [g, s, t] = ext_gcd(mod_floor(a, m), m);
  (void)t;
  if (g != S(1)) {
    throw LatticeError(ErrorCode::kInvalidInput, "value not invertible modulo m");
  }
  return mod_floor(s, m);
}

bool fits_int64(const Integer& x);
std::int64_t to_int64(const Integer& x);
Integer parse_integer(const std::string& text);
std::string to_string(const Integer& x);
std::string to_string(const Rational& x);

/// p-adic valuation of a nonzero integer.
int valuation(const Integer& x, const Integer& p);

bool is_prime(std::int64_t n);

/// Prime-power factorization of a positive integer (trial division; intended
/// for desk-scale moduli).
std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n);

std::int64_t ipow(std::int64_t base, int exp);
Integer ipow(const Integer& base, int exp);

}  // namespace neighborlat

namespace Eigen {
template <>
struct NumTraits<neighborlat::CheckedInt> : GenericNumTraits<neighborlat::CheckedInt> {
  using Real = neighborlat::CheckedInt;
  using NonInteger = neighborlat::CheckedInt;
  using Literal = neighborlat::CheckedInt;
  using Nested = neighborlat::CheckedInt;
  enum {
    IsComplex = 0,
    IsInteger = 1,
    IsSigned = 1,
    RequireInitialization = 0,
    ReadCost = 1,
    AddCost = 2,
    MulCost = 2,
  };
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline Real highest() { return std::numeric_limits<std::int64_t>::max(); }
  static inline Real lowest() { return std::numeric_limits<std::int64_t>::min(); }
  static inline int digits10() { return 18; }
};
}  // namespace Eigen

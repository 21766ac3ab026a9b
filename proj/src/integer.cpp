#include "neighborlat/integer.hpp"

#include <sstream>

namespace neighborlat {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput: return "invalid_input";
    case ErrorCode::kDimensionMismatch: return "dimension_mismatch";
    case ErrorCode::kNotSymmetric: return "not_symmetric";
    case ErrorCode::kDegenerateForm: return "degenerate_form";
    case ErrorCode::kOddLattice: return "odd_lattice";
    case ErrorCode::kNotIntegral: return "not_integral";
    case ErrorCode::kNotContained: return "not_contained";
    case ErrorCode::kGcdViolation: return "gcd_violation";
    case ErrorCode::kBudgetExceeded: return "budget_exceeded";
    case ErrorCode::kNotIsotropic: return "not_isotropic";
    case ErrorCode::kNotNeighbor: return "not_neighbor";
    case ErrorCode::kNonSplit: return "non_split";
    case ErrorCode::kUnsupportedPrime: return "unsupported_prime";
    case ErrorCode::kInsufficientPrecision: return "insufficient_precision";
    case ErrorCode::kNoUnimodularPart: return "no_unimodular_part";
    case ErrorCode::kInconsistentLocalData: return "inconsistent_local_data";
    case ErrorCode::kHypothesisFailed: return "hypothesis_failed";
    case ErrorCode::kWrongSignature: return "wrong_signature";
    case ErrorCode::kGaussSumVanishes: return "gauss_sum_vanishes";
    case ErrorCode::kOverflow: return "overflow";
  }
  return "unknown";
}

bool fits_int64(const Integer& x) {
  const auto& b = x.backend();
  if (b.size() > 1) return false;
  const auto limb = static_cast<std::uint64_t>(*b.limbs());
  constexpr std::uint64_t kTop = std::uint64_t{1} << 63;
  return b.sign() ? limb <= kTop : limb < kTop;
}

std::int64_t to_int64(const Integer& x) {
  if (!fits_int64(x)) {
    throw LatticeError(ErrorCode::kOverflow, "value exceeds 64-bit range: " + to_string(x));
  }
  return x.convert_to<std::int64_t>();
}

Integer parse_integer(const std::string& text) {
  std::size_t start = 0;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) start = 1;
  if (start == text.size()) {
    throw LatticeError(ErrorCode::kInvalidInput, "not an integer: '" + text + "'");
  }
  for (std::size_t i = start; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') {
      throw LatticeError(ErrorCode::kInvalidInput, "not an integer: '" + text + "'");
    }
  }
  return Integer(text);
}

std::string to_string(const Integer& x) { return x.str(); }
std::string to_string(const Rational& x) { return x.str(); }

int valuation(const Integer& x, const Integer& p) {
  if (x == 0) {
    throw LatticeError(ErrorCode::kInvalidInput, "valuation of zero");
  }
  int v = 0;
  Integer y = x;
  while (y % p == 0) {
    y /= p;
    ++v;
  }
  return v;
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t q = 2; q * q <= n; ++q) {
    if (n % q == 0) return false;
  }
  return true;
}

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
  if (n < 1) {
    throw LatticeError(ErrorCode::kInvalidInput, "factorize expects a positive integer");
  }
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t q = 2; q * q <= n; ++q) {
    int e = 0;
    while (n % q == 0) {
      n /= q;
      ++e;
    }
    if (e > 0) out.emplace_back(q, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

std::int64_t ipow(std::int64_t base, int exp) {
  try {
    CheckedInt r = 1;
    for (int i = 0; i < exp; ++i) r = r * CheckedInt(base);
    return r.value();
  } catch (const CheckedInt::Overflow&) {
    throw LatticeError(ErrorCode::kOverflow, "integer power exceeds 64-bit range");
  }
}

Integer ipow(const Integer& base, int exp) {
  Integer r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace neighborlat

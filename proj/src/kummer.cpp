#include "neighborlat/kummer.hpp"

#include <numeric>
#include <set>

namespace neighborlat {

namespace {

using Index = Eigen::Index;

void require_odd(std::int64_t d) {
  if (d < 3 || d % 2 == 0) {
    throw LatticeError(ErrorCode::kInvalidInput, "the subgroup dictionary needs odd d >= 3");
  }
}

Cyclic2 reduce(const Cyclic2& x, std::int64_t d) {
  return {mod_floor(x[0], d), mod_floor(x[1], d)};
}

void require_order_d(const Cyclic2& x, std::int64_t d) {
  if (std::gcd(std::gcd(x[0], x[1]), d) != 1) {
    throw LatticeError(ErrorCode::kInvalidInput, "subgroup generator does not have order d");
  }
}

// Column vectors of an SL2(Z) matrix whose second column reduces to x mod d.
std::array<std::array<Integer, 2>, 2> sl2_with_column(const Cyclic2& x, std::int64_t d) {
  Integer x1 = x[0], x2 = x[1];
  if (x2 == 0) x2 = d;
  while (gcd_value(x1, x2) != 1) x1 += d;
  auto [g, s, t] = ext_gcd(x1, x2);
  // det [[t, x1], [-s, x2]] = t x2 + s x1 = 1.
  return {{{t, x1}, {-s, x2}}};
}

using Mat2 = std::array<std::array<Integer, 2>, 2>;

Mat2 mul(const Mat2& a, const Mat2& b) {
  Mat2 out{};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  }
  return out;
}

Mat2 inverse_sl2(const Mat2& a) { return {{{a[1][1], -a[0][1]}, {-a[1][0], a[0][0]}}}; }

}  // namespace

Lattice kummer_transcendental() {
  IntMatrix g = IntMatrix::Zero(4, 4);
  g(0, 3) = g(3, 0) = 1;
  g(1, 2) = g(2, 1) = -1;
  return Lattice(g);
}

IntVector hom_to_vector(const HomMatrix& m) {
  IntVector v(4);
  v << m[0][1], m[1][1], -m[0][0], -m[1][0];
  return v;
}

HomMatrix vector_to_hom(const IntVector& v) {
  if (v.size() != 4) throw LatticeError(ErrorCode::kDimensionMismatch, "expected a rank-4 vector");
  return {{{Integer(-v(2)), v(0)}, {Integer(-v(3)), v(1)}}};
}

Cyclic2 canonical_cyclic(const Cyclic2& x, std::int64_t d) {
  require_order_d(x, d);
  const auto best = canonical_small({mod_floor(x[0], d), mod_floor(x[1], d)}, d);
  return {best[0], best[1]};
}

std::pair<Cyclic2, Cyclic2> kernel_and_image(const HomMatrix& m, std::int64_t d) {
  std::int64_t a[2][2];
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) a[i][j] = to_int64(mod_floor(m[i][j], Integer(d)));
  }
  if (std::gcd(std::gcd(std::gcd(a[0][0], a[0][1]), std::gcd(a[1][0], a[1][1])), d) != 1) {
    throw LatticeError(ErrorCode::kInvalidInput, "hom is not primitive mod d");
  }
  if (mod_floor<std::int64_t>(a[0][0] * a[1][1] - a[0][1] * a[1][0], d) != 0) {
    throw LatticeError(ErrorCode::kNotIsotropic, "hom is not singular mod d");
  }
  // Image: a primitive column combination; kernel: orthogonal to a primitive row combination.
  auto primitive = [&](std::int64_t x0, std::int64_t x1, std::int64_t y0, std::int64_t y1) {
    for (std::int64_t s = 0; s < d; ++s) {
      for (std::int64_t t = 0; t < d; ++t) {
        const Cyclic2 z = reduce({s * x0 + t * y0, s * x1 + t * y1}, d);
        if (std::gcd(std::gcd(z[0], z[1]), d) == 1) return z;
      }
    }
    throw InvariantError("no primitive combination");
  };
  const Cyclic2 image = primitive(a[0][0], a[1][0], a[0][1], a[1][1]);
  const Cyclic2 row = primitive(a[0][0], a[0][1], a[1][0], a[1][1]);
  return {canonical_cyclic({-row[1], row[0]}, d), canonical_cyclic(image, d)};
}

IsotropicLine line_of_pair(const Cyclic2& c1, const Cyclic2& c2, std::int64_t d) {
  require_order_d(c1, d);
  require_order_d(c2, d);
  // f = y z^T with z . x = 0.
  const Cyclic2 z = {-c1[1], c1[0]};
  HomMatrix f;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) f[i][j] = Integer(c2[i]) * z[j];
  }
  return make_line(kummer_transcendental(), d, hom_to_vector(f));
}

std::vector<DictionaryRow> line_subgroup_dictionary(std::int64_t d) {
  require_odd(d);
  std::vector<DictionaryRow> out;
  std::set<std::pair<Cyclic2, Cyclic2>> pairs;
  for (auto& line : enumerate_isotropic_lines(kummer_transcendental(), d)) {
    const HomMatrix f = vector_to_hom(line.generator);
    auto [c1, c2] = kernel_and_image(f, d);
    if (!pairs.insert({c1, c2}).second) throw InvariantError("two lines share a subgroup pair");
    if (!(line_of_pair(c1, c2, d) == line)) throw InvariantError("dictionary does not round-trip");
    out.push_back(DictionaryRow{std::move(line), f, c1, c2});
  }
  return out;
}

KummerNeighbor kummer_neighbor(const Cyclic2& c1, const Cyclic2& c2, std::int64_t d) {
  require_odd(d);
  require_order_d(c1, d);
  require_order_d(c2, d);
  const Lattice t = kummer_transcendental();
  const Mat2 p = sl2_with_column(reduce(c1, d), d);
  const Mat2 q = sl2_with_column(reduce(c2, d), d);
  const Mat2 p_inv = inverse_sl2(p);
  // v_k' is the hom whose matrix in the new bases is the k-th unit hom.
  IntMatrix primed(4, 4);
  for (Index k = 0; k < 4; ++k) {
    IntVector unit = IntVector::Zero(4);
    unit(k) = 1;
    const Mat2 local = vector_to_hom(unit);
    primed.row(k) = hom_to_vector(mul(mul(q, local), p_inv)).transpose();
  }
  const Integer dd = d;
  RationalMatrix natural{primed, 1};
  natural.num.row(0) *= dd * dd;
  natural.num.row(1) *= dd;
  natural.num.row(2) *= dd;
  natural.den = dd;
  RationalMatrix meet{primed, 1};
  meet.num.row(0) *= dd;
  const IntMatrix gram_num = product(natural.num, t.gram(), IntMatrix(natural.num.transpose()));
  if (content(gram_num) % (dd * dd) != 0 && gram_num != IntMatrix::Zero(4, 4)) {
    throw InvariantError("T' is not integral");
  }
  IntMatrix gram = gram_num / (dd * dd);
  IsotropicLine line = make_line(t, d, primed.row(3).transpose());
  return KummerNeighbor{EmbeddedLattice(t, natural), natural, std::move(gram), std::move(meet),
                        std::move(line)};
}

}  // namespace neighborlat

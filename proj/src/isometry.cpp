#include "neighborlat/isometry.hpp"

#include <cmath>
#include <map>

namespace neighborlat {

namespace {

using Index = Eigen::Index;
using Real = long double;

std::size_t idx(Index i) { return static_cast<std::size_t>(i); }

struct Enumerator {
  Index n;
  std::vector<std::vector<Real>> q;  // Cholesky-type coefficients
  Real bound;
  const Matrix<CheckedInt>& g;
  std::int64_t exact_bound;
  std::int64_t max_count;
  std::vector<std::int64_t> x;
  std::vector<IntVector>* out;

  std::int64_t exact_norm() const {
    CheckedInt s = 0;
    for (Index i = 0; i < n; ++i) {
      if (x[idx(i)] == 0) continue;
      for (Index j = 0; j < n; ++j) s += g(i, j) * CheckedInt(x[idx(i)]) * CheckedInt(x[idx(j)]);
    }
    return s.value();
  }

  // Coordinates above k are fixed; `rest` is the remaining budget.
  void run(Index k, Real rest) {
    Real center = 0;
    for (Index j = k + 1; j < n; ++j) center -= q[idx(k)][idx(j)] * static_cast<Real>(x[idx(j)]);
    const Real width = std::sqrt(std::max<Real>(rest, 0) / q[idx(k)][idx(k)]);
    const auto lo = static_cast<std::int64_t>(std::ceil(center - width - 1e-9L));
    const auto hi = static_cast<std::int64_t>(std::floor(center + width + 1e-9L));
    for (std::int64_t t = lo; t <= hi; ++t) {
      x[idx(k)] = t;
      const Real diff = static_cast<Real>(t) - center;
      const Real left = rest - q[idx(k)][idx(k)] * diff * diff;
      if (left < -1e-6L) continue;
      if (k == 0) {
        bool zero = true;
        for (auto c : x) zero = zero && c == 0;
        if (zero) continue;
        const std::int64_t norm = exact_norm();
        if (norm > 0 && norm <= exact_bound) {
          if (static_cast<std::int64_t>(out->size()) >= max_count) {
            throw LatticeError(ErrorCode::kBudgetExceeded, "too many short vectors");
          }
          IntVector v(n);
          for (Index i = 0; i < n; ++i) v(i) = x[idx(i)];
          out->push_back(std::move(v));
        }
      } else {
        run(k - 1, left);
      }
    }
    x[idx(k)] = 0;
  }
};

}  // namespace

IntMatrix lll_transform(const IntMatrix& gram, double delta) {
  const Index n = gram.rows();
  IntMatrix t = identity_matrix(n);
  IntMatrix h = gram;
  std::vector<std::vector<Real>> mu(idx(n), std::vector<Real>(idx(n), 0));
  std::vector<Real> bstar(idx(n), 0);
  auto orthogonalize = [&] {
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < i; ++j) {
        Real s = h(i, j).convert_to<Real>();
        for (Index k = 0; k < j; ++k) s -= mu[idx(j)][idx(k)] * mu[idx(i)][idx(k)] * bstar[idx(k)];
        mu[idx(i)][idx(j)] = s / bstar[idx(j)];
      }
      Real s = h(i, i).convert_to<Real>();
      for (Index k = 0; k < i; ++k) s -= mu[idx(i)][idx(k)] * mu[idx(i)][idx(k)] * bstar[idx(k)];
      if (s <= 0) throw LatticeError(ErrorCode::kInvalidInput, "reduction needs a positive definite form");
      bstar[idx(i)] = s;
    }
  };
  orthogonalize();
  Index k = 1;
  int guard = 0;
  while (k < n) {
    if (++guard > 100000) throw InvariantError("lattice reduction does not terminate");
    bool changed = false;
    for (Index j = k - 1; j >= 0; --j) {
      const Real r = std::round(mu[idx(k)][idx(j)]);
      if (r == 0) continue;
      const Integer c(static_cast<std::int64_t>(r));
      t.row(k) -= c * t.row(j);
      h.row(k) -= c * h.row(j);
      h.col(k) -= c * h.col(j);
      for (Index i = 0; i <= j; ++i) mu[idx(k)][idx(i)] -= r * (i == j ? 1 : mu[idx(j)][idx(i)]);
      changed = true;
    }
    if (changed) orthogonalize();
    const Real m = mu[idx(k)][idx(k - 1)];
    if (bstar[idx(k)] >= (static_cast<Real>(delta) - m * m) * bstar[idx(k - 1)]) {
      ++k;
      continue;
    }
    t.row(k).swap(t.row(k - 1));
    h.row(k).swap(h.row(k - 1));
    h.col(k).swap(h.col(k - 1));
    orthogonalize();
    k = std::max<Index>(k - 1, 1);
  }
  return t;
}

std::vector<IntVector> short_vectors(const IntMatrix& gram, const Integer& bound,
                                     std::int64_t max_count) {
  const Index n = gram.rows();
  if (!to_checked(gram) || !fits_int64(bound)) {
    throw LatticeError(ErrorCode::kOverflow, "entries too large");
  }
  std::vector<IntVector> out;
  if (n == 0) return out;
  // Reversed variable order, so the recursion fixes the last coordinates first.
  std::vector<std::vector<Real>> rq(idx(n), std::vector<Real>(idx(n), 0));
  IntMatrix rev(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) rev(i, j) = gram(n - 1 - i, n - 1 - j);
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) rq[idx(i)][idx(j)] = rev(i, j).convert_to<Real>();
  }
  for (Index i = 0; i < n; ++i) {
    if (rq[idx(i)][idx(i)] <= 0) {
      throw LatticeError(ErrorCode::kInvalidInput, "short vectors need a positive definite form");
    }
    for (Index j = i + 1; j < n; ++j) {
      const Real c = rq[idx(i)][idx(j)] / rq[idx(i)][idx(i)];
      for (Index k = j; k < n; ++k) rq[idx(j)][idx(k)] -= c * rq[idx(i)][idx(k)];
    }
    for (Index j = i + 1; j < n; ++j) rq[idx(i)][idx(j)] /= rq[idx(i)][idx(i)];
  }
  // Q = sum_i rq_ii (y_i + sum_{j>i} rq_ij y_j)^2 with y_i = x_{n-1-i}.
  auto rg = to_checked(rev);
  Enumerator e{n, rq, bound.convert_to<Real>(), *rg, to_int64(bound), max_count,
               std::vector<std::int64_t>(idx(n), 0), &out};
  e.run(n - 1, e.bound + 1e-6L);
  for (auto& v : out) v = v.reverse().eval();
  return out;
}

std::optional<IntMatrix> find_isometry(const Lattice& a, const Lattice& b) {
  const Index n = a.rank();
  if (b.rank() != n || a.det() != b.det()) return std::nullopt;
  auto [pa, na] = signature(a);
  auto [pb, nb] = signature(b);
  if (pa != pb || na != nb) return std::nullopt;
  if (na != 0 && pa != 0) {
    throw LatticeError(ErrorCode::kInvalidInput, "isometry search needs a definite form");
  }
  const Integer sign = pa == 0 ? -1 : 1;
  // Search between reduced bases: ta a ta^T = ga, tb b tb^T = gb.
  const IntMatrix ta = lll_transform(a.gram() * sign);
  const IntMatrix tb = lll_transform(b.gram() * sign);
  const IntMatrix ga = product(ta, IntMatrix(a.gram() * sign), IntMatrix(ta.transpose()));
  const IntMatrix gb = product(tb, IntMatrix(b.gram() * sign), IntMatrix(tb.transpose()));
  Integer top = 0;
  for (Index i = 0; i < n; ++i) top = std::max(top, ga(i, i));
  const auto vecs = short_vectors(gb, top);
  // Candidates by norm, with G_b x precomputed.
  std::map<std::int64_t, std::vector<std::size_t>> by_norm;
  std::vector<std::vector<std::int64_t>> gx(vecs.size());
  for (std::size_t k = 0; k < vecs.size(); ++k) {
    const IntVector w = product(gb, IntMatrix(vecs[k]));
    for (Index i = 0; i < n; ++i) gx[k].push_back(to_int64(w(i)));
    by_norm[to_int64(vecs[k].dot(w))].push_back(k);
  }
  auto inner = [&](std::size_t u, std::size_t v) {
    __int128 s = 0;
    for (Index i = 0; i < n; ++i) s += static_cast<__int128>(to_int64(vecs[u](i))) * gx[v][idx(i)];
    return static_cast<std::int64_t>(s);
  };
  std::vector<std::vector<std::int64_t>> target(idx(n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) target[idx(i)].push_back(to_int64(ga(i, j)));
  }
  std::vector<std::size_t> chosen;
  auto search = [&](auto&& self, Index i) -> bool {
    if (i == n) return true;
    auto it = by_norm.find(target[idx(i)][idx(i)]);
    if (it == by_norm.end()) return false;
    for (std::size_t k : it->second) {
      bool ok = true;
      for (Index j = 0; j < i && ok; ++j) ok = inner(chosen[idx(j)], k) == target[idx(i)][idx(j)];
      if (!ok) continue;
      chosen.push_back(k);
      if (self(self, i + 1)) return true;
      chosen.pop_back();
    }
    return false;
  };
  if (!search(search, 0)) return std::nullopt;
  IntMatrix y(n, n);
  for (Index i = 0; i < n; ++i) y.row(i) = vecs[chosen[idx(i)]].transpose();
  const IntMatrix x = product(unimodular_inverse(ta), y, tb);
  if (product(x, b.gram(), IntMatrix(x.transpose())) != a.gram()) {
    throw InvariantError("isometry search returned a non-isometry");
  }
  return x;
}

}  // namespace neighborlat

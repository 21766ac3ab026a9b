#pragma once

// Exact integer matrix kernels, templated on the scalar. Every routine here
// is division-exact: it only divides where the quotient is known to be an
// integer, so it is valid for any ring-like scalar with Euclidean division.

#include <utility>

#include "neighborlat/integer.hpp"

namespace neighborlat::kernels {

using Index = Eigen::Index;

template <typename S>
void swap_rows(Matrix<S>& a, Index i, Index j) {
  if (i != j) a.row(i).swap(a.row(j));
}

template <typename S>
void swap_cols(Matrix<S>& a, Index i, Index j) {
  if (i != j) a.col(i).swap(a.col(j));
}

/// Fraction-free (Bareiss) determinant.
template <typename S>
S determinant(Matrix<S> a) {
  const Index n = a.rows();
  if (n == 0) return S(1);
  S prev = 1;
  bool negate = false;
  for (Index k = 0; k < n - 1; ++k) {
    if (a(k, k) == S(0)) {
      Index r = k + 1;
      while (r < n && a(r, k) == S(0)) ++r;
      if (r == n) return S(0);
      swap_rows(a, k, r);
      negate = !negate;
    }
    for (Index i = k + 1; i < n; ++i) {
      for (Index j = k + 1; j < n; ++j) {
        a(i, j) = (a(k, k) * a(i, j) - a(i, k) * a(k, j)) / prev;
      }
    }
    prev = a(k, k);
  }
  return negate ? S(-a(n - 1, n - 1)) : a(n - 1, n - 1);
}

/// Adjugate and determinant through fraction-free Gauss-Jordan elimination
/// on [A | I]. Requires A square and nonsingular.
template <typename S>
std::pair<Matrix<S>, S> adjugate(const Matrix<S>& a) {
  const Index n = a.rows();
  Matrix<S> m(n, 2 * n);
  m.leftCols(n) = a;
  m.rightCols(n).setZero();
  for (Index i = 0; i < n; ++i) m(i, n + i) = S(1);
  S prev = 1;
  bool negate = false;
  for (Index k = 0; k < n; ++k) {
    if (m(k, k) == S(0)) {
      Index r = k + 1;
      while (r < n && m(r, k) == S(0)) ++r;
      if (r == n) {
        throw LatticeError(ErrorCode::kDegenerateForm, "singular matrix");
      }
      swap_rows(m, k, r);
      negate = !negate;
    }
    for (Index i = 0; i < n; ++i) {
      if (i == k) continue;
      for (Index j = 0; j < 2 * n; ++j) {
        if (j == k) continue;
        m(i, j) = (m(k, k) * m(i, j) - m(i, k) * m(k, j)) / prev;
      }
      m(i, k) = S(0);
    }
    prev = m(k, k);
  }
  // m = [p I | p A^{-1}] with p = det(PA) for the row permutation P.
  Matrix<S> adj = m.rightCols(n);
  S det = prev;
  if (negate) {
    det = -det;
    adj = (-adj).eval();
  }
  return {std::move(adj), det};
}

/// Row-style Hermite normal form: upper echelon, positive pivots, entries
/// above each pivot reduced into [0, pivot). Zero rows are dropped.
template <typename S>
Matrix<S> hermite_form(Matrix<S> a) {
  const Index m = a.rows(), n = a.cols();
  Index r = 0;
  for (Index c = 0; c < n && r < m; ++c) {
    for (Index i = r + 1; i < m; ++i) {
      if (a(i, c) == S(0)) continue;
      if (a(r, c) == S(0)) {
        swap_rows(a, r, i);
        continue;
      }
      auto [g, s, t] = ext_gcd(a(r, c), a(i, c));
      const S x = a(r, c) / g;
      const S y = a(i, c) / g;
      for (Index j = c; j < n; ++j) {
        const S top = s * a(r, j) + t * a(i, j);
        const S bottom = x * a(i, j) - y * a(r, j);
        a(r, j) = top;
        a(i, j) = bottom;
      }
    }
    if (a(r, c) == S(0)) continue;
    if (a(r, c) < S(0)) {
      for (Index j = c; j < n; ++j) a(r, j) = -a(r, j);
    }
    for (Index i = 0; i < r; ++i) {
      const S q = floor_div(a(i, c), a(r, c));
      if (q == S(0)) continue;
      for (Index j = c; j < n; ++j) a(i, j) -= q * a(r, j);
    }
    ++r;
  }
  return a.topRows(r);
}

template <typename S>
struct SmithForm {
  Matrix<S> u;           // unimodular, rows x rows
  Matrix<S> v;           // unimodular, cols x cols
  std::vector<S> diagonal;  // d_1 | d_2 | ..., nonnegative; u * a * v = diag
};

/// Smith normal form with transforms: u * a * v = diag(d_1, ..., d_r, 0...).
template <typename S>
SmithForm<S> smith_form(Matrix<S> d) {
  const Index m = d.rows(), n = d.cols();
  Matrix<S> u = Matrix<S>::Identity(m, m);
  Matrix<S> v = Matrix<S>::Identity(n, n);
  const Index steps = std::min(m, n);
  std::vector<S> diagonal;
  for (Index t = 0; t < steps; ++t) {
    while (true) {
      Index pi = -1, pj = -1;
      S best = 0;
      for (Index i = t; i < m; ++i) {
        for (Index j = t; j < n; ++j) {
          if (d(i, j) == S(0)) continue;
          S mag = abs_value(d(i, j));
          if (pi < 0 || mag < best) {
            best = mag;
            pi = i;
            pj = j;
          }
        }
      }
      if (pi < 0) {
        for (Index k = t; k < steps; ++k) diagonal.push_back(S(0));
        return {std::move(u), std::move(v), std::move(diagonal)};
      }
      swap_rows(d, t, pi);
      swap_rows(u, t, pi);
      swap_cols(d, t, pj);
      swap_cols(v, t, pj);

      bool clean = true;
      for (Index i = t + 1; i < m; ++i) {
        if (d(i, t) == S(0)) continue;
        const S q = floor_div(d(i, t), d(t, t));
        for (Index j = t; j < n; ++j) d(i, j) -= q * d(t, j);
        for (Index j = 0; j < m; ++j) u(i, j) -= q * u(t, j);
        if (d(i, t) != S(0)) clean = false;
      }
      for (Index j = t + 1; j < n; ++j) {
        if (d(t, j) == S(0)) continue;
        const S q = floor_div(d(t, j), d(t, t));
        for (Index i = t; i < m; ++i) d(i, j) -= q * d(i, t);
        for (Index i = 0; i < n; ++i) v(i, j) -= q * v(i, t);
        if (d(t, j) != S(0)) clean = false;
      }
      if (!clean) continue;

      Index bad = -1;
      for (Index i = t + 1; i < m && bad < 0; ++i) {
        for (Index j = t + 1; j < n; ++j) {
          if (d(i, j) % d(t, t) != S(0)) {
            bad = i;
            break;
          }
        }
      }
      if (bad < 0) break;
      for (Index j = t; j < n; ++j) d(t, j) += d(bad, j);
      for (Index j = 0; j < m; ++j) u(t, j) += u(bad, j);
    }
    if (d(t, t) < S(0)) {
      for (Index j = t; j < n; ++j) d(t, j) = -d(t, j);
      for (Index j = 0; j < m; ++j) u(t, j) = -u(t, j);
    }
    diagonal.push_back(d(t, t));
  }
  return {std::move(u), std::move(v), std::move(diagonal)};
}

/// Basis (as rows) of {c in Z^n : c . u = 0 mod modulus}.
template <typename S>
Matrix<S> kernel_mod(const Vector<S>& u, const S& modulus) {
  const Index n = u.size();
  // Column-reduce w = (modulus, u_1, ..., u_n) to (g, 0, ..., 0) while
  // tracking the unimodular transform; its last n columns span ker(w).
  Vector<S> w(n + 1);
  w(0) = modulus;
  for (Index i = 0; i < n; ++i) w(i + 1) = mod_floor(u(i), modulus);
  Matrix<S> t = Matrix<S>::Identity(n + 1, n + 1);
  for (Index j = 1; j <= n; ++j) {
    if (w(j) == S(0)) continue;
    auto [g, s, r] = ext_gcd(w(0), w(j));
    const S x = w(0) / g;
    const S y = w(j) / g;
    for (Index i = 0; i <= n; ++i) {
      const S c0 = t(i, 0), cj = t(i, j);
      t(i, 0) = s * c0 + r * cj;
      t(i, j) = x * cj - y * c0;
    }
    w(0) = g;
    w(j) = S(0);
  }
  // Column 0 of t generates a complement; columns 1..n are the kernel.
  Matrix<S> basis(n, n);
  for (Index k = 0; k < n; ++k) {
    for (Index i = 0; i < n; ++i) basis(k, i) = t(i + 1, k + 1);
  }
  return basis;
}

/// Sylvester inertia (positive, negative) of a symmetric matrix by exact
/// symmetric integer elimination. Throws on a degenerate form.
template <typename S>
std::pair<int, int> inertia(Matrix<S> a) {
  const Index n = a.rows();
  int pos = 0, neg = 0;
  for (Index k = 0; k < n; ++k) {
    if (a(k, k) == S(0)) {
      Index r = k + 1;
      while (r < n && a(r, r) == S(0)) ++r;
      if (r < n) {
        swap_rows(a, k, r);
        swap_cols(a, k, r);
      } else {
        Index c = k + 1;
        while (c < n && a(k, c) == S(0)) ++c;
        if (c == n) {
          throw LatticeError(ErrorCode::kDegenerateForm, "degenerate quadratic form");
        }
        // x_k <- x_k + x_c makes the pivot 2 a_kc (a_cc = 0 here).
        for (Index j = 0; j < n; ++j) a(k, j) += a(c, j);
        for (Index i = 0; i < n; ++i) a(i, k) += a(i, c);
      }
    }
    const S p = a(k, k);
    const bool positive = p > S(0);
    if (positive) ++pos; else ++neg;
    // sign(p) * (p * a_ij - a_ik * a_kj) is |p| times the Schur complement,
    // so it has the same inertia as the remaining form.
    S content = 0;
    for (Index i = k + 1; i < n; ++i) {
      for (Index j = i; j < n; ++j) {
        S s = p * a(i, j) - a(i, k) * a(k, j);
        if (!positive) s = -s;
        a(i, j) = s;
        content = gcd_value(content, s);
      }
    }
    for (Index i = k + 1; i < n; ++i) {
      for (Index j = i; j < n; ++j) {
        if (content > S(1)) a(i, j) /= content;
        a(j, i) = a(i, j);
      }
      a(i, k) = a(k, i) = S(0);
    }
  }
  return {pos, neg};
}

}  // namespace neighborlat::kernels

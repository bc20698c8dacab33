#pragma once

// Exact integer/rational linear algebra: fraction-free determinants,
// adjugates, lower-triangular Hermite normal form, rational solves and the
// maximal minors of an (n+1) x n matrix.

#include "delta_simplex/matrix.hpp"

#include <numeric>
#include <utility>
#include <vector>

namespace delta_simplex {

/// Bareiss fraction-free elimination with row pivoting.
inline Integer det(const IntMatrix& m) {
  if (!m.is_square()) throw ShapeError("det: matrix is not square");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      a.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;  // exact
      }
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

namespace detail {
inline IntMatrix minor_matrix(const IntMatrix& m, std::size_t skip_row, std::size_t skip_col) {
  IntMatrix r(m.rows() - 1, m.cols() - 1);
  for (std::size_t i = 0, ri = 0; i < m.rows(); ++i) {
    if (i == skip_row) continue;
    for (std::size_t j = 0, rj = 0; j < m.cols(); ++j) {
      if (j == skip_col) continue;
      r(ri, rj++) = m(i, j);
    }
    ++ri;
  }
  return r;
}
}  // namespace detail

/// Classical adjugate: M * adj(M) == adj(M) * M == det(M) * I, defined for
/// singular M as well.
inline IntMatrix adjugate(const IntMatrix& m) {
  if (!m.is_square()) throw ShapeError("adjugate: matrix is not square");
  const std::size_t n = m.rows();
  if (n == 0) return {};
  if (n == 1) return IntMatrix::identity(1);
  IntMatrix adj(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Integer cof = det(detail::minor_matrix(m, j, i));
      adj(i, j) = ((i + j) % 2 == 0) ? cof : Integer(-cof);
    }
  return adj;
}

inline bool is_unimodular(const IntMatrix& u) { return u.is_square() && abs(det(u)) == 1; }

/// Integer inverse of a unimodular matrix.
inline IntMatrix unimodular_inverse(const IntMatrix& u) {
  Integer d = det(u);
  if (abs(d) != 1) throw PreconditionError("unimodular_inverse: |det| != 1");
  return d * adjugate(u);
}

struct HnfDecomposition {
  IntMatrix H;      // m x n; top n x n block lower triangular, reduced
  IntMatrix Q;      // n x n unimodular with A == H * Q
  IntMatrix Q_inv;  // A * Q_inv == H
};

/// Lower-triangular Hermite normal form by unimodular column operations.
/// The top n x n block of A must be nonsingular; rows are used in the order
/// given. On return the top block satisfies H_ii > 0 and 0 <= H_ij < H_ii for
/// j < i, which determines H uniquely.
inline HnfDecomposition hnf(const IntMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  if (m < n) throw RankError("hnf: fewer rows than columns");
  IntMatrix h = a;
  IntMatrix q = IntMatrix::identity(n);
  IntMatrix qi = IntMatrix::identity(n);  // the same column operations as h

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (h(i, j) == 0) continue;
      const Integer a_ii = h(i, i), a_ij = h(i, j);
      auto [g, x, y] = extended_gcd(a_ii, a_ij);
      const Integer p = a_ii / g, r = a_ij / g;
      // columns (i, j) <- (x*ci + y*cj, -r*ci + p*cj); det of the 2x2 step is 1
      for (std::size_t t = 0; t < m; ++t) {
        Integer ci = h(t, i), cj = h(t, j);
        h(t, i) = x * ci + y * cj;
        h(t, j) = p * cj - r * ci;
      }
      for (std::size_t t = 0; t < n; ++t) {
        Integer ci = qi(t, i), cj = qi(t, j);
        qi(t, i) = x * ci + y * cj;
        qi(t, j) = p * cj - r * ci;
      }
      for (std::size_t t = 0; t < n; ++t) {
        Integer ri = q(i, t), rj = q(j, t);
        q(i, t) = p * ri + r * rj;
        q(j, t) = x * rj - y * ri;
      }
    }
    if (h(i, i) == 0) throw RankError("hnf: leading block is singular");
    if (h(i, i) < 0) {
      for (std::size_t t = 0; t < m; ++t) h(t, i) = -h(t, i);
      for (std::size_t t = 0; t < n; ++t) q(i, t) = -q(i, t);
      for (std::size_t t = 0; t < n; ++t) qi(t, i) = -qi(t, i);
    }
    for (std::size_t j = 0; j < i; ++j) {
      Integer f = floor_div(h(i, j), h(i, i));
      if (f == 0) continue;
      for (std::size_t t = 0; t < m; ++t) h(t, j) -= f * h(t, i);
      for (std::size_t t = 0; t < n; ++t) q(i, t) += f * q(j, t);
      for (std::size_t t = 0; t < n; ++t) qi(t, j) -= f * qi(t, i);
    }
  }
  return {std::move(h), std::move(q), std::move(qi)};
}

/// True when the square matrix is lower triangular with positive diagonal and
/// row-reduced off-diagonal entries.
inline bool is_hnf(const IntMatrix& h) {
  if (!h.is_square()) return false;
  for (std::size_t i = 0; i < h.rows(); ++i) {
    if (h(i, i) <= 0) return false;
    for (std::size_t j = 0; j < h.cols(); ++j) {
      if (j > i && h(i, j) != 0) return false;
      if (j < i && (h(i, j) < 0 || h(i, j) >= h(i, i))) return false;
    }
  }
  return true;
}

/// Exact solution of M x = b over the rationals.
inline RationalVector solve_rational(const IntMatrix& m, std::span<const Integer> b) {
  if (!m.is_square() || m.rows() != b.size()) throw ShapeError("solve_rational: shape mismatch");
  const std::size_t n = m.rows();
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = Rational(m(i, j));
    a[i][n] = Rational(b[i]);
  }
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a[p][k] == 0) ++p;
    if (p == n) throw SingularError("solve_rational: singular matrix");
    std::swap(a[k], a[p]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a[i][k] == 0) continue;
      Rational f = a[i][k] / a[k][k];
      for (std::size_t j = k; j <= n; ++j) a[i][j] -= f * a[k][j];
    }
  }
  RationalVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = a[i][n] / a[i][i];
  return x;
}
inline RationalVector solve_rational(const IntMatrix& m, const IntVector& b) {
  return solve_rational(m, std::span<const Integer>(b));
}

/// One maximal minor of an (n+1) x n matrix: the rows in `base` (ascending)
/// and the signed determinant of that n x n submatrix.
struct MaximalMinor {
  std::vector<std::size_t> base;
  Integer minor;
  std::size_t omitted_row() const {
    for (std::size_t i = 0; i < base.size(); ++i)
      if (base[i] != i) return i;
    return base.size();
  }
};

/// All n+1 maximal minors, bases in ascending lexicographic order.
inline std::vector<MaximalMinor> max_minors(const IntMatrix& a) {
  if (a.rows() != a.cols() + 1) throw ShapeError("max_minors: expected an (n+1) x n matrix");
  std::vector<MaximalMinor> out;
  out.reserve(a.rows());
  for (std::size_t skip = a.rows(); skip-- > 0;) {
    MaximalMinor mm;
    for (std::size_t i = 0; i < a.rows(); ++i)
      if (i != skip) mm.base.push_back(i);
    mm.minor = det(a.select_rows(mm.base));
    out.push_back(std::move(mm));
  }
  return out;
}

/// Delta(A): the largest absolute maximal minor.
inline Integer max_abs_minor(const std::vector<MaximalMinor>& minors) {
  Integer d = 0;
  for (const auto& mm : minors) d = std::max(d, abs(mm.minor));
  return d;
}

}  // namespace delta_simplex

#pragma once

// Simplices given by n+1 inequalities, unimodular affine maps acting on them,
// and a bounding-box integer point counter used as a ground-truth oracle.

#include "delta_simplex/exact_linalg.hpp"

#include <string>
#include <vector>

namespace delta_simplex {

/// {x in R^n : A x <= b} with A of shape (n+1) x n.
struct InequalitySystem {
  std::size_t n = 0;
  IntMatrix A;
  IntVector b;

  void check_shape() const {
    if (A.rows() != n + 1 || A.cols() != n || b.size() != n + 1)
      throw ShapeError("inequality system must have shape (n+1) x n with n+1 right-hand sides");
  }

  // Row i of (A | b).
  IntVector extended_row(std::size_t i) const {
    IntVector r = A.row_vector(i);
    r.push_back(b[i]);
    return r;
  }

  friend bool operator==(const InequalitySystem&, const InequalitySystem&) = default;
};

/// x -> U x + x0 with U unimodular.
struct AffineUnimodularMap {
  IntMatrix U;
  IntVector x0;

  static AffineUnimodularMap identity(std::size_t n) { return {IntMatrix::identity(n), IntVector(n)}; }
  static AffineUnimodularMap linear(IntMatrix u) {
    const std::size_t n = u.rows();
    return {std::move(u), IntVector(n)};
  }
  static AffineUnimodularMap translation(IntVector x0) {
    const std::size_t n = x0.size();
    return {IntMatrix::identity(n), std::move(x0)};
  }

  std::size_t dim() const { return x0.size(); }

  IntVector operator()(const IntVector& x) const { return U * x + x0; }
  RationalVector operator()(const RationalVector& x) const {
    RationalVector y(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
      Rational s(x0[i]);
      for (std::size_t j = 0; j < dim(); ++j) s += Rational(U(i, j)) * x[j];
      y[i] = s;
    }
    return y;
  }

  friend bool operator==(const AffineUnimodularMap&, const AffineUnimodularMap&) = default;
};

/// compose(m2, m1)(x) == m2(m1(x)).
inline AffineUnimodularMap compose(const AffineUnimodularMap& m2, const AffineUnimodularMap& m1) {
  if (m2.dim() != m1.dim()) throw ShapeError("compose: dimension mismatch");
  return {m2.U * m1.U, m2.U * m1.x0 + m2.x0};
}

inline AffineUnimodularMap inverse(const AffineUnimodularMap& m) {
  IntMatrix inv = unimodular_inverse(m.U);
  IntVector t = inv * m.x0;
  for (auto& v : t) v = -v;
  return {std::move(inv), std::move(t)};
}

/// Returns the system of U^{-1}(S): x satisfies the result iff U x + x0
/// satisfies `sys`. Row order is preserved.
inline InequalitySystem apply_map(const InequalitySystem& sys, const AffineUnimodularMap& m) {
  sys.check_shape();
  if (m.dim() != sys.n || !is_unimodular(m.U)) throw PreconditionError("apply_map: map is not unimodular");
  return {sys.n, sys.A * m.U, sys.b - sys.A * m.x0};
}

struct SimplexMeta {
  Integer delta;
  std::vector<MaximalMinor> minors;  // ascending base order
  // vertices[i] is the vertex opposite facet i (all rows but i tight).
  std::vector<RationalVector> vertices;
  std::vector<std::vector<std::size_t>> max_det_bases;  // ascending
};

/// Succeeds iff all maximal minors are nonzero and every basic solution
/// strictly satisfies its omitted inequality, i.e. the system describes a
/// bounded full-dimensional simplex.
inline SimplexMeta validate_simplex(const InequalitySystem& sys) {
  sys.check_shape();
  SimplexMeta meta;
  meta.minors = max_minors(sys.A);
  for (const auto& mm : meta.minors)
    if (mm.minor == 0) throw NotASimplexError("not a simplex (rank/degeneracy): a maximal minor vanishes");
  meta.delta = max_abs_minor(meta.minors);
  meta.vertices.resize(sys.n + 1);
  for (const auto& mm : meta.minors) {
    const std::size_t omitted = mm.omitted_row();
    IntVector rhs;
    for (std::size_t i : mm.base) rhs.push_back(sys.b[i]);
    RationalVector v = solve_rational(sys.A.select_rows(mm.base), rhs);
    Rational lhs = 0;
    for (std::size_t j = 0; j < sys.n; ++j) lhs += Rational(sys.A(omitted, j)) * v[j];
    if (!(lhs < Rational(sys.b[omitted])))
      throw NotASimplexError("empty or unbounded or lower-dimensional: omitted inequality not strict at a vertex");
    meta.vertices[omitted] = std::move(v);
    if (abs(mm.minor) == meta.delta) meta.max_det_bases.push_back(mm.base);
  }
  return meta;
}

inline constexpr std::size_t kDefaultOracleCap = 10'000'000;

/// |S ∩ Z^n| by scanning the integer points of the vertex bounding box.
inline std::size_t count_integer_points_bruteforce(const InequalitySystem& sys,
                                                   std::size_t cap = kDefaultOracleCap) {
  const SimplexMeta meta = validate_simplex(sys);
  const std::size_t n = sys.n;
  IntVector lo(n), hi(n);
  for (std::size_t j = 0; j < n; ++j) {
    Rational mn = meta.vertices[0][j], mx = meta.vertices[0][j];
    for (const auto& v : meta.vertices) {
      mn = std::min(mn, v[j]);
      mx = std::max(mx, v[j]);
    }
    lo[j] = ceil(mn);
    hi[j] = floor(mx);
    if (hi[j] < lo[j]) return 0;
  }
  Integer total = 1;
  for (std::size_t j = 0; j < n; ++j) total *= hi[j] - lo[j] + 1;
  if (total > Integer(cap)) throw OracleScaleError("oracle scale exceeded: bounding box has " + total.str() + " points");

  std::size_t count = 0;
  IntVector x = lo;
  while (true) {
    bool inside = true;
    for (std::size_t i = 0; i <= n && inside; ++i) {
      Integer s = 0;
      for (std::size_t j = 0; j < n; ++j) s += sys.A(i, j) * x[j];
      inside = s <= sys.b[i];
    }
    if (inside) ++count;
    std::size_t j = 0;
    while (j < n && x[j] == hi[j]) {
      x[j] = lo[j];
      ++j;
    }
    if (j == n) break;
    ++x[j];
  }
  return count;
}

}  // namespace delta_simplex

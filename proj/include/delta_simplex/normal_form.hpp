#pragma once

// Normalized simplex systems
//
//     ( H  )       ( h  )          ( I_s  0 )
//     ( c^T) x  <= ( c0 ),   H  =  ( B    T )
//
// with H in lower-triangular Hermite normal form, det H = Delta of the whole
// matrix, T_ii >= 2, 0 <= h_i < H_ii, primitive rows and c in paral(-H^T).
// The identity-block coordinates are ordered by (column of B, entry of c),
// both ascending, which pins down a unique representative for a given choice
// of base and ordering of the T-block facets.

#include "delta_simplex/simplex_model.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace delta_simplex {

struct NormalizedSystem {
  std::size_t n = 0;
  std::size_t s = 0;
  std::size_t k = 0;
  IntMatrix H;  // n x n
  IntVector h;
  IntVector c;
  Integer c0;
  Integer delta;

  InequalitySystem system() const {
    InequalitySystem sys{n, IntMatrix(n + 1, n), IntVector(n + 1)};
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) sys.A(i, j) = H(i, j);
      sys.b[i] = h[i];
    }
    for (std::size_t j = 0; j < n; ++j) sys.A(n, j) = c[j];
    sys.b[n] = c0;
    return sys;
  }

  // k x s block below the identity.
  IntMatrix B() const {
    IntMatrix b(k, s);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < s; ++j) b(i, j) = H(s + i, j);
    return b;
  }
  IntMatrix T() const {
    IntMatrix t(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) t(i, j) = H(s + i, s + j);
    return t;
  }

  friend bool operator==(const NormalizedSystem&, const NormalizedSystem&) = default;
};

/// Divides each row of (A | b) by the gcd of its n+1 entries.
inline InequalitySystem primitivize(const InequalitySystem& sys) {
  sys.check_shape();
  InequalitySystem out = sys;
  for (std::size_t i = 0; i <= sys.n; ++i) {
    Integer g = sys.b[i];
    for (const auto& v : sys.A.row(i)) g = gcd(g, v);
    if (g == 0) throw InvalidSystemError("invalid system: row " + std::to_string(i) + " is zero");
    if (g == 1) continue;
    for (auto& v : out.A.row(i)) v /= g;
    out.b[i] /= g;
  }
  return out;
}

/// Two simplex systems describe the same set iff their primitive rows agree as
/// multisets (every inequality of a simplex system is facet-defining).
inline bool same_simplex(const InequalitySystem& a, const InequalitySystem& b) {
  if (a.n != b.n) return false;
  auto rows = [](const InequalitySystem& s) {
    InequalitySystem p = primitivize(s);
    std::vector<IntVector> r;
    for (std::size_t i = 0; i <= p.n; ++i) r.push_back(p.extended_row(i));
    std::sort(r.begin(), r.end());
    return r;
  };
  return rows(a) == rows(b);
}

struct RhsReduction {
  IntVector h;
  IntVector x0;  // h == b - H x0
};

/// Unique integer translation bringing b into 0 <= h_i < H_ii.
inline RhsReduction reduce_rhs(const IntMatrix& H, std::span<const Integer> b) {
  if (!is_hnf(H) || H.rows() != b.size()) throw PreconditionError("reduce_rhs: H is not a square HNF matrix");
  const std::size_t n = H.rows();
  RhsReduction r{IntVector(b.begin(), b.end()), IntVector(n)};
  for (std::size_t i = 0; i < n; ++i) {
    r.x0[i] = floor_div(r.h[i], H(i, i));
    if (r.x0[i] == 0) continue;
    for (std::size_t t = i; t < n; ++t) r.h[t] -= r.x0[i] * H(t, i);
  }
  return r;
}
inline RhsReduction reduce_rhs(const IntMatrix& H, const IntVector& b) {
  return reduce_rhs(H, std::span<const Integer>(b));
}

struct NormalizationResult {
  NormalizedSystem system;
  // apply_map(primitivize(input), map) has row row_perm[i] equal to row i of
  // system.system().
  AffineUnimodularMap map;
  std::vector<std::size_t> row_perm;
};

namespace detail {

// Working state of the normalization pipeline; rows are kept in the order
// of `perm` (original row indices), the last row is the non-base facet.
struct Workspace {
  std::size_t n;
  IntMatrix A;
  IntVector b;
  AffineUnimodularMap map;
  std::vector<std::size_t> perm;

  void transform_columns(const IntMatrix& v) {
    A = A * v;
    map = compose(map, AffineUnimodularMap::linear(v));
  }
  void translate(const IntVector& x0) {
    b = b - A * x0;
    map = compose(map, AffineUnimodularMap::translation(x0));
  }
  void reorder_base_rows(const std::vector<std::size_t>& order) {
    IntMatrix a2 = A;
    IntVector b2 = b;
    std::vector<std::size_t> p2 = perm;
    for (std::size_t i = 0; i < order.size(); ++i) {
      std::copy(A.row(order[i]).begin(), A.row(order[i]).end(), a2.row(i).begin());
      b2[i] = b[order[i]];
      p2[i] = perm[order[i]];
    }
    A = std::move(a2);
    b = std::move(b2);
    perm = std::move(p2);
  }
  void hnf_base() {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    transform_columns(hnf(A.select_rows(idx)).Q_inv);
  }
  // Number of leading unit-diagonal rows if the diagonal is "units, then
  // entries >= 2"; nullopt otherwise.
  std::optional<std::size_t> block_split() const {
    std::size_t s = 0;
    while (s < n && A(s, s) == 1) ++s;
    for (std::size_t i = s; i < n; ++i)
      if (A(i, i) == 1) return std::nullopt;
    return s;
  }
};

// Lexicographic comparison of identity-block coordinates (B column, c entry).
inline bool tie_break_less(const IntMatrix& A, std::size_t s, std::size_t n, std::size_t j1, std::size_t j2) {
  for (std::size_t i = s; i < n; ++i)
    if (A(i, j1) != A(i, j2)) return A(i, j1) < A(i, j2);
  return A(n, j1) < A(n, j2);
}

}  // namespace detail

/// Runs the pipeline on a primitive simplex system whose rows are taken in
/// `order` (a permutation of 0..n, the last entry being the non-base row).
/// With gather == false, returns nullopt unless the HNF of the base rows in
/// this order is already in block form.
inline std::optional<NormalizationResult> normalize_ordered(const InequalitySystem& prim,
                                                            const std::vector<std::size_t>& order,
                                                            bool gather = true) {
  const std::size_t n = prim.n;
  detail::Workspace w{n, prim.A.select_rows(order), IntVector(n + 1), AffineUnimodularMap::identity(n), order};
  for (std::size_t i = 0; i <= n; ++i) w.b[i] = prim.b[order[i]];

  w.hnf_base();
  auto split = w.block_split();
  if (!split) {
    if (!gather) return std::nullopt;
    std::vector<std::size_t> units, others;
    for (std::size_t i = 0; i < n; ++i) (w.A(i, i) == 1 ? units : others).push_back(i);
    units.insert(units.end(), others.begin(), others.end());
    w.reorder_base_rows(units);
    w.hnf_base();
    split = w.block_split();
    if (!split) throw InvariantViolation("normalize: unit rows did not gather into a leading block");
  }
  const std::size_t s = *split;

  std::vector<std::size_t> sigma(s);
  std::iota(sigma.begin(), sigma.end(), 0);
  std::stable_sort(sigma.begin(), sigma.end(), [&](std::size_t a, std::size_t b) {
    return detail::tie_break_less(w.A, s, n, a, b);
  });
  if (!std::is_sorted(sigma.begin(), sigma.end())) {
    IntMatrix v = IntMatrix::identity(n);
    for (std::size_t p = 0; p < s; ++p) {
      v(p, p) = 0;
    }
    for (std::size_t p = 0; p < s; ++p) v(sigma[p], p) = 1;
    w.transform_columns(v);
    std::vector<std::size_t> order_rows(n);
    std::iota(order_rows.begin(), order_rows.end(), 0);
    for (std::size_t p = 0; p < s; ++p) order_rows[p] = sigma[p];
    w.reorder_base_rows(order_rows);
  }

  IntMatrix H(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) H(i, j) = w.A(i, j);
  auto red = reduce_rhs(H, std::span<const Integer>(w.b.data(), n));
  w.translate(red.x0);

  NormalizationResult out;
  auto& ns = out.system;
  ns.n = n;
  ns.s = s;
  ns.k = n - s;
  ns.H = std::move(H);
  ns.h.assign(w.b.begin(), w.b.begin() + static_cast<std::ptrdiff_t>(n));
  ns.c = w.A.row_vector(n);
  ns.c0 = w.b[n];
  ns.delta = det(ns.H);
  out.map = std::move(w.map);
  out.row_perm = std::move(w.perm);
  return out;
}

struct NormalizedCheck {
  bool ok = true;
  std::vector<std::string> violations;
  void fail(std::string what) {
    ok = false;
    violations.push_back(std::move(what));
  }
};

/// Checks every normalization condition, the (B column, c entry) ordering and
/// that the system describes a simplex. Conditions are reported by number:
/// 1 HNF and det(H) == Delta, 2 block shape, 3 reduced rhs, 4 primitive
/// rows, 5 c in paral(-H^T), 6 max-norm bound.
inline NormalizedCheck validate_normalized(const NormalizedSystem& ns) {
  NormalizedCheck chk;
  const std::size_t n = ns.n;
  if (ns.H.rows() != n || ns.H.cols() != n || ns.h.size() != n || ns.c.size() != n || ns.s + ns.k != n) {
    chk.fail("shape");
    return chk;
  }
  if (!is_hnf(ns.H)) {
    chk.fail("H is not in Hermite normal form");
    return chk;
  }
  const Integer dH = det(ns.H);
  if (dH != ns.delta) chk.fail("det(H) != delta");
  const InequalitySystem sys = ns.system();
  const auto minors = max_minors(sys.A);
  if (max_abs_minor(minors) != dH) chk.fail("Delta of the full matrix differs from det(H)");

  for (std::size_t i = 0; i < n; ++i) {
    const bool unit = i < ns.s;
    if (unit) {
      for (std::size_t j = 0; j < n; ++j)
        if (ns.H(i, j) != (i == j ? 1 : 0)) {
          chk.fail("leading block is not the identity");
          break;
        }
    } else if (ns.H(i, i) < 2) {
      chk.fail("diagonal of T has an entry below 2");
    }
  }
  if (ns.k > 0 && (Integer(1) << ns.k) > ns.delta) chk.fail("k exceeds log2(delta)");
  for (std::size_t j = 0; j + 1 < ns.s; ++j)
    if (detail::tie_break_less(sys.A, ns.s, n, j + 1, j)) {
      chk.fail("identity-block coordinates not sorted by (B column, c entry)");
      break;
    }

  for (std::size_t i = 0; i < n; ++i)
    if (ns.h[i] < 0 || ns.h[i] >= ns.H(i, i)) {
      chk.fail("h_" + std::to_string(i) + " outside [0, H_ii)");
      break;
    }

  for (std::size_t i = 0; i <= n; ++i) {
    Integer g = sys.b[i];
    for (const auto& v : sys.A.row(i)) g = gcd(g, v);
    if (g != 1) {
      chk.fail("row " + std::to_string(i) + " is not primitive");
      break;
    }
  }

  // t = -H^{-T} c; scaled by det(H) it is w = -adj(H)^T c.
  if (dH > 0) {
    const IntMatrix adjT = adjugate(ns.H).transpose();
    IntVector wv = adjT * ns.c;
    for (auto& v : wv) v = -v;
    for (std::size_t i = 0; i < n; ++i)
      if (wv[i] <= 0 || wv[i] > dH) {
        chk.fail("c is not in paral(-H^T)");
        break;
      }
    // The facet c^T x <= c0 must cut the cone strictly beyond its apex.
    Integer cv_scaled = dot(ns.c, adjugate(ns.H) * ns.h);  // c^T v * det(H)
    if (!(cv_scaled < ns.c0 * dH)) chk.fail("not a simplex: c0 <= c^T v");
  }

  if (sys.A.max_abs() > ns.delta) chk.fail("max-norm exceeds delta");
  return chk;
}

/// Normalization of `sys` with respect to the base `base` (row indices,
/// any order; used ascending). The base must attain Delta of the
/// primitivized system.
inline NormalizationResult normalize(const InequalitySystem& sys, std::vector<std::size_t> base) {
  const InequalitySystem prim = primitivize(sys);
  const SimplexMeta meta = validate_simplex(prim);
  std::sort(base.begin(), base.end());
  if (base.size() != sys.n || std::adjacent_find(base.begin(), base.end()) != base.end() || base.back() > sys.n)
    throw PreconditionError("normalize: base must list n distinct row indices");
  if (std::find(meta.max_det_bases.begin(), meta.max_det_bases.end(), base) == meta.max_det_bases.end())
    throw PreconditionError("normalize: base minor is not maximal");
  std::vector<std::size_t> order = base;
  for (std::size_t i = 0; i <= sys.n; ++i)
    if (!std::binary_search(base.begin(), base.end(), i)) order.push_back(i);
  auto res = normalize_ordered(prim, order, true);
  const auto chk = validate_normalized(res->system);
  if (!chk.ok) throw InvariantViolation("normalize produced an invalid system: " + chk.violations.front());
  return std::move(*res);
}

/// Normalization with the lexicographically least maximal base.
inline NormalizationResult normalize(const InequalitySystem& sys) {
  const SimplexMeta meta = validate_simplex(primitivize(sys));
  return normalize(sys, meta.max_det_bases.front());
}

/// Sort key of a normalized system: (n, delta, row-major entries of (A | b)).
struct CanonicalKey {
  std::size_t n = 0;
  Integer delta;
  std::vector<Integer> entries;  // (n+1) * (n+1)

  std::string text() const {
    std::ostringstream os;
    os << n << ';' << delta << ';';
    for (std::size_t i = 0; i < entries.size(); ++i) os << (i ? "," : "") << entries[i];
    return os.str();
  }

  static CanonicalKey parse(const std::string& text) {
    CanonicalKey key;
    const auto p1 = text.find(';');
    const auto p2 = p1 == std::string::npos ? p1 : text.find(';', p1 + 1);
    if (p2 == std::string::npos) throw std::invalid_argument("malformed canonical key: " + text);
    key.n = std::stoul(text.substr(0, p1));
    key.delta = parse_integer(text.substr(p1 + 1, p2 - p1 - 1));
    std::stringstream ss(text.substr(p2 + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) key.entries.push_back(parse_integer(tok));
    if (key.entries.size() != (key.n + 1) * (key.n + 1))
      throw std::invalid_argument("canonical key has the wrong number of entries: " + text);
    return key;
  }

  // Rebuilds the normalized system encoded by the key.
  NormalizedSystem system() const {
    NormalizedSystem ns;
    ns.n = n;
    ns.delta = delta;
    ns.H = IntMatrix(n, n);
    ns.h.resize(n);
    ns.c.resize(n);
    const std::size_t w = n + 1;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) ns.H(i, j) = entries[i * w + j];
      ns.h[i] = entries[i * w + n];
    }
    for (std::size_t j = 0; j < n; ++j) ns.c[j] = entries[n * w + j];
    ns.c0 = entries[n * w + n];
    while (ns.s < n && ns.H(ns.s, ns.s) == 1) ++ns.s;
    ns.k = n - ns.s;
    return ns;
  }

  friend bool operator==(const CanonicalKey&, const CanonicalKey&) = default;
  friend bool operator<(const CanonicalKey& a, const CanonicalKey& b) {
    if (a.n != b.n) return a.n < b.n;
    if (a.delta != b.delta) return a.delta < b.delta;
    return std::lexicographical_compare(a.entries.begin(), a.entries.end(), b.entries.begin(), b.entries.end());
  }
};

inline CanonicalKey canonical_key(const NormalizedSystem& ns) {
  CanonicalKey key{ns.n, ns.delta, {}};
  const InequalitySystem sys = ns.system();
  key.entries.reserve((ns.n + 1) * (ns.n + 1));
  for (std::size_t i = 0; i <= ns.n; ++i) {
    for (const auto& v : sys.A.row(i)) key.entries.push_back(v);
    key.entries.push_back(sys.b[i]);
  }
  return key;
}

}  // namespace delta_simplex

#pragma once

// Generation of every normalized system with a given (Delta, n) whose simplex
// is empty (no integer points) or an empty lattice simplex (integer
// vertices and nothing else). The walk is
//
//   divisor tuple -> T -> B -> h -> c -> c0
//
// and the c0 range comes from the corner problems of corner_ilp.hpp. The
// output may contain several records per unimodular class.

#include "delta_simplex/corner_ilp.hpp"
#include "delta_simplex/normal_form.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

namespace delta_simplex {

enum class Family { kEmpty, kLatticeEmpty };

inline const char* family_name(Family f) { return f == Family::kEmpty ? "empty" : "lattice_empty"; }

using DivisorTuple = std::vector<Integer>;

/// Ordered tuples of integers >= 2 with product delta (the empty tuple iff
/// delta == 1), sorted by length and then lexicographically.
inline std::vector<DivisorTuple> divisor_tuples(const Integer& delta) {
  if (delta <= 0) throw std::domain_error("divisor_tuples: delta must be positive");
  std::vector<DivisorTuple> out;
  DivisorTuple cur;
  std::function<void(const Integer&)> rec = [&](const Integer& rest) {
    if (rest == 1) {
      out.push_back(cur);
      return;
    }
    for (Integer d = 2; d <= rest; ++d) {
      if (rest % d != 0) continue;
      cur.push_back(d);
      rec(rest / d);
      cur.pop_back();
    }
  };
  rec(delta);
  std::sort(out.begin(), out.end(), [](const DivisorTuple& a, const DivisorTuple& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

/// H = [[I_s, 0], [B, T]] together with the indices that produced it.
struct HBlock {
  std::size_t s = 0;
  std::size_t k = 0;
  IntMatrix T;
  IntMatrix B;
  IntMatrix H;
  std::size_t tuple_index = 0;
  std::size_t T_index = 0;
  std::size_t B_index = 0;
  DivisorTuple tuple;
};

namespace detail {

// Odometer over the integer box prod [0, bound_i); returns false after the last point.
inline bool next_in_box(IntVector& x, const IntVector& bound) {
  for (std::size_t i = x.size(); i-- > 0;) {
    if (++x[i] < bound[i]) return true;
    x[i] = 0;
  }
  return false;
}

// All x in Z^k with 0 <= x_i < d_i, lexicographic.
inline std::vector<IntVector> box_points(const IntVector& bound) {
  std::vector<IntVector> pts;
  IntVector x(bound.size());
  do pts.push_back(x);
  while (next_in_box(x, bound));
  return pts;
}

}  // namespace detail

/// Every block matrix H for (delta, n): T lower triangular with a divisor
/// tuple on its diagonal and reduced entries below it; B with columns a
/// non-decreasing (lexicographic) sequence of points of prod [0, T_ii).
inline std::vector<HBlock> enumerate_H(const Integer& delta, std::size_t n) {
  if (n == 0) throw std::domain_error("enumerate_H: n must be positive");
  std::vector<HBlock> out;
  const auto tuples = divisor_tuples(delta);
  for (std::size_t ti = 0; ti < tuples.size(); ++ti) {
    const DivisorTuple& d = tuples[ti];
    const std::size_t k = d.size();
    if (k > n) continue;
    const std::size_t s = n - k;

    // Free below-diagonal entries of T, row by row.
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    IntVector slot_bound;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < i; ++j) {
        slots.emplace_back(i, j);
        slot_bound.push_back(d[i]);
      }
    const std::vector<IntVector> col_values = detail::box_points(IntVector(d.begin(), d.end()));

    IntVector tv(slots.size());
    std::size_t T_index = 0;
    do {
      IntMatrix T(k, k);
      for (std::size_t i = 0; i < k; ++i) T(i, i) = d[i];
      for (std::size_t p = 0; p < slots.size(); ++p) T(slots[p].first, slots[p].second) = tv[p];

      // Multisets of size s over col_values as non-decreasing index sequences.
      std::vector<std::size_t> pick(s, 0);
      std::size_t B_index = 0;
      while (true) {
        HBlock blk;
        blk.s = s;
        blk.k = k;
        blk.T = T;
        blk.B = IntMatrix(k, s);
        for (std::size_t j = 0; j < s; ++j)
          for (std::size_t i = 0; i < k; ++i) blk.B(i, j) = col_values[pick[j]][i];
        blk.H = IntMatrix::identity(n);
        for (std::size_t i = 0; i < k; ++i) {
          for (std::size_t j = 0; j < s; ++j) blk.H(s + i, j) = blk.B(i, j);
          for (std::size_t j = 0; j < k; ++j) blk.H(s + i, s + j) = T(i, j);
        }
        blk.tuple_index = ti;
        blk.T_index = T_index;
        blk.B_index = B_index++;
        blk.tuple = d;
        out.push_back(std::move(blk));

        std::size_t p = s;
        while (p > 0 && pick[p - 1] + 1 == col_values.size()) --p;
        if (p == 0) break;
        ++pick[p - 1];
        for (std::size_t q = p; q < s; ++q) pick[q] = pick[p - 1];
      }
      ++T_index;
    } while (detail::next_in_box(tv, slot_bound));
  }
  return out;
}

/// Reduced right-hand sides for H: zero on the identity block and
/// 0 <= h_i < T_ii below it; det(H) vectors in lexicographic order.
inline std::vector<IntVector> enumerate_h(const IntMatrix& H) {
  if (!is_hnf(H)) throw PreconditionError("enumerate_h: H is not in HNF");
  IntVector bound(H.rows());
  for (std::size_t i = 0; i < H.rows(); ++i) bound[i] = H(i, i);
  return detail::box_points(bound);
}

/// The det(H) integer vectors c with t = -H^{-T} c in (0, 1]^n. H^T is upper
/// triangular, so t is fixed from the last coordinate backwards; at each
/// level exactly H_jj integer values of c_j keep t_j in (0, 1].
inline std::vector<IntVector> enumerate_c(const IntMatrix& H) {
  if (!is_hnf(H)) throw PreconditionError("enumerate_c: H is not in HNF");
  const std::size_t n = H.rows();
  std::vector<IntVector> out;
  IntVector c(n);
  std::vector<Rational> t(n);
  std::function<void(std::size_t)> rec = [&](std::size_t j) {
    // -c_j = H_jj t_j + sum_{i > j} H_ij t_i =: H_jj t_j + r
    Rational r = 0;
    for (std::size_t i = j + 1; i < n; ++i) r += Rational(H(i, j)) * t[i];
    const Integer lo = floor(r) + 1;
    for (Integer m = lo; m < lo + H(j, j); ++m) {
      c[j] = -m;
      t[j] = (Rational(m) - r) / Rational(H(j, j));
      if (j == 0)
        out.push_back(c);
      else
        rec(j - 1);
    }
  };
  if (n > 0) rec(n - 1);
  return out;
}

struct EmptyRange {
  Integer l_star;
  Integer f_star;  // c0 ranges over [l_star, f_star - 1]
};
struct LatticeCandidate {
  Integer f_star;
};
using C0Decision = std::variant<EmptyRange, LatticeCandidate>;

/// With v = H^{-1} h: if v is not integral, the c0 giving empty simplices
/// form [l*, f* - 1], l* the least integer strictly above c^T v and f* the
/// corner minimum; if v is integral (h == 0) the only candidate is the
/// minimum of c^T x over the cone without its apex.
inline C0Decision c0_candidates(const CornerSolver& solver, const ShortestPathTree& tree, const IntVector& h,
                                const IntVector& c) {
  const bool apex_integral = std::all_of(h.begin(), h.end(), [](const Integer& v) { return v == 0; });
  if (apex_integral) return LatticeCandidate{solver.minimum_excluding_vertex(tree, c).f_star};
  const Integer& delta = solver.delta();
  const Integer cv_scaled = dot(c, solver.adj() * h);  // delta * c^T v
  EmptyRange r;
  r.l_star = cv_scaled % delta == 0 ? Integer(cv_scaled / delta + 1) : -floor_div(-cv_scaled, delta);
  r.f_star = solver.minimum(tree, c, h).f_star;
  return r;
}

inline C0Decision c0_candidates(const IntMatrix& H, const IntVector& h, const IntVector& c) {
  CornerSolver solver(H);
  return c0_candidates(solver, solver.shortest_paths(c), h, c);
}

struct Provenance {
  DivisorTuple tuple;
  std::size_t tuple_index = 0;
  std::size_t T_index = 0;
  std::size_t B_index = 0;
  std::size_t h_index = 0;
  std::size_t c_index = 0;
  Integer c0;
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

inline std::string to_string(const Provenance& p) {
  std::string s = "tuple=(";
  for (std::size_t i = 0; i < p.tuple.size(); ++i) s += (i ? "," : "") + p.tuple[i].str();
  s += ") T#" + std::to_string(p.T_index) + " B#" + std::to_string(p.B_index) + " h#" +
       std::to_string(p.h_index) + " c#" + std::to_string(p.c_index) + " c0=" + p.c0.str();
  return s;
}

struct CandidateRecord {
  NormalizedSystem system;
  Family family = Family::kEmpty;
  Provenance provenance;
  CanonicalKey key;
};

struct SkipCounts {
  std::size_t gcd = 0;           // a row of (H | h) or (c | c0) is not primitive
  std::size_t tie_break = 0;     // (B column, c entry) pairs out of order
  std::size_t validator = 0;     // normalization check failed
  std::size_t lattice_vertex = 0;  // S(f*) has a non-integral vertex
  std::size_t lattice_extra = 0;   // S(f*) has integer points besides its vertices
  std::size_t empty_c0_range = 0;  // l* >= f*

  SkipCounts& operator+=(const SkipCounts& o) {
    gcd += o.gcd;
    tie_break += o.tie_break;
    validator += o.validator;
    lattice_vertex += o.lattice_vertex;
    lattice_extra += o.lattice_extra;
    empty_c0_range += o.empty_c0_range;
    return *this;
  }
};

struct Families {
  std::vector<CandidateRecord> empty;
  std::vector<CandidateRecord> lattice;
  SkipCounts skipped;
};

namespace detail {

inline bool row_is_primitive(std::span<const Integer> a, const Integer& a0) {
  Integer g = a0;
  for (const auto& v : a) g = gcd(g, v);
  return g == 1;
}

inline Families enumerate_block(const HBlock& blk, const Integer& delta, std::size_t n) {
  Families out;
  const CornerSolver solver(blk.H);
  const auto hs = enumerate_h(blk.H);
  const auto cs = enumerate_c(blk.H);
  std::vector<ShortestPathTree> trees;
  trees.reserve(cs.size());
  for (const auto& c : cs) trees.push_back(solver.shortest_paths(c));

  // Identity-block coordinates whose B columns coincide need c_j <= c_{j+1}.
  std::vector<std::size_t> equal_next;
  for (std::size_t j = 0; j + 1 < blk.s; ++j) {
    bool same = true;
    for (std::size_t i = 0; i < blk.k && same; ++i) same = blk.B(i, j) == blk.B(i, j + 1);
    if (same) equal_next.push_back(j);
  }

  for (std::size_t hi = 0; hi < hs.size(); ++hi) {
    const IntVector& h = hs[hi];
    bool primitive = true;
    for (std::size_t i = blk.s; i < n && primitive; ++i) primitive = row_is_primitive(blk.H.row(i), h[i]);
    if (!primitive) {
      out.skipped.gcd += cs.size();
      continue;
    }
    for (std::size_t ci = 0; ci < cs.size(); ++ci) {
      const IntVector& c = cs[ci];
      if (std::any_of(equal_next.begin(), equal_next.end(), [&](std::size_t j) { return c[j + 1] < c[j]; })) {
        ++out.skipped.tie_break;
        continue;
      }
      auto make = [&](const Integer& c0) {
        CandidateRecord rec;
        rec.system = NormalizedSystem{n, blk.s, blk.k, blk.H, h, c, c0, delta};
        rec.provenance = Provenance{blk.tuple, blk.tuple_index, blk.T_index, blk.B_index, hi, ci, c0};
        return rec;
      };
      const C0Decision dec = c0_candidates(solver, trees[ci], h, c);
      if (const auto* range = std::get_if<EmptyRange>(&dec)) {
        if (range->l_star >= range->f_star) ++out.skipped.empty_c0_range;
        for (Integer c0 = range->l_star; c0 < range->f_star; ++c0) {
          if (!row_is_primitive(c, c0)) {
            ++out.skipped.gcd;
            continue;
          }
          CandidateRecord rec = make(c0);
          if (!validate_normalized(rec.system).ok) {
            ++out.skipped.validator;
            continue;
          }
          rec.family = Family::kEmpty;
          rec.key = canonical_key(rec.system);
          out.empty.push_back(std::move(rec));
        }
      } else {
        const Integer f = std::get<LatticeCandidate>(dec).f_star;
        if (!row_is_primitive(c, f)) {
          ++out.skipped.gcd;
          continue;
        }
        CandidateRecord rec = make(f);
        if (!validate_normalized(rec.system).ok) {
          ++out.skipped.validator;
          continue;
        }
        const SimplexMeta meta = validate_simplex(rec.system.system());
        if (!std::all_of(meta.vertices.begin(), meta.vertices.end(),
                         [](const RationalVector& v) { return is_integral(v); })) {
          ++out.skipped.lattice_vertex;
          continue;
        }
        // Integer points other than the apex all lie on c^T x == f; the n
        // facet vertices are among them.
        if (solver.count_level_points(h, c, f, n + 1) != n) {
          ++out.skipped.lattice_extra;
          continue;
        }
        rec.family = Family::kLatticeEmpty;
        rec.key = canonical_key(rec.system);
        out.lattice.push_back(std::move(rec));
      }
    }
  }
  return out;
}

}  // namespace detail

/// Both families for (delta, n), before deduplication. Blocks are spread
/// over `jobs` threads; the result does not depend on `jobs`.
inline Families enumerate_families(const Integer& delta, std::size_t n, std::size_t jobs = 1) {
  if (delta < 1 || n < 1) throw std::domain_error("enumerate_families: need delta >= 1 and n >= 1");
  const auto blocks = enumerate_H(delta, n);
  std::vector<Families> parts(blocks.size());
  jobs = std::max<std::size_t>(1, std::min(jobs, blocks.size()));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(jobs);
  auto worker = [&](std::size_t w) {
    try {
      for (std::size_t i; (i = next.fetch_add(1)) < blocks.size();) parts[i] = detail::enumerate_block(blocks[i], delta, n);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < jobs; ++w) pool.emplace_back(worker, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  Families all;
  for (auto& p : parts) {
    std::move(p.empty.begin(), p.empty.end(), std::back_inserter(all.empty));
    std::move(p.lattice.begin(), p.lattice.end(), std::back_inserter(all.lattice));
    all.skipped += p.skipped;
  }
  return all;
}

}  // namespace delta_simplex

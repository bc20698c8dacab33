#pragma once

// min { c^T x : H x <= h, x in Z^n } over a simplicial cone, solved as a
// shortest-path problem on the finite group Z^n / H Z^n.
//
// With y = h - H x >= 0 and t = -H^{-T} c the objective is c^T v + t^T y,
// v = H^{-1} h, and x is integral iff y = h (mod H Z^n). Scaling by
// Delta = det H gives integer weights w = -adj(H)^T c, each in [1, Delta]
// when c lies in paral(-H^T). Dijkstra over the Delta residues from 0 with
// edges r -> r + e_i of weight w_i then yields
//
//     Delta * f* = c^T adj(H) h + dist(class(h)).

#include "delta_simplex/exact_linalg.hpp"
#include "delta_simplex/normal_form.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <vector>

namespace delta_simplex {

/// Residue of z modulo the lattice generated by the columns of H:
/// the unique r = z (mod H Z^n) with 0 <= r_i < H_ii.
inline IntVector reduce_residue(const IntMatrix& H, const IntVector& z) { return reduce_rhs(H, z).h; }

/// Elements of Z^n / H Z^n as reduced residue vectors, ids in mixed radix
/// (coordinate 0 least significant).
class GroupTable {
 public:
  explicit GroupTable(IntMatrix H) : H_(std::move(H)) {
    if (!is_hnf(H_)) throw PreconditionError("GroupTable: H is not a square HNF matrix");
    const std::size_t n = H_.rows();
    radix_.resize(n);
    std::size_t size = 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (H_(i, i) > Integer(std::numeric_limits<std::uint32_t>::max()))
        throw PreconditionError("GroupTable: group too large to tabulate");
      radix_[i] = H_(i, i).convert_to<std::size_t>();
      size *= radix_[i];
      if (size > (std::size_t{1} << 32)) throw PreconditionError("GroupTable: group too large to tabulate");
    }
    size_ = size;
    step_.resize(size_ * n);
    for (std::size_t id = 0; id < size_; ++id) {
      IntVector r = element(id);
      for (std::size_t i = 0; i < n; ++i) {
        IntVector z = r;
        z[i] += 1;
        step_[id * n + i] = index(reduce_residue(H_, z));
      }
    }
  }

  const IntMatrix& H() const { return H_; }
  std::size_t dim() const { return H_.rows(); }
  std::size_t size() const { return size_; }

  IntVector reduce(const IntVector& z) const { return reduce_residue(H_, z); }

  // Id of an already reduced residue.
  std::size_t index(const IntVector& r) const {
    std::size_t id = 0;
    for (std::size_t i = dim(); i-- > 0;) {
      if (r[i] < 0 || r[i] >= H_(i, i)) throw PreconditionError("GroupTable::index: residue not reduced");
      id = id * radix_[i] + r[i].convert_to<std::size_t>();
    }
    return id;
  }
  std::size_t class_of(const IntVector& z) const { return index(reduce(z)); }

  IntVector element(std::size_t id) const {
    IntVector r(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
      r[i] = id % radix_[i];
      id /= radix_[i];
    }
    return r;
  }

  // reduce(element(id) + e_coord)
  std::size_t step(std::size_t id, std::size_t coord) const { return step_[id * dim() + coord]; }

 private:
  IntMatrix H_;
  std::vector<std::size_t> radix_;
  std::size_t size_ = 0;
  std::vector<std::size_t> step_;
};

struct CornerSolution {
  Integer f_star;
  IntVector witness_x;
  bool infeasible = false;
};

/// Shortest-path tree over the group for one objective c.
struct ShortestPathTree {
  IntVector weights;  // w = -adj(H)^T c
  std::vector<Integer> dist;
  std::vector<std::size_t> pred_node;
  std::vector<std::size_t> pred_coord;
};

/// Corner problems for a fixed H; caches the group table and adjugate so that
/// many (h, c) pairs can be solved cheaply.
class CornerSolver {
 public:
  explicit CornerSolver(IntMatrix H)
      : table_(std::move(H)), adj_(adjugate(table_.H())), delta_(det(table_.H())) {}

  const GroupTable& table() const { return table_; }
  const Integer& delta() const { return delta_; }
  const IntMatrix& adj() const { return adj_; }

  IntVector weights(const IntVector& c) const {
    if (c.size() != table_.dim()) throw ShapeError("corner: objective has wrong length");
    IntVector w(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      for (std::size_t j = 0; j < c.size(); ++j) w[i] -= adj_(j, i) * c[j];
      if (w[i] < 1 || w[i] > delta_) throw PreconditionError("corner: c is not in paral(-H^T)");
    }
    return w;
  }

  // Dijkstra from residue 0; ties on distance go to the smaller element id.
  ShortestPathTree shortest_paths(const IntVector& c) const {
    ShortestPathTree t;
    t.weights = weights(c);
    const std::size_t N = table_.size(), n = table_.dim();
    constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
    t.dist.assign(N, Integer(-1));
    t.pred_node.assign(N, kNone);
    t.pred_coord.assign(N, kNone);
    std::vector<bool> done(N, false);
    using Item = std::pair<Integer, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    t.dist[0] = 0;
    pq.emplace(Integer(0), 0);
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (done[u]) continue;
      done[u] = true;
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t v = table_.step(u, i);
        Integer nd = d + t.weights[i];
        if (t.dist[v] < 0 || nd < t.dist[v]) {
          t.dist[v] = nd;
          t.pred_node[v] = u;
          t.pred_coord[v] = i;
          pq.emplace(std::move(nd), v);
        }
      }
    }
    return t;
  }

  CornerSolution minimum(const ShortestPathTree& tree, const IntVector& c, const IntVector& h) const {
    const std::size_t n = table_.dim();
    if (h.size() != n) throw ShapeError("corner: rhs has wrong length");
    const std::size_t target = table_.class_of(h);
    const Integer base = dot(c, adj_ * h);
    const Integer scaled = base + tree.dist[target];
    if (scaled % delta_ != 0) throw InvariantViolation("corner: optimal value is not integral");

    IntVector y(n);
    for (std::size_t u = target; u != 0; u = tree.pred_node[u]) y[tree.pred_coord[u]] += 1;
    CornerSolution sol;
    sol.f_star = scaled / delta_;
    sol.witness_x = solve_lower_triangular(h - y);
    const IntVector hx = table_.H() * sol.witness_x;
    for (std::size_t i = 0; i < n; ++i)
      if (hx[i] > h[i]) throw InvariantViolation("corner: witness violates H x <= h");
    if (dot(c, sol.witness_x) != sol.f_star) throw InvariantViolation("corner: witness objective mismatch");
    return sol;
  }

  CornerSolution minimum(const IntVector& h, const IntVector& c) const {
    return minimum(shortest_paths(c), c, h);
  }

  /// min { c^T x : H x <= 0, x != 0 } as the best of the n problems H x <= -e_j.
  CornerSolution minimum_excluding_vertex(const ShortestPathTree& tree, const IntVector& c) const {
    const std::size_t n = table_.dim();
    CornerSolution best;
    for (std::size_t j = 0; j < n; ++j) {
      IntVector h(n);
      h[j] = -1;
      CornerSolution sol = minimum(tree, c, h);
      if (j == 0 || sol.f_star < best.f_star) best = std::move(sol);
    }
    return best;
  }

  CornerSolution minimum_excluding_vertex(const IntVector& c) const {
    return minimum_excluding_vertex(shortest_paths(c), c);
  }

  /// Number of integer x with H x <= h and c^T x == value, saturated at `cap`.
  /// Counts the y >= 0 with y = h (mod H Z^n) and w^T y == Delta*value - c^T adj(H) h
  /// by dynamic programming over (coordinate, residue, weight).
  std::size_t count_level_points(const IntVector& h, const IntVector& c, const Integer& value,
                                 std::size_t cap = std::numeric_limits<std::size_t>::max()) const {
    const IntVector w = weights(c);
    const Integer target_big = delta_ * value - dot(c, adj_ * h);
    if (target_big < 0) return 0;
    if (target_big > Integer(1) << 24) throw OracleScaleError("count_level_points: level too far from the apex");
    const std::size_t W = target_big.convert_to<std::size_t>();
    const std::size_t N = table_.size(), n = table_.dim();
    auto add = [cap](std::size_t a, std::size_t b) {
      const std::size_t s = a + b;
      return (s < a || s > cap) ? cap : s;
    };
    std::vector<std::size_t> dp(N * (W + 1), 0), next;
    dp[0] = 1;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t wi = w[i].convert_to<std::size_t>();
      next.assign(N * (W + 1), 0);
      for (std::size_t r = 0; r < N; ++r)
        for (std::size_t used = 0; used <= W; ++used) {
          const std::size_t cnt = dp[r * (W + 1) + used];
          if (cnt == 0) continue;
          std::size_t rr = r;
          for (std::size_t u = used; u <= W; u += wi) {
            next[rr * (W + 1) + u] = add(next[rr * (W + 1) + u], cnt);
            rr = table_.step(rr, i);
          }
        }
      dp.swap(next);
    }
    return dp[table_.class_of(h) * (W + 1) + W];
  }

 private:
  // Solves H x = rhs exactly; throws if the solution is not integral.
  IntVector solve_lower_triangular(const IntVector& rhs) const {
    const IntMatrix& H = table_.H();
    const std::size_t n = H.rows();
    IntVector x(n);
    for (std::size_t i = 0; i < n; ++i) {
      Integer s = rhs[i];
      for (std::size_t j = 0; j < i; ++j) s -= H(i, j) * x[j];
      if (s % H(i, i) != 0) throw InvariantViolation("corner: reconstructed point is not integral");
      x[i] = s / H(i, i);
    }
    return x;
  }

  GroupTable table_;
  IntMatrix adj_;
  Integer delta_;
};

inline CornerSolution corner_minimum(const IntMatrix& H, const IntVector& h, const IntVector& c) {
  return CornerSolver(H).minimum(h, c);
}

inline CornerSolution corner_minimum_excluding_vertex(const IntMatrix& H, const IntVector& h, const IntVector& c) {
  for (const auto& v : h)
    if (v != 0) throw PreconditionError("corner_minimum_excluding_vertex: rhs must be zero");
  return CornerSolver(H).minimum_excluding_vertex(c);
}

inline CornerSolution corner_minimum_excluding_vertex(const IntMatrix& H, const IntVector& c) {
  return corner_minimum_excluding_vertex(H, IntVector(H.rows()), c);
}

}  // namespace delta_simplex

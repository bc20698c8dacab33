#pragma once

// Unimodular equivalence of simplices through their complete sets of
// normalized forms, and deduplication of enumerated families.
//
// Every normalized form of a simplex comes from some maximal base and some
// ordering of its rows in which the rows that end up in the T block come
// last. Only the T-block rows and their order matter (the identity-block
// order is fixed afterwards by the (B column, c entry) sort), so it suffices
// to try, for each k <= log2(Delta), every ordered k-subset of the base as the
// trailing rows with the remaining rows in ascending order in front.

#include "delta_simplex/enumeration.hpp"
#include "delta_simplex/normal_form.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

namespace delta_simplex {

/// Row orders of 0..n-1 that put an ordered k-subset last and the other rows
/// first in ascending order; n! / (n-k)! of them, lexicographic in the
/// trailing tuple.
inline std::vector<std::vector<std::size_t>> reduced_permutations(std::size_t n, std::size_t k) {
  if (k > n) throw std::domain_error("reduced_permutations: k > n");
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> tail;
  std::vector<bool> used(n, false);
  std::function<void()> rec = [&]() {
    if (tail.size() == k) {
      std::vector<std::size_t> perm;
      for (std::size_t i = 0; i < n; ++i)
        if (!used[i]) perm.push_back(i);
      perm.insert(perm.end(), tail.begin(), tail.end());
      out.push_back(std::move(perm));
      return;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      used[i] = true;
      tail.push_back(i);
      rec();
      tail.pop_back();
      used[i] = false;
    }
  };
  rec();
  return out;
}

/// Largest k with 2^k <= delta.
inline std::size_t floor_log2(const Integer& delta) {
  if (delta < 1) throw std::domain_error("floor_log2: delta must be positive");
  return boost::multiprecision::msb(delta);
}

/// Orderings of the base rows of a normalized system that move k = ns.k rows
/// behind the others.
inline std::vector<std::vector<std::size_t>> reduced_permutations(const NormalizedSystem& ns) {
  return reduced_permutations(ns.n, ns.k);
}

struct EquivalentForm {
  NormalizedSystem system;
  // apply_map(primitivize(source), map) is system.system() up to row order.
  AffineUnimodularMap map;
  std::vector<std::size_t> row_perm;
};

/// Every normalized system unimodularly equivalent to `sys`, keyed (and
/// therefore ordered) by canonical key.
struct EquivalentSet {
  InequalitySystem source;
  std::map<CanonicalKey, EquivalentForm> forms;

  const CanonicalKey& least_key() const { return forms.begin()->first; }
};

inline EquivalentSet equivalent_normalized_set(const InequalitySystem& sys) {
  EquivalentSet out{primitivize(sys), {}};
  const SimplexMeta meta = validate_simplex(out.source);
  const std::size_t n = sys.n;
  const std::size_t kmax = std::min(n, floor_log2(meta.delta));
  std::vector<std::vector<std::vector<std::size_t>>> perms;
  for (std::size_t k = 0; k <= kmax; ++k) perms.push_back(reduced_permutations(n, k));

  for (const auto& base : meta.max_det_bases) {
    std::size_t omitted = 0;
    while (omitted < base.size() && base[omitted] == omitted) ++omitted;
    for (const auto& group : perms)
      for (const auto& perm : group) {
        std::vector<std::size_t> order(n + 1);
        for (std::size_t i = 0; i < n; ++i) order[i] = base[perm[i]];
        order[n] = omitted;
        auto res = normalize_ordered(out.source, order, false);
        if (!res) continue;
        CanonicalKey key = canonical_key(res->system);
        if (out.forms.count(key)) continue;
        out.forms.emplace(std::move(key), EquivalentForm{std::move(res->system), std::move(res->map),
                                                         std::move(res->row_perm)});
      }
  }
  if (out.forms.empty()) throw InvariantViolation("equivalent_normalized_set: no normalized form found");
  return out;
}

struct EquivalenceVerdict {
  bool equivalent = false;
  // w with apply_map(T, w) describing the same simplex as S.
  std::optional<AffineUnimodularMap> witness;
  // For non-equivalent inputs: "dimension-mismatch", "delta-mismatch",
  // "minor-multiset-mismatch" or "search-exhausted".
  std::string certificate;
};

namespace detail {
inline std::vector<Integer> abs_minor_multiset(const SimplexMeta& meta) {
  std::vector<Integer> m;
  for (const auto& mm : meta.minors) m.push_back(abs(mm.minor));
  std::sort(m.begin(), m.end());
  return m;
}
}  // namespace detail

/// Decides whether S and T are unimodularly equivalent. Both inputs must be
/// simplices; equivalent verdicts always carry a verified witness.
inline EquivalenceVerdict check_equivalence(const InequalitySystem& S, const InequalitySystem& T) {
  EquivalenceVerdict v;
  const InequalitySystem ps = primitivize(S), pt = primitivize(T);
  const SimplexMeta ms = validate_simplex(ps), mt = validate_simplex(pt);
  if (ps.n != pt.n) {
    v.certificate = "dimension-mismatch";
    return v;
  }
  if (ms.delta != mt.delta) {
    v.certificate = "delta-mismatch";
    return v;
  }
  if (detail::abs_minor_multiset(ms) != detail::abs_minor_multiset(mt)) {
    v.certificate = "minor-multiset-mismatch";
    return v;
  }

  auto accept = [&](AffineUnimodularMap w) {
    if (!same_simplex(apply_map(T, w), S)) throw InvariantViolation("check_equivalence: witness failed verification");
    v.equivalent = true;
    v.witness = std::move(w);
    v.certificate.clear();
    return v;
  };
  if (same_simplex(S, T)) return accept(AffineUnimodularMap::identity(S.n));

  const NormalizationResult nt = normalize(pt);
  const EquivalentSet set = equivalent_normalized_set(ps);
  const auto it = set.forms.find(canonical_key(nt.system));
  if (it == set.forms.end()) {
    v.certificate = "search-exhausted";
    return v;
  }
  // x in N  <=>  it.map(x) in S  <=>  nt.map(x) in T, so T = nt.map(it.map^{-1}(S)).
  return accept(compose(nt.map, inverse(it->second.map)));
}

struct DedupResult {
  std::vector<CandidateRecord> survivors;  // ascending canonical key
  std::size_t input_count = 0;
};

/// Keeps one record per unimodular class: records are taken in ascending
/// key order and a record survives unless the equivalent set of an earlier
/// survivor contains it. With a complete enumeration each survivor carries
/// the least key of its class. Equivalent sets are computed in parallel
/// batches; the outcome does not depend on `jobs`.
inline DedupResult dedup_families(std::vector<CandidateRecord> records, std::size_t jobs = 1) {
  DedupResult out;
  out.input_count = records.size();
  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) { return a.key < b.key; });
  records.erase(std::unique(records.begin(), records.end(), [](const auto& a, const auto& b) { return a.key == b.key; }),
                records.end());

  std::set<CanonicalKey> covered;
  jobs = std::max<std::size_t>(1, jobs);
  const std::size_t batch = 4 * jobs;
  for (std::size_t start = 0; start < records.size();) {
    std::vector<std::size_t> idx;
    for (; start < records.size() && idx.size() < batch; ++start)
      if (!covered.count(records[start].key)) idx.push_back(start);
    std::vector<std::optional<EquivalentSet>> sets(idx.size());
    std::vector<std::exception_ptr> errors(idx.size());
    const std::size_t threads = std::min(jobs, idx.size());
    auto work = [&](std::size_t t) {
      for (std::size_t p = t; p < idx.size(); p += threads) {
        try {
          sets[p] = equivalent_normalized_set(records[idx[p]].system.system());
        } catch (...) {
          errors[p] = std::current_exception();
        }
      }
    };
    if (threads <= 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work, t);
      for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);

    // Sequential in key order, as if records were handled one at a time.
    for (std::size_t p = 0; p < idx.size(); ++p) {
      CandidateRecord& rec = records[idx[p]];
      if (covered.count(rec.key)) continue;
      for (const auto& entry : sets[p]->forms) covered.insert(entry.first);
      out.survivors.push_back(std::move(rec));
    }
  }
  return out;
}

}  // namespace delta_simplex

#pragma once

// JSON formats, JSONL atlas persistence, atlas construction, verification
// and statistics. Integers are written as JSON numbers when they fit in 64
// bits and as decimal strings otherwise; both are accepted on input.

#include "delta_simplex/corner_ilp.hpp"
#include "delta_simplex/enumeration.hpp"
#include "delta_simplex/equivalence.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace delta_simplex {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSystemFormat = "delta-simplex/system-v1";
inline constexpr const char* kNormalizedFormat = "delta-simplex/normalized-v1";
inline constexpr const char* kRecordFormat = "delta-simplex/atlas-record-v1";

struct FormatError : Error {
  using Error::Error;
};

// ---------------------------------------------------------------- scalars

inline Json to_json(const Integer& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return v.convert_to<std::int64_t>();
  return v.str();
}

inline Integer integer_from_json(const Json& j) {
  if (j.is_number_integer()) return j.is_number_unsigned() ? Integer(j.get<std::uint64_t>()) : Integer(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return parse_integer(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw FormatError(e.what());
    }
  }
  throw FormatError("expected an integer, got " + j.dump());
}

inline std::size_t size_from_json(const Json& j, const char* what) {
  const Integer v = integer_from_json(j);
  if (v < 0 || v > 1'000'000) throw FormatError(std::string("field '") + what + "' out of range");
  return v.convert_to<std::size_t>();
}

inline Json to_json(const IntVector& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

inline IntVector vector_from_json(const Json& j, std::size_t len, const char* what) {
  if (!j.is_array() || j.size() != len)
    throw FormatError(std::string("field '") + what + "' must be an array of length " + std::to_string(len));
  IntVector v;
  for (const auto& x : j) v.push_back(integer_from_json(x));
  return v;
}

inline Json to_json(const IntMatrix& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(to_json(m.row_vector(i)));
  return a;
}

inline IntMatrix matrix_from_json(const Json& j, std::size_t rows, std::size_t cols, const char* what) {
  if (!j.is_array() || j.size() != rows)
    throw FormatError(std::string("field '") + what + "' must have " + std::to_string(rows) + " rows");
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const IntVector r = vector_from_json(j[i], cols, what);
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = r[c];
  }
  return m;
}

inline const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw FormatError(std::string("missing field '") + name + "'");
  return j.at(name);
}

inline void expect_format(const Json& j, const char* format) {
  const Json& f = field(j, "format");
  if (!f.is_string() || f.get<std::string>() != format)
    throw FormatError(std::string("expected format '") + format + "', got " + f.dump());
}

// ---------------------------------------------------------------- systems

inline Json to_json(const InequalitySystem& sys) {
  Json j;
  j["format"] = kSystemFormat;
  j["n"] = sys.n;
  j["A"] = to_json(sys.A);
  j["b"] = to_json(sys.b);
  return j;
}

inline InequalitySystem system_from_json(const Json& j) {
  expect_format(j, kSystemFormat);
  InequalitySystem sys;
  sys.n = size_from_json(field(j, "n"), "n");
  if (sys.n == 0) throw FormatError("n must be positive");
  sys.A = matrix_from_json(field(j, "A"), sys.n + 1, sys.n, "A");
  sys.b = vector_from_json(field(j, "b"), sys.n + 1, "b");
  return sys;
}

inline Json to_json(const NormalizedSystem& ns) {
  Json j;
  j["format"] = kNormalizedFormat;
  j["n"] = ns.n;
  j["s"] = ns.s;
  j["k"] = ns.k;
  j["delta"] = to_json(ns.delta);
  j["H"] = to_json(ns.H);
  j["h"] = to_json(ns.h);
  j["c"] = to_json(ns.c);
  j["c0"] = to_json(ns.c0);
  return j;
}

inline NormalizedSystem normalized_from_json(const Json& j) {
  expect_format(j, kNormalizedFormat);
  NormalizedSystem ns;
  ns.n = size_from_json(field(j, "n"), "n");
  if (ns.n == 0) throw FormatError("n must be positive");
  ns.s = size_from_json(field(j, "s"), "s");
  ns.k = size_from_json(field(j, "k"), "k");
  if (ns.s + ns.k != ns.n) throw FormatError("s + k must equal n");
  ns.delta = integer_from_json(field(j, "delta"));
  ns.H = matrix_from_json(field(j, "H"), ns.n, ns.n, "H");
  ns.h = vector_from_json(field(j, "h"), ns.n, "h");
  ns.c = vector_from_json(field(j, "c"), ns.n, "c");
  ns.c0 = integer_from_json(field(j, "c0"));
  return ns;
}

/// Accepts either the plain or the normalized system format.
inline InequalitySystem any_system_from_json(const Json& j) {
  const Json& f = field(j, "format");
  if (f == kNormalizedFormat) return normalized_from_json(j).system();
  return system_from_json(j);
}

inline Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

inline Json to_json(const AffineUnimodularMap& m) {
  Json j;
  j["U"] = to_json(m.U);
  j["x0"] = to_json(m.x0);
  return j;
}

inline AffineUnimodularMap map_from_json(const Json& j) {
  const Json& x0 = field(j, "x0");
  if (!x0.is_array()) throw FormatError("field 'x0' must be an array");
  const std::size_t n = x0.size();
  return {matrix_from_json(field(j, "U"), n, n, "U"), vector_from_json(x0, n, "x0")};
}

inline Json to_json(const EquivalenceVerdict& v) {
  Json j;
  j["equivalent"] = v.equivalent;
  if (v.equivalent)
    j["witness"] = to_json(*v.witness);
  else
    j["certificate"] = v.certificate;
  return j;
}

// ---------------------------------------------------------------- records

inline Json to_json(const Provenance& p) {
  Json j;
  j["tuple"] = to_json(IntVector(p.tuple.begin(), p.tuple.end()));
  j["tuple_index"] = p.tuple_index;
  j["T_index"] = p.T_index;
  j["B_index"] = p.B_index;
  j["h_index"] = p.h_index;
  j["c_index"] = p.c_index;
  j["c0"] = to_json(p.c0);
  return j;
}

inline Provenance provenance_from_json(const Json& j) {
  Provenance p;
  const Json& t = field(j, "tuple");
  p.tuple = vector_from_json(t, t.is_array() ? t.size() : 0, "tuple");
  p.tuple_index = size_from_json(field(j, "tuple_index"), "tuple_index");
  p.T_index = size_from_json(field(j, "T_index"), "T_index");
  p.B_index = size_from_json(field(j, "B_index"), "B_index");
  p.h_index = size_from_json(field(j, "h_index"), "h_index");
  p.c_index = size_from_json(field(j, "c_index"), "c_index");
  p.c0 = integer_from_json(field(j, "c0"));
  return p;
}

inline Json to_json(const CandidateRecord& r) {
  Json j;
  j["format"] = kRecordFormat;
  j["n"] = r.system.n;
  j["delta"] = to_json(r.system.delta);
  j["family"] = family_name(r.family);
  j["s"] = r.system.s;
  j["k"] = r.system.k;
  j["H"] = to_json(r.system.H);
  j["h"] = to_json(r.system.h);
  j["c"] = to_json(r.system.c);
  j["c0"] = to_json(r.system.c0);
  j["canonical_key"] = r.key.text();
  j["provenance"] = to_json(r.provenance);
  return j;
}

/// Parses one atlas record; the stored canonical key must match the one
/// recomputed from the system.
inline CandidateRecord record_from_json(const Json& j) {
  expect_format(j, kRecordFormat);
  Json sys = j;
  sys["format"] = kNormalizedFormat;
  CandidateRecord r;
  r.system = normalized_from_json(sys);
  const Json& fam = field(j, "family");
  if (fam == "empty")
    r.family = Family::kEmpty;
  else if (fam == "lattice_empty")
    r.family = Family::kLatticeEmpty;
  else
    throw FormatError("unknown family " + fam.dump());
  r.key = canonical_key(r.system);
  const Json& key = field(j, "canonical_key");
  if (!key.is_string() || key.get<std::string>() != r.key.text())
    throw FormatError("canonical_key does not match the stored system");
  r.provenance = provenance_from_json(field(j, "provenance"));
  return r;
}

inline void write_atlas(std::ostream& os, const std::vector<CandidateRecord>& records) {
  for (const auto& r : records) os << to_json(r).dump() << '\n';
}

inline std::vector<CandidateRecord> read_atlas(std::istream& is) {
  std::vector<CandidateRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(record_from_json(parse_json_text(line)));
    } catch (const Error& e) {
      throw FormatError("atlas line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------- building

enum class FamilySelection { kEmpty, kLattice, kBoth };

inline FamilySelection parse_family_selection(const std::string& s) {
  if (s == "empty") return FamilySelection::kEmpty;
  if (s == "lattice") return FamilySelection::kLattice;
  if (s == "both") return FamilySelection::kBoth;
  throw std::invalid_argument("family must be one of empty, lattice, both");
}

/// Default worker count: DELTA_SIMPLEX_JOBS if set to a positive integer, else 1.
inline std::size_t default_jobs() {
  if (const char* env = std::getenv("DELTA_SIMPLEX_JOBS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 1;
}

struct AtlasBuild {
  std::vector<CandidateRecord> records;  // ascending canonical key
  SkipCounts skipped;
  std::size_t candidates = 0;  // before dedup
};

/// Enumerates and deduplicates the selected families for delta (or for
/// every delta' <= delta when up_to is set).
inline AtlasBuild build_atlas(const Integer& delta, std::size_t n, FamilySelection fam, bool up_to = false,
                              std::size_t jobs = 1) {
  if (delta < 1 || n < 1) throw std::domain_error("build_atlas: need delta >= 1 and n >= 1");
  AtlasBuild out;
  for (Integer d = up_to ? Integer(1) : delta; d <= delta; ++d) {
    Families f = enumerate_families(d, n, jobs);
    out.skipped += f.skipped;
    auto take = [&](std::vector<CandidateRecord>& v) {
      out.candidates += v.size();
      auto res = dedup_families(std::move(v), jobs);
      std::move(res.survivors.begin(), res.survivors.end(), std::back_inserter(out.records));
    };
    if (fam != FamilySelection::kLattice) take(f.empty);
    if (fam != FamilySelection::kEmpty) take(f.lattice);
  }
  std::sort(out.records.begin(), out.records.end(), [](const auto& a, const auto& b) { return a.key < b.key; });
  return out;
}

// ---------------------------------------------------------------- checks

/// |c0 - c^T v| * Delta with v = H^{-1} h, compared against Delta^2.
inline bool apex_distance_within_delta(const NormalizedSystem& ns) {
  const Integer cv_scaled = dot(ns.c, adjugate(ns.H) * ns.h);
  return abs(ns.c0 * ns.delta - cv_scaled) <= ns.delta * ns.delta;
}

struct VerifyOptions {
  std::size_t oracle_max_dim = 6;
  std::size_t oracle_cap = kDefaultOracleCap;
};

struct VerifyReport {
  std::vector<std::string> failures;
  std::size_t oracle_skipped = 0;  // bounding box above the cap
  bool ok() const { return failures.empty(); }
};

inline void verify_record(const CandidateRecord& r, const VerifyOptions& opt, VerifyReport& rep) {
  auto fail = [&](const std::string& what) {
    rep.failures.push_back(r.key.text() + " [" + to_string(r.provenance) + "]: " + what);
  };
  const NormalizedCheck chk = validate_normalized(r.system);
  if (!chk.ok) {
    for (const auto& v : chk.violations) fail("emptiness/validator violation: " + v);
    return;
  }
  const SimplexMeta meta = validate_simplex(r.system.system());
  if (meta.delta != r.system.delta) fail("delta recomputation mismatch");
  if (!(canonical_key(r.system) == r.key)) fail("canonical key mismatch");
  if (!apex_distance_within_delta(r.system)) fail("|c0 - c^T v| exceeds delta");

  // Emptiness through the corner problem, valid in every dimension.
  const CornerSolver solver(r.system.H);
  const bool lattice = r.family == Family::kLatticeEmpty;
  if (lattice) {
    const bool apex_zero = std::all_of(r.system.h.begin(), r.system.h.end(), [](const Integer& v) { return v == 0; });
    const auto f = solver.minimum_excluding_vertex(r.system.c).f_star;
    if (!apex_zero || f != r.system.c0 ||
        solver.count_level_points(r.system.h, r.system.c, r.system.c0, r.system.n + 1) != r.system.n ||
        !std::all_of(meta.vertices.begin(), meta.vertices.end(), [](const RationalVector& v) { return is_integral(v); }))
      fail("emptiness/validator violation: not an empty lattice simplex");
  } else if (solver.minimum(r.system.h, r.system.c).f_star <= r.system.c0) {
    fail("emptiness/validator violation: contains an integer point");
  }

  if (r.system.n <= opt.oracle_max_dim) {
    try {
      const std::size_t pts = count_integer_points_bruteforce(r.system.system(), opt.oracle_cap);
      const std::size_t want = lattice ? r.system.n + 1 : 0;
      if (pts != want)
        fail("emptiness/validator violation: oracle counts " + std::to_string(pts) + " integer points, expected " +
             std::to_string(want));
    } catch (const OracleScaleError&) {
      ++rep.oracle_skipped;
    }
  }
}

/// Record-level checks for every record, strictly ascending keys, and class
/// checks: each record must carry the least key of its class and no other
/// atlas record may lie in the same class.
inline VerifyReport verify_atlas(const std::vector<CandidateRecord>& records, const VerifyOptions& opt = {}) {
  VerifyReport rep;
  for (const auto& r : records) {
    try {
      verify_record(r, opt, rep);
    } catch (const Error& e) {
      rep.failures.push_back(r.key.text() + " [" + to_string(r.provenance) + "]: " + e.what());
    }
  }
  for (std::size_t i = 1; i < records.size(); ++i)
    if (!(records[i - 1].key < records[i].key))
      rep.failures.push_back("records not in strictly ascending key order at line " + std::to_string(i + 1));
  if (!rep.ok()) return rep;

  std::set<CanonicalKey> keys;
  for (const auto& r : records) keys.insert(r.key);
  for (const auto& r : records) {
    const EquivalentSet set = equivalent_normalized_set(r.system.system());
    if (!(set.least_key() == r.key))
      rep.failures.push_back(r.key.text() + ": not the least key of its class (" + set.least_key().text() + ")");
    for (const auto& entry : set.forms)
      if (!(entry.first == r.key) && keys.count(entry.first))
        rep.failures.push_back(r.key.text() + ": equivalent to atlas record " + entry.first.text());
  }
  return rep;
}

inline Integer binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  Integer r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// floor of C(n+Delta-1, Delta-1) * Delta^(log2 Delta + 2); exact when Delta
/// is a power of two.
inline Integer class_count_bound(std::size_t n, const Integer& delta) {
  const Integer lead = binomial(n + delta.convert_to<std::size_t>() - 1, delta.convert_to<std::size_t>() - 1);
  const std::size_t lg = floor_log2(delta);
  if (Integer(1) << lg == delta) return lead * boost::multiprecision::pow(delta, static_cast<unsigned>(lg + 2));
  const long double d = delta.convert_to<long double>();
  const long double tail = std::pow(d, std::log2(d) + 2.0L);
  return Integer(std::floor(lead.convert_to<long double>() * tail));
}

struct StatsRow {
  std::size_t n = 0;
  Integer delta;
  Family family = Family::kEmpty;
  std::size_t count = 0;
  Integer bound;  // only meaningful for the empty family
  bool violation = false;
};

inline std::vector<StatsRow> atlas_stats(const std::vector<CandidateRecord>& records) {
  std::map<std::tuple<std::size_t, Integer, int>, std::size_t> counts;
  for (const auto& r : records) ++counts[{r.system.n, r.system.delta, static_cast<int>(r.family)}];
  std::vector<StatsRow> rows;
  for (const auto& [k, cnt] : counts) {
    StatsRow row;
    row.n = std::get<0>(k);
    row.delta = std::get<1>(k);
    row.family = static_cast<Family>(std::get<2>(k));
    row.count = cnt;
    row.bound = class_count_bound(row.n, row.delta);
    row.violation = row.family == Family::kEmpty && Integer(cnt) > row.bound;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace delta_simplex

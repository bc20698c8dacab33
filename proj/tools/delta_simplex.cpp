// delta-simplex: enumerate, normalize and compare Delta-modular simplices.

#include "delta_simplex/atlas.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

namespace ds = delta_simplex;

namespace {

ds::Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return ds::parse_json_text(buf.str());
}

std::vector<ds::CandidateRecord> read_atlas_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return ds::read_atlas(in);
}

std::string bases_text(const std::vector<std::vector<std::size_t>>& bases) {
  std::string s;
  for (const auto& b : bases) {
    s += s.empty() ? "" : " ";
    for (std::size_t i = 0; i < b.size(); ++i) s += (i ? "," : "") + std::to_string(b[i]);
  }
  return s;
}

std::vector<std::size_t> parse_base(const std::string& text) {
  std::vector<std::size_t> base;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const ds::Integer v = ds::parse_integer(tok);
    if (v < 0) throw std::invalid_argument("base indices must be non-negative");
    base.push_back(v.convert_to<std::size_t>());
  }
  return base;
}

struct EnumerateArgs {
  long long delta = 0;
  std::size_t dim = 0;
  std::string family = "both";
  bool up_to = false;
  std::size_t jobs = 0;
  bool verify = false;
  std::string out;
};

int cmd_enumerate(const EnumerateArgs& a) {
  const std::size_t jobs = a.jobs ? a.jobs : ds::default_jobs();
  const auto start = std::chrono::steady_clock::now();
  const ds::AtlasBuild build = ds::build_atlas(a.delta, a.dim, ds::parse_family_selection(a.family), a.up_to, jobs);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::size_t empty = 0, lattice = 0;
  for (const auto& r : build.records) (r.family == ds::Family::kEmpty ? empty : lattice) += 1;
  std::cerr << "delta=" << a.delta << " n=" << a.dim << ": " << build.candidates << " candidates, " << empty
            << " empty classes, " << lattice << " lattice_empty classes (" << secs << " s)\n"
            << "skipped: gcd=" << build.skipped.gcd << " tie_break=" << build.skipped.tie_break
            << " validator=" << build.skipped.validator << " lattice_vertex=" << build.skipped.lattice_vertex
            << " lattice_extra=" << build.skipped.lattice_extra << " empty_c0_range=" << build.skipped.empty_c0_range
            << '\n';

  if (a.verify) {
    const ds::VerifyReport rep = ds::verify_atlas(build.records);
    if (!rep.ok()) {
      for (const auto& f : rep.failures) std::cerr << "verify: " << f << '\n';
      return 1;
    }
    std::cerr << "verify: ok (" << rep.oracle_skipped << " oracle checks skipped for size)\n";
  }

  if (a.out.empty() || a.out == "-") {
    ds::write_atlas(std::cout, build.records);
  } else {
    std::ofstream out(a.out, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + a.out);
    ds::write_atlas(out, build.records);
    out.flush();
    if (!out) throw std::runtime_error("I/O error writing " + a.out);
  }
  return 0;
}

int cmd_check_equiv(const std::string& fa, const std::string& fb) {
  try {
    const auto S = ds::any_system_from_json(read_json_file(fa));
    const auto T = ds::any_system_from_json(read_json_file(fb));
    const auto verdict = ds::check_equivalence(S, T);
    std::cout << ds::to_json(verdict).dump() << '\n';
    return verdict.equivalent ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

int cmd_normalize(const std::string& file, const std::string& base_text) {
  const auto sys = ds::any_system_from_json(read_json_file(file));
  ds::NormalizationResult res;
  if (base_text == "auto") {
    res = ds::normalize(sys);
  } else {
    try {
      res = ds::normalize(sys, parse_base(base_text));
    } catch (const ds::PreconditionError& e) {
      const auto meta = ds::validate_simplex(ds::primitivize(sys));
      std::cerr << "error: " << e.what() << "; valid bases: " << bases_text(meta.max_det_bases) << '\n';
      return 1;
    }
  }
  ds::Json out;
  out["normalized"] = ds::to_json(res.system);
  out["map"] = ds::to_json(res.map);
  out["row_perm"] = res.row_perm;
  out["canonical_key"] = ds::canonical_key(res.system).text();
  std::cout << out.dump() << '\n';
  return 0;
}

int cmd_verify(const std::string& file) {
  const auto records = read_atlas_file(file);
  const ds::VerifyReport rep = ds::verify_atlas(records);
  for (const auto& f : rep.failures) std::cout << "FAIL " << f << '\n';
  std::cout << (rep.ok() ? "PASS" : "FAIL") << ": " << records.size() << " records, " << rep.failures.size()
            << " failures, " << rep.oracle_skipped << " oracle checks skipped for size\n";
  return rep.ok() ? 0 : 1;
}

int cmd_stats(const std::string& file) {
  const auto rows = ds::atlas_stats(read_atlas_file(file));
  bool violation = false;
  for (const auto& r : rows) {
    std::cout << "n=" << r.n << " delta=" << r.delta << " family=" << ds::family_name(r.family)
              << " count=" << r.count;
    if (r.family == ds::Family::kEmpty) std::cout << " bound=" << r.bound << (r.violation ? " VIOLATION" : "");
    std::cout << '\n';
    violation = violation || r.violation;
  }
  return violation ? 1 : 0;
}

int cmd_corner(const std::string& file) {
  const auto ns = ds::normalized_from_json(read_json_file(file));
  const ds::CornerSolver solver(ns.H);
  const bool apex_zero = std::all_of(ns.h.begin(), ns.h.end(), [](const ds::Integer& v) { return v == 0; });
  const auto sol = apex_zero ? solver.minimum_excluding_vertex(ns.c) : solver.minimum(ns.h, ns.c);
  ds::Json out;
  out["f_star"] = ds::to_json(sol.f_star);
  out["witness"] = ds::to_json(sol.witness_x);
  out["excluding_vertex"] = apex_zero;
  out["empty_for_c0"] = !apex_zero && ns.c0 < sol.f_star;
  std::cout << out.dump() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Enumerate and compare Delta-modular empty simplices"};
  app.require_subcommand(1);

  EnumerateArgs ea;
  auto* en = app.add_subcommand("enumerate", "Enumerate class representatives as a JSONL atlas");
  en->add_option("--delta", ea.delta, "Largest maximal minor Delta")->required()->check(CLI::PositiveNumber);
  en->add_option("--dim", ea.dim, "Dimension n")->required()->check(CLI::PositiveNumber);
  en->add_option("--family", ea.family, "empty | lattice | both")->check(CLI::IsMember({"empty", "lattice", "both"}));
  en->add_flag("--up-to", ea.up_to, "Include every Delta' <= Delta");
  en->add_option("--jobs", ea.jobs, "Worker threads (default: DELTA_SIMPLEX_JOBS or 1)");
  en->add_flag("--verify", ea.verify, "Re-validate every record before writing");
  en->add_option("--out", ea.out, "Output file (default: stdout)");

  std::string fa, fb;
  auto* ce = app.add_subcommand("check-equiv", "Decide unimodular equivalence (exit 0 yes, 1 no, 2 error)");
  ce->add_option("first", fa, "System JSON")->required();
  ce->add_option("second", fb, "System JSON")->required();

  std::string nfile, base = "auto";
  auto* nm = app.add_subcommand("normalize", "Print the normalized form, map and canonical key");
  nm->add_option("file", nfile, "System JSON")->required();
  nm->add_option("--base", base, "auto or comma-separated row indices (0-based)");

  std::string vfile;
  auto* vf = app.add_subcommand("verify", "Check every record of an atlas");
  vf->add_option("atlas", vfile, "Atlas JSONL")->required();

  std::string sfile;
  auto* st = app.add_subcommand("stats", "Class counts per (n, delta, family) with the class-count bound");
  st->add_option("atlas", sfile, "Atlas JSONL")->required();

  std::string cfile;
  auto* co = app.add_subcommand("corner", "Solve the corner problem of a normalized system");
  co->add_option("file", cfile, "Normalized system JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return ce->parsed() && code != 0 ? 2 : code;
  }

  try {
    if (en->parsed()) return cmd_enumerate(ea);
    if (ce->parsed()) return cmd_check_equiv(fa, fb);
    if (nm->parsed()) return cmd_normalize(nfile, base);
    if (vf->parsed()) return cmd_verify(vfile);
    if (st->parsed()) return cmd_stats(sfile);
    if (co->parsed()) return cmd_corner(cfile);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

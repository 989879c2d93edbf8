// pcw: command-line front end over the C API.
//
// Every subcommand prints a JSON report to stdout (and to --report if given)
// holding the resolved configuration, the seed, a canonical rerun command and
// the result. Exit codes: 0 pass, 1 a check failed (witness in the report),
// 2 usage, input or cap error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "pcw/pcw.h"

namespace {

using nlohmann::ordered_json;

constexpr int kPass = 0, kFail = 1, kError = 2;

// Carries a failing status out of a command.
struct ApiError {
  pcw_status status;
  std::string message;
};

void check(pcw_status s) {
  if (s != PCW_OK) throw ApiError{s, pcw_last_error()};
}

struct Str {
  char* p = nullptr;
  ~Str() { pcw_string_free(p); }
  std::string str() const { return p ? p : ""; }
  ordered_json json() const { return ordered_json::parse(str()); }
};

template <class T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  ~Handle() { Free(p); }
};
using Formula = Handle<pcw_formula, pcw_formula_free>;
using Partition = Handle<pcw_partition, pcw_partition_free>;
using Circuit = Handle<pcw_circuit, pcw_circuit_free>;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ApiError{PCW_ERR_IO, "cannot open '" + path + "'"};
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw ApiError{PCW_ERR_IO, "cannot write '" + path + "'"};
}

std::string shell_quote(const std::string& s) {
  bool plain = !s.empty();
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || std::string_view("-_./:,=").find(c) != std::string_view::npos))
      plain = false;
  if (plain) return s;
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

// Options shared by all subcommands.
struct Common {
  std::string report;
  pcw_caps caps{};
  std::uint64_t seed = 0;
};

struct Config {
  std::string cnf, proof, circuit, out, partition = "alternating", dist = "f", kind = "unsat", epsilon, mode = "auto",
                                                    side = "x";
  int m = 0, n = 0, d = 0, s_max = 0;
  std::int64_t weight_bound = 0;
  std::uint64_t samples = 20, trials = 0;
  std::optional<double> min_unsat_rate;
};

void add_caps(CLI::App* sub, Common& c) {
  sub->add_option("--max-side-vars", c.caps.max_side_vars, "Rectangle/extraction cap per side")->capture_default_str();
  sub->add_option("--max-depth", c.caps.max_depth, "Protocol depth cap")->capture_default_str();
  sub->add_option("--max-bf-vars", c.caps.max_brute_force_vars, "Brute-force/DPLL variable cap")
      ->capture_default_str();
  sub->add_option("--max-sep-vars", c.caps.max_separation_vars, "Separation check cap per side")
      ->capture_default_str();
  sub->add_option("--report", c.report, "Also write the JSON report here");
}

ordered_json caps_json(const pcw_caps& c) {
  return {{"max-side-vars", c.max_side_vars},
          {"max-depth", c.max_depth},
          {"max-bf-vars", c.max_brute_force_vars},
          {"max-sep-vars", c.max_separation_vars}};
}

std::string rerun_line(const std::string& cmd, const ordered_json& config) {
  std::string s = "pcw " + cmd;
  for (const auto& [k, v] : config.items()) {
    s += " --" + k + " ";
    s += shell_quote(v.is_string() ? v.get<std::string>() : v.dump());
  }
  return s;
}

pcw_mode parse_mode(const std::string& m) {
  if (m == "exact") return PCW_MODE_EXACT;
  if (m == "sampled") return PCW_MODE_SAMPLED;
  return PCW_MODE_AUTO;
}

void load_formula(const std::string& path, Formula& f) { check(pcw_formula_read(path.c_str(), &f.p)); }

void load_partition(const std::string& spec, const Formula& f, Partition& p) {
  check(pcw_partition_parse(spec.c_str(), pcw_formula_num_vars(f.p), &p.p));
}

std::string partition_string(const Partition& p) {
  Str s;
  check(pcw_partition_to_string(p.p, &s.p));
  return s.str();
}

struct Outcome {
  ordered_json result;
  bool pass = true;
};

// ---- subcommands -----------------------------------------------------------

Outcome run_gen(const Config& c, const Common& common, ordered_json& cfg) {
  cfg["dist"] = c.dist;
  cfg["m"] = c.m;
  cfg["n"] = c.n;
  cfg["d"] = c.d;
  cfg["seed"] = common.seed;
  cfg["out"] = c.out;
  pcw_dist_params dp{c.m, c.n, c.d, common.seed, c.dist == "tensor"};
  Formula f;
  Partition p;
  check(pcw_sample_formula(&dp, &f.p, &p.p));
  Str text;
  check(pcw_formula_to_dimacs(f.p, &text.p));
  write_file(c.out, text.str());
  Outcome o;
  o.result = {{"path", c.out},
              {"num_vars", pcw_formula_num_vars(f.p)},
              {"num_clauses", pcw_formula_num_clauses(f.p)},
              {"partition", partition_string(p)}};
  return o;
}

Outcome run_check_proof(const Config& c, const Common&, ordered_json& cfg) {
  cfg["cnf"] = c.cnf;
  cfg["proof"] = c.proof;
  Formula f;
  load_formula(c.cnf, f);
  const std::string proof = read_file(c.proof);
  Str rep;
  int refutation = 0;
  check(pcw_check_cp_proof(f.p, proof.c_str(), &rep.p, &refutation));
  return {rep.json(), refutation != 0};
}

Outcome run_compile(const Config& c, const Common& common, ordered_json& cfg) {
  cfg["cnf"] = c.cnf;
  if (!c.proof.empty()) cfg["proof"] = c.proof;
  cfg["partition"] = c.partition;
  if (!c.proof.empty()) cfg["weight-bound"] = c.weight_bound;
  cfg["out"] = c.out;
  Formula f;
  load_formula(c.cnf, f);
  Partition p;
  load_partition(c.partition, f, p);
  std::string proof = c.proof.empty() ? std::string() : read_file(c.proof);
  Circuit circ;
  Str rep;
  check(pcw_compile_cp_proof(f.p, p.p, c.proof.empty() ? nullptr : proof.c_str(), c.weight_bound, &common.caps,
                             &circ.p, &rep.p));
  Str text;
  check(pcw_circuit_to_text(circ.p, &text.p));
  write_file(c.out, text.str());
  Outcome o{rep.json(), true};
  o.result["partition"] = partition_string(p);
  o.result["circuit_path"] = c.out;
  o.pass = o.result["compile"]["within_conservative_bound"].get<bool>();
  return o;
}

Outcome run_verify(const Config& c, const Common& common, ordered_json& cfg, bool extract) {
  cfg["cnf"] = c.cnf;
  cfg["circuit"] = c.circuit;
  cfg["partition"] = c.partition;
  Formula f;
  load_formula(c.cnf, f);
  Partition p;
  load_partition(c.partition, f, p);
  Circuit circ;
  check(pcw_circuit_read(c.circuit.c_str(), &circ.p));
  Str rep;
  int pass = 0;
  if (!extract) {
    check(pcw_verify_separation(circ.p, f.p, p.p, &common.caps, &rep.p, &pass));
    return {rep.json(), pass != 0};
  }
  // Extraction needs a separating circuit; report the separation witness otherwise.
  check(pcw_verify_separation(circ.p, f.p, p.p, &common.caps, &rep.p, &pass));
  Outcome o;
  o.result["separation"] = rep.json();
  if (!pass) {
    o.result["extraction"] = nullptr;
    o.pass = false;
    return o;
  }
  Str ex;
  check(pcw_extract_cc2(circ.p, f.p, p.p, &common.caps, &ex.p, &pass));
  o.result["extraction"] = ex.json();
  o.pass = pass != 0;
  return o;
}

Outcome run_roundtrip(const Config& c, const Common& common, ordered_json& cfg) {
  cfg["cnf"] = c.cnf;
  if (!c.proof.empty()) cfg["proof"] = c.proof;
  cfg["partition"] = c.partition;
  if (!c.proof.empty()) cfg["weight-bound"] = c.weight_bound;
  Formula f;
  load_formula(c.cnf, f);
  Partition p;
  load_partition(c.partition, f, p);
  std::string proof = c.proof.empty() ? std::string() : read_file(c.proof);
  Str rep;
  int pass = 0;
  check(pcw_roundtrip(f.p, p.p, c.proof.empty() ? nullptr : proof.c_str(), c.weight_bound, &common.caps, &rep.p,
                      &pass));
  Outcome o{rep.json(), pass != 0};
  o.result["partition"] = partition_string(p);
  return o;
}

Outcome run_stats(const Config& c, const Common& common, ordered_json& cfg) {
  cfg["kind"] = c.kind;
  Outcome o;
  if (c.kind == "unsat") {
    cfg["dist"] = c.dist;
    cfg["m"] = c.m;
    cfg["n"] = c.n;
    cfg["d"] = c.d;
    cfg["samples"] = c.samples;
    cfg["seed"] = common.seed;
    if (c.min_unsat_rate) cfg["min-unsat-rate"] = *c.min_unsat_rate;
    pcw_dist_params dp{c.m, c.n, c.d, common.seed, c.dist == "tensor"};
    Str rep;
    double rate = 0;
    check(pcw_stats_unsat_rate(&dp, c.samples, &common.caps, &rep.p, &rate));
    o.result = rep.json();
    if (c.min_unsat_rate) {
      o.result["min_unsat_rate"] = *c.min_unsat_rate;
      o.pass = rate >= *c.min_unsat_rate;
    }
    return o;
  }

  // The other reports run on a formula: a file, or one sample.
  Formula f;
  Partition sampled_part;
  if (!c.cnf.empty()) {
    cfg["cnf"] = c.cnf;
    load_formula(c.cnf, f);
  } else {
    cfg["dist"] = c.dist;
    cfg["m"] = c.m;
    cfg["n"] = c.n;
    cfg["d"] = c.d;
    pcw_dist_params dp{c.m, c.n, c.d, common.seed, c.dist == "tensor"};
    check(pcw_sample_formula(&dp, &f.p, &sampled_part.p));
  }
  cfg["seed"] = common.seed;
  const std::string eps = c.epsilon.empty() ? (c.kind == "expansion" ? "1/2" : "1/4") : c.epsilon;
  Str rep;
  int flag = 0;
  if (c.kind == "expansion") {
    cfg["epsilon"] = eps;
    cfg["s-max"] = c.s_max;
    cfg["mode"] = c.mode;
    cfg["trials"] = c.trials;
    check(pcw_stats_expansion(f.p, eps.c_str(), c.s_max, parse_mode(c.mode), c.trials, common.seed, &rep.p, &flag));
    o.pass = flag != 0;
  } else if (c.kind == "profiles") {
    cfg["mode"] = c.mode;
    cfg["trials"] = c.trials;
    check(pcw_stats_profiles(f.p, parse_mode(c.mode), c.trials, common.seed, &rep.p, &flag));
    o.pass = flag != 0;
  } else if (c.kind == "side-profiles" || c.kind == "heavy-sat") {
    // Tensor samples come with their own partition unless one is given.
    std::string spec = c.partition;
    Partition p;
    if (sampled_part.p && c.dist == "tensor" && spec == "alternating")
      spec = partition_string(sampled_part);
    load_partition(spec, f, p);
    cfg["partition"] = spec;
    cfg["side"] = c.side;
    cfg["mode"] = c.mode;
    cfg["trials"] = c.trials;
    const pcw_side side = c.side == "y" ? PCW_SIDE_Y : PCW_SIDE_X;
    if (c.kind == "side-profiles") {
      check(pcw_stats_side_profiles(f.p, p.p, side, parse_mode(c.mode), c.trials, common.seed, &rep.p, &flag));
      o.pass = flag != 0;
    } else {
      cfg["epsilon"] = eps;
      double fraction = 0;
      check(pcw_stats_heavy_sat(f.p, p.p, side, eps.c_str(), parse_mode(c.mode), c.trials, common.seed, &rep.p,
                                &fraction));
    }
  } else if (c.kind == "heavy-partition") {
    cfg["epsilon"] = eps;
    cfg["trials"] = c.trials;
    check(pcw_stats_heavy_partition(f.p, eps.c_str(), c.trials, common.seed, &rep.p, &flag, nullptr));
    o.pass = flag != 0;
  }
  o.result = rep.json();
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Proof-complexity workbench: cutting planes, protocols, monotone circuits, random CNFs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", pcw_version());

  Config c;
  Common common;
  pcw_caps_default(&common.caps);

  auto* gen = app.add_subcommand("gen", "Sample a random CNF and write it as DIMACS");
  gen->add_option("--dist", c.dist, "f or tensor")->check(CLI::IsMember({"f", "tensor"}))->capture_default_str();
  gen->add_option("--m", c.m, "Clauses")->required();
  gen->add_option("--n", c.n, "Variables (per side for tensor)")->required();
  gen->add_option("--d", c.d, "Clause width (per side for tensor)")->required();
  gen->add_option("--seed", common.seed, "Master seed")->capture_default_str();
  gen->add_option("--out", c.out, "DIMACS output path")->required();

  auto* chk = app.add_subcommand("check-proof", "Check a cutting planes proof against a CNF");
  chk->add_option("--cnf", c.cnf, "DIMACS formula")->required();
  chk->add_option("--proof", c.proof, "Proof text")->required();

  auto* comp = app.add_subcommand("compile", "Compile a refutation into a monotone circuit");
  comp->add_option("--cnf", c.cnf, "DIMACS formula")->required();
  comp->add_option("--proof", c.proof, "Cutting planes refutation (default: resolution by DPLL)");
  comp->add_option("--weight-bound", c.weight_bound, "Cutting planes weight bound (default n^3)");
  comp->add_option("--out", c.out, "Circuit output path")->required();

  auto* ver = app.add_subcommand("verify-sep", "Check that a circuit separates U(x) from V(y)");
  ver->add_option("--cnf", c.cnf, "DIMACS formula")->required();
  ver->add_option("--circuit", c.circuit, "Circuit file")->required();

  auto* ext = app.add_subcommand("extract", "Extract and validate the CC_2 refutation of a circuit");
  ext->add_option("--cnf", c.cnf, "DIMACS formula")->required();
  ext->add_option("--circuit", c.circuit, "Circuit file")->required();

  auto* rt = app.add_subcommand("roundtrip", "compile, verify-sep and extract in one run");
  rt->add_option("--cnf", c.cnf, "DIMACS formula")->required();
  rt->add_option("--proof", c.proof, "Cutting planes refutation (default: resolution by DPLL)");
  rt->add_option("--weight-bound", c.weight_bound, "Cutting planes weight bound (default n^3)");

  auto* st = app.add_subcommand("stats", "Random-formula lemma checks");
  st->add_option("--kind", c.kind, "unsat, expansion, profiles, side-profiles, heavy-partition, heavy-sat")
      ->check(CLI::IsMember({"unsat", "expansion", "profiles", "side-profiles", "heavy-partition", "heavy-sat"}))
      ->capture_default_str();
  st->add_option("--dist", c.dist, "f or tensor")->check(CLI::IsMember({"f", "tensor"}))->capture_default_str();
  st->add_option("--m", c.m, "Clauses");
  st->add_option("--n", c.n, "Variables (per side for tensor)");
  st->add_option("--d", c.d, "Clause width");
  st->add_option("--samples", c.samples, "Samples for --kind unsat")->capture_default_str();
  st->add_option("--seed", common.seed, "Master seed")->capture_default_str();
  st->add_option("--cnf", c.cnf, "Use this formula instead of a sample");
  st->add_option("--epsilon", c.epsilon, "Fraction p/q (default 1/2 for expansion, 1/4 otherwise)");
  st->add_option("--s-max", c.s_max, "Largest subset size for expansion (default n/(e d^2))");
  st->add_option("--mode", c.mode, "auto, exact or sampled")
      ->check(CLI::IsMember({"auto", "exact", "sampled"}))
      ->capture_default_str();
  st->add_option("--trials", c.trials, "Samples / pairs / partition trials (0: default)");
  st->add_option("--side", c.side, "x or y")->check(CLI::IsMember({"x", "y"}))->capture_default_str();
  st->add_option("--min-unsat-rate", c.min_unsat_rate, "Fail unless the unsat rate reaches this");

  for (auto* sub : {comp, ver, ext, rt, st})
    sub->add_option("--partition", c.partition, "'alternating' or 'x:1,3 y:2'")->capture_default_str();
  for (auto* sub : {gen, chk, comp, ver, ext, rt, st}) add_caps(sub, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kError;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string cmd = sub->get_name();
  ordered_json cfg = ordered_json::object();
  try {
    if (cmd == "stats" && c.kind == "unsat" && (c.m < 1 || c.n < 1 || c.d < 1))
      throw ApiError{PCW_ERR_INVALID_ARGUMENT, "stats --kind unsat needs --m, --n and --d"};
    if (cmd == "stats" && c.kind != "unsat" && c.cnf.empty() && (c.m < 1 || c.n < 1 || c.d < 1))
      throw ApiError{PCW_ERR_INVALID_ARGUMENT, "stats needs --cnf or --m, --n and --d"};

    Outcome o;
    if (cmd == "gen") o = run_gen(c, common, cfg);
    else if (cmd == "check-proof") o = run_check_proof(c, common, cfg);
    else if (cmd == "compile") o = run_compile(c, common, cfg);
    else if (cmd == "verify-sep") o = run_verify(c, common, cfg, false);
    else if (cmd == "extract") o = run_verify(c, common, cfg, true);
    else if (cmd == "roundtrip") o = run_roundtrip(c, common, cfg);
    else o = run_stats(c, common, cfg);

    const ordered_json caps = caps_json(common.caps);
    for (const auto& [k, v] : caps.items()) cfg[k] = v;
    ordered_json report;
    report["command"] = cmd;
    report["version"] = pcw_version();
    report["seed"] = common.seed;
    report["config"] = cfg;
    report["rerun"] = rerun_line(cmd, cfg);
    report["result"] = o.result;
    report["pass"] = o.pass;
    report["exit_code"] = o.pass ? kPass : kFail;
    const std::string text = report.dump(2) + "\n";
    std::cout << text;
    if (!common.report.empty()) write_file(common.report, text);
    return o.pass ? kPass : kFail;
  } catch (const ApiError& e) {
    std::cerr << "pcw " << cmd << ": " << pcw_status_name(e.status) << ": " << e.message << "\n";
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "pcw " << cmd << ": internal error: " << e.what() << "\n";
    return kError;
  }
}

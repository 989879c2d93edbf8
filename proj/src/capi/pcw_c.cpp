#include "pcw/pcw.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "pcw/circuit.hpp"
#include "pcw/cp_proof.hpp"
#include "pcw/error.hpp"
#include "pcw/random_lab.hpp"
#include "pcw/report.hpp"

struct pcw_formula {
  pcw::CnfFormula f;
};
struct pcw_partition {
  pcw::VariablePartition p;
};
struct pcw_circuit {
  pcw::MonotoneCircuit c;
};

namespace {

using pcw::report::ordered_json;

thread_local std::string g_last_error;

pcw_status fail(pcw_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

// Runs fn, translating exceptions into status codes.
template <class Fn>
pcw_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return PCW_OK;
  } catch (const pcw::ParseError& e) {
    return fail(PCW_ERR_PARSE, e.what());
  } catch (const pcw::CapExceeded& e) {
    return fail(PCW_ERR_CAP_EXCEEDED, e.what());
  } catch (const pcw::SatisfiableFormula& e) {
    return fail(PCW_ERR_PRECONDITION, std::string(e.what()) + "; witness " + e.witness().to_string());
  } catch (const pcw::PreconditionError& e) {
    return fail(PCW_ERR_PRECONDITION, e.what());
  } catch (const pcw::InvalidArgument& e) {
    return fail(PCW_ERR_INVALID_ARGUMENT, e.what());
  } catch (const pcw::IoError& e) {
    return fail(PCW_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(PCW_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(PCW_ERR_INTERNAL, e.what());
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void put_json(char** out, const ordered_json& j) {
  if (out) *out = dup(j.dump(2));
}

template <class T>
void require(const T* p, const char* what) {
  if (!p) throw pcw::InvalidArgument(std::string(what) + " is null");
}

pcw_caps caps_or_default(const pcw_caps* caps) {
  pcw_caps c;
  pcw_caps_default(&c);
  if (caps) c = *caps;
  return c;
}

pcw::ProtocolCaps protocol_caps(const pcw_caps& c) { return {c.max_side_vars, c.max_depth}; }

pcw::SampleMode mode_of(pcw_mode m) {
  switch (m) {
    case PCW_MODE_EXACT: return pcw::SampleMode::Exact;
    case PCW_MODE_SAMPLED: return pcw::SampleMode::Sampled;
    default: return pcw::SampleMode::Auto;
  }
}

pcw::Side side_of(pcw_side s) { return s == PCW_SIDE_Y ? pcw::Side::Y : pcw::Side::X; }

void require_match(const pcw_formula* f, const pcw_partition* p) {
  require(f, "formula");
  require(p, "partition");
  if (f->f.num_vars() != p->p.num_vars())
    throw pcw::InvalidArgument("partition covers " + std::to_string(p->p.num_vars()) +
                               " variables but the formula has " + std::to_string(f->f.num_vars()));
}

pcw::CcRefutation make_refutation(const pcw_formula* f, const pcw_partition* p, const char* proof_text,
                                  int64_t weight_bound, const pcw_caps& caps, ordered_json& source) {
  if (proof_text) {
    auto proof = pcw::parse_cp_proof(proof_text, pcw::system_of(f->f));
    const int64_t bound = weight_bound > 0 ? weight_bound : pcw::default_weight_bound(f->f.num_vars());
    source = {{"kind", "cutting-planes"}, {"proof_lines", proof.length()}, {"weight", pcw::proof_weight(proof)},
              {"weight_bound", bound}};
    return pcw::cc_refutation_from_cp(proof, f->f, p->p, bound, protocol_caps(caps));
  }
  pcw::ResolutionOptions ro;
  ro.max_vars = caps.max_brute_force_vars;
  auto res = pcw::resolution_refutation_from_dpll(f->f, ro);
  source = {{"kind", "resolution"}, {"resolution_lines", res.length()}};
  return pcw::cc_refutation_from_resolution(res, f->f, p->p);
}

ordered_json compile_json(const ordered_json& source, const pcw::CcRefutation& cc, const pcw::CompileResult& res) {
  ordered_json j;
  j["refutation"] = source;
  j["refutation"]["length"] = cc.length();
  j["refutation"]["k"] = cc.k();
  j["compile"] = pcw::report::compile(res);
  return j;
}

}  // namespace

extern "C" {

const char* pcw_version(void) { return "1.0.0"; }

const char* pcw_last_error(void) { return g_last_error.c_str(); }

const char* pcw_status_name(pcw_status s) {
  switch (s) {
    case PCW_OK: return "ok";
    case PCW_ERR_INVALID_ARGUMENT: return "invalid argument";
    case PCW_ERR_PARSE: return "parse error";
    case PCW_ERR_CAP_EXCEEDED: return "cap exceeded";
    case PCW_ERR_PRECONDITION: return "precondition failed";
    case PCW_ERR_IO: return "i/o error";
    case PCW_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void pcw_string_free(char* s) { std::free(s); }

void pcw_caps_default(pcw_caps* caps) {
  if (!caps) return;
  caps->max_side_vars = 12;
  caps->max_depth = 24;
  caps->max_brute_force_vars = 24;
  caps->max_separation_vars = 20;
}

// ---- formulas and partitions ----------------------------------------------

pcw_status pcw_formula_from_dimacs(const char* text, pcw_formula** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new pcw_formula{pcw::parse_dimacs(text)};
  });
}

pcw_status pcw_formula_read(const char* path, pcw_formula** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new pcw_formula{pcw::read_dimacs_file(path)};
  });
}

void pcw_formula_free(pcw_formula* f) { delete f; }

int pcw_formula_num_vars(const pcw_formula* f) { return f ? f->f.num_vars() : 0; }

size_t pcw_formula_num_clauses(const pcw_formula* f) { return f ? f->f.num_clauses() : 0; }

pcw_status pcw_formula_to_dimacs(const pcw_formula* f, char** out) {
  return guarded([&] {
    require(f, "formula");
    require(out, "out");
    *out = dup(pcw::to_dimacs(f->f));
  });
}

pcw_status pcw_partition_parse(const char* spec, int num_vars, pcw_partition** out) {
  return guarded([&] {
    require(spec, "spec");
    require(out, "out");
    if (num_vars < 0) throw pcw::InvalidArgument("negative variable count");
    *out = new pcw_partition{pcw::parse_partition(spec, num_vars)};
  });
}

void pcw_partition_free(pcw_partition* p) { delete p; }

pcw_status pcw_partition_to_string(const pcw_partition* p, char** out) {
  return guarded([&] {
    require(p, "partition");
    require(out, "out");
    *out = dup(p->p.to_string());
  });
}

// ---- cutting planes --------------------------------------------------------

pcw_status pcw_check_cp_proof(const pcw_formula* f, const char* proof_text, char** report_json,
                              int* is_refutation) {
  return guarded([&] {
    require(f, "formula");
    require(proof_text, "proof text");
    auto proof = pcw::parse_cp_proof(proof_text, pcw::system_of(f->f));
    auto rep = pcw::check_cp_proof(proof);
    put_json(report_json, pcw::report::cp_check(rep));
    if (is_refutation) *is_refutation = rep.refutation;
  });
}

// ---- circuits --------------------------------------------------------------

pcw_status pcw_circuit_from_text(const char* text, pcw_circuit** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new pcw_circuit{pcw::parse_circuit(text)};
  });
}

pcw_status pcw_circuit_read(const char* path, pcw_circuit** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new pcw_circuit{pcw::parse_circuit(pcw::read_text_file(path))};
  });
}

void pcw_circuit_free(pcw_circuit* c) { delete c; }

size_t pcw_circuit_num_gates(const pcw_circuit* c) { return c ? c->c.size() : 0; }

pcw_status pcw_circuit_to_text(const pcw_circuit* c, char** out) {
  return guarded([&] {
    require(c, "circuit");
    require(out, "out");
    *out = dup(pcw::to_text(c->c));
  });
}

pcw_status pcw_compile_resolution(const pcw_formula* f, const pcw_partition* p, const pcw_caps* caps,
                                  pcw_circuit** out, char** report_json) {
  return pcw_compile_cp_proof(f, p, nullptr, 0, caps, out, report_json);
}

pcw_status pcw_compile_cp_proof(const pcw_formula* f, const pcw_partition* p, const char* proof_text,
                                int64_t weight_bound, const pcw_caps* caps, pcw_circuit** out,
                                char** report_json) {
  return guarded([&] {
    require_match(f, p);
    const pcw_caps c = caps_or_default(caps);
    ordered_json source;
    auto cc = make_refutation(f, p, proof_text, weight_bound, c, source);
    pcw::CompileOptions opts;
    opts.caps = protocol_caps(c);
    auto res = pcw::compile_cc_refutation(cc, f->f, p->p, opts);
    put_json(report_json, compile_json(source, cc, res));
    if (out) *out = new pcw_circuit{std::move(res.circuit)};
  });
}

pcw_status pcw_verify_separation(const pcw_circuit* c, const pcw_formula* f, const pcw_partition* p,
                                 const pcw_caps* caps, char** report_json, int* pass) {
  return guarded([&] {
    require(c, "circuit");
    require_match(f, p);
    const pcw_caps cp = caps_or_default(caps);
    auto rep = pcw::verify_separation(c->c, f->f, p->p, {cp.max_separation_vars});
    put_json(report_json, pcw::report::separation(rep, p->p));
    if (pass) *pass = rep.pass;
  });
}

pcw_status pcw_extract_cc2(const pcw_circuit* c, const pcw_formula* f, const pcw_partition* p,
                           const pcw_caps* caps, char** report_json, int* pass) {
  return guarded([&] {
    require(c, "circuit");
    require_match(f, p);
    const pcw_caps cp = caps_or_default(caps);
    pcw::ExtractOptions opts;
    opts.caps = protocol_caps(cp);
    auto ex = pcw::extract_cc2_refutation(c->c, f->f, p->p, opts);
    put_json(report_json, pcw::report::extraction(ex, c->c));
    if (pass) *pass = ex.valid();
  });
}

pcw_status pcw_roundtrip(const pcw_formula* f, const pcw_partition* p, const char* proof_text,
                         int64_t weight_bound, const pcw_caps* caps, char** report_json, int* pass) {
  return guarded([&] {
    require_match(f, p);
    const pcw_caps c = caps_or_default(caps);
    ordered_json source;
    auto cc = make_refutation(f, p, proof_text, weight_bound, c, source);
    pcw::CompileOptions opts;
    opts.caps = protocol_caps(c);
    auto res = pcw::compile_cc_refutation(cc, f->f, p->p, opts);
    auto claim = pcw::check_line_circuits(res, cc, f->f, p->p, opts.caps);
    auto sep = pcw::verify_separation(res.circuit, f->f, p->p, {c.max_separation_vars});

    ordered_json j = compile_json(source, cc, res);
    j["claim"] = pcw::report::claim(claim);
    j["separation"] = pcw::report::separation(sep, p->p);
    bool extraction_ok = false, lines_match = false, two_bits = false;
    if (sep.pass) {
      pcw::ExtractOptions eo;
      eo.caps = opts.caps;
      auto ex = pcw::extract_cc2_refutation(res.circuit, f->f, p->p, eo);
      j["extraction"] = pcw::report::extraction(ex, res.circuit);
      extraction_ok = ex.valid();
      lines_match = ex.lines.size() == res.circuit.size();
      two_bits = std::all_of(ex.protocols.begin(), ex.protocols.end(),
                             [](const pcw::ProtocolTree& t) { return t.depth() == 2; });
    } else {
      j["extraction"] = nullptr;
    }
    ordered_json inv;
    inv["gate_count_within_bound"] = static_cast<double>(res.circuit.size()) <= res.conservative_bound;
    inv["claim_holds"] = claim.violations == 0;
    inv["separation"] = sep.pass;
    inv["extraction_valid"] = extraction_ok;
    inv["extraction_lines_equal_gates"] = lines_match;
    inv["two_bit_protocols"] = two_bits;
    bool all = true;
    for (const auto& [k, v] : inv.items()) all = all && v.get<bool>();
    j["invariants"] = inv;
    j["pass"] = all;
    put_json(report_json, j);
    if (pass) *pass = all;
  });
}

// ---- random formulas and lemma checks --------------------------------------

pcw_status pcw_sample_formula(const pcw_dist_params* params, pcw_formula** out, pcw_partition** partition_out) {
  return guarded([&] {
    require(params, "params");
    require(out, "out");
    pcw::DistributionParams dp{params->m, params->n, params->d, params->seed};
    if (params->tensor) {
      auto t = pcw::sample_tensor(dp);
      if (partition_out) *partition_out = new pcw_partition{t.partition};
      *out = new pcw_formula{std::move(t.formula)};
    } else {
      auto f = pcw::sample_f(dp);
      if (partition_out) *partition_out = new pcw_partition{pcw::VariablePartition::alternating(f.num_vars())};
      *out = new pcw_formula{std::move(f)};
    }
  });
}

pcw_status pcw_stats_unsat_rate(const pcw_dist_params* params, size_t samples, const pcw_caps* caps,
                                char** report_json, double* rate) {
  return guarded([&] {
    require(params, "params");
    const pcw_caps c = caps_or_default(caps);
    pcw::DistributionParams dp{params->m, params->n, params->d, params->seed};
    auto rep = pcw::unsat_rate(dp, params->tensor != 0, samples, {c.max_brute_force_vars});
    put_json(report_json, pcw::report::unsat_rate(rep));
    if (rate) *rate = rep.rate;
  });
}

pcw_status pcw_stats_expansion(const pcw_formula* f, const char* epsilon, int s_max, pcw_mode mode,
                               uint64_t trials, uint64_t seed, char** report_json, int* pass) {
  return guarded([&] {
    require(f, "formula");
    pcw::ExpansionOptions o;
    if (epsilon) o.epsilon = pcw::parse_rational(epsilon);
    if (s_max > 0) o.s_max = s_max;
    o.mode = mode_of(mode);
    if (trials > 0) o.trials = trials;
    o.seed = seed;
    auto rep = pcw::expansion_report(f->f, o);
    put_json(report_json, pcw::report::expansion(rep));
    if (pass) *pass = rep.pass;
  });
}

pcw_status pcw_stats_profiles(const pcw_formula* f, pcw_mode mode, uint64_t pairs, uint64_t seed,
                              char** report_json, int* distinct) {
  return guarded([&] {
    require(f, "formula");
    pcw::ProfileOptions o;
    o.mode = mode_of(mode);
    if (pairs > 0) o.pairs = pairs;
    o.seed = seed;
    auto rep = pcw::profile_distinctness(f->f, o);
    put_json(report_json, pcw::report::profiles(rep));
    if (distinct) *distinct = rep.distinct;
  });
}

pcw_status pcw_stats_side_profiles(const pcw_formula* f, const pcw_partition* p, pcw_side side, pcw_mode mode,
                                   uint64_t pairs, uint64_t seed, char** report_json, int* distinct) {
  return guarded([&] {
    require_match(f, p);
    pcw::ProfileOptions o;
    o.mode = mode_of(mode);
    if (pairs > 0) o.pairs = pairs;
    o.seed = seed;
    auto rep = pcw::side_profile_distinctness(f->f, p->p, side_of(side), o);
    put_json(report_json, pcw::report::profiles(rep));
    if (distinct) *distinct = rep.distinct;
  });
}

pcw_status pcw_stats_heavy_partition(const pcw_formula* f, const char* epsilon, uint64_t max_trials, uint64_t seed,
                                     char** report_json, int* accepted, pcw_partition** partition_out) {
  return guarded([&] {
    require(f, "formula");
    pcw::PartitionOptions o;
    if (epsilon) o.epsilon = pcw::parse_rational(epsilon);
    if (max_trials > 0) o.max_trials = max_trials;
    o.seed = seed;
    auto rep = pcw::heavy_partition_search(f->f, o);
    put_json(report_json, pcw::report::heavy_partition(rep));
    if (accepted) *accepted = rep.accepted;
    if (partition_out) *partition_out = new pcw_partition{rep.partition};
  });
}

pcw_status pcw_stats_heavy_sat(const pcw_formula* f, const pcw_partition* p, pcw_side side, const char* epsilon,
                               pcw_mode mode, uint64_t trials, uint64_t seed, char** report_json,
                               double* fraction) {
  return guarded([&] {
    require_match(f, p);
    pcw::HeavySatOptions o;
    if (epsilon) o.epsilon = pcw::parse_rational(epsilon);
    o.mode = mode_of(mode);
    if (trials > 0) o.trials = trials;
    o.seed = seed;
    auto rep = pcw::heavy_sat_fraction(f->f, p->p, side_of(side), o);
    put_json(report_json, pcw::report::heavy_sat(rep));
    if (fraction) *fraction = rep.fraction;
  });
}

}  // extern "C"

#include "pcw/report.hpp"

namespace pcw::report {

std::string rational(Rational r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

ordered_json side_assignment(const VariablePartition& part, Side s, std::uint64_t code) {
  ordered_json lits = ordered_json::array();
  for (Var v : part.vars(s)) lits.push_back((code >> part.code_bit(v)) & 1U ? v : -v);
  return {{"code", code}, {"literals", lits}};
}

ordered_json cp_check(const CpCheckReport& r) {
  ordered_json bad = ordered_json::array();
  for (std::size_t i = 0; i < r.lines.size(); ++i)
    if (!r.lines[i].valid) bad.push_back({{"line", i + 1}, {"reason", r.lines[i].reason}});
  ordered_json j;
  j["lines"] = r.lines.size();
  j["all_valid"] = r.all_valid;
  j["refutation"] = r.refutation;
  j["refutation_line"] = r.refutation_line ? ordered_json(*r.refutation_line + 1) : ordered_json();
  j["weight"] = r.weight;
  j["invalid_lines"] = bad;
  return j;
}

ordered_json compile(const CompileResult& r) {
  ordered_json j;
  j["length"] = r.length;
  j["k"] = r.k;
  j["gates"] = r.circuit.size();
  j["output_gate"] = r.circuit.output() + 1;
  j["line_circuits"] = r.line_circuits.size();
  j["nominal_bound"] = r.nominal_bound;
  j["conservative_bound"] = r.conservative_bound;
  j["within_conservative_bound"] = static_cast<double>(r.circuit.size()) <= r.conservative_bound;
  return j;
}

ordered_json claim(const ClaimCheck& c) {
  return {{"checked", c.checked}, {"violations", c.violations}};
}

ordered_json separation(const SeparationReport& r, const VariablePartition& part) {
  ordered_json j;
  j["pass"] = r.pass;
  j["accepting_checked"] = r.accepting_checked;
  j["rejecting_checked"] = r.rejecting_checked;
  if (r.witness_x) j["witness"] = {{"side", "x"}, {"assignment", side_assignment(part, Side::X, *r.witness_x)}};
  if (r.witness_y) j["witness"] = {{"side", "y"}, {"assignment", side_assignment(part, Side::Y, *r.witness_y)}};
  return j;
}

ordered_json extraction(const ExtractedRefutation& e, const MonotoneCircuit& c) {
  ordered_json failed = ordered_json::array();
  for (std::size_t i = 0; i < e.entailed.size(); ++i)
    if (!e.entailed[i]) failed.push_back(i + 1);
  std::size_t max_bits = 0;
  for (const auto& p : e.protocols) max_bits = std::max<std::size_t>(max_bits, p.depth());
  ordered_json j;
  j["valid"] = e.valid();
  j["lines"] = e.lines.size();
  j["gates"] = c.size();
  j["separation"] = e.separation;
  j["leaves_entailed"] = e.leaves_entailed;
  j["internal_entailed"] = e.internal_entailed;
  j["protocols_compute"] = e.protocols_compute;
  j["protocol_bits"] = max_bits;
  j["root_constant_zero"] = e.root_constant_zero;
  j["unentailed_lines"] = failed;
  return j;
}

ordered_json unsat_rate(const UnsatRateReport& r) {
  ordered_json samples = ordered_json::array();
  for (std::size_t i = 0; i < r.seeds.size(); ++i)
    samples.push_back({{"seed", r.seeds[i]}, {"unsat", static_cast<bool>(r.unsat[i])}});
  return {{"tensor", r.tensor},
          {"samples", r.seeds.size()},
          {"unsat_count", r.unsat_count},
          {"unsat_rate", r.rate},
          {"per_sample", samples}};
}

ordered_json expansion(const ExpansionReport& r) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : r.rows) {
    ordered_json w = ordered_json::array();
    for (auto i : row.witness) w.push_back(i + 1);
    rows.push_back({{"s", row.s},
                    {"min_vars", row.min_vars},
                    {"threshold", rational(row.threshold)},
                    {"mode", row.exact ? "exact" : "sampled"},
                    {"subsets", row.subsets},
                    {"witness", w},
                    {"pass", row.pass}});
  }
  return {{"epsilon", rational(r.epsilon)},
          {"d", r.d},
          {"s_max", r.s_max},
          {"regime_s_max", r.regime_s_max},
          {"pass", r.pass},
          {"rows", rows}};
}

ordered_json profiles(const ProfileReport& r) {
  ordered_json j;
  j["mode"] = r.exact ? "exact" : "sampled";
  j["distinct"] = r.distinct;
  if (r.exact)
    j["rows"] = r.rows;
  else
    j["pairs"] = r.pairs;
  j["collisions"] = r.collisions;
  if (r.witness) j["witness"] = {r.witness->first, r.witness->second};
  return j;
}

ordered_json heavy_partition(const PartitionReport& r) {
  return {{"epsilon", rational(r.epsilon)},
          {"partition", r.partition.to_string()},
          {"n_x", r.partition.n1()},
          {"n_y", r.partition.n2()},
          {"z_x", r.counts.z_x},
          {"z_y", r.counts.z_y},
          {"w_x", r.counts.w_x},
          {"w_y", r.counts.w_y},
          {"w_max", r.counts.w_max()},
          {"m_prime", r.m_prime},
          {"w_bound", r.w_bound},
          {"balance_slack", r.balance_slack},
          {"accepted", r.accepted},
          {"trials", r.trials}};
}

ordered_json heavy_sat(const HeavySatReport& r) {
  return {{"side", r.side == Side::X ? "x" : "y"},
          {"heavy_clauses", r.heavy_clauses},
          {"mode", r.exact ? "exact" : "sampled"},
          {"assignments", r.assignments},
          {"satisfying", r.satisfying},
          {"fraction", r.fraction},
          {"lll", {{"q", r.q}, {"gamma_max", r.gamma_max}, {"condition", r.lll_condition}, {"bound", r.lll_bound}}}};
}

}  // namespace pcw::report

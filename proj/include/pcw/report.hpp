#pragma once

#include <json.hpp>

#include "pcw/circuit.hpp"
#include "pcw/cp_proof.hpp"
#include "pcw/random_lab.hpp"

// JSON views of the module reports. Keys are stable; no timestamps or other
// run-dependent data, so equal inputs give byte-identical dumps.
namespace pcw::report {

using nlohmann::ordered_json;

std::string rational(Rational r);
// A side code as DIMACS literals over the side's variables.
ordered_json side_assignment(const VariablePartition& part, Side s, std::uint64_t code);

ordered_json cp_check(const CpCheckReport& r);
ordered_json compile(const CompileResult& r);
ordered_json claim(const ClaimCheck& c);
ordered_json separation(const SeparationReport& r, const VariablePartition& part);
ordered_json extraction(const ExtractedRefutation& e, const MonotoneCircuit& c);

ordered_json unsat_rate(const UnsatRateReport& r);
ordered_json expansion(const ExpansionReport& r);
ordered_json profiles(const ProfileReport& r);
ordered_json heavy_partition(const PartitionReport& r);
ordered_json heavy_sat(const HeavySatReport& r);

}  // namespace pcw::report

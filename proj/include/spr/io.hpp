#pragma once

// JSON and CSV serialization. Doubles are written in shortest round-trip
// form, so a Subspace survives write/read bit-exactly. Infinite values are
// written as the strings "inf" / "-inf".

#include <string>

#include <json.hpp>

#include "spr/metrics.hpp"
#include "spr/perturbation.hpp"
#include "spr/space.hpp"
#include "spr/witness.hpp"

namespace spr::io {

using nlohmann::json;

json norm_to_json(const NormSpec& norm);
NormSpec norm_from_json(const json& j);

json vector_entries(const LatticeVector& x);

json subspace_to_json(const Subspace& e);
/// Throws Error(format) on malformed documents.
Subspace subspace_from_json(const json& j);

json number(double v);
double number_from_json(const json& j);

json certificate_to_json(const SPRCertificate& cert);
json witness_to_json(const WitnessPair& w, const WitnessReport& report);
json perturbation_to_json(const PerturbationReport& r);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);
json read_json(const std::string& path);

/// Fixed sweep schema: variant,params,r,epsilon_upper,epsilon_lower,spr_lower,method,seed
std::string csv_header();
std::string csv_row(const std::string& variant, const std::string& params, double r, const SPRCertificate& cert);

}  // namespace spr::io

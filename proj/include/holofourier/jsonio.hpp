#pragma once

#include "holofourier/measures.hpp"
#include "holofourier/spectral.hpp"
#include "holofourier/transform.hpp"

#include <json.hpp>

#include <iosfwd>

namespace hf {

using json = nlohmann::json;

json to_json(const GroupSpec& spec);
GroupSpec spec_from_json(const json& j);

json to_json(const GroupElement& g);
GroupElement element_from_json(const GroupSpec& spec, const json& j);

json to_json(const IrrepLabel& label);
IrrepLabel label_from_json(const json& j);

/// Serializable measures only (custom densities are runtime objects).
json to_json(const MeasureSpec& m);
MeasureSpec measure_from_json(const json& j);

json to_json(const InvariantOperator& op);
InvariantOperator operator_from_json(const json& j);

json fourier_to_json(const FourierData& F, const std::string& config_hash);
FourierData fourier_from_json(const json& j);

json class_expansion_to_json(const ClassExpansion& ce, const std::string& config_hash);
json admissibility_to_json(const AdmissibilityReport& rep, const std::string& config_hash);

/// label,weights,C,method,tail_estimate
void normalization_csv(std::ostream& os, const NormalizationTable& table);
/// weights,d,frobenius_norm,C,tail_estimate -- coefficient decay data
void decay_csv(std::ostream& os, const FourierData& F);

/// FNV-1a hash of the canonical (sorted-key) dump of a config object.
std::string config_hash(const json& config);

json error_json(const Error& e);

}  // namespace hf

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fockzero/canonical_product.hpp"
#include "fockzero/diagnostics.hpp"
#include "fockzero/randomize.hpp"
#include "fockzero/sequences.hpp"
#include "fockzero/weight.hpp"

namespace fockzero {

/// Insertion-ordered so that dumps are stable.
using json = nlohmann::ordered_json;

/// 64-bit FNV-1a as 16 hex digits.
std::string fingerprint(std::string_view text);

/// Finite numbers as numbers; ±∞ and NaN as the strings "inf", "-inf", "nan".
json number(double x);
double number_from(const json& j);

json to_json(const FamilySpec& spec);
FamilySpec family_from_json(const json& j);

json to_json(const WeightProfile& weight);
WeightProfile weight_from_json(const json& j);

json to_json(const GenusSpec& genus);
GenusSpec genus_from_json(const json& j);

json to_json(const TruncationPolicy& policy);
TruncationPolicy truncation_from_json(const json& j);

json to_json(const CountingWindow& window);
CountingWindow window_from_json(const json& j);

json to_json(const ConcentrationOptions& options);
ConcentrationOptions concentration_options_from_json(const json& j);

json to_json(const ProductValue& value);
json to_json(const DensityClassification& result);
json to_json(const DeficitFit& fit);
json to_json(const JensenVerdict& verdict);
json to_json(const ExponentFit& fit);
json to_json(const NormEstimate& estimate);
json to_json(const ExperimentReport& report);

/// Shortest round-trip text for a double ("inf", "-inf", "nan" for non-finite).
std::string format_number(double x);

void write_sequence_csv(std::ostream& out, const RadialSequence& seq, std::size_t count);
void write_configuration_csv(std::ostream& out, const PointConfiguration& cfg, std::size_t count);
void write_circle_csv(std::ostream& out, const std::vector<double>& theta, const std::vector<ProductValue>& values);
void write_curve_csv(std::ostream& out, const ExperimentReport& report);

}  // namespace fockzero

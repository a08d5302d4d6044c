#pragma once

#include <string>

#include <json.hpp>

#include "hyflow/measure.hpp"
#include "hyflow/oracle.hpp"
#include "hyflow/weak_verify.hpp"

namespace hyflow::cli {

// Numbers with infinities spelled "inf" / "-inf".
nlohmann::json number_json(double v);
double number_from_json(const nlohmann::json& v, const std::string& where);

// Sampled representation: every curve and load is stored as columns over `samples`
// parameters (graded towards a singular starting point).
nlohmann::json solution_to_json(const MeasureSolution& solution, int samples);

// Rebuilds a solution from its sampled representation; curve fields and region bounds
// become cubic Hermite interpolants of the samples.
MeasureSolution solution_from_json(const nlohmann::json& doc);

// Parameters at which a curve is sampled for export.
std::vector<double> export_parameters(const MeasureSolution& solution, double t_begin, double t_end,
                                      const std::array<double, 2>& start, int samples);

nlohmann::json report_to_json(const WeakResidualReport& report, const VerifyThresholds& thresholds);
nlohmann::json radon_nikodym_json(const RadonNikodymReport& report);
nlohmann::json classification_json(const Classification& c);

}  // namespace hyflow::cli

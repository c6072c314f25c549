#pragma once

#include <string>

#include <json.hpp>

#include "ssk/fluctuation_system.hpp"
#include "ssk/mixture.hpp"
#include "ssk/rs_solver.hpp"
#include "ssk/simulator.hpp"

namespace ssk {

using Json = nlohmann::ordered_json;

Json to_json(const MixturePolynomial& mixture);
// Accepts [{"p": 2, "w": 1.0}, ...] or the "p2:1.0" text form.
MixturePolynomial mixture_from_json(const Json& j);

Json to_json(const RSPoint& point);  // includes free_energy
Json to_json(const RegionDiagnostics& diag);
Json to_json(const FluctuationReport& report);
Json to_json(const EstimatorSummary& summary);
Json to_json(const ExperimentConfig& config);
Json to_json(const ExperimentResult& result);
Json to_json(const ThermoResult& result);

// Missing fields keep the values already in `base`.
ExperimentConfig experiment_config_from_json(const Json& j, ExperimentConfig base = {});

std::string fluctuation_csv(const FluctuationReport& report);
std::string experiment_csv(const ExperimentResult& result);

}  // namespace ssk

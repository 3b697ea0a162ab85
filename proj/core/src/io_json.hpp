#pragma once

#include <string>

#include "backflow/scenario.hpp"

namespace backflow::detail {

std::string report_json(const ScenarioOutcome& outcome);
std::string sweep_json(const SweepOutcome& outcome);
std::string profiles_csv(const EncounterState& state, const BackflowReport& report);
std::string spectrum_csv(const MomentumSpectrum& spectrum);
std::string sweep_csv(const SweepResult& result);

}  // namespace backflow::detail

#pragma once

#include <string>

#include "qdi/discord.hpp"
#include "qdi/experiment.hpp"
#include "qdi/state.hpp"

namespace qdi {

// Locale-independent shortest-round-trip rendering with up to 17 significant
// digits; the same bytes for the same value on every run.
std::string format_double(double v);

// State files carry either a density matrix ({"rho_re": 4x4, "rho_im": 4x4})
// or a Bloch form ({"bloch": {"x": [3], "y": [3], "T": 3x3}}); exactly one.
TwoQubitState state_from_json(const std::string& text);
std::string state_to_json(const TwoQubitState& s);

// Config files mirror the ExperimentConfig field names; unknown keys are
// rejected.  delay_scheme is "deterministic"/"probabilistic" ("det"/"prob"
// accepted).
ExperimentConfig experiment_config_from_json(const std::string& text);
std::string experiment_config_to_json(const ExperimentConfig& cfg);

std::string delay_scheme_name(DelayScheme scheme);

std::string discord_report_to_json(const DiscordReport& rep);

}  // namespace qdi

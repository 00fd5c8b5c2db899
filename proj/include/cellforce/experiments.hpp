#pragma once

#include "cellforce/config.hpp"

#include <string>
#include <utility>
#include <vector>

namespace cellforce {

struct ExperimentResult {
    std::vector<std::pair<std::string, std::string>> summary;  ///< printed as key = value
    std::string csv;                                           ///< header row plus numeric rows
    std::vector<std::string> warnings;
    std::vector<std::string> violations;  ///< failed invariants; non-empty means failure

    bool ok() const { return violations.empty(); }
    std::string summary_text() const;
    /// Summary value for `key`; empty when absent.
    std::string get(const std::string& key) const;
};

const std::vector<std::string>& preset_names();

/// Runs a named preset. Writes the CSV, SVG and dump files requested by the config.
/// Throws ErrorKind::Config for an unknown preset or invalid config and lets
/// solver errors propagate.
ExperimentResult run_preset(const std::string& preset, const ExperimentConfig& config);

}  // namespace cellforce

#pragma once

#include "dtqc/config.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace dtqc {

enum class PresetAction {
    evolve,           // trajectory CSV
    evolve_spectrum,  // trajectory, spectrum, peaks, SVG of config.column
    heatmap,          // basis-overlap matrix and column map
    phase_diagram,    // theta x f_L grid
    size_scan,        // tracked peaks versus N
    frequency_scan,   // spectra versus f_L at fixed theta
    fidelity_study,   // evolve_spectrum plus a fidelity size scan
    multi_frequency,  // evolve_spectrum once per f_L value
    theta_scan,       // tracked peaks versus theta for several initial states
};

struct Preset {
    std::string             name;
    std::string             description;
    PresetAction            action;
    RunConfig               config;
    std::vector<NamedState> states; // theta_scan only
};

[[nodiscard]] const std::vector<Preset> &presets();
[[nodiscard]] const Preset              &find_preset(std::string_view name);

/// Runs a preset with `overrides` applied in order, writing files named after the
/// preset into `out_dir` (created if missing). Progress lines go to `log`.
/// Returns the process exit code.
int run_preset(std::string_view name, const std::string &out_dir, std::span<const ConfigPatch> overrides, std::ostream &log);

} // namespace dtqc

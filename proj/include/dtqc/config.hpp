#pragma once

#include "dtqc/model.hpp"
#include "dtqc/propagator.hpp"
#include "dtqc/spectral.hpp"
#include "dtqc/sweep.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dtqc {

/// Everything a command needs. Files are read into this first, then command
/// line flags overwrite individual fields.
struct RunConfig {
    ChainParameters chain;
    Engine          engine       = Engine::automatic;
    double          t_max        = 1000.0;
    double          sample_dt    = 0.05;
    MConvention     m_convention = MConvention::spin;
    std::optional<int> entropy_cut;
    bool            densities = false;
    AnalysisOptions analysis;

    // spectrum
    std::string column = "m";
    double      svg_omega_max = 4.0;

    // sweeps
    std::vector<double> theta_values;
    std::vector<double> f_left_values;
    std::vector<int>    sizes;
    SweepObservable     observable = SweepObservable::m;
    unsigned            workers    = 0;

    std::uint64_t seed = 12345; // synthetic fixtures only

    // output
    std::string output; // file, or directory for presets
    std::string peaks;
    std::string svg;
    std::string metadata;

    /// Chain invariants plus run settings.
    void validate() const;
    [[nodiscard]] RunOptions run_options() const;
    [[nodiscard]] GridSpec   grid() const;
};

/// "a:b:step" (b included when hit within rounding) or a comma-separated list.
[[nodiscard]] std::vector<double> parse_real_list(std::string_view text);
[[nodiscard]] std::vector<int>    parse_int_list(std::string_view text);

[[nodiscard]] Engine      parse_engine(std::string_view name);
[[nodiscard]] MConvention parse_m_convention(std::string_view name);
[[nodiscard]] Window      parse_window(std::string_view name);

/// A partial configuration: set fields overwrite a RunConfig. Setting `sites`
/// without `left_sites` puts the cut at ceil(N/2); setting only the left period
/// (or frequency) keeps the current T_R / T_L ratio.
struct ConfigPatch {
    std::optional<int>         sites, left_sites;
    std::optional<double>      omega_left, omega_right;
    std::optional<double>      period_left, period_right, f_left, f_right;
    std::optional<double>      theta, theta_left, theta_right;
    std::optional<std::string> initial_state;

    std::optional<double>      t_max, sample_dt;
    std::optional<std::string> engine, m_convention;
    std::optional<int>         entropy_cut;
    std::optional<bool>        densities;
    std::optional<std::string> window;
    std::optional<double>      floor_factor, tolerance, lifetime_window, lifetime_hop;
    std::optional<int>         k_max;
    std::optional<std::string> column;
    std::optional<std::string> thetas, f_left_values, sizes, observable;
    std::optional<unsigned>    workers;
    std::optional<std::uint64_t> seed;

    std::optional<std::string> output, peaks, svg, metadata;
    std::optional<double>      svg_omega_max;
};

void apply_patch(const ConfigPatch &patch, RunConfig &config);

/// Reads an INI file with sections [chain], [drive], [run], [output]
/// as a patch. Unknown sections or keys are validation errors.
[[nodiscard]] ConfigPatch read_config_file(const std::string &path);
[[nodiscard]] ConfigPatch read_config_text(const std::string &text);

} // namespace dtqc

#pragma once

#include "dtqc/config.hpp"
#include "dtqc/error.hpp"
#include "dtqc/io.hpp"

#include <iosfwd>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace dtqc {

/// Process exit codes.
inline constexpr int exit_ok         = 0;
inline constexpr int exit_internal   = 1; // unexpected failure
inline constexpr int exit_validation = 2; // bad arguments, config or input data
inline constexpr int exit_io         = 3; // unreadable or unwritable files
inline constexpr int exit_numerical  = 4; // solver failure, or every sweep cell failed

[[nodiscard]] int exit_code(ErrorKind kind) noexcept;

/// Evolves config.chain and writes the trajectory CSV.
Trajectory cmd_evolve(const RunConfig &config, std::ostream &csv);

/// Spectrum and labeled peaks of one CSV column. The sample step comes from
/// the `t` column; drive frequencies from config.chain.
[[nodiscard]] SeriesAnalysis analyze_table(const CsvTable &table, const RunConfig &config);

/// Same analysis on in-memory data, the reference for round trips.
[[nodiscard]] SeriesAnalysis analyze_trajectory(const Trajectory &traj, const RunConfig &config);

struct SpectrumOutputs {
    std::ostream *spectrum_csv = nullptr;
    std::ostream *peaks_json   = nullptr;
    std::ostream *svg          = nullptr;
};

SeriesAnalysis cmd_spectrum(std::istream &input, const RunConfig &config, const SpectrumOutputs &out);

/// Runs config.grid() and writes the phase CSV.
std::vector<PhaseCell> cmd_phasediag(const RunConfig &config, std::ostream &csv);

/// First column t, then |<n|psi(t)>| for every basis state in heatmap order.
/// The metadata maps columns to occupation patterns.
void cmd_heatmap(const RunConfig &config, std::ostream &csv, nlohmann::json &metadata);

/// Opens `path` for writing, "-" meaning standard output.
class OutputFile {
public:
    explicit OutputFile(const std::string &path);
    ~OutputFile();
    OutputFile(const OutputFile &)            = delete;
    OutputFile &operator=(const OutputFile &) = delete;
    std::ostream &stream();
    void          close();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace dtqc

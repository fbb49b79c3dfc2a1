#pragma once

#include "dtqc/propagator.hpp"
#include "dtqc/spectral.hpp"
#include "dtqc/sweep.hpp"

#include <iosfwd>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace dtqc {

/// 17 significant digits in scientific notation; "inf", "-inf", "nan" otherwise.
[[nodiscard]] std::string format_number(double x);

/// Inverse of format_number. Throws a validation error on malformed input.
[[nodiscard]] double parse_number(std::string_view text);

/// Header `t,m,fidelity,entropy[,n_0..n_{N-1}]`. Observables that were not
/// sampled are written as nan.
void write_trajectory_csv(std::ostream &out, const Trajectory &traj, int n_sites);

/// Numeric CSV with a header row.
struct CsvTable {
    std::vector<std::string>         header;
    std::vector<std::vector<double>> columns;

    [[nodiscard]] const std::vector<double> &column(std::string_view name) const;
    [[nodiscard]] std::size_t                rows() const noexcept { return columns.empty() ? 0 : columns.front().size(); }
};

[[nodiscard]] CsvTable read_csv(std::istream &in);

void write_spectrum_csv(std::ostream &out, const Spectrum &spectrum);

/// Peaks as {omega, amplitude, k1, k2, residual, tau, r2, lifetime_status}.
/// Unlabeled peaks carry null k1/k2; tau is null unless finite.
[[nodiscard]] nlohmann::json peaks_json(const SeriesAnalysis &analysis);

/// Header `theta,f_L,A_mm,tau_mm,A_pp,tau_pp,is_dtqc,N,present_mm,present_pp,error`.
void write_phase_csv(std::ostream &out, std::span<const PhaseCell> cells);

/// Minimal line plot of A(omega) up to omega_max with labeled peak markers.
[[nodiscard]] std::string spectrum_svg(const SeriesAnalysis &analysis, double omega_max, const std::string &title);

/// Site-0-first occupation string, e.g. "1010".
[[nodiscard]] std::string bit_pattern(Bits bits, int n_sites);

} // namespace dtqc

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace dtqc {

enum class Window { rectangular, hann };

/// One-sided amplitude spectrum on an angular-frequency grid.
struct Spectrum {
    std::vector<double> omega;     // 2 pi j / (L dt), j = 0 .. L/2
    std::vector<double> amplitude; // (2/L) |X_j| of the mean-removed series
    double              resolution = 0.0;
    double              sample_dt  = 0.0;
    std::size_t         n_samples  = 0;
    Window              window     = Window::rectangular;
};

inline constexpr std::size_t min_spectrum_samples = 64;

[[nodiscard]] Spectrum fourier_spectrum(std::span<const double> series, double sample_dt, Window window = Window::rectangular);

/// Checks that `times` is a uniform grid before transforming.
[[nodiscard]] Spectrum fourier_spectrum(std::span<const double> times, std::span<const double> series, Window window = Window::rectangular);

/// Returns the grid spacing, throwing a sampling error if the grid is not uniform.
[[nodiscard]] double uniform_step(std::span<const double> times);

struct Peak {
    double omega;
    double amplitude;
};

/// Local maxima above floor_factor * median(A), strongest first. The position is
/// refined by a three-point parabola; the amplitude is corrected for the window
/// kernel using the ratio of the peak bin to its larger neighbour.
[[nodiscard]] std::vector<Peak> detect_peaks(const Spectrum &spectrum, double floor_factor = 5.0);

/// Label (k1, k2) stands for (k1/2) f_L + (k2/2) f_R.
struct PeakLabel {
    int         k1;
    int         k2;
    friend bool operator==(const PeakLabel &, const PeakLabel &) = default;
};

struct LabeledPeak {
    double                   omega;
    double                   amplitude;
    std::optional<PeakLabel> label;
    double                   residual; // |omega - predicted| of the best candidate
};

[[nodiscard]] double predicted_frequency(PeakLabel label, double f_left, double f_right) noexcept;

/// Best (k1, k2) in [-k_max, k_max]^2 with positive prediction; nullopt label
/// when the closest candidate is farther than `tol`.
[[nodiscard]] LabeledPeak label_peak(const Peak &peak, double f_left, double f_right, int k_max, double tol);
[[nodiscard]] std::vector<LabeledPeak> label_peaks(std::span<const Peak> peaks, double f_left, double f_right, int k_max, double tol);

enum class LifetimeStatus {
    resolved,     // tau > 0 and R^2 >= 0.5
    non_decaying, // slope consistent with zero from above; tau = +inf
    unresolvable, // decaying but poorly fitted
};

struct LifetimeFit {
    double         omega     = 0.0;
    double         tau       = 0.0;
    double         amplitude = 0.0; // exp(intercept), amplitude extrapolated to t = 0
    double         r2        = 0.0;
    double         slope     = 0.0;
    double         slope_se  = 0.0;
    std::size_t    n_windows = 0;
    LifetimeStatus status    = LifetimeStatus::unresolvable;

    /// tau for classification purposes: +inf for non-decaying components.
    [[nodiscard]] double effective_tau() const noexcept;
};

/// Envelope decay of the component at `omega` from sliding single-frequency
/// DFT windows and a log-linear fit. Times of `series` are k * sample_dt.
[[nodiscard]] LifetimeFit component_lifetime(std::span<const double> series, double sample_dt, double omega, double window_length, double hop);

struct AnalysisOptions {
    Window                window       = Window::rectangular;
    double                floor_factor = 5.0;
    int                   k_max        = 4;
    std::optional<double> tolerance;        // default: one frequency bin
    std::optional<double> lifetime_window;  // default: 50 T_L
    std::optional<double> lifetime_hop;     // default: 10 T_L
    bool                  lifetimes = true;
};

struct PeakReport {
    LabeledPeak                peak;
    std::optional<LifetimeFit> lifetime;
};

struct SeriesAnalysis {
    Spectrum                spectrum;
    std::vector<PeakReport> peaks; // strongest first
    double                  lifetime_window = 0.0;
    double                  lifetime_hop    = 0.0;
};

/// Sliding-window length and hop for lifetimes: as requested, else 50 T_L / 10 T_L.
struct LifetimeWindows {
    double window;
    double hop;
};
[[nodiscard]] LifetimeWindows lifetime_windows(double period_left, const AnalysisOptions &options);

/// Lifetime of the component at `omega`, or nullopt when the window cannot hold
/// four periods or the series is shorter than three windows.
[[nodiscard]] std::optional<LifetimeFit> try_component_lifetime(std::span<const double> series, double sample_dt, double omega, LifetimeWindows windows);

/// Spectrum, peak detection, labeling and per-peak lifetimes in one pass.
[[nodiscard]] SeriesAnalysis analyze_series(std::span<const double> series, double sample_dt, double f_left, double f_right, const AnalysisOptions &options = {});

/// Largest spectrum amplitude within one bin of `omega`.
[[nodiscard]] double amplitude_near(const Spectrum &spectrum, double omega);

} // namespace dtqc

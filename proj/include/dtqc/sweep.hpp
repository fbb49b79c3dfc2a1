#pragma once

#include "dtqc/model.hpp"
#include "dtqc/propagator.hpp"
#include "dtqc/spectral.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace dtqc {

enum class SweepObservable { m, fidelity, entropy };

[[nodiscard]] SweepObservable parse_sweep_observable(std::string_view name);
[[nodiscard]] std::string_view to_string(SweepObservable obs) noexcept;

/// The two mixed peaks tracked by phase diagrams: (-1/2, 1/2) and (1/2, 1/2).
inline constexpr PeakLabel label_mm{-1, 1};
inline constexpr PeakLabel label_pp{1, 1};

/// Lifetimes above this many left periods count as long-lived.
inline constexpr double dtqc_lifetime_periods = 30.0;

struct GridSpec {
    std::vector<double> theta_values;
    std::vector<double> f_left_values;
    std::vector<int>    sizes;
    ChainParameters     base;
    SweepObservable     observable = SweepObservable::m;
    double              t_max      = 1000.0;
    double              sample_dt  = 0.05;
    AnalysisOptions     analysis;

    void validate() const;
};

/// Amplitude and lifetime of one tracked spectral component.
struct ComponentReading {
    PeakLabel                  label{};
    double                     omega     = 0.0; // detected (refined) peak, or the prediction when absent
    double                     amplitude = 0.0; // detected peak amplitude, or raw spectrum near the prediction
    bool                       present   = false;
    std::optional<LifetimeFit> lifetime;

    [[nodiscard]] double effective_tau() const noexcept;
};

struct PhaseCell {
    int              n_sites = 0;
    double           theta   = 0.0;
    double           f_left  = 0.0;
    ComponentReading mm;
    ComponentReading pp;
    bool             is_dtqc = false;
    std::string      error; // empty on success
};

/// True iff both mixed peaks are detected and each lives longer than 30 T_L
/// (non-decaying fits count as passing).
[[nodiscard]] bool classify_dtqc(const PhaseCell &cell, double period_left);

/// Parameters of one grid point: T_L = 2 pi / f_L, T_R keeps the base ratio, theta on both sides.
[[nodiscard]] ChainParameters cell_parameters(const ChainParameters &base, int n_sites, double theta, double f_left);

/// Observable series of a trajectory.
[[nodiscard]] const std::vector<double> &series_of(const Trajectory &traj, SweepObservable obs);

/// Reads a tracked component out of an analysed series.
[[nodiscard]] ComponentReading read_component(const SeriesAnalysis &analysis, std::span<const double> series, double sample_dt,
                                              PeakLabel label, double f_left, double f_right, const AnalysisOptions &options);

/// Full single-cell pipeline: evolve, analyse, read both mixed peaks, classify.
[[nodiscard]] PhaseCell evaluate_cell(const ChainParameters &params, SweepObservable observable, double t_max, double sample_dt,
                                      const AnalysisOptions &analysis, std::shared_ptr<const SpectralDecomposition> decomposition = nullptr);

/// Eigendecompositions keyed by (N, N_L, Omega_L, Omega_R). Filled before
/// parallel dispatch, read-only afterwards.
class DecompositionCache {
public:
    std::shared_ptr<const SpectralDecomposition> get(const ChainParameters &params);
    [[nodiscard]] std::size_t                    size() const;

private:
    using Key = std::tuple<int, int, double, double>;
    mutable std::mutex                                          mutex_;
    std::map<Key, std::shared_ptr<const SpectralDecomposition>> entries_;
};

/// Cells in row-major order over (size, theta, f_L). Per-cell failures are
/// stored in the cell. `workers` = 0 picks the hardware concurrency.
[[nodiscard]] std::vector<PhaseCell> run_phase_diagram(const GridSpec &grid, unsigned workers = 0);

struct ExponentialFit {
    double slope     = 0.0; // d ln A / d N
    double intercept = 0.0;
    double r2        = 0.0;
};

[[nodiscard]] ExponentialFit fit_log_linear(std::span<const double> x, std::span<const double> y);

struct SizePoint {
    int              n_sites = 0;
    ComponentReading mm;
    ComponentReading pp;
};

struct SizeScan {
    std::vector<SizePoint>        points;
    std::optional<ExponentialFit> fit_mm; // fidelity only
    std::optional<ExponentialFit> fit_pp;
};

[[nodiscard]] SizeScan size_scan(std::span<const int> sizes, const ChainParameters &preset, SweepObservable observable, double t_max,
                                 double sample_dt = 0.05, const AnalysisOptions &analysis = {}, unsigned workers = 0);

struct FrequencyPoint {
    double         f_left = 0.0;
    double         f_right = 0.0;
    SeriesAnalysis analysis;
};

[[nodiscard]] std::vector<FrequencyPoint> frequency_scan(std::span<const double> f_left_values, const ChainParameters &base, double theta,
                                                         SweepObservable observable, double t_max, double sample_dt = 0.05,
                                                         const AnalysisOptions &analysis = {}, unsigned workers = 0);

struct ThetaScanRow {
    NamedState      initial_state = NamedState::z2;
    SweepObservable observable    = SweepObservable::m;
    double          theta         = 0.0;
    ComponentReading mm;
    ComponentReading pp;
};

/// Initial-state dependence: for each state and theta, one run recording both
/// mixed peaks of every requested observable.
[[nodiscard]] std::vector<ThetaScanRow> theta_scan(std::span<const double> thetas, std::span<const NamedState> states,
                                                   std::span<const SweepObservable> observables, const ChainParameters &base,
                                                   double t_max, double sample_dt = 0.05, const AnalysisOptions &analysis = {},
                                                   unsigned workers = 0);

/// Runs `count` independent jobs over a bounded pool; job(i) must not touch shared mutable state.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)> &job);

} // namespace dtqc

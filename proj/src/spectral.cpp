#include "dtqc/spectral.hpp"

#include "dtqc/error.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <numbers>
#include <numeric>
#include <string>

namespace dtqc {

namespace {
    // fftw planning is not thread-safe; execution is
    std::mutex fftw_planner_mutex;

    constexpr double two_pi = 2.0 * std::numbers::pi;

    std::vector<std::complex<double>> real_dft(std::vector<double> &input) {
        const auto                        n = input.size();
        std::vector<std::complex<double>> out(n / 2 + 1);
        fftw_plan                         plan;
        {
            std::lock_guard lock(fftw_planner_mutex);
            plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), input.data(), reinterpret_cast<fftw_complex *>(out.data()), FFTW_ESTIMATE);
        }
        if(plan == nullptr) throw Error(ErrorKind::numerical, "fftw planning failed");
        fftw_execute(plan);
        {
            std::lock_guard lock(fftw_planner_mutex);
            fftw_destroy_plan(plan);
        }
        return out;
    }

    double median(std::vector<double> values) {
        if(values.empty()) return 0.0;
        const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
        std::nth_element(values.begin(), mid, values.end());
        if(values.size() % 2 == 1) return *mid;
        const double upper = *mid;
        const double lower = *std::max_element(values.begin(), mid);
        return 0.5 * (lower + upper);
    }
}

double uniform_step(std::span<const double> times) {
    if(times.size() < 2) throw Error(ErrorKind::sampling, "time grid needs at least two samples");
    const double dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
    if(!(dt > 0.0)) throw Error(ErrorKind::sampling, "time grid must be increasing");
    for(std::size_t k = 1; k < times.size(); ++k) {
        const double step = times[k] - times[k - 1];
        if(std::abs(step - dt) > 1e-6 * dt)
            throw Error(ErrorKind::sampling, "non-uniform time grid at sample " + std::to_string(k) + " (step " + std::to_string(step) + " vs " + std::to_string(dt) + ")");
    }
    return dt;
}

Spectrum fourier_spectrum(std::span<const double> times, std::span<const double> series, Window window) {
    if(times.size() != series.size()) throw Error(ErrorKind::sampling, "time and value columns differ in length");
    return fourier_spectrum(series, uniform_step(times), window);
}

Spectrum fourier_spectrum(std::span<const double> series, double sample_dt, Window window) {
    const auto n = series.size();
    if(n < min_spectrum_samples)
        throw Error(ErrorKind::sampling, "spectrum needs at least " + std::to_string(min_spectrum_samples) + " samples, got " + std::to_string(n));
    if(!(sample_dt > 0.0)) throw Error(ErrorKind::sampling, "sample_dt must be positive");

    const double        mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
    std::vector<double> x(n);
    double              gain = static_cast<double>(n);
    if(window == Window::hann) {
        gain = 0.0;
        for(std::size_t k = 0; k < n; ++k) {
            const double w = 0.5 - 0.5 * std::cos(two_pi * static_cast<double>(k) / static_cast<double>(n));
            x[k]           = (series[k] - mean) * w;
            gain += w;
        }
    } else {
        for(std::size_t k = 0; k < n; ++k) x[k] = series[k] - mean;
    }

    const auto X = real_dft(x);
    Spectrum   s;
    s.n_samples  = n;
    s.sample_dt  = sample_dt;
    s.window     = window;
    s.resolution = two_pi / (static_cast<double>(n) * sample_dt);
    s.omega.resize(X.size());
    s.amplitude.resize(X.size());
    for(std::size_t j = 0; j < X.size(); ++j) {
        s.omega[j]     = static_cast<double>(j) * s.resolution;
        s.amplitude[j] = 2.0 * std::abs(X[j]) / gain;
    }
    return s;
}

namespace {

// A tone offset by d bins from bin j shows up there scaled by the window kernel
// W(d); the neighbour ratio r = W(1 - d) / W(d) inverts exactly for both windows.
double kernel_corrected(double peak, double neighbour, Window window) {
    if(!(peak > 0.0)) return peak;
    const double r = neighbour / peak;
    double       d = window == Window::hann ? (2.0 * r - 1.0) / (r + 1.0) : r / (1.0 + r);
    d              = std::clamp(d, 0.0, 0.5);
    if(d == 0.0) return peak;
    const double x    = std::numbers::pi * d;
    double       gain = std::sin(x) / x;
    if(window == Window::hann) gain /= 1.0 - d * d;
    return peak / gain;
}

} // namespace

std::vector<Peak> detect_peaks(const Spectrum &spectrum, double floor_factor) {
    if(!(floor_factor > 1.0)) throw Error(ErrorKind::validation, "floor_factor must exceed 1");
    const auto &a = spectrum.amplitude;
    if(a.size() < 3) return {};
    const double      floor = floor_factor * median(a);
    std::vector<Peak> peaks;
    for(std::size_t j = 1; j + 1 < a.size(); ++j) {
        if(!(a[j] > a[j - 1] and a[j] >= a[j + 1] and a[j] > floor)) continue;
        const double left = a[j - 1], mid = a[j], right = a[j + 1];
        const double curvature = left - 2.0 * mid + right;
        double       delta     = 0.0;
        if(curvature < 0.0) delta = std::clamp(0.5 * (left - right) / curvature, -0.5, 0.5);
        peaks.push_back({spectrum.omega[j] + delta * spectrum.resolution, kernel_corrected(mid, std::max(left, right), spectrum.window)});
    }
    std::stable_sort(peaks.begin(), peaks.end(), [](const Peak &p, const Peak &q) { return p.amplitude > q.amplitude; });
    return peaks;
}

double predicted_frequency(PeakLabel label, double f_left, double f_right) noexcept { return 0.5 * label.k1 * f_left + 0.5 * label.k2 * f_right; }

LabeledPeak label_peak(const Peak &peak, double f_left, double f_right, int k_max, double tol) {
    if(k_max < 1) throw Error(ErrorKind::validation, "k_max must be at least 1");
    const double tie_tol = 1e-9 * std::max(1.0, std::abs(peak.omega));
    PeakLabel    best{0, 0};
    double       best_residual = std::numeric_limits<double>::infinity();
    auto         simpler       = [](PeakLabel a, PeakLabel b) {
        const int wa = std::abs(a.k1) + std::abs(a.k2), wb = std::abs(b.k1) + std::abs(b.k2);
        if(wa != wb) return wa < wb;
        return std::abs(a.k2) < std::abs(b.k2);
    };
    for(int k1 = -k_max; k1 <= k_max; ++k1) {
        for(int k2 = -k_max; k2 <= k_max; ++k2) {
            const PeakLabel label{k1, k2};
            const double    predicted = predicted_frequency(label, f_left, f_right);
            if(!(predicted > 0.0)) continue;
            const double residual = std::abs(peak.omega - predicted);
            if(residual < best_residual - tie_tol) {
                best          = label;
                best_residual = residual;
            } else if(residual <= best_residual + tie_tol and simpler(label, best)) {
                best          = label;
                best_residual = std::min(best_residual, residual);
            }
        }
    }
    LabeledPeak out{peak.omega, peak.amplitude, std::nullopt, best_residual};
    if(best_residual <= tol) out.label = best;
    return out;
}

std::vector<LabeledPeak> label_peaks(std::span<const Peak> peaks, double f_left, double f_right, int k_max, double tol) {
    std::vector<LabeledPeak> out;
    out.reserve(peaks.size());
    for(const auto &p : peaks) out.push_back(label_peak(p, f_left, f_right, k_max, tol));
    return out;
}

double LifetimeFit::effective_tau() const noexcept {
    if(status == LifetimeStatus::non_decaying) return std::numeric_limits<double>::infinity();
    return tau;
}

LifetimeFit component_lifetime(std::span<const double> series, double sample_dt, double omega, double window_length, double hop) {
    if(!(omega > 0.0)) throw Error(ErrorKind::windowing, "lifetime requires a positive frequency");
    if(!(sample_dt > 0.0) or !(hop > 0.0)) throw Error(ErrorKind::windowing, "sample_dt and hop must be positive");
    const double duration = static_cast<double>(series.size() > 0 ? series.size() - 1 : 0) * sample_dt;
    if(window_length < 4.0 * two_pi / omega * (1.0 - 1e-12))
        throw Error(ErrorKind::windowing, "window " + std::to_string(window_length) + " shorter than four periods of omega = " + std::to_string(omega));
    if(duration < 3.0 * window_length * (1.0 - 1e-12))
        throw Error(ErrorKind::windowing, "series duration " + std::to_string(duration) + " shorter than three windows of " + std::to_string(window_length));

    const auto window_samples = static_cast<std::size_t>(std::llround(window_length / sample_dt));
    const auto hop_samples    = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(hop / sample_dt)));

    std::vector<double> centers, log_amp;
    for(std::size_t start = 0; start + window_samples <= series.size(); start += hop_samples) {
        const auto   segment = series.subspan(start, window_samples);
        const double mean    = std::accumulate(segment.begin(), segment.end(), 0.0) / static_cast<double>(window_samples);
        // phasor recurrence; drift over one window stays near 1e-13
        const std::complex<double> step = std::polar(1.0, -omega * sample_dt);
        std::complex<double>       phasor = std::polar(1.0, -omega * static_cast<double>(start) * sample_dt);
        std::complex<double>       acc{0.0, 0.0};
        for(std::size_t k = 0; k < window_samples; ++k) {
            acc += (segment[k] - mean) * phasor;
            phasor *= step;
        }
        const double a = 2.0 * std::abs(acc) / static_cast<double>(window_samples);
        centers.push_back((static_cast<double>(start) + 0.5 * static_cast<double>(window_samples - 1)) * sample_dt);
        log_amp.push_back(std::log(std::max(a, std::numeric_limits<double>::min())));
    }

    LifetimeFit fit;
    fit.omega     = omega;
    fit.n_windows = centers.size();
    const auto   n = static_cast<double>(centers.size());
    const double tx = std::accumulate(centers.begin(), centers.end(), 0.0) / n;
    const double ty = std::accumulate(log_amp.begin(), log_amp.end(), 0.0) / n;
    double       sxx = 0.0, sxy = 0.0, syy = 0.0;
    for(std::size_t k = 0; k < centers.size(); ++k) {
        sxx += (centers[k] - tx) * (centers[k] - tx);
        sxy += (centers[k] - tx) * (log_amp[k] - ty);
        syy += (log_amp[k] - ty) * (log_amp[k] - ty);
    }
    const double slope     = sxy / sxx;
    const double intercept = ty - slope * tx;
    const double sse       = std::max(0.0, syy - slope * sxy);
    fit.slope              = slope;
    fit.amplitude          = std::exp(intercept);
    fit.r2                 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    fit.slope_se           = centers.size() > 2 ? std::sqrt(sse / (n - 2.0) / sxx) : 0.0;
    fit.tau                = slope < 0.0 ? -1.0 / slope : std::numeric_limits<double>::infinity();

    // A slope whose total effect over the fitted span is below 1e-8 is zero.
    const double span       = centers.back() - centers.front();
    const double t_quantile = centers.size() > 2 ? boost::math::quantile(boost::math::students_t(n - 2.0), 0.975) : 0.0;
    const bool   decay_significant = slope + t_quantile * fit.slope_se < 0.0 and -slope * span > 1e-8;

    if(slope < 0.0 and fit.r2 >= 0.5 and -slope * span > 1e-8)
        fit.status = LifetimeStatus::resolved;
    else if(!decay_significant)
        fit.status = LifetimeStatus::non_decaying;
    else
        fit.status = LifetimeStatus::unresolvable;
    return fit;
}

LifetimeWindows lifetime_windows(double period_left, const AnalysisOptions &options) {
    return {options.lifetime_window.value_or(50.0 * period_left), options.lifetime_hop.value_or(10.0 * period_left)};
}

std::optional<LifetimeFit> try_component_lifetime(std::span<const double> series, double sample_dt, double omega, LifetimeWindows windows) {
    const double duration = static_cast<double>(series.size() - 1) * sample_dt;
    if(!(omega > 0.0) or windows.window < 4.0 * two_pi / omega or duration < 3.0 * windows.window) return std::nullopt;
    return component_lifetime(series, sample_dt, omega, windows.window, windows.hop);
}

SeriesAnalysis analyze_series(std::span<const double> series, double sample_dt, double f_left, double f_right, const AnalysisOptions &options) {
    SeriesAnalysis out;
    out.spectrum       = fourier_spectrum(series, sample_dt, options.window);
    const double tol   = options.tolerance.value_or(out.spectrum.resolution);
    const auto   peaks = detect_peaks(out.spectrum, options.floor_factor);
    const auto   windows = lifetime_windows(two_pi / f_left, options);
    out.lifetime_window  = windows.window;
    out.lifetime_hop     = windows.hop;
    for(const auto &lp : label_peaks(peaks, f_left, f_right, options.k_max, tol)) {
        PeakReport report{lp, std::nullopt};
        if(options.lifetimes) report.lifetime = try_component_lifetime(series, sample_dt, lp.omega, windows);
        out.peaks.push_back(std::move(report));
    }
    return out;
}

double amplitude_near(const Spectrum &spectrum, double omega) {
    if(spectrum.amplitude.empty()) return 0.0;
    const auto   j   = static_cast<std::ptrdiff_t>(std::llround(omega / spectrum.resolution));
    const auto   n   = static_cast<std::ptrdiff_t>(spectrum.amplitude.size());
    double       best = 0.0;
    for(auto k = std::max<std::ptrdiff_t>(0, j - 1); k <= std::min(n - 1, j + 1); ++k) best = std::max(best, spectrum.amplitude[static_cast<std::size_t>(k)]);
    return best;
}

} // namespace dtqc

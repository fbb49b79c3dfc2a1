#include "dtqc/sweep.hpp"

#include "dtqc/error.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <thread>

namespace dtqc {

namespace {
    constexpr double two_pi = 2.0 * std::numbers::pi;

    unsigned resolve_workers(unsigned workers, std::size_t jobs) {
        if(workers == 0) workers = std::max(1U, std::thread::hardware_concurrency());
        return static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(jobs, 1)));
    }

    RunOptions run_options(SweepObservable observable, double t_max, double sample_dt, std::shared_ptr<const SpectralDecomposition> decomposition) {
        RunOptions o;
        o.t_max                 = t_max;
        o.sample_dt             = sample_dt;
        o.observables.m         = observable == SweepObservable::m;
        o.observables.fidelity  = observable == SweepObservable::fidelity;
        o.observables.entropy   = observable == SweepObservable::entropy;
        o.decomposition         = std::move(decomposition);
        return o;
    }

    AnalysisOptions without_lifetimes(AnalysisOptions a) {
        a.lifetimes = false;
        return a;
    }
}

SweepObservable parse_sweep_observable(std::string_view name) {
    if(name == "m") return SweepObservable::m;
    if(name == "fidelity" or name == "F") return SweepObservable::fidelity;
    if(name == "entropy" or name == "S") return SweepObservable::entropy;
    throw Error(ErrorKind::naming, "unknown observable '" + std::string(name) + "' (expected m, fidelity or entropy)");
}

std::string_view to_string(SweepObservable obs) noexcept {
    switch(obs) {
        case SweepObservable::m: return "m";
        case SweepObservable::fidelity: return "fidelity";
        case SweepObservable::entropy: return "entropy";
    }
    return "?";
}

void GridSpec::validate() const {
    if(theta_values.empty() or f_left_values.empty() or sizes.empty()) throw Error(ErrorKind::validation, "grid axes must be non-empty");
    for(double f : f_left_values)
        if(!(f > 0.0) or !std::isfinite(f)) throw Error(ErrorKind::validation, "f_L values must be positive");
    for(double t : theta_values)
        if(!std::isfinite(t)) throw Error(ErrorKind::validation, "theta values must be finite");
    if(!(t_max > 0.0) or !(sample_dt > 0.0)) throw Error(ErrorKind::validation, "t_max and sample_dt must be positive");
    for(int n : sizes) cell_parameters(base, n, theta_values.front(), f_left_values.front()).validate();
}

double ComponentReading::effective_tau() const noexcept {
    if(!lifetime) return std::numeric_limits<double>::quiet_NaN();
    return lifetime->effective_tau();
}

bool classify_dtqc(const PhaseCell &cell, double period_left) {
    const double threshold = dtqc_lifetime_periods * period_left;
    auto         long_lived = [&](const ComponentReading &c) { return c.present and c.lifetime and c.lifetime->effective_tau() > threshold; };
    return long_lived(cell.mm) and long_lived(cell.pp);
}

ChainParameters cell_parameters(const ChainParameters &base, int n_sites, double theta, double f_left) {
    ChainParameters p = base;
    if(n_sites != base.n_sites) {
        p.n_sites = n_sites;
        p.n_left  = (n_sites + 1) / 2;
    }
    const double ratio = base.period_right / base.period_left;
    p.period_left      = two_pi / f_left;
    p.period_right     = p.period_left * ratio;
    p.theta_left       = theta;
    p.theta_right      = theta;
    return p;
}

const std::vector<double> &series_of(const Trajectory &traj, SweepObservable obs) {
    switch(obs) {
        case SweepObservable::m: return traj.m;
        case SweepObservable::fidelity: return traj.fidelity;
        case SweepObservable::entropy: return traj.entropy;
    }
    return traj.m;
}

ComponentReading read_component(const SeriesAnalysis &analysis, std::span<const double> series, double sample_dt, PeakLabel label,
                                double f_left, double f_right, const AnalysisOptions &options) {
    ComponentReading reading;
    reading.label = label;
    const auto windows = lifetime_windows(two_pi / f_left, options);
    for(const auto &report : analysis.peaks) { // strongest first
        if(report.peak.label != label) continue;
        reading.present   = true;
        reading.omega     = report.peak.omega;
        reading.amplitude = report.peak.amplitude;
        reading.lifetime  = report.lifetime ? report.lifetime : try_component_lifetime(series, sample_dt, reading.omega, windows);
        return reading;
    }
    reading.omega     = predicted_frequency(label, f_left, f_right);
    reading.amplitude = amplitude_near(analysis.spectrum, reading.omega);
    reading.lifetime  = try_component_lifetime(series, sample_dt, reading.omega, windows);
    return reading;
}

PhaseCell evaluate_cell(const ChainParameters &params, SweepObservable observable, double t_max, double sample_dt, const AnalysisOptions &analysis,
                        std::shared_ptr<const SpectralDecomposition> decomposition) {
    PhaseCell cell;
    cell.n_sites = params.n_sites;
    cell.theta   = params.theta_left;
    cell.f_left  = params.f_left();
    const auto  traj   = run(params, run_options(observable, t_max, sample_dt, std::move(decomposition)));
    const auto &series = series_of(traj, observable);
    const auto  an     = analyze_series(series, sample_dt, params.f_left(), params.f_right(), without_lifetimes(analysis));
    cell.mm            = read_component(an, series, sample_dt, label_mm, params.f_left(), params.f_right(), analysis);
    cell.pp            = read_component(an, series, sample_dt, label_pp, params.f_left(), params.f_right(), analysis);
    cell.is_dtqc       = classify_dtqc(cell, params.period_left);
    return cell;
}

std::shared_ptr<const SpectralDecomposition> DecompositionCache::get(const ChainParameters &params) {
    const Key       key{params.n_sites, params.n_left, params.omega_left, params.omega_right};
    std::lock_guard lock(mutex_);
    auto            it = entries_.find(key);
    if(it != entries_.end()) return it->second;
    ConstrainedBasis basis(params.n_sites, params.n_left);
    auto             decomp = std::make_shared<const SpectralDecomposition>(decompose(build_pxp(basis, params)));
    entries_.emplace(key, decomp);
    return decomp;
}

std::size_t DecompositionCache::size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
}

void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)> &job) {
    const unsigned n_threads = resolve_workers(workers, count);
    if(n_threads <= 1) {
        for(std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr       failure;
    std::mutex               failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for(unsigned t = 0; t < n_threads; ++t) {
            pool.emplace_back([&] {
                for(std::size_t i = next++; i < count; i = next++) {
                    try {
                        job(i);
                    } catch(...) {
                        std::lock_guard lock(failure_mutex);
                        if(!failure) failure = std::current_exception();
                    }
                }
            });
        }
    }
    if(failure) std::rethrow_exception(failure);
}

std::vector<PhaseCell> run_phase_diagram(const GridSpec &grid, unsigned workers) {
    grid.validate();
    struct Job {
        ChainParameters params;
    };
    std::vector<Job> jobs;
    for(int n : grid.sizes)
        for(double theta : grid.theta_values)
            for(double f : grid.f_left_values) jobs.push_back({cell_parameters(grid.base, n, theta, f)});

    // warm the cache serially; workers only read it
    DecompositionCache cache;
    std::vector<std::shared_ptr<const SpectralDecomposition>> decomps(jobs.size());
    std::vector<std::string>                                  warmup_errors(jobs.size());
    for(std::size_t i = 0; i < jobs.size(); ++i) {
        try {
            decomps[i] = cache.get(jobs[i].params);
        } catch(const std::exception &e) {
            warmup_errors[i] = e.what();
        }
    }

    std::vector<PhaseCell> cells(jobs.size());
    parallel_for(jobs.size(), workers, [&](std::size_t i) {
        const auto &p = jobs[i].params;
        try {
            if(!warmup_errors[i].empty()) throw Error(ErrorKind::numerical, warmup_errors[i]);
            cells[i] = evaluate_cell(p, grid.observable, grid.t_max, grid.sample_dt, grid.analysis, decomps[i]);
        } catch(const std::exception &e) {
            PhaseCell failed;
            failed.n_sites = p.n_sites;
            failed.theta   = p.theta_left;
            failed.f_left  = p.f_left();
            failed.error   = e.what();
            cells[i]       = std::move(failed);
        }
    });
    return cells;
}

ExponentialFit fit_log_linear(std::span<const double> x, std::span<const double> y) {
    if(x.size() != y.size() or x.size() < 2) throw Error(ErrorKind::validation, "log-linear fit needs at least two paired points");
    const auto          n = static_cast<double>(x.size());
    std::vector<double> ly;
    for(double v : y) {
        if(!(v > 0.0)) throw Error(ErrorKind::numerical, "log-linear fit needs positive values");
        ly.push_back(std::log(v));
    }
    double mx = 0, my = 0;
    for(std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += ly[i];
    mx /= n, my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for(std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    ExponentialFit fit;
    fit.slope     = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2        = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

SizeScan size_scan(std::span<const int> sizes, const ChainParameters &preset, SweepObservable observable, double t_max, double sample_dt,
                   const AnalysisOptions &analysis, unsigned workers) {
    if(sizes.empty()) throw Error(ErrorKind::validation, "size scan needs at least one size");
    SizeScan scan;
    scan.points.resize(sizes.size());
    parallel_for(sizes.size(), workers, [&](std::size_t i) {
        const auto params = cell_parameters(preset, sizes[i], preset.theta_left, preset.f_left());
        const auto cell   = evaluate_cell(params, observable, t_max, sample_dt, analysis);
        scan.points[i]    = {sizes[i], cell.mm, cell.pp};
    });
    if(observable == SweepObservable::fidelity and sizes.size() >= 2) {
        std::vector<double> n, a_mm, a_pp;
        for(const auto &p : scan.points) {
            n.push_back(p.n_sites);
            a_mm.push_back(p.mm.amplitude);
            a_pp.push_back(p.pp.amplitude);
        }
        scan.fit_mm = fit_log_linear(n, a_mm);
        scan.fit_pp = fit_log_linear(n, a_pp);
    }
    return scan;
}

std::vector<FrequencyPoint> frequency_scan(std::span<const double> f_left_values, const ChainParameters &base, double theta, SweepObservable observable,
                                           double t_max, double sample_dt, const AnalysisOptions &analysis, unsigned workers) {
    std::vector<FrequencyPoint> out(f_left_values.size());
    DecompositionCache          cache;
    const auto                  decomp = cache.get(base);
    parallel_for(f_left_values.size(), workers, [&](std::size_t i) {
        const auto  params = cell_parameters(base, base.n_sites, theta, f_left_values[i]);
        const auto  traj   = run(params, run_options(observable, t_max, sample_dt, decomp));
        const auto &series = series_of(traj, observable);
        out[i]             = {params.f_left(), params.f_right(), analyze_series(series, sample_dt, params.f_left(), params.f_right(), analysis)};
    });
    return out;
}

std::vector<ThetaScanRow> theta_scan(std::span<const double> thetas, std::span<const NamedState> states, std::span<const SweepObservable> observables,
                                     const ChainParameters &base, double t_max, double sample_dt, const AnalysisOptions &analysis, unsigned workers) {
    DecompositionCache cache;
    const auto         decomp = cache.get(base);
    const std::size_t  n_obs  = observables.size();
    std::vector<ThetaScanRow> rows(states.size() * thetas.size() * n_obs);
    parallel_for(states.size() * thetas.size(), workers, [&](std::size_t job) {
        const std::size_t s = job / thetas.size(), t = job % thetas.size();
        ChainParameters   params = cell_parameters(base, base.n_sites, thetas[t], base.f_left());
        params.initial_state     = states[s];
        RunOptions o             = run_options(SweepObservable::m, t_max, sample_dt, decomp);
        for(auto obs : observables) {
            o.observables.m        = o.observables.m or obs == SweepObservable::m;
            o.observables.fidelity = o.observables.fidelity or obs == SweepObservable::fidelity;
            o.observables.entropy  = o.observables.entropy or obs == SweepObservable::entropy;
        }
        const auto traj = run(params, o);
        for(std::size_t k = 0; k < n_obs; ++k) {
            const auto &series = series_of(traj, observables[k]);
            const auto  an     = analyze_series(series, sample_dt, params.f_left(), params.f_right(), without_lifetimes(analysis));
            auto       &row    = rows[job * n_obs + k];
            row.initial_state  = states[s];
            row.observable     = observables[k];
            row.theta          = thetas[t];
            row.mm             = read_component(an, series, sample_dt, label_mm, params.f_left(), params.f_right(), analysis);
            row.pp             = read_component(an, series, sample_dt, label_pp, params.f_left(), params.f_right(), analysis);
        }
    });
    return rows;
}

} // namespace dtqc

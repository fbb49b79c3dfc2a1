#include "dtqc/presets.hpp"

#include "dtqc/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <numbers>
#include <ostream>
#include <sstream>

namespace dtqc {

namespace {
    constexpr double pi = std::numbers::pi;

    RunConfig golden(int n_sites, double period_left, double theta, double t_max) {
        RunConfig c;
        c.chain = golden_chain(n_sites, period_left, theta);
        c.t_max = t_max;
        return c;
    }

    Preset make(std::string name, std::string description, PresetAction action, RunConfig config) {
        return Preset{std::move(name), std::move(description), action, std::move(config), {}};
    }

    std::vector<Preset> build_presets() {
        std::vector<Preset> out;

        out.push_back(make("fig1b", "m(t) of the golden-ratio chain, N=12, T_L=4.74, theta=pi, t=1000", PresetAction::evolve, golden(12, 4.74, pi, 1000.0)));

        auto c1c   = golden(12, 4.74, pi, 1000.0);
        c1c.column = "m";
        out.push_back(make("fig1c", "spectrum of m with labeled peaks, same chain as fig1b", PresetAction::evolve_spectrum, c1c));

        auto c1d         = golden(9, 4.74, pi, 50.0);
        c1d.chain.n_left = 5;
        out.push_back(make("fig1d", "basis-overlap heatmap, N=9 (N_L=5, N_R=4), t=50", PresetAction::heatmap, c1d));

        auto c2          = golden(10, 4.74, pi, 1000.0);
        c2.theta_values  = parse_real_list("2.0:4.5:0.05");
        c2.f_left_values = parse_real_list("0.5:3.5:0.05");
        out.push_back(make("fig2", "m phase diagram, theta 2.0-4.5 x f_L 0.5-3.5 (step 0.05), N=10, t=1000", PresetAction::phase_diagram, c2));

        auto c2s          = c2;
        c2s.theta_values  = parse_real_list("2.0:4.5:0.2");
        c2s.f_left_values = parse_real_list("0.5:3.5:0.2");
        out.push_back(make("fig2-small", "fig2 with 4x coarser steps on both axes", PresetAction::phase_diagram, c2s));

        auto c2c  = golden(10, 4.74, pi, 1000.0);
        c2c.sizes = {8, 10, 12, 14};
        out.push_back(make("fig2c", "m peak amplitudes versus N in {8,10,12,14}", PresetAction::size_scan, c2c));

        auto c2d          = golden(10, 4.74, pi, 1000.0);
        c2d.f_left_values = parse_real_list("0.4:3.5:0.1");
        out.push_back(make("fig2d", "m spectra versus f_L (0.4-3.5), theta=pi, N=10", PresetAction::frequency_scan, c2d));

        auto c3   = golden(12, 2.32, pi, 500.0);
        c3.column = "fidelity";
        c3.sizes  = {8, 10, 12, 14};
        out.push_back(make("fig3", "fidelity series and spectrum (T_L=2.32, t=500, N=12) plus size scan", PresetAction::fidelity_study, c3));

        auto c4          = golden(12, 4.74, pi, 500.0);
        c4.column        = "entropy";
        c4.f_left_values = {1.00, 2.32, 3.34};
        out.push_back(make("fig4", "entanglement entropy and its spectrum at f_L = 1.00, 2.32, 3.34, N=12, t=500", PresetAction::multi_frequency, c4));

        RunConfig c5a;
        c5a.chain = uniform_chain(10, 4.74, 0.0);
        c5a.t_max = 1000.0;
        out.push_back(make("fig5a", "uniform couplings, no drive, N=10", PresetAction::evolve_spectrum, c5a));
        auto c5b  = c5a;
        c5b.chain = uniform_chain(10, 4.74, pi);
        out.push_back(make("fig5b", "uniform couplings, single drive T=4.74, theta=pi, N=10", PresetAction::evolve_spectrum, c5b));
        out.push_back(make("fig5c", "golden-ratio couplings, no drive, N=10", PresetAction::evolve_spectrum, golden(10, 4.74, 0.0, 1000.0)));
        out.push_back(make("fig5d", "golden-ratio couplings and drives, T_L=4.74, theta=pi, N=10", PresetAction::evolve_spectrum, golden(10, 4.74, pi, 1000.0)));

        auto c6         = golden(12, 4.74, pi, 500.0);
        for(int k = 0; k <= 40; ++k) c6.theta_values.push_back(pi * k / 20.0);
        auto p6         = make("fig6", "tracked peaks of m and F versus theta for Z2, Z3 and ground initial states, N=12, t=500", PresetAction::theta_scan, c6);
        p6.states       = {NamedState::z2, NamedState::z3, NamedState::ground};
        out.push_back(p6);

        auto c7       = c2;
        c7.observable = SweepObservable::fidelity;
        out.push_back(make("fig7", "fidelity phase diagram on the fig2 grid", PresetAction::phase_diagram, c7));
        auto c7s       = c2s;
        c7s.observable = SweepObservable::fidelity;
        out.push_back(make("fig7-small", "fidelity phase diagram on the fig2-small grid", PresetAction::phase_diagram, c7s));
        return out;
    }

    class Writer {
    public:
        Writer(std::filesystem::path dir, std::ostream &log) : dir_(std::move(dir)), log_(log) {}

        template <typename F>
        void file(const std::string &name, F &&body) {
            const auto  path = (dir_ / name).string();
            OutputFile  out(path);
            body(out.stream());
            out.close();
            log_ << "wrote " << path << '\n';
        }

    private:
        std::filesystem::path dir_;
        std::ostream         &log_;
    };

    void evolve_spectrum(const RunConfig &config, const std::string &stem, Writer &w) {
        std::ostringstream series;
        (void)cmd_evolve(config, series);
        w.file(stem + "_series.csv", [&](std::ostream &o) { o << series.str(); });
        std::istringstream in(series.str());
        std::ostringstream spectrum, peaks, svg;
        (void)cmd_spectrum(in, config, {&spectrum, &peaks, &svg});
        w.file(stem + "_spectrum.csv", [&](std::ostream &o) { o << spectrum.str(); });
        w.file(stem + "_peaks.json", [&](std::ostream &o) { o << peaks.str(); });
        w.file(stem + ".svg", [&](std::ostream &o) { o << svg.str(); });
    }

    nlohmann::json fit_json(const std::optional<ExponentialFit> &fit) {
        if(!fit) return nullptr;
        return {{"slope", fit->slope}, {"intercept", fit->intercept}, {"r2", fit->r2}};
    }

    void write_component(std::ostream &o, const ComponentReading &c) {
        o << ',' << format_number(c.omega) << ',' << format_number(c.amplitude) << ',' << format_number(c.effective_tau()) << ',' << (c.present ? 1 : 0);
    }

    void size_scan_files(const RunConfig &config, const std::string &stem, SweepObservable observable, Writer &w) {
        const auto scan = size_scan(config.sizes, config.chain, observable, config.t_max, config.sample_dt, config.analysis, config.workers);
        w.file(stem + ".csv", [&](std::ostream &o) {
            o << "N,omega_mm,A_mm,tau_mm,present_mm,omega_pp,A_pp,tau_pp,present_pp\n";
            for(const auto &p : scan.points) {
                o << p.n_sites;
                write_component(o, p.mm);
                write_component(o, p.pp);
                o << '\n';
            }
        });
        if(scan.fit_mm)
            w.file(stem + "_fit.json", [&](std::ostream &o) {
                nlohmann::json doc{{"observable", to_string(observable)}, {"model", "ln A = intercept + slope * N"}, {"fit_mm", fit_json(scan.fit_mm)}, {"fit_pp", fit_json(scan.fit_pp)}};
                o << doc.dump(2) << '\n';
            });
    }

    std::string fixed2(double x) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", x);
        return buf;
    }
}

const std::vector<Preset> &presets() {
    static const std::vector<Preset> all = build_presets();
    return all;
}

const Preset &find_preset(std::string_view name) {
    for(const auto &p : presets())
        if(p.name == name) return p;
    throw Error(ErrorKind::naming, "unknown preset '" + std::string(name) + "'");
}

int run_preset(std::string_view name, const std::string &out_dir, std::span<const ConfigPatch> overrides, std::ostream &log) {
    const Preset &preset = find_preset(name);
    RunConfig     config = preset.config;
    for(const auto &patch : overrides) apply_patch(patch, config);
    config.validate();

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if(ec) throw Error(ErrorKind::io, "cannot create directory '" + out_dir + "': " + ec.message());
    Writer            w(out_dir, log);
    const std::string stem = preset.name;

    switch(preset.action) {
        case PresetAction::evolve:
            w.file(stem + ".csv", [&](std::ostream &o) { (void)cmd_evolve(config, o); });
            break;
        case PresetAction::evolve_spectrum: evolve_spectrum(config, stem, w); break;
        case PresetAction::heatmap: {
            nlohmann::json meta;
            w.file(stem + ".csv", [&](std::ostream &o) { cmd_heatmap(config, o, meta); });
            w.file(stem + ".json", [&](std::ostream &o) { o << meta.dump(2) << '\n'; });
            break;
        }
        case PresetAction::phase_diagram: {
            std::vector<PhaseCell> cells;
            w.file(stem + ".csv", [&](std::ostream &o) { cells = cmd_phasediag(config, o); });
            std::size_t ok = 0, dtqc = 0;
            for(const auto &c : cells) ok += c.error.empty(), dtqc += c.is_dtqc;
            log << cells.size() << " cells, " << ok << " succeeded, " << dtqc << " classified DTQC\n";
            if(ok == 0) return exit_numerical;
            break;
        }
        case PresetAction::size_scan: size_scan_files(config, stem, config.observable, w); break;
        case PresetAction::frequency_scan: {
            const auto points = frequency_scan(config.f_left_values, config.chain, config.chain.theta_left, config.observable, config.t_max, config.sample_dt,
                                               config.analysis, config.workers);
            w.file(stem + "_spectra.csv", [&](std::ostream &o) {
                o << "f_L,omega,amplitude\n";
                for(const auto &p : points) {
                    const auto &s = p.analysis.spectrum;
                    for(std::size_t j = 0; j < s.omega.size() and s.omega[j] <= config.svg_omega_max; ++j)
                        o << format_number(p.f_left) << ',' << format_number(s.omega[j]) << ',' << format_number(s.amplitude[j]) << '\n';
                }
            });
            w.file(stem + "_peaks.json", [&](std::ostream &o) {
                auto doc = nlohmann::json::array();
                for(const auto &p : points) doc.push_back({{"f_left", p.f_left}, {"f_right", p.f_right}, {"peaks", peaks_json(p.analysis)}});
                o << doc.dump(2) << '\n';
            });
            break;
        }
        case PresetAction::fidelity_study:
            evolve_spectrum(config, stem, w);
            size_scan_files(config, stem + "_sizes", SweepObservable::fidelity, w);
            break;
        case PresetAction::multi_frequency:
            for(double f : config.f_left_values) {
                RunConfig one = config;
                ConfigPatch at_f;
                at_f.f_left = f;
                apply_patch(at_f, one);
                evolve_spectrum(one, stem + "_fL" + fixed2(f), w);
            }
            break;
        case PresetAction::theta_scan: {
            const std::vector<SweepObservable> observables{SweepObservable::m, SweepObservable::fidelity};
            const auto rows = theta_scan(config.theta_values, preset.states, observables, config.chain, config.t_max, config.sample_dt, config.analysis, config.workers);
            w.file(stem + ".csv", [&](std::ostream &o) {
                o << "state,observable,theta,omega_mm,A_mm,tau_mm,present_mm,omega_pp,A_pp,tau_pp,present_pp\n";
                for(const auto &r : rows) {
                    o << to_string(r.initial_state) << ',' << to_string(r.observable) << ',' << format_number(r.theta);
                    write_component(o, r.mm);
                    write_component(o, r.pp);
                    o << '\n';
                }
            });
            break;
        }
    }
    return exit_ok;
}

} // namespace dtqc

// dtqc: command-line frontend. See README.md for the exit code table.
#include "dtqc/commands.hpp"
#include "dtqc/presets.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

using namespace dtqc;

namespace {

struct Flags {
    std::string config_path;
    ConfigPatch patch;
};

void add_chain_flags(CLI::App &app, Flags &f) {
    app.add_option("-c,--config", f.config_path, "INI file with [chain] [drive] [run] [output] sections");
    auto &p = f.patch;
    app.add_option("-N,--sites", p.sites, "chain length N");
    app.add_option("--left-sites", p.left_sites, "sites in the left region (default ceil(N/2))");
    app.add_option("--omega-left", p.omega_left, "left Rabi frequency");
    app.add_option("--omega-right", p.omega_right, "right Rabi frequency");
    app.add_option("--period-left", p.period_left, "left kick period T_L (T_R follows at a fixed ratio unless given)");
    app.add_option("--period-right", p.period_right, "right kick period T_R");
    app.add_option("--f-left", p.f_left, "left drive frequency 2 pi / T_L");
    app.add_option("--f-right", p.f_right, "right drive frequency 2 pi / T_R");
    app.add_option("--theta", p.theta, "kick angle on both regions");
    app.add_option("--theta-left", p.theta_left, "left kick angle");
    app.add_option("--theta-right", p.theta_right, "right kick angle");
    app.add_option("--state", p.initial_state, "initial state: z2, z2prime, z3, ground");
}

void add_run_flags(CLI::App &app, Flags &f) {
    auto &p = f.patch;
    app.add_option("-t,--t-max", p.t_max, "evolution time");
    app.add_option("--dt", p.sample_dt, "sample step");
    app.add_option("--engine", p.engine, "dense, krylov or auto");
    app.add_option("--m-convention", p.m_convention, "spin or density");
    app.add_option("--entropy-cut", p.entropy_cut, "sites left of the entanglement cut (default N_L)");
}

void add_analysis_flags(CLI::App &app, Flags &f) {
    auto &p = f.patch;
    app.add_option("--window", p.window, "rectangular or hann");
    app.add_option("--floor", p.floor_factor, "peak floor as a multiple of the median amplitude");
    app.add_option("--tolerance", p.tolerance, "labeling tolerance (default one bin)");
    app.add_option("--k-max", p.k_max, "largest |k1|, |k2| tried when labeling");
    app.add_option("--lifetime-window", p.lifetime_window, "lifetime window length (default 50 T_L)");
    app.add_option("--lifetime-hop", p.lifetime_hop, "lifetime window hop (default 10 T_L)");
}

RunConfig resolve(const Flags &f) {
    RunConfig config;
    if(!f.config_path.empty()) apply_patch(read_config_file(f.config_path), config);
    apply_patch(f.patch, config);
    config.validate();
    return config;
}

int run(int argc, char **argv) {
    CLI::App app{"Rydberg-blockade chains under two-tone Floquet kicks"};
    app.require_subcommand(1);

    Flags evolve_flags, spectrum_flags, phase_flags, heatmap_flags, preset_flags;

    auto *evolve = app.add_subcommand("evolve", "time series of m, fidelity and entropy");
    add_chain_flags(*evolve, evolve_flags);
    add_run_flags(*evolve, evolve_flags);
    evolve->add_option("--densities", evolve_flags.patch.densities, "also write site densities n_i (0 or 1)");
    evolve->add_option("-o,--output", evolve_flags.patch.output, "CSV path, - for stdout");

    std::string input;
    auto       *spectrum = app.add_subcommand("spectrum", "spectrum and labeled peaks of one column of an evolve CSV");
    spectrum->add_option("input", input, "CSV written by evolve")->required();
    add_chain_flags(*spectrum, spectrum_flags);
    add_analysis_flags(*spectrum, spectrum_flags);
    spectrum->add_option("--column", spectrum_flags.patch.column, "m, fidelity, entropy or any other column");
    spectrum->add_option("-o,--output", spectrum_flags.patch.output, "omega,amplitude CSV");
    spectrum->add_option("--peaks", spectrum_flags.patch.peaks, "peaks JSON");
    spectrum->add_option("--svg", spectrum_flags.patch.svg, "SVG plot");
    spectrum->add_option("--svg-omega-max", spectrum_flags.patch.svg_omega_max, "plot range");

    auto *phase = app.add_subcommand("phasediag", "theta x f_L grid of the two mixed peaks");
    add_chain_flags(*phase, phase_flags);
    add_run_flags(*phase, phase_flags);
    add_analysis_flags(*phase, phase_flags);
    phase->add_option("--thetas", phase_flags.patch.thetas, "start:stop:step or a list");
    phase->add_option("--f-lefts", phase_flags.patch.f_left_values, "start:stop:step or a list");
    phase->add_option("--sizes", phase_flags.patch.sizes, "list of N (default the chain's N)");
    phase->add_option("--observable", phase_flags.patch.observable, "m, fidelity or entropy");
    phase->add_option("-j,--workers", phase_flags.patch.workers, "worker threads (default all cores)");
    phase->add_option("-o,--output", phase_flags.patch.output, "CSV path, - for stdout");

    auto *heatmap = app.add_subcommand("heatmap", "basis-state overlaps over time");
    add_chain_flags(*heatmap, heatmap_flags);
    add_run_flags(*heatmap, heatmap_flags);
    heatmap->add_option("-o,--output", heatmap_flags.patch.output, "CSV path, - for stdout");
    heatmap->add_option("--metadata", heatmap_flags.patch.metadata, "column map JSON (default <output>.json)");

    std::string preset_name, out_dir = ".";
    auto       *preset = app.add_subcommand("preset", "run a named figure configuration");
    preset->add_option("name", preset_name, "preset name, see `dtqc presets`")->required();
    preset->add_option("-d,--dir", out_dir, "output directory");
    add_chain_flags(*preset, preset_flags);
    add_run_flags(*preset, preset_flags);
    preset->add_option("-j,--workers", preset_flags.patch.workers, "worker threads (default all cores)");

    auto *list = app.add_subcommand("presets", "list presets");

    try {
        app.parse(argc, argv);
    } catch(const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_validation;
    }

    try {
        if(*evolve) {
            const auto config = resolve(evolve_flags);
            OutputFile out(config.output);
            (void)cmd_evolve(config, out.stream());
            out.close();
        } else if(*spectrum) {
            const auto    config = resolve(spectrum_flags);
            std::ifstream in(input);
            if(!in) throw Error(ErrorKind::io, "cannot open '" + input + "'");
            std::optional<OutputFile> csv, peaks, svg;
            SpectrumOutputs           outs;
            csv.emplace(config.output);
            outs.spectrum_csv = &csv->stream();
            if(!config.peaks.empty()) outs.peaks_json = &peaks.emplace(config.peaks).stream();
            if(!config.svg.empty()) outs.svg = &svg.emplace(config.svg).stream();
            (void)cmd_spectrum(in, config, outs);
            for(auto *f : {&csv, &peaks, &svg})
                if(*f) (*f)->close();
        } else if(*phase) {
            const auto config = resolve(phase_flags);
            OutputFile out(config.output);
            const auto cells = cmd_phasediag(config, out.stream());
            out.close();
            std::size_t ok = 0;
            for(const auto &c : cells) {
                if(c.error.empty()) ++ok;
                else std::cerr << "cell theta=" << c.theta << " f_L=" << c.f_left << ": " << c.error << '\n';
            }
            if(ok == 0) return exit_numerical;
        } else if(*heatmap) {
            auto config = resolve(heatmap_flags);
            if(config.metadata.empty()) config.metadata = (config.output.empty() or config.output == "-") ? "heatmap.json" : config.output + ".json";
            nlohmann::json meta;
            OutputFile     out(config.output);
            cmd_heatmap(config, out.stream(), meta);
            out.close();
            OutputFile js(config.metadata);
            js.stream() << meta.dump(2) << '\n';
            js.close();
        } else if(*preset) {
            std::vector<ConfigPatch> patches;
            if(!preset_flags.config_path.empty()) patches.push_back(read_config_file(preset_flags.config_path));
            patches.push_back(preset_flags.patch);
            return run_preset(preset_name, out_dir, patches, std::cerr);
        } else if(*list) {
            for(const auto &p : presets()) std::cout << p.name << "\t" << p.description << '\n';
        }
    } catch(const Error &e) {
        std::cerr << "dtqc: " << to_string(e.kind()) << " error: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch(const std::exception &e) {
        std::cerr << "dtqc: " << e.what() << '\n';
        return exit_internal;
    }
    return exit_ok;
}

} // namespace

int main(int argc, char **argv) { return run(argc, argv); }

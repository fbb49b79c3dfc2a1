#include "dtqc/commands.hpp"

#include <fstream>
#include <iostream>

namespace dtqc {

int exit_code(ErrorKind kind) noexcept {
    switch(kind) {
        case ErrorKind::io: return exit_io;
        case ErrorKind::numerical: return exit_numerical;
        case ErrorKind::size:
        case ErrorKind::partition:
        case ErrorKind::naming:
        case ErrorKind::consistency:
        case ErrorKind::sampling:
        case ErrorKind::windowing:
        case ErrorKind::validation: return exit_validation;
    }
    return exit_internal;
}

Trajectory cmd_evolve(const RunConfig &config, std::ostream &csv) {
    config.validate();
    auto traj = run(config.chain, config.run_options());
    write_trajectory_csv(csv, traj, config.chain.n_sites);
    return traj;
}

SeriesAnalysis analyze_table(const CsvTable &table, const RunConfig &config) {
    config.validate();
    const auto &times  = table.column("t");
    const auto &series = table.column(config.column);
    return analyze_series(series, uniform_step(times), config.chain.f_left(), config.chain.f_right(), config.analysis);
}

SeriesAnalysis analyze_trajectory(const Trajectory &traj, const RunConfig &config) {
    config.validate();
    const std::vector<double> *series = nullptr;
    if(config.column == "m") series = &traj.m;
    else if(config.column == "fidelity") series = &traj.fidelity;
    else if(config.column == "entropy") series = &traj.entropy;
    else throw Error(ErrorKind::validation, "unknown column '" + config.column + "'");
    return analyze_series(*series, uniform_step(traj.times), config.chain.f_left(), config.chain.f_right(), config.analysis);
}

SeriesAnalysis cmd_spectrum(std::istream &input, const RunConfig &config, const SpectrumOutputs &out) {
    const auto analysis = analyze_table(read_csv(input), config);
    if(out.spectrum_csv) write_spectrum_csv(*out.spectrum_csv, analysis.spectrum);
    if(out.peaks_json) {
        nlohmann::json doc;
        doc["column"]          = config.column;
        doc["f_left"]          = config.chain.f_left();
        doc["f_right"]         = config.chain.f_right();
        doc["resolution"]      = analysis.spectrum.resolution;
        doc["lifetime_window"] = analysis.lifetime_window;
        doc["lifetime_hop"]    = analysis.lifetime_hop;
        doc["peaks"]           = peaks_json(analysis);
        *out.peaks_json << doc.dump(2) << '\n';
    }
    if(out.svg) *out.svg << spectrum_svg(analysis, config.svg_omega_max, "spectrum of " + config.column);
    return analysis;
}

std::vector<PhaseCell> cmd_phasediag(const RunConfig &config, std::ostream &csv) {
    config.validate();
    const auto cells = run_phase_diagram(config.grid(), config.workers);
    write_phase_csv(csv, cells);
    return cells;
}

void cmd_heatmap(const RunConfig &config, std::ostream &csv, nlohmann::json &metadata) {
    config.validate();
    RunOptions options           = config.run_options();
    options.observables.entropy  = false;
    options.observables.overlaps = true;
    const auto traj              = run(config.chain, options);

    const ConstrainedBasis basis(config.chain.n_sites, config.chain.n_left);
    const auto             order = basis.heatmap_order();
    const int              n     = config.chain.n_sites;
    csv << 't';
    for(auto k : order) csv << ",s" << bit_pattern(basis.state(k), n);
    csv << '\n';
    for(std::size_t s = 0; s < traj.size(); ++s) {
        csv << format_number(traj.times[s]);
        for(double a : traj.overlaps[s]) csv << ',' << format_number(a);
        csv << '\n';
    }

    auto columns = nlohmann::json::array();
    for(std::size_t c = 0; c < order.size(); ++c) {
        const Bits bits = basis.state(order[c]);
        columns.push_back({{"column", c + 1}, {"basis_index", order[c]}, {"bits", bits}, {"pattern", bit_pattern(bits, n)}});
    }
    metadata                = nlohmann::json::object();
    metadata["n_sites"]     = n;
    metadata["n_left"]      = config.chain.n_left;
    metadata["n_right"]     = n - config.chain.n_left;
    metadata["dimension"]   = basis.dimension();
    metadata["row_order"]   = "ascending Hamming distance from Z2, ties by bitmask";
    metadata["pattern"]     = "site 0 first, 1 = excited";
    metadata["value"]       = "|<n|psi(t)>|";
    metadata["columns"]     = std::move(columns);
    if(n == 9)
        metadata["note"] = "the complete blockade-legal basis of a 9-site open chain has 89 states; 51-state arrangements of this chain quoted elsewhere are not the full constrained space";
}

struct OutputFile::Impl {
    std::ofstream file;
    bool          to_stdout = false;
    std::string   path;
};

OutputFile::OutputFile(const std::string &path) : impl_(std::make_unique<Impl>()) {
    impl_->path = path;
    if(path.empty() or path == "-") {
        impl_->to_stdout = true;
        return;
    }
    impl_->file.open(path);
    if(!impl_->file) throw Error(ErrorKind::io, "cannot open '" + path + "' for writing");
}

OutputFile::~OutputFile() = default;

std::ostream &OutputFile::stream() { return impl_->to_stdout ? std::cout : impl_->file; }

void OutputFile::close() {
    if(impl_->to_stdout) {
        std::cout.flush();
        return;
    }
    impl_->file.close();
    if(!impl_->file) throw Error(ErrorKind::io, "failed writing '" + impl_->path + "'");
}

} // namespace dtqc

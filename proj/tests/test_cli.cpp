#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "dtqc/commands.hpp"
#include "dtqc/config.hpp"
#include "dtqc/io.hpp"
#include "dtqc/presets.hpp"

#include <cmath>
#include <doctest.h>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace dtqc;
namespace fs = std::filesystem;

namespace {

ErrorKind kind_of(auto &&f) {
    try {
        f();
    } catch(const Error &e) {
        return e.kind();
    }
    return ErrorKind::io;
}

RunConfig small_config(int n = 8, double t_max = 200.0) {
    RunConfig c;
    c.chain = golden_chain(n, 4.74, std::numbers::pi);
    c.t_max = t_max;
    return c;
}

fs::path scratch_dir(const std::string &name) {
    const auto dir = fs::temp_directory_path() / ("dtqc_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
}

} // namespace

TEST_CASE("numbers round-trip exactly") {
    for(double x : {0.0, -0.0, 1.0, 1.0 / 3.0, -2.5e-300, 6.02214076e23, std::numbers::pi, 5e-324}) CHECK(parse_number(format_number(x)) == x);
    CHECK(format_number(INFINITY) == "inf");
    CHECK(format_number(-INFINITY) == "-inf");
    CHECK(format_number(NAN) == "nan");
    CHECK(std::isinf(parse_number("inf")));
    CHECK(std::isnan(parse_number("nan")));
    CHECK(parse_number("+2.5") == 2.5);
    CHECK(kind_of([] { (void)parse_number("1.0x"); }) == ErrorKind::validation);
    CHECK(kind_of([] { (void)parse_number(""); }) == ErrorKind::validation);
}

TEST_CASE("CSV reading") {
    std::istringstream in("t,m\n0,1\n0.5,0.25\n1,nan\n");
    const auto         table = read_csv(in);
    CHECK(table.header == std::vector<std::string>{"t", "m"});
    CHECK(table.rows() == 3);
    CHECK(table.column("m")[1] == 0.25);
    CHECK(std::isnan(table.column("m")[2]));
    CHECK(kind_of([&] { (void)table.column("entropy"); }) == ErrorKind::validation);
    std::istringstream ragged("t,m\n0,1\n0.5\n");
    CHECK(kind_of([&] { (void)read_csv(ragged); }) == ErrorKind::validation);
}

TEST_CASE("bit patterns are site-0 first") {
    CHECK(bit_pattern(0b0101U, 4) == "1010");
    CHECK(bit_pattern(0U, 3) == "000");
}

TEST_CASE("range and list parsing") {
    CHECK(parse_real_list("1,2.5, 3") == std::vector<double>{1, 2.5, 3});
    const auto r = parse_real_list("2.0:4.5:0.05");
    CHECK(r.size() == 51);
    CHECK(r.back() == doctest::Approx(4.5));
    CHECK(parse_real_list("0.5:3.5:0.05").size() == 61);
    CHECK(parse_real_list("2:2:1") == std::vector<double>{2});
    CHECK(kind_of([] { (void)parse_real_list("1:2"); }) == ErrorKind::validation);
    CHECK(kind_of([] { (void)parse_real_list("2:1:0.1"); }) == ErrorKind::validation);
    CHECK(parse_int_list("8,10,12") == std::vector<int>{8, 10, 12});
    CHECK(kind_of([] { (void)parse_int_list("8.5"); }) == ErrorKind::validation);
    CHECK(parse_engine("krylov") == Engine::krylov);
    CHECK(parse_m_convention("density") == MConvention::density);
    CHECK(parse_window("hann") == Window::hann);
    CHECK(kind_of([] { (void)parse_engine("magic"); }) == ErrorKind::validation);
}

TEST_CASE("INI configuration") {
    const auto patch = read_config_text("[chain]\nsites = 12\ninitial_state = z3\n[drive]\nperiod_left = 2.32\ntheta = 3.0\n[run]\nt_max = 500\nobservable = fidelity\n");
    RunConfig  c;
    apply_patch(patch, c);
    CHECK(c.chain.n_sites == 12);
    CHECK(c.chain.n_left == 6);
    CHECK(c.chain.initial_state == NamedState::z3);
    CHECK(c.chain.period_left == 2.32);
    CHECK(c.chain.period_right == doctest::Approx(2.32 / golden_ratio));
    CHECK(c.chain.theta_left == 3.0);
    CHECK(c.chain.theta_right == 3.0);
    CHECK(c.t_max == 500.0);
    CHECK(c.observable == SweepObservable::fidelity);

    CHECK(kind_of([] { (void)read_config_text("[chain]\nsitez = 3\n"); }) == ErrorKind::validation);
    CHECK(kind_of([] { (void)read_config_text("[graphics]\nx = 1\n"); }) == ErrorKind::validation);
    CHECK(kind_of([] { (void)read_config_file("/nonexistent/dtqc.ini"); }) == ErrorKind::io);
}

TEST_CASE("patch semantics") {
    RunConfig   c;
    ConfigPatch p;
    p.sites = 9;
    apply_patch(p, c);
    CHECK(c.chain.n_left == 5);
    ConfigPatch q;
    q.sites      = 9;
    q.left_sites = 3;
    apply_patch(q, c);
    CHECK(c.chain.n_left == 3);
    ConfigPatch f;
    f.f_left = 2.0;
    apply_patch(f, c);
    CHECK(c.chain.f_left() == doctest::Approx(2.0));
    CHECK(c.chain.f_right() / c.chain.f_left() == doctest::Approx(golden_ratio));
    ConfigPatch both;
    both.f_left      = 1.0;
    both.period_left = 1.0;
    CHECK(kind_of([&] { apply_patch(both, c); }) == ErrorKind::validation);
    ConfigPatch bad_state;
    bad_state.initial_state = "neel";
    CHECK(kind_of([&] { apply_patch(bad_state, c); }) == ErrorKind::naming);
}

TEST_CASE("evolve at t = 0 writes one row") {
    auto c  = small_config(10, 0.0);
    std::ostringstream out;
    (void)cmd_evolve(c, out);
    std::istringstream in(out.str());
    const auto         table = read_csv(in);
    CHECK(table.header == std::vector<std::string>{"t", "m", "fidelity", "entropy"});
    REQUIRE(table.rows() == 1);
    CHECK(table.column("m")[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(table.column("fidelity")[0] == 1.0);
}

TEST_CASE("densities add one column per site") {
    auto c      = small_config(6, 1.0);
    c.densities = true;
    std::ostringstream out;
    (void)cmd_evolve(c, out);
    std::istringstream in(out.str());
    const auto         table = read_csv(in);
    CHECK(table.header.size() == 4 + 6);
    CHECK(table.column("n_0")[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(table.column("n_1")[0]) < 1e-12);
}

TEST_CASE("spectrum of a written trajectory equals the in-memory analysis") {
    for(const std::string column : {"m", "fidelity", "entropy"}) {
        auto c   = small_config(8, 300.0);
        c.column = column;
        std::ostringstream csv;
        const auto         traj = cmd_evolve(c, csv);
        std::istringstream in(csv.str());
        std::ostringstream spectrum, peaks;
        const auto         from_file = cmd_spectrum(in, c, {&spectrum, &peaks, nullptr});
        const auto         direct    = analyze_trajectory(traj, c);
        CHECK(from_file.spectrum.amplitude == direct.spectrum.amplitude);
        CHECK(from_file.spectrum.omega == direct.spectrum.omega);
        REQUIRE(from_file.peaks.size() == direct.peaks.size());
        for(std::size_t k = 0; k < direct.peaks.size(); ++k) CHECK(from_file.peaks[k].peak.omega == direct.peaks[k].peak.omega);
        const auto doc = nlohmann::json::parse(peaks.str());
        CHECK(doc["column"] == column);
        CHECK(doc["peaks"].size() == direct.peaks.size());
        CHECK(spectrum.str().rfind("omega,amplitude\n", 0) == 0);
    }
}

TEST_CASE("spectrum rejects unknown columns and short input") {
    auto               c = small_config();
    std::istringstream a("t,m\n0,1\n0.05,0.9\n");
    CHECK(kind_of([&] { (void)cmd_spectrum(a, c, {}); }) == ErrorKind::sampling);
    c.column = "energy";
    std::istringstream b("t,m\n0,1\n");
    CHECK(kind_of([&] { (void)cmd_spectrum(b, c, {}); }) == ErrorKind::validation);
}

TEST_CASE("heatmap of the nine-site chain") {
    auto c         = small_config(9, 2.0);
    c.chain.n_left = 5;
    std::ostringstream csv;
    nlohmann::json     meta;
    cmd_heatmap(c, csv, meta);
    std::istringstream in(csv.str());
    const auto         table = read_csv(in);
    CHECK(table.header.size() == 1 + 89);
    CHECK(table.header[1] == "s101010101");
    CHECK(meta["dimension"] == 89);
    CHECK(meta["columns"].size() == 89);
    CHECK(meta.contains("note"));
    CHECK(table.column("s101010101")[0] == doctest::Approx(1.0).epsilon(1e-12));
    for(std::size_t r = 0; r < table.rows(); ++r) {
        double sum = 0.0;
        for(std::size_t k = 1; k < table.columns.size(); ++k) sum += table.columns[k][r] * table.columns[k][r];
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("phase diagram validation and output") {
    auto c = small_config(6, 200.0);
    std::ostringstream out;
    CHECK(kind_of([&] { (void)cmd_phasediag(c, out); }) == ErrorKind::validation);
    c.theta_values  = {std::numbers::pi};
    c.f_left_values = {1.33, 3.3};
    const auto cells = cmd_phasediag(c, out);
    CHECK(cells.size() == 2);
    std::istringstream in(out.str());
    std::string        header;
    std::getline(in, header);
    CHECK(header == "theta,f_L,A_mm,tau_mm,A_pp,tau_pp,is_dtqc,N,present_mm,present_pp,error");
}

TEST_CASE("exit codes") {
    CHECK(exit_code(ErrorKind::io) == 3);
    CHECK(exit_code(ErrorKind::numerical) == 4);
    for(auto k : {ErrorKind::size, ErrorKind::partition, ErrorKind::naming, ErrorKind::consistency, ErrorKind::sampling, ErrorKind::windowing,
                  ErrorKind::validation})
        CHECK(exit_code(k) == 2);
    CHECK(kind_of([] { OutputFile f("/nonexistent/dir/out.csv"); }) == ErrorKind::io);
}

TEST_CASE("every preset runs at reduced size") {
    const std::vector<std::string> names{"fig1b", "fig1c", "fig1d", "fig2",  "fig2-small", "fig2c", "fig2d", "fig3", "fig4",
                                         "fig5a", "fig5b", "fig5c", "fig5d", "fig6",       "fig7",  "fig7-small"};
    CHECK(presets().size() == names.size());
    for(const auto &name : names) {
        CAPTURE(name);
        const auto  &preset = find_preset(name);
        ConfigPatch  small;
        small.sites   = 6;
        small.t_max   = 60.0;
        small.sample_dt = 0.1;
        small.workers = 2;
        if(preset.action == PresetAction::phase_diagram) {
            small.thetas        = "3.0,3.1";
            small.f_left_values = "1.33";
        }
        if(preset.action == PresetAction::size_scan or preset.action == PresetAction::fidelity_study) small.sizes = "6,8";
        if(preset.action == PresetAction::theta_scan) small.thetas = "0,3.14";
        if(preset.action == PresetAction::frequency_scan) small.f_left_values = "1.0,2.0";
        const auto         dir = scratch_dir(name);
        std::ostringstream log;
        CHECK(run_preset(name, dir.string(), std::span(&small, 1), log) == exit_ok);
        CHECK(std::distance(fs::directory_iterator(dir), fs::directory_iterator{}) > 0);
        fs::remove_all(dir);
    }
    CHECK(kind_of([] { (void)find_preset("fig9"); }) == ErrorKind::naming);
}

TEST_CASE("preset file layout") {
    const auto         dir = scratch_dir("layout");
    ConfigPatch        small;
    small.sites = 6;
    small.t_max = 60.0;
    std::ostringstream log;
    REQUIRE(run_preset("fig5d", dir.string(), std::span(&small, 1), log) == exit_ok);
    for(const char *f : {"fig5d_series.csv", "fig5d_spectrum.csv", "fig5d_peaks.json", "fig5d.svg"}) CHECK(fs::exists(dir / f));
    CHECK(slurp(dir / "fig5d.svg").find("<svg") != std::string::npos);

    small.f_left_values = "1.0,3.34";
    REQUIRE(run_preset("fig4", dir.string(), std::span(&small, 1), log) == exit_ok);
    CHECK(fs::exists(dir / "fig4_fL1.00_series.csv"));
    CHECK(fs::exists(dir / "fig4_fL3.34_peaks.json"));
    fs::remove_all(dir);
}

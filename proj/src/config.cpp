#include "dtqc/config.hpp"

#include "dtqc/error.hpp"
#include "dtqc/io.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dtqc {

namespace pt = boost::property_tree;

namespace {
    std::vector<std::string_view> split_on(std::string_view text, char sep) {
        std::vector<std::string_view> out;
        std::size_t                   start = 0;
        while(true) {
            const auto at = text.find(sep, start);
            out.push_back(text.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start));
            if(at == std::string_view::npos) return out;
            start = at + 1;
        }
    }

    int parse_int(std::string_view text) {
        const double v = parse_number(text);
        if(v != std::floor(v) or std::abs(v) > 1e9) throw Error(ErrorKind::validation, "not an integer: '" + std::string(text) + "'");
        return static_cast<int>(v);
    }

    bool parse_bool(std::string_view text) {
        if(text == "1" or text == "true" or text == "yes" or text == "on") return true;
        if(text == "0" or text == "false" or text == "no" or text == "off") return false;
        throw Error(ErrorKind::validation, "not a boolean: '" + std::string(text) + "'");
    }

    ConfigPatch patch_from_tree(const pt::ptree &tree) {
        ConfigPatch p;
        for(const auto &[section, keys] : tree) {
            if(keys.empty() and !keys.data().empty()) throw Error(ErrorKind::validation, "config key '" + section + "' outside a section");
            for(const auto &[key, node] : keys) {
                const std::string value = node.get_value<std::string>();
                const std::string where = section + "." + key;
                auto real  = [&] { return parse_number(value); };
                auto whole = [&] { return parse_int(value); };
                if(section == "chain") {
                    if(key == "sites") p.sites = whole();
                    else if(key == "left_sites") p.left_sites = whole();
                    else if(key == "omega_left") p.omega_left = real();
                    else if(key == "omega_right") p.omega_right = real();
                    else if(key == "initial_state") p.initial_state = value;
                    else throw Error(ErrorKind::validation, "unknown config key " + where);
                } else if(section == "drive") {
                    if(key == "period_left") p.period_left = real();
                    else if(key == "period_right") p.period_right = real();
                    else if(key == "f_left") p.f_left = real();
                    else if(key == "f_right") p.f_right = real();
                    else if(key == "theta") p.theta = real();
                    else if(key == "theta_left") p.theta_left = real();
                    else if(key == "theta_right") p.theta_right = real();
                    else throw Error(ErrorKind::validation, "unknown config key " + where);
                } else if(section == "run") {
                    if(key == "t_max") p.t_max = real();
                    else if(key == "sample_dt") p.sample_dt = real();
                    else if(key == "engine") p.engine = value;
                    else if(key == "m_convention") p.m_convention = value;
                    else if(key == "entropy_cut") p.entropy_cut = whole();
                    else if(key == "densities") p.densities = parse_bool(value);
                    else if(key == "window") p.window = value;
                    else if(key == "floor_factor") p.floor_factor = real();
                    else if(key == "tolerance") p.tolerance = real();
                    else if(key == "lifetime_window") p.lifetime_window = real();
                    else if(key == "lifetime_hop") p.lifetime_hop = real();
                    else if(key == "k_max") p.k_max = whole();
                    else if(key == "column") p.column = value;
                    else if(key == "thetas") p.thetas = value;
                    else if(key == "f_left_values") p.f_left_values = value;
                    else if(key == "sizes") p.sizes = value;
                    else if(key == "observable") p.observable = value;
                    else if(key == "workers") p.workers = static_cast<unsigned>(std::max(0, whole()));
                    else if(key == "seed") p.seed = static_cast<std::uint64_t>(whole());
                    else throw Error(ErrorKind::validation, "unknown config key " + where);
                } else if(section == "output") {
                    if(key == "path") p.output = value;
                    else if(key == "peaks") p.peaks = value;
                    else if(key == "svg") p.svg = value;
                    else if(key == "metadata") p.metadata = value;
                    else if(key == "svg_omega_max") p.svg_omega_max = real();
                    else throw Error(ErrorKind::validation, "unknown config key " + where);
                } else {
                    throw Error(ErrorKind::validation, "unknown config section [" + section + "]");
                }
            }
        }
        return p;
    }
}

std::vector<double> parse_real_list(std::string_view text) {
    std::vector<double> out;
    if(text.find(':') != std::string_view::npos) {
        const auto parts = split_on(text, ':');
        if(parts.size() != 3) throw Error(ErrorKind::validation, "range must be start:stop:step, got '" + std::string(text) + "'");
        const double a = parse_number(parts[0]), b = parse_number(parts[1]), step = parse_number(parts[2]);
        if(!(step > 0.0) or b < a) throw Error(ErrorKind::validation, "range needs step > 0 and stop >= start: '" + std::string(text) + "'");
        const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
        for(std::size_t k = 0; k < count; ++k) out.push_back(a + static_cast<double>(k) * step);
        return out;
    }
    for(auto item : split_on(text, ','))
        if(item.find_first_not_of(' ') != std::string_view::npos) out.push_back(parse_number(item));
    return out;
}

std::vector<int> parse_int_list(std::string_view text) {
    std::vector<int> out;
    for(auto item : split_on(text, ','))
        if(item.find_first_not_of(' ') != std::string_view::npos) out.push_back(parse_int(item));
    return out;
}

Engine parse_engine(std::string_view name) {
    if(name == "dense") return Engine::dense;
    if(name == "krylov") return Engine::krylov;
    if(name == "auto") return Engine::automatic;
    throw Error(ErrorKind::validation, "unknown engine '" + std::string(name) + "' (dense, krylov, auto)");
}

MConvention parse_m_convention(std::string_view name) {
    if(name == "spin") return MConvention::spin;
    if(name == "density") return MConvention::density;
    throw Error(ErrorKind::validation, "unknown m convention '" + std::string(name) + "' (spin, density)");
}

Window parse_window(std::string_view name) {
    if(name == "rectangular") return Window::rectangular;
    if(name == "hann") return Window::hann;
    throw Error(ErrorKind::validation, "unknown window '" + std::string(name) + "' (rectangular, hann)");
}

void apply_patch(const ConfigPatch &p, RunConfig &c) {
    auto &ch = c.chain;
    if(p.sites) {
        ch.n_sites = *p.sites;
        ch.n_left  = (*p.sites + 1) / 2;
    }
    if(p.left_sites) ch.n_left = *p.left_sites;
    if(p.omega_left) ch.omega_left = *p.omega_left;
    if(p.omega_right) ch.omega_right = *p.omega_right;

    const double ratio = ch.period_right / ch.period_left;
    if(p.period_left and p.f_left) throw Error(ErrorKind::validation, "give either period_left or f_left, not both");
    if(p.period_right and p.f_right) throw Error(ErrorKind::validation, "give either period_right or f_right, not both");
    if(p.period_left) ch.period_left = *p.period_left;
    if(p.f_left) ch.period_left = 2.0 * std::numbers::pi / *p.f_left;
    if(p.period_left or p.f_left) ch.period_right = ch.period_left * ratio;
    if(p.period_right) ch.period_right = *p.period_right;
    if(p.f_right) ch.period_right = 2.0 * std::numbers::pi / *p.f_right;

    if(p.theta) ch.theta_left = ch.theta_right = *p.theta;
    if(p.theta_left) ch.theta_left = *p.theta_left;
    if(p.theta_right) ch.theta_right = *p.theta_right;
    if(p.initial_state) ch.initial_state = parse_named_state(*p.initial_state);

    if(p.t_max) c.t_max = *p.t_max;
    if(p.sample_dt) c.sample_dt = *p.sample_dt;
    if(p.engine) c.engine = parse_engine(*p.engine);
    if(p.m_convention) c.m_convention = parse_m_convention(*p.m_convention);
    if(p.entropy_cut) c.entropy_cut = *p.entropy_cut;
    if(p.densities) c.densities = *p.densities;
    if(p.window) c.analysis.window = parse_window(*p.window);
    if(p.floor_factor) c.analysis.floor_factor = *p.floor_factor;
    if(p.tolerance) c.analysis.tolerance = *p.tolerance;
    if(p.lifetime_window) c.analysis.lifetime_window = *p.lifetime_window;
    if(p.lifetime_hop) c.analysis.lifetime_hop = *p.lifetime_hop;
    if(p.k_max) c.analysis.k_max = *p.k_max;
    if(p.column) c.column = *p.column;
    if(p.thetas) c.theta_values = parse_real_list(*p.thetas);
    if(p.f_left_values) c.f_left_values = parse_real_list(*p.f_left_values);
    if(p.sizes) c.sizes = parse_int_list(*p.sizes);
    if(p.observable) c.observable = parse_sweep_observable(*p.observable);
    if(p.workers) c.workers = *p.workers;
    if(p.seed) c.seed = *p.seed;

    if(p.output) c.output = *p.output;
    if(p.peaks) c.peaks = *p.peaks;
    if(p.svg) c.svg = *p.svg;
    if(p.metadata) c.metadata = *p.metadata;
    if(p.svg_omega_max) c.svg_omega_max = *p.svg_omega_max;
}

ConfigPatch read_config_text(const std::string &text) {
    std::istringstream in(text);
    pt::ptree          tree;
    try {
        pt::read_ini(in, tree);
    } catch(const pt::ini_parser_error &e) {
        throw Error(ErrorKind::validation, std::string("config: ") + e.what());
    }
    return patch_from_tree(tree);
}

ConfigPatch read_config_file(const std::string &path) {
    std::ifstream in(path);
    if(!in) throw Error(ErrorKind::io, "cannot open config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return read_config_text(text.str());
}

void RunConfig::validate() const {
    chain.validate();
    if(!std::isfinite(t_max) or t_max < 0.0) throw Error(ErrorKind::validation, "t_max must be finite and >= 0");
    if(!std::isfinite(sample_dt) or !(sample_dt > 0.0)) throw Error(ErrorKind::validation, "sample_dt must be positive");
    if(entropy_cut and (*entropy_cut < 1 or *entropy_cut >= chain.n_sites)) throw Error(ErrorKind::validation, "entropy_cut must lie in [1, N-1]");
    if(analysis.k_max < 1) throw Error(ErrorKind::validation, "k_max must be >= 1");
    if(!(analysis.floor_factor > 1.0)) throw Error(ErrorKind::validation, "floor_factor must exceed 1");
    if(!(svg_omega_max > 0.0)) throw Error(ErrorKind::validation, "svg_omega_max must be positive");
}

RunOptions RunConfig::run_options() const {
    RunOptions o;
    o.t_max                 = t_max;
    o.sample_dt             = sample_dt;
    o.observables.m         = true;
    o.observables.fidelity  = true;
    o.observables.entropy   = true;
    o.observables.densities = densities;
    o.m_convention          = m_convention;
    o.entropy_cut           = entropy_cut;
    o.engine                = engine;
    return o;
}

GridSpec RunConfig::grid() const {
    GridSpec g;
    g.theta_values  = theta_values;
    g.f_left_values = f_left_values;
    g.sizes         = sizes.empty() ? std::vector<int>{chain.n_sites} : sizes;
    g.base          = chain;
    g.observable    = observable;
    g.t_max         = t_max;
    g.sample_dt     = sample_dt;
    g.analysis      = analysis;
    return g;
}

} // namespace dtqc

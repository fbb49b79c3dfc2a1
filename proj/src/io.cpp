#include "dtqc/io.hpp"

#include "dtqc/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace dtqc {

namespace {
    std::vector<std::string_view> split(std::string_view line) {
        std::vector<std::string_view> out;
        std::size_t                   start = 0;
        while(true) {
            const auto comma = line.find(',', start);
            out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
            if(comma == std::string_view::npos) break;
            start = comma + 1;
        }
        return out;
    }

    std::string_view trim(std::string_view s) {
        while(!s.empty() and (s.back() == '\r' or s.back() == ' ')) s.remove_suffix(1);
        while(!s.empty() and s.front() == ' ') s.remove_prefix(1);
        return s;
    }

    std::string csv_escape(const std::string &s) {
        if(s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string out = "\"";
        for(char c : s) {
            if(c == '"') out += '"';
            out += c == '\n' ? ' ' : c;
        }
        return out + '"';
    }

    nlohmann::json finite_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

    const char *status_name(LifetimeStatus s) {
        switch(s) {
            case LifetimeStatus::resolved: return "resolved";
            case LifetimeStatus::non_decaying: return "non_decaying";
            case LifetimeStatus::unresolvable: return "unresolvable";
        }
        return "?";
    }
}

std::string format_number(double x) {
    if(std::isnan(x)) return "nan";
    if(std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

double parse_number(std::string_view text) {
    text = trim(text);
    if(!text.empty() and text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if(ec != std::errc() or ptr != text.data() + text.size() or text.empty())
        throw Error(ErrorKind::validation, "not a number: '" + std::string(text) + "'");
    return value;
}

void write_trajectory_csv(std::ostream &out, const Trajectory &traj, int n_sites) {
    const bool with_densities = !traj.densities.empty();
    out << "t,m,fidelity,entropy";
    if(with_densities)
        for(int i = 0; i < n_sites; ++i) out << ",n_" << i;
    out << '\n';
    const double nan = std::numeric_limits<double>::quiet_NaN();
    auto         at  = [&](const std::vector<double> &v, std::size_t k) { return v.empty() ? nan : v[k]; };
    for(std::size_t k = 0; k < traj.size(); ++k) {
        out << format_number(traj.times[k]) << ',' << format_number(at(traj.m, k)) << ',' << format_number(at(traj.fidelity, k)) << ','
            << format_number(at(traj.entropy, k));
        if(with_densities)
            for(double n : traj.densities[k]) out << ',' << format_number(n);
        out << '\n';
    }
}

const std::vector<double> &CsvTable::column(std::string_view name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if(it == header.end()) throw Error(ErrorKind::validation, "unknown column '" + std::string(name) + "'");
    return columns[static_cast<std::size_t>(it - header.begin())];
}

CsvTable read_csv(std::istream &in) {
    CsvTable    table;
    std::string line;
    if(!std::getline(in, line)) throw Error(ErrorKind::validation, "empty CSV input");
    for(auto h : split(line)) table.header.emplace_back(trim(h));
    table.columns.resize(table.header.size());
    std::size_t row = 1;
    while(std::getline(in, line)) {
        ++row;
        if(trim(line).empty()) continue;
        const auto fields = split(line);
        if(fields.size() != table.header.size())
            throw Error(ErrorKind::validation, "CSV row " + std::to_string(row) + " has " + std::to_string(fields.size()) + " fields, expected " + std::to_string(table.header.size()));
        for(std::size_t c = 0; c < fields.size(); ++c) table.columns[c].push_back(parse_number(fields[c]));
    }
    return table;
}

void write_spectrum_csv(std::ostream &out, const Spectrum &spectrum) {
    out << "omega,amplitude\n";
    for(std::size_t j = 0; j < spectrum.omega.size(); ++j) out << format_number(spectrum.omega[j]) << ',' << format_number(spectrum.amplitude[j]) << '\n';
}

nlohmann::json peaks_json(const SeriesAnalysis &analysis) {
    auto peaks = nlohmann::json::array();
    for(const auto &r : analysis.peaks) {
        nlohmann::json p;
        p["omega"]     = r.peak.omega;
        p["amplitude"] = r.peak.amplitude;
        p["k1"]        = r.peak.label ? nlohmann::json(r.peak.label->k1) : nlohmann::json(nullptr);
        p["k2"]        = r.peak.label ? nlohmann::json(r.peak.label->k2) : nlohmann::json(nullptr);
        p["residual"]  = r.peak.label ? nlohmann::json(r.peak.residual) : nlohmann::json(nullptr);
        if(r.lifetime) {
            p["tau"]             = finite_or_null(r.lifetime->tau);
            p["r2"]              = finite_or_null(r.lifetime->r2);
            p["lifetime_status"] = status_name(r.lifetime->status);
        } else {
            p["tau"]             = nullptr;
            p["r2"]              = nullptr;
            p["lifetime_status"] = "not_computed";
        }
        peaks.push_back(std::move(p));
    }
    return peaks;
}

void write_phase_csv(std::ostream &out, std::span<const PhaseCell> cells) {
    out << "theta,f_L,A_mm,tau_mm,A_pp,tau_pp,is_dtqc,N,present_mm,present_pp,error\n";
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for(const auto &c : cells) {
        const bool ok = c.error.empty();
        out << format_number(c.theta) << ',' << format_number(c.f_left) << ',' << format_number(ok ? c.mm.amplitude : nan) << ','
            << format_number(ok ? c.mm.effective_tau() : nan) << ',' << format_number(ok ? c.pp.amplitude : nan) << ','
            << format_number(ok ? c.pp.effective_tau() : nan) << ',' << (c.is_dtqc ? 1 : 0) << ',' << c.n_sites << ',' << (c.mm.present ? 1 : 0) << ','
            << (c.pp.present ? 1 : 0) << ',' << csv_escape(c.error) << '\n';
    }
}

std::string spectrum_svg(const SeriesAnalysis &analysis, double omega_max, const std::string &title) {
    constexpr double width = 800, height = 400, margin = 50;
    const auto      &s     = analysis.spectrum;
    double           a_max = 0.0;
    std::size_t      n     = 0;
    while(n < s.omega.size() and s.omega[n] <= omega_max) a_max = std::max(a_max, s.amplitude[n++]);
    if(a_max <= 0.0) a_max = 1.0;
    auto x = [&](double w) { return margin + (width - 2 * margin) * w / omega_max; };
    auto y = [&](double a) { return height - margin - (height - 2 * margin) * a / (1.05 * a_max); };

    std::ostringstream svg;
    svg << R"(<svg xmlns="http://www.w3.org/2000/svg" width=")" << width << R"(" height=")" << height << R"(" font-family="sans-serif" font-size="11">)" << '\n';
    svg << R"(<rect width="100%" height="100%" fill="white"/>)" << '\n';
    svg << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
    svg << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
    for(int k = 0; k <= 4; ++k) {
        const double w = omega_max * k / 4.0;
        svg << "<text x=\"" << x(w) << "\" y=\"" << height - margin + 15 << "\" text-anchor=\"middle\">" << w << "</text>\n";
    }
    svg << "<text x=\"" << width / 2 << "\" y=\"" << height - 10 << "\" text-anchor=\"middle\">omega</text>\n";
    svg << "<text x=\"15\" y=\"" << height / 2 << "\" transform=\"rotate(-90 15 " << height / 2 << ")\" text-anchor=\"middle\">A</text>\n";
    svg << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1\" points=\"";
    for(std::size_t j = 0; j < n; ++j) svg << x(s.omega[j]) << ',' << y(s.amplitude[j]) << ' ';
    svg << "\"/>\n";
    int marked = 0;
    for(const auto &r : analysis.peaks) {
        if(!r.peak.label or r.peak.omega > omega_max) continue;
        if(++marked > 12) break;
        svg << "<circle cx=\"" << x(r.peak.omega) << "\" cy=\"" << y(r.peak.amplitude) << "\" r=\"3\" fill=\"crimson\"/>\n";
        svg << "<text x=\"" << x(r.peak.omega) << "\" y=\"" << y(r.peak.amplitude) - 6 << "\" text-anchor=\"middle\">(" << r.peak.label->k1 << "/2," << r.peak.label->k2
            << "/2)</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string bit_pattern(Bits bits, int n_sites) {
    std::string s(static_cast<std::size_t>(n_sites), '0');
    for(int i = 0; i < n_sites; ++i)
        if(bits >> i & 1U) s[static_cast<std::size_t>(i)] = '1';
    return s;
}

} // namespace dtqc

#include "dtqc/model.hpp"

#include "dtqc/error.hpp"
#include "dtqc/state.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

namespace dtqc {

namespace {
    void require(bool ok, const std::string &msg) {
        if(!ok) throw Error(ErrorKind::validation, msg);
    }
}

void ChainParameters::validate() const {
    if(n_sites < 2 or n_sites > max_sites)
        throw Error(ErrorKind::size, "n_sites = " + std::to_string(n_sites) + " outside [2, " + std::to_string(max_sites) + "]");
    if(n_left < 1 or n_left >= n_sites)
        throw Error(ErrorKind::partition, "n_left = " + std::to_string(n_left) + " must satisfy 1 <= n_left < n_sites");
    require(std::isfinite(omega_left) and omega_left > 0, "omega_left must be positive");
    require(std::isfinite(omega_right) and omega_right > 0, "omega_right must be positive");
    require(std::isfinite(period_left) and period_left > 0, "period_left must be positive");
    require(std::isfinite(period_right) and period_right > 0, "period_right must be positive");
    require(std::isfinite(theta_left) and std::isfinite(theta_right), "kick strengths must be finite");
}

ChainParameters golden_chain(int n_sites, double period_left, double theta) {
    ChainParameters p;
    p.n_sites      = n_sites;
    p.n_left       = (n_sites + 1) / 2;
    p.omega_left   = 1.0;
    p.omega_right  = golden_ratio;
    p.period_left  = period_left;
    p.period_right = period_left / golden_ratio;
    p.theta_left   = theta;
    p.theta_right  = theta;
    return p;
}

ChainParameters uniform_chain(int n_sites, double period, double theta) {
    ChainParameters p = golden_chain(n_sites, period, theta);
    p.omega_right     = p.omega_left;
    p.period_right    = period;
    return p;
}

Eigen::SparseMatrix<double> SparseHamiltonian::to_sparse() const {
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(entries.size());
    for(const auto &e : entries) triplets.emplace_back(static_cast<int>(e.row), static_cast<int>(e.col), e.value);
    const auto                  d = static_cast<Eigen::Index>(dimension);
    Eigen::SparseMatrix<double> m(d, d);
    m.setFromTriplets(triplets.begin(), triplets.end());
    return m;
}

Eigen::MatrixXd SparseHamiltonian::to_dense() const {
    const auto      d = static_cast<Eigen::Index>(dimension);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
    for(const auto &e : entries) m(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) += e.value;
    return m;
}

double SparseHamiltonian::max_abs() const noexcept {
    double m = 0.0;
    for(const auto &e : entries) m = std::max(m, std::abs(e.value));
    return m;
}

SparseHamiltonian build_pxp(const ConstrainedBasis &basis, const ChainParameters &params) {
    if(basis.n_sites() != params.n_sites or basis.n_left() != params.n_left)
        throw Error(ErrorKind::consistency, "basis (N=" + std::to_string(basis.n_sites()) + ", N_L=" + std::to_string(basis.n_left()) +
                                                ") does not match parameters (N=" + std::to_string(params.n_sites) +
                                                ", N_L=" + std::to_string(params.n_left) + ")");
    SparseHamiltonian h;
    h.dimension   = basis.dimension();
    const int   n = basis.n_sites();
    const auto &states = basis.states();
    for(std::size_t k = 0; k < states.size(); ++k) {
        const Bits s = states[k];
        for(int i = 0; i < n; ++i) {
            // P_{i-1} X_i P_{i+1}; neighbours outside the chain count as |g>
            const bool left_free  = i == 0 or ((s >> (i - 1)) & 1U) == 0;
            const bool right_free = i == n - 1 or ((s >> (i + 1)) & 1U) == 0;
            if(!left_free or !right_free) continue;
            const double value = 0.5 * (i < basis.n_left() ? params.omega_left : params.omega_right);
            if(value == 0.0) continue;
            const auto j = basis.index(s ^ (Bits{1} << i));
            h.entries.push_back({k, *j, value});
        }
    }
    return h;
}

KickSchedule build_kick_schedule(const ChainParameters &params, double t_max) {
    KickSchedule schedule;
    schedule.horizon = t_max;
    std::vector<KickEvent> raw;
    auto add_train = [&](double period, KickRegions region) {
        for(long k = 1;; ++k) {
            const double t = static_cast<double>(k) * period;
            if(t > t_max) break;
            raw.push_back({t, region});
        }
    };
    add_train(params.period_left, KickRegions::left);
    add_train(params.period_right, KickRegions::right);
    std::stable_sort(raw.begin(), raw.end(), [](const KickEvent &a, const KickEvent &b) { return a.time < b.time; });

    for(const auto &ev : raw) {
        if(!schedule.events.empty() and ev.time - schedule.events.back().time < kick_coincidence_tol) {
            auto &last   = schedule.events.back();
            last.regions = static_cast<KickRegions>(static_cast<unsigned>(last.regions) | static_cast<unsigned>(ev.regions));
        } else {
            schedule.events.push_back(ev);
        }
    }
    return schedule;
}

PhaseTable kick_phases(const ConstrainedBasis &basis, double theta, Region region) {
    PhaseTable table(static_cast<Eigen::Index>(basis.dimension()));
    for(std::size_t k = 0; k < basis.dimension(); ++k) {
        const int n = region_excitation_count(basis.configuration(k), region, basis.n_left());
        table(static_cast<Eigen::Index>(k)) = std::polar(1.0, -theta * n);
    }
    return table;
}

PhaseTable kick_phases(const ConstrainedBasis &basis, const ChainParameters &params, KickRegions regions) {
    const auto bits  = static_cast<unsigned>(regions);
    PhaseTable table = PhaseTable::Ones(static_cast<Eigen::Index>(basis.dimension()));
    if(bits & static_cast<unsigned>(KickRegions::left)) table.array() *= kick_phases(basis, params.theta_left, Region::left).array();
    if(bits & static_cast<unsigned>(KickRegions::right)) table.array() *= kick_phases(basis, params.theta_right, Region::right).array();
    return table;
}

StateVector product_state(const BasisPtr &basis, Bits bits) {
    const auto k = basis->index(bits);
    if(!k) throw Error(ErrorKind::consistency, "pattern " + std::to_string(bits) + " is not a member of the basis");
    StateVector psi{basis, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->dimension()))};
    psi.amplitudes(static_cast<Eigen::Index>(*k)) = 1.0;
    return psi;
}

StateVector named_state(const BasisPtr &basis, NamedState name) { return product_state(basis, named_pattern(name, basis->n_sites())); }

StateVector named_state(const BasisPtr &basis, std::string_view name) { return named_state(basis, parse_named_state(name)); }

} // namespace dtqc

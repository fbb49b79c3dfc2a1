#include "dtqc/propagator.hpp"

#include "dtqc/error.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

namespace dtqc {

SpectralDecomposition decompose(const SparseHamiltonian &h, std::size_t dense_cap) {
    if(h.dimension > dense_cap)
        throw Error(ErrorKind::consistency, "dimension " + std::to_string(h.dimension) + " exceeds the dense cap " + std::to_string(dense_cap));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.to_dense());
    if(solver.info() != Eigen::Success)
        throw Error(ErrorKind::numerical, "eigensolver did not converge (dimension " + std::to_string(h.dimension) + ", max |H| = " + std::to_string(h.max_abs()) + ")");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

StateVector evolve_interval(const SpectralDecomposition &decomp, const StateVector &psi, double dt) {
    if(psi.amplitudes.size() != decomp.eigenvalues.size()) throw Error(ErrorKind::consistency, "evolve_interval: dimension mismatch");
    if(dt == 0.0) return psi;
    Eigen::VectorXcd c = decomp.eigenvectors.transpose().cast<std::complex<double>>() * psi.amplitudes;
    for(Eigen::Index k = 0; k < c.size(); ++k) c(k) *= std::polar(1.0, -decomp.eigenvalues(k) * dt);
    return {psi.basis, decomp.eigenvectors.cast<std::complex<double>>() * c};
}

StateVector apply_kick(const StateVector &psi, const PhaseTable &phases) {
    if(phases.size() != psi.amplitudes.size())
        throw Error(ErrorKind::consistency, "phase table length " + std::to_string(phases.size()) + " does not match dimension " + std::to_string(psi.amplitudes.size()));
    return {psi.basis, psi.amplitudes.cwiseProduct(phases)};
}

DenseEvolver::DenseEvolver(std::shared_ptr<const SpectralDecomposition> decomp) : decomp_(std::move(decomp)) {}

void DenseEvolver::reset(const Eigen::VectorXcd &psi) {
    const auto      d = psi.size();
    Eigen::MatrixXd parts(d, 2);
    parts.col(0) = psi.real();
    parts.col(1) = psi.imag();
    coeffs_.noalias() = decomp_->eigenvectors.transpose() * parts;
}

Eigen::VectorXcd DenseEvolver::advance_to(double tau) {
    const auto &energies = decomp_->eigenvalues;
    const auto  d        = energies.size();
    rotated_.resize(d, 2);
    for(Eigen::Index k = 0; k < d; ++k) {
        const double c = std::cos(energies(k) * tau);
        const double s = std::sin(energies(k) * tau);
        // (a + i b)(c - i s)
        rotated_(k, 0) = coeffs_(k, 0) * c + coeffs_(k, 1) * s;
        rotated_(k, 1) = coeffs_(k, 1) * c - coeffs_(k, 0) * s;
    }
    Eigen::MatrixXd  parts = decomp_->eigenvectors * rotated_;
    Eigen::VectorXcd psi(d);
    psi.real() = parts.col(0);
    psi.imag() = parts.col(1);
    return psi;
}

Eigen::MatrixXcd DenseEvolver::advance_batch(std::span<const double> taus) {
    const auto &energies = decomp_->eigenvalues;
    const auto  d        = energies.size();
    const auto  b        = static_cast<Eigen::Index>(taus.size());
    rotated_.resize(d, 2 * b);
    for(Eigen::Index j = 0; j < b; ++j) {
        const double tau = taus[static_cast<std::size_t>(j)];
        for(Eigen::Index k = 0; k < d; ++k) {
            const double c = std::cos(energies(k) * tau);
            const double s = std::sin(energies(k) * tau);
            rotated_(k, j)     = coeffs_(k, 0) * c + coeffs_(k, 1) * s;
            rotated_(k, b + j) = coeffs_(k, 1) * c - coeffs_(k, 0) * s;
        }
    }
    Eigen::MatrixXd  parts = decomp_->eigenvectors * rotated_;
    Eigen::MatrixXcd out(d, b);
    out.real() = parts.leftCols(b);
    out.imag() = parts.rightCols(b);
    return out;
}

Eigen::MatrixXcd Evolver::advance_batch(std::span<const double> taus) {
    Eigen::MatrixXcd out;
    for(std::size_t j = 0; j < taus.size(); ++j) {
        Eigen::VectorXcd psi = advance_to(taus[j]);
        if(j == 0) out.resize(psi.size(), static_cast<Eigen::Index>(taus.size()));
        out.col(static_cast<Eigen::Index>(j)) = psi;
    }
    return out;
}

KrylovEvolver::KrylovEvolver(Eigen::SparseMatrix<double> h, double tolerance, int max_dimension)
    : h_(std::move(h)), tolerance_(tolerance), max_dimension_(max_dimension) {}

void KrylovEvolver::reset(const Eigen::VectorXcd &psi) {
    psi_ = psi;
    tau_ = 0.0;
}

double KrylovEvolver::step(Eigen::VectorXcd &psi, double dt) const {
    const double norm0 = psi.norm();
    if(norm0 == 0.0 or dt == 0.0) return 0.0;
    const auto                    d = psi.size();
    const int                     m_max = static_cast<int>(std::min<Eigen::Index>(max_dimension_, d));
    std::vector<Eigen::VectorXcd> q;
    q.reserve(static_cast<std::size_t>(m_max));
    std::vector<double> alpha, beta;
    q.push_back(psi / norm0);
    double beta_last = 0.0;
    for(int j = 0; j < m_max; ++j) {
        Eigen::VectorXcd w = h_ * q[static_cast<std::size_t>(j)];
        alpha.push_back(q[static_cast<std::size_t>(j)].dot(w).real());
        w -= alpha.back() * q[static_cast<std::size_t>(j)];
        if(j > 0) w -= beta.back() * q[static_cast<std::size_t>(j - 1)];
        // full reorthogonalization; the subspace is small
        for(const auto &v : q) w -= v.dot(w) * v;
        beta_last = w.norm();
        if(j + 1 == m_max or beta_last < 1e-14) break;
        beta.push_back(beta_last);
        q.push_back(w / beta_last);
    }
    const auto      m = static_cast<Eigen::Index>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for(Eigen::Index i = 0; i < m; ++i) t(i, i) = alpha[static_cast<std::size_t>(i)];
    for(Eigen::Index i = 0; i + 1 < m; ++i) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    if(es.info() != Eigen::Success) throw Error(ErrorKind::numerical, "Krylov: tridiagonal eigensolver failed");
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(m);
    for(Eigen::Index k = 0; k < m; ++k) {
        const auto phase = std::polar(1.0, -es.eigenvalues()(k) * dt) * es.eigenvectors()(0, k);
        for(Eigen::Index i = 0; i < m; ++i) y(i) += phase * es.eigenvectors()(i, k);
    }
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(d);
    for(Eigen::Index i = 0; i < m; ++i) out += y(i) * q[static_cast<std::size_t>(i)];
    psi = norm0 * out;
    return beta_last < 1e-14 ? 0.0 : norm0 * beta_last * std::abs(y(m - 1));
}

Eigen::VectorXcd KrylovEvolver::advance_to(double tau) {
    double remaining = tau - tau_;
    if(remaining < 0.0) throw Error(ErrorKind::consistency, "KrylovEvolver: time must not decrease");
    const double total = remaining;
    double       h     = remaining;
    while(remaining > 0.0) {
        h                    = std::min(h, remaining);
        Eigen::VectorXcd trial = psi_;
        const double     err   = step(trial, h);
        if(err > tolerance_ * std::max(h / total, 1e-3)) {
            h *= 0.5;
            if(h < 1e-12) throw Error(ErrorKind::numerical, "Krylov step size underflow");
            continue;
        }
        psi_ = std::move(trial);
        remaining -= h;
    }
    tau_ = tau;
    return psi_;
}

std::vector<double> sample_grid(double t_max, double sample_dt) {
    if(!(sample_dt > 0.0) or !std::isfinite(sample_dt)) throw Error(ErrorKind::validation, "sample_dt must be positive");
    if(!(t_max >= 0.0) or !std::isfinite(t_max)) throw Error(ErrorKind::validation, "t_max must be non-negative");
    const auto          n = static_cast<std::size_t>(std::floor(t_max / sample_dt + 1e-9)) + 1;
    std::vector<double> t(n);
    for(std::size_t k = 0; k < n; ++k) t[k] = static_cast<double>(k) * sample_dt;
    return t;
}

Trajectory run(const ChainParameters &params, const RunOptions &options) {
    params.validate();
    const auto times    = sample_grid(options.t_max, options.sample_dt);
    auto       basis    = std::make_shared<const ConstrainedBasis>(params.n_sites, params.n_left);
    const auto d        = basis->dimension();
    const auto schedule = build_kick_schedule(params, options.t_max);

    std::unique_ptr<Evolver> evolver;
    const bool dense = options.engine == Engine::dense or (options.engine == Engine::automatic and d <= options.dense_cap);
    if(dense) {
        auto decomp = options.decomposition;
        if(!decomp) decomp = std::make_shared<const SpectralDecomposition>(decompose(build_pxp(*basis, params), options.dense_cap));
        if(static_cast<std::size_t>(decomp->eigenvalues.size()) != d) throw Error(ErrorKind::consistency, "cached decomposition has the wrong dimension");
        evolver = std::make_unique<DenseEvolver>(std::move(decomp));
    } else {
        evolver = std::make_unique<KrylovEvolver>(build_pxp(*basis, params).to_sparse());
    }

    const ObservableSet &obs = options.observables;
    const int            cut = options.entropy_cut.value_or(params.n_left);
    ObservableKernel     kernel(basis, cut);
    const StateVector    reference = named_state(basis, params.initial_state);

    PhaseTable tables[3];
    for(unsigned r = 1; r <= 3; ++r) tables[r - 1] = kick_phases(*basis, params, static_cast<KickRegions>(r));

    Trajectory traj;
    traj.times = times;
    traj.m.reserve(obs.m ? times.size() : 0);
    traj.fidelity.reserve(obs.fidelity ? times.size() : 0);
    traj.entropy.reserve(obs.entropy ? times.size() : 0);

    Eigen::VectorXcd    psi    = reference.amplitudes;
    double              origin = 0.0;
    std::vector<double> taus;
    evolver->reset(psi);
    std::size_t next_sample = 0;
    for(std::size_t next_kick = 0; next_sample < times.size(); ++next_kick) {
        const bool   has_kick = next_kick < schedule.events.size();
        const double boundary = has_kick ? schedule.events[next_kick].time : std::numeric_limits<double>::infinity();

        // samples up to (and coinciding with) the next kick see the pre-kick state
        taus.clear();
        std::size_t end = next_sample;
        while(end < times.size() and times[end] <= boundary + kick_coincidence_tol) taus.push_back(times[end++] - origin);
        if(!taus.empty()) {
            const Eigen::MatrixXcd block = evolver->advance_batch(taus);
            for(Eigen::Index j = 0; j < block.cols(); ++j) {
                const auto amps = block.col(j);
                psi             = amps;
                if(obs.m) traj.m.push_back(kernel.magnetization(psi, options.m_convention));
                if(obs.fidelity) traj.fidelity.push_back(std::min(1.0, std::abs(reference.amplitudes.dot(psi))));
                if(obs.entropy) traj.entropy.push_back(kernel.entropy(psi));
                if(obs.densities) traj.densities.push_back(kernel.densities(psi));
                if(obs.overlaps) traj.overlaps.push_back(kernel.overlaps(psi));
                if(obs.states) traj.states.push_back({basis, psi});
            }
            next_sample = end;
        }
        if(!has_kick or next_sample >= times.size()) break;

        const auto &ev = schedule.events[next_kick];
        psi            = evolver->advance_to(ev.time - origin);
        psi.array() *= tables[static_cast<unsigned>(ev.regions) - 1].array();
        evolver->reset(psi);
        origin = ev.time;
        ++traj.kicks_applied;
    }
    return traj;
}

} // namespace dtqc

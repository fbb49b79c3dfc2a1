#include "dtqc/observables.hpp"

#include "dtqc/error.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <string>

namespace dtqc {

namespace {
    constexpr double entropy_cutoff = 1e-14; // on sigma^2

    void check_cut(const ConstrainedBasis &basis, int cut) {
        if(cut < 1 or cut > basis.n_sites() - 1)
            throw Error(ErrorKind::validation, "entanglement cut " + std::to_string(cut) + " outside [1, " + std::to_string(basis.n_sites() - 1) + "]");
    }

    double staggered_density(Bits bits, int n_sites) {
        double s = 0.0;
        for(int i = 0; i < n_sites; ++i)
            if((bits >> i) & 1U) s += (i % 2 == 0) ? 1.0 : -1.0;
        return s;
    }

    double entropy_from_probabilities(const Eigen::VectorXd &probabilities) {
        double s = 0.0;
        for(Eigen::Index k = 0; k < probabilities.size(); ++k) {
            const double p = probabilities(k);
            if(p >= entropy_cutoff) s -= p * std::log(p);
        }
        return std::max(s, 0.0);
    }
}

ObservableKernel::ObservableKernel(const BasisPtr &basis, int entropy_cut) : basis_(basis), cut_(entropy_cut) {
    const auto  d      = static_cast<Eigen::Index>(basis->dimension());
    const int   n      = basis->n_sites();
    const auto &states = basis->states();
    staggered_density_.resize(d);
    for(Eigen::Index k = 0; k < d; ++k) staggered_density_(k) = staggered_density(states[static_cast<std::size_t>(k)], n);
    order_ = basis->heatmap_order();

    check_cut(*basis, cut_);
    const Bits                   left_mask = (Bits{1} << cut_) - 1U;
    std::map<Bits, Eigen::Index> left_rows, right_cols;
    for(Bits s : states) {
        left_rows.emplace(s & left_mask, 0);
        right_cols.emplace(s >> cut_, 0);
    }
    for(Eigen::Index i = 0; auto &[bits, r] : left_rows) r = i++;
    for(Eigen::Index i = 0; auto &[bits, c] : right_cols) c = i++;
    n_rows_ = static_cast<Eigen::Index>(left_rows.size());
    n_cols_ = static_cast<Eigen::Index>(right_cols.size());
    row_.reserve(states.size());
    col_.reserve(states.size());
    for(Bits s : states) {
        row_.push_back(left_rows.at(s & left_mask));
        col_.push_back(right_cols.at(s >> cut_));
    }
}

double ObservableKernel::magnetization(const Eigen::VectorXcd &amps, MConvention convention) const {
    const double stag = (amps.cwiseAbs2().array() * staggered_density_.array()).sum();
    const int    n    = basis_->n_sites();
    if(convention == MConvention::density) return std::abs(stag) / n;
    // sum_i (-1)^i (2 n_i - 1) = 2 * stag - sum_i (-1)^i, the latter being N mod 2
    return std::abs(2.0 * stag - static_cast<double>(n % 2)) / n;
}

double ObservableKernel::entropy(const Eigen::VectorXcd &amps) const {
    Eigen::MatrixXcd schmidt = Eigen::MatrixXcd::Zero(n_rows_, n_cols_);
    for(std::size_t k = 0; k < row_.size(); ++k) schmidt(row_[k], col_[k]) = amps(static_cast<Eigen::Index>(k));
    // sigma^2 are the eigenvalues of the smaller reduced density matrix
    const Eigen::MatrixXcd rho = n_rows_ <= n_cols_ ? Eigen::MatrixXcd(schmidt * schmidt.adjoint()) : Eigen::MatrixXcd(schmidt.adjoint() * schmidt);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    return entropy_from_probabilities(es.eigenvalues());
}

std::vector<double> ObservableKernel::densities(const Eigen::VectorXcd &amps) const {
    const int           n = basis_->n_sites();
    std::vector<double> rho(static_cast<std::size_t>(n), 0.0);
    const auto         &states = basis_->states();
    for(std::size_t k = 0; k < states.size(); ++k) {
        const double p = std::norm(amps(static_cast<Eigen::Index>(k)));
        for(Bits b = states[k]; b != 0; b &= b - 1) rho[static_cast<std::size_t>(std::countr_zero(b))] += p;
    }
    return rho;
}

std::vector<double> ObservableKernel::overlaps(const Eigen::VectorXcd &amps) const {
    std::vector<double> out;
    out.reserve(order_.size());
    for(std::size_t k : order_) out.push_back(std::abs(amps(static_cast<Eigen::Index>(k))));
    return out;
}

double staggered_magnetization(const StateVector &psi, MConvention convention) {
    return ObservableKernel(psi.basis, psi.basis->n_left()).magnetization(psi.amplitudes, convention);
}

double fidelity(const StateVector &psi, const StateVector &reference) {
    if(psi.basis != reference.basis and !(psi.basis and reference.basis and *psi.basis == *reference.basis))
        throw Error(ErrorKind::consistency, "fidelity requires states over the same basis");
    if(psi.amplitudes.size() != reference.amplitudes.size()) throw Error(ErrorKind::consistency, "fidelity: dimension mismatch");
    return std::min(1.0, std::abs(reference.amplitudes.dot(psi.amplitudes)));
}

double entanglement_entropy(const StateVector &psi, int cut) {
    check_cut(*psi.basis, cut);
    return ObservableKernel(psi.basis, cut).entropy(psi.amplitudes);
}

Eigen::MatrixXcd reduced_density_matrix(const StateVector &psi, int cut, Region side) {
    check_cut(*psi.basis, cut);
    const Bits                   left_mask = (Bits{1} << cut) - 1U;
    const auto                  &states    = psi.basis->states();
    std::map<Bits, Eigen::Index> rows, cols;
    for(Bits s : states) {
        rows.emplace(s & left_mask, 0);
        cols.emplace(s >> cut, 0);
    }
    for(Eigen::Index i = 0; auto &[b, r] : rows) r = i++;
    for(Eigen::Index i = 0; auto &[b, c] : cols) c = i++;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for(std::size_t k = 0; k < states.size(); ++k) m(rows.at(states[k] & left_mask), cols.at(states[k] >> cut)) = psi.amplitudes(static_cast<Eigen::Index>(k));
    if(side == Region::left) return m * m.adjoint();
    return m.transpose() * m.conjugate();
}

std::vector<double> site_densities(const StateVector &psi) { return ObservableKernel(psi.basis, psi.basis->n_left()).densities(psi.amplitudes); }

std::vector<double> basis_overlaps(const StateVector &psi) { return ObservableKernel(psi.basis, psi.basis->n_left()).overlaps(psi.amplitudes); }

} // namespace dtqc

#pragma once

#include "dtqc/basis.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <numbers>
#include <vector>

namespace dtqc {

/// Maximally incommensurate ratio (sqrt(5)+1)/2 between the two drives.
inline constexpr double golden_ratio = std::numbers::phi;

/// Kick events closer than this are merged into a single two-region event.
inline constexpr double kick_coincidence_tol = 1e-9;

struct ChainParameters {
    int        n_sites       = 10;
    int        n_left        = 5;
    double     omega_left    = 1.0;
    double     omega_right   = golden_ratio;
    double     period_left   = 4.74;
    double     period_right  = 4.74 / golden_ratio;
    double     theta_left    = std::numbers::pi;
    double     theta_right   = std::numbers::pi;
    NamedState initial_state = NamedState::z2;

    [[nodiscard]] double f_left() const noexcept { return 2.0 * std::numbers::pi / period_left; }
    [[nodiscard]] double f_right() const noexcept { return 2.0 * std::numbers::pi / period_right; }

    /// Throws dtqc::Error when any field violates its constraints.
    void validate() const;
};

/// Bipartite chain with Omega_R/Omega_L = T_L/T_R = golden ratio, Omega_L = 1,
/// equal kick strengths and a half/half split (left block gets the extra site for odd N).
[[nodiscard]] ChainParameters golden_chain(int n_sites, double period_left, double theta);

/// Uniform couplings and a single shared kick train.
[[nodiscard]] ChainParameters uniform_chain(int n_sites, double period, double theta);

struct SparseHamiltonian {
    struct Entry {
        std::size_t row;
        std::size_t col;
        double      value;
    };
    std::size_t        dimension = 0;
    std::vector<Entry> entries; // both (i,j) and (j,i) stored

    [[nodiscard]] Eigen::SparseMatrix<double> to_sparse() const;
    [[nodiscard]] Eigen::MatrixXd             to_dense() const;
    [[nodiscard]] double                      max_abs() const noexcept;
};

[[nodiscard]] SparseHamiltonian build_pxp(const ConstrainedBasis &basis, const ChainParameters &params);

enum class KickRegions : unsigned { left = 1U, right = 2U, both = 3U };

struct KickEvent {
    double      time;
    KickRegions regions;
    friend bool operator==(const KickEvent &, const KickEvent &) = default;
};

struct KickSchedule {
    std::vector<KickEvent> events;
    double                 horizon = 0.0;
};

[[nodiscard]] KickSchedule build_kick_schedule(const ChainParameters &params, double t_max);

/// Diagonal unitary exp(-i theta n_region) over the basis.
using PhaseTable = Eigen::VectorXcd;

[[nodiscard]] PhaseTable kick_phases(const ConstrainedBasis &basis, double theta, Region region);

/// exp(-i (theta_left n_L + theta_right n_R)) restricted to the regions kicked by one event.
[[nodiscard]] PhaseTable kick_phases(const ConstrainedBasis &basis, const ChainParameters &params, KickRegions regions);

} // namespace dtqc

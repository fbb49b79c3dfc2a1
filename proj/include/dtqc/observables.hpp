#pragma once

#include "dtqc/state.hpp"

#include <Eigen/Core>
#include <vector>

namespace dtqc {

/// `spin` uses (2 n_i - 1), giving m(Z2) = 1; `density` uses n_i literally.
enum class MConvention { spin, density };

/// |sum_i (-1)^i <o_i>| / N with o_i chosen by the convention.
[[nodiscard]] double staggered_magnetization(const StateVector &psi, MConvention convention = MConvention::spin);

/// |<reference|psi>|.
[[nodiscard]] double fidelity(const StateVector &psi, const StateVector &reference);

/// Von Neumann entropy (nats) of the sites >= cut. Singular values with
/// sigma^2 below 1e-14 are dropped.
[[nodiscard]] double entanglement_entropy(const StateVector &psi, int cut);

/// Reduced density matrix of one side of the cut, indexed by the legal
/// sub-chain patterns in ascending order.
[[nodiscard]] Eigen::MatrixXcd reduced_density_matrix(const StateVector &psi, int cut, Region side);

/// <n_i> for every site.
[[nodiscard]] std::vector<double> site_densities(const StateVector &psi);

/// |amplitude| per configuration, in ConstrainedBasis::heatmap_order().
[[nodiscard]] std::vector<double> basis_overlaps(const StateVector &psi);

/// Precomputed per-configuration tables so repeated evaluation over a
/// trajectory avoids re-deriving bit patterns.
class ObservableKernel {
public:
    explicit ObservableKernel(const BasisPtr &basis, int entropy_cut);

    [[nodiscard]] double              magnetization(const Eigen::VectorXcd &amps, MConvention convention) const;
    [[nodiscard]] double              entropy(const Eigen::VectorXcd &amps) const;
    [[nodiscard]] std::vector<double> densities(const Eigen::VectorXcd &amps) const;
    [[nodiscard]] std::vector<double> overlaps(const Eigen::VectorXcd &amps) const;

private:
    BasisPtr                 basis_;
    int                      cut_;
    Eigen::VectorXd          staggered_density_; // sum_i (-1)^i n_i per configuration
    std::vector<std::size_t> order_;
    // Schmidt matrix layout: configuration k -> (row, col)
    std::vector<Eigen::Index> row_, col_;
    Eigen::Index              n_rows_ = 0, n_cols_ = 0;
};

} // namespace dtqc

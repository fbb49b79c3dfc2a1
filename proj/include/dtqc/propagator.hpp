#pragma once

#include "dtqc/model.hpp"
#include "dtqc/observables.hpp"
#include "dtqc/state.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace dtqc {

/// Dense matrices above this dimension are refused by `decompose`.
inline constexpr std::size_t default_dense_cap = 4096;

struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;  // ascending
    Eigen::MatrixXd eigenvectors; // orthonormal columns
};

[[nodiscard]] SpectralDecomposition decompose(const SparseHamiltonian &h, std::size_t dense_cap = default_dense_cap);

/// exp(-i H dt) psi through the eigenbasis.
[[nodiscard]] StateVector evolve_interval(const SpectralDecomposition &decomp, const StateVector &psi, double dt);

/// Elementwise product with a diagonal phase table.
[[nodiscard]] StateVector apply_kick(const StateVector &psi, const PhaseTable &phases);

/// Propagates a state under a time-independent Hamiltonian. `reset` loads a
/// state at local time 0; `advance_to` returns the state at local time tau,
/// with tau non-decreasing between resets.
class Evolver {
public:
    virtual ~Evolver()                                              = default;
    virtual void                           reset(const Eigen::VectorXcd &psi) = 0;
    [[nodiscard]] virtual Eigen::VectorXcd advance_to(double tau)            = 0;
    /// States at several non-decreasing local times, one column each.
    [[nodiscard]] virtual Eigen::MatrixXcd advance_batch(std::span<const double> taus);
};

/// Exact propagation from a shared eigendecomposition. The loaded state is
/// kept in eigen-coordinates so each query costs one dense mat-vec.
class DenseEvolver final : public Evolver {
public:
    explicit DenseEvolver(std::shared_ptr<const SpectralDecomposition> decomp);
    void                           reset(const Eigen::VectorXcd &psi) override;
    [[nodiscard]] Eigen::VectorXcd advance_to(double tau) override;
    [[nodiscard]] Eigen::MatrixXcd advance_batch(std::span<const double> taus) override;

private:
    std::shared_ptr<const SpectralDecomposition> decomp_;
    Eigen::MatrixXd                              coeffs_;  // d x 2, real and imaginary parts of V^T psi
    Eigen::MatrixXd                              rotated_; // scratch
};

/// Lanczos approximation of exp(-i H dt) psi with adaptive sub-stepping.
class KrylovEvolver final : public Evolver {
public:
    explicit KrylovEvolver(Eigen::SparseMatrix<double> h, double tolerance = 1e-10, int max_dimension = 40);
    void                           reset(const Eigen::VectorXcd &psi) override;
    [[nodiscard]] Eigen::VectorXcd advance_to(double tau) override;

    /// One Lanczos step of length dt; returns the a-posteriori error estimate.
    double step(Eigen::VectorXcd &psi, double dt) const;

private:
    Eigen::SparseMatrix<double> h_;
    double                      tolerance_;
    int                         max_dimension_;
    Eigen::VectorXcd            psi_;
    double                      tau_ = 0.0;
};

enum class Engine { dense, krylov, automatic };

struct ObservableSet {
    bool m          = true;
    bool fidelity   = true;
    bool entropy    = false;
    bool densities  = false;
    bool overlaps   = false;
    bool states     = false;
};

struct RunOptions {
    double             t_max     = 1000.0;
    double             sample_dt = 0.05;
    ObservableSet      observables;
    MConvention        m_convention = MConvention::spin;
    std::optional<int> entropy_cut; // defaults to n_left
    Engine             engine    = Engine::automatic;
    std::size_t        dense_cap = default_dense_cap;
    /// Reused when present; must belong to the same Hamiltonian.
    std::shared_ptr<const SpectralDecomposition> decomposition;
};

struct Trajectory {
    std::vector<double>              times; // k * sample_dt
    std::vector<double>              m;
    std::vector<double>              fidelity;
    std::vector<double>              entropy;
    std::vector<std::vector<double>> densities; // per sample, length N
    std::vector<std::vector<double>> overlaps;  // per sample, heatmap row order
    std::vector<StateVector>         states;
    std::size_t                      kicks_applied = 0;

    [[nodiscard]] std::size_t size() const noexcept { return times.size(); }
};

/// Uniform sample grid 0, dt, 2 dt, ... up to t_max (inclusive within 1e-9).
[[nodiscard]] std::vector<double> sample_grid(double t_max, double sample_dt);

/// Evolves the initial state of `params` through the kick schedule, sampling the
/// requested observables. Samples coinciding with a kick see the pre-kick state.
[[nodiscard]] Trajectory run(const ChainParameters &params, const RunOptions &options);

} // namespace dtqc

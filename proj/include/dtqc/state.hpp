#pragma once

#include "dtqc/basis.hpp"

#include <Eigen/Core>
#include <memory>

namespace dtqc {

using BasisPtr = std::shared_ptr<const ConstrainedBasis>;

/// Complex amplitudes over a constrained basis.
struct StateVector {
    BasisPtr         basis;
    Eigen::VectorXcd amplitudes;

    [[nodiscard]] std::size_t dimension() const noexcept { return static_cast<std::size_t>(amplitudes.size()); }
    [[nodiscard]] double      norm() const { return amplitudes.norm(); }
};

/// Unit vector supported on the named product configuration.
[[nodiscard]] StateVector named_state(const BasisPtr &basis, NamedState name);
[[nodiscard]] StateVector named_state(const BasisPtr &basis, std::string_view name);

/// Unit vector on an arbitrary legal configuration.
[[nodiscard]] StateVector product_state(const BasisPtr &basis, Bits bits);

} // namespace dtqc

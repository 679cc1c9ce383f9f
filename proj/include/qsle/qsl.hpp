#pragma once

#include "qsle/state.hpp"

#include <Eigen/Dense>

namespace qsle {

// |<psi|phi>| at or above 1 - kDegenerateOverlap means the pair spans no
// rotation plane: the transit time is zero and no generator is built.
inline constexpr double kDegenerateOverlap = 1e-12;

/// Dense Hermitian generator in energy units with hbar = 1. Hermiticity is
/// validated entrywise within 1e-10 relative to the largest entry magnitude.
class DenseHamiltonian {
public:
    explicit DenseHamiltonian(Eigen::MatrixXcd matrix);

    const Eigen::MatrixXcd& matrix() const { return matrix_; }
    std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }

private:
    Eigen::MatrixXcd matrix_;
};

/// Two-level generator -i*omega(|psi><psi_bar| - |psi_bar><psi|), hbar = 1,
/// stored structurally for exact analytic evolution; dense expansion on
/// demand. Restricted to span{psi, psi_bar} it is omega times the sigma_y
/// Pauli matrix; it vanishes on the orthogonal complement, so its spectrum
/// is {+omega, -omega, 0, ...} with energy gap 2*omega.
class OptHamiltonian {
public:
    OptHamiltonian(PureState psi, PureState psi_bar, double omega);

    const PureState& psi() const { return psi_; }
    const PureState& psi_bar() const { return psi_bar_; }
    double omega() const { return omega_; }

    DenseHamiltonian dense() const;

private:
    PureState psi_;
    PureState psi_bar_;
    double omega_;
};

/// e^{-i arg<psi|phi>} |phi>, so the overlap with psi becomes real and
/// non-negative. Returns phi unchanged (bit-identical) when the overlap is
/// already real non-negative or zero.
PureState phase_align(const PureState& psi, const PureState& phi);

/// Normalized (|phi> - <psi|phi>|psi>)/sqrt(1 - |<psi|phi>|^2): the unit
/// vector orthogonal to psi inside span{psi, phi}. Throws
/// DegeneratePairError when |<psi|phi>| >= 1 - kDegenerateOverlap.
PureState orthogonal_complement(const PureState& psi, const PureState& phi);

/// Generator rotating psi onto phi along the geodesic; phi is phase-aligned
/// internally. Throws DegeneratePairError for coinciding states.
OptHamiltonian build_h_opt(const PureState& psi, const PureState& phi, double omega);

/// cos(omega t)|psi> + sin(omega t)|psi_bar>, exact in the two-level plane.
PureState evolve_opt(const OptHamiltonian& h, double t);

/// exp(-iHt)|psi> via Hermitian eigendecomposition.
PureState evolve_dense(const DenseHamiltonian& h, const PureState& psi, double t);

/// sqrt(<psi|H^2|psi> - <psi|H|psi>^2); tiny negatives under the root
/// (>= -1e-12) clamp to 0, larger ones raise ConsistencyError.
double variance(const DenseHamiltonian& h, const PureState& psi);

/// Minimal-time lower bound arccos(|<psi|phi>|)/delta_h, hbar = 1.
double qsl_bound(const PureState& psi, const PureState& phi, double delta_h);

} // namespace qsle

#pragma once

#include "qsle/qsl.hpp"
#include "qsle/separable_opt.hpp"
#include "qsle/state.hpp"

#include <optional>
#include <vector>

namespace qsle {

// Reduced Planck constant, J*s; used only when energies leave internal units.
inline constexpr double kHbar = 1.054571817e-34;

// Entanglement at or below this floor counts as "already m-separable": the
// report carries E_m = 0 and tau = 0.
inline constexpr double kSeparableFloor = 1e-9;

struct TimeReport {
    std::size_t m;
    double entanglement;               // E_m, floored to 0 when <= kSeparableFloor
    double tau_internal;               // arcsin(sqrt(E_m))/omega; omega*tau in [0, pi/2]
    std::optional<double> tau_seconds; // set when omega was given in rad/s
    double omega;
    ProductState closest_separable;
    Partition partition;
    bool converged;
    int iterations_used;
};

/// Minimal time to evolve psi into an m-separable state under the optimal
/// two-level generator: arcsin(sqrt(E_m))/omega. The achieving separable
/// state comes from the overlap maximizer. omega is a fixed input scale,
/// never optimized. Pass omega_is_rad_per_s = true to fill tau_seconds.
TimeReport tau_m(const PureState& psi, std::size_t m, double omega, const OptConfig& cfg,
                 bool omega_is_rad_per_s = false);

/// Inverse relation E_m = sin^2(omega tau); valid on 0 <= omega*tau <= pi/2
/// only (domain error outside the principal branch).
double entanglement_from_time(double tau, double omega);

/// Energy gap of the optimal generator: 2*omega with hbar = 1.
double energy_gap(double omega);

/// The same gap in joules for omega in rad/s: 2*hbar*omega.
double energy_gap_joules(double omega_rad_per_s);

struct SeparabilizationRecord {
    TimeReport time;
    double fidelity_with_target;   // |<target|evolved>|^2; 1.0 on the skipped path
    double residual_entanglement;  // E_m of the evolved state (raw, unfloored)
    bool evolved;                  // false when tau = 0 (already separable)
    bool certified;                // optimizer converged on both passes
};

/// End-to-end check: build the optimal generator toward the achieving
/// separable state, evolve for tau_internal, recompute E_m of the result.
SeparabilizationRecord verify_separabilization(const PureState& psi, std::size_t m, double omega,
                                               const OptConfig& cfg);

struct FigureRow {
    double entanglement;
    double omega;
    double tau;
};

/// tau = arcsin(sqrt(E))/omega tabulated over an E grid for each omega;
/// monotone increasing in E, tau(1) = pi/(2 omega).
std::vector<FigureRow> figure_data(const std::vector<double>& omegas,
                                   const std::vector<double>& e_grid);

} // namespace qsle

#include "qsle/ent_time.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace qsle {

namespace {

void check_omega(double omega) {
    if (!(omega > 0.0)) throw DomainError("omega must be positive");
}

} // namespace

TimeReport tau_m(const PureState& psi, std::size_t m, double omega, const OptConfig& cfg,
                 bool omega_is_rad_per_s) {
    check_omega(omega);
    EntanglementResult res = geometric_entanglement(psi, m, cfg);
    double e = res.entanglement;
    double tau = 0.0;
    if (e <= kSeparableFloor) {
        e = 0.0;
    } else {
        tau = std::asin(std::sqrt(e)) / omega;
    }
    TimeReport report{m,
                      e,
                      tau,
                      std::nullopt,
                      omega,
                      std::move(res.best.product),
                      std::move(res.best.partition),
                      res.best.converged,
                      res.best.iterations_used};
    if (omega_is_rad_per_s) report.tau_seconds = tau;
    return report;
}

double entanglement_from_time(double tau, double omega) {
    check_omega(omega);
    double x = omega * tau;
    constexpr double slack = 1e-9;
    if (x < -slack || x > std::numbers::pi / 2.0 + slack)
        throw DomainError("omega*tau = " + std::to_string(x) +
                          " lies outside the principal branch [0, pi/2]");
    x = std::clamp(x, 0.0, std::numbers::pi / 2.0);
    const double s = std::sin(x);
    return s * s;
}

double energy_gap(double omega) {
    check_omega(omega);
    return 2.0 * omega;
}

double energy_gap_joules(double omega_rad_per_s) {
    check_omega(omega_rad_per_s);
    return 2.0 * kHbar * omega_rad_per_s;
}

SeparabilizationRecord verify_separabilization(const PureState& psi, std::size_t m, double omega,
                                               const OptConfig& cfg) {
    TimeReport report = tau_m(psi, m, omega, cfg);
    if (report.tau_internal == 0.0) {
        // Already m-separable up to the floor: nothing to evolve, the
        // residual is the input's own E_m.
        const double residual = report.entanglement;
        const bool certified = report.converged;
        return SeparabilizationRecord{std::move(report), 1.0, residual, false, certified};
    }

    const PureState target = assemble(report.closest_separable);
    const OptHamiltonian h = build_h_opt(psi, target, omega);
    const PureState evolved = evolve_opt(h, report.tau_internal);
    const double fidelity = std::norm(inner_product(target, evolved));
    EntanglementResult res = geometric_entanglement(evolved, m, cfg);
    const bool certified = report.converged && res.best.converged;
    return SeparabilizationRecord{std::move(report), fidelity, res.entanglement, true, certified};
}

std::vector<FigureRow> figure_data(const std::vector<double>& omegas,
                                   const std::vector<double>& e_grid) {
    for (double w : omegas) check_omega(w);
    for (double e : e_grid)
        if (e < 0.0 || e > 1.0)
            throw DomainError("entanglement grid value " + std::to_string(e) +
                              " outside [0, 1]");
    std::vector<FigureRow> rows;
    rows.reserve(omegas.size() * e_grid.size());
    for (double w : omegas)
        for (double e : e_grid) rows.push_back({e, w, std::asin(std::sqrt(e)) / w});
    return rows;
}

} // namespace qsle

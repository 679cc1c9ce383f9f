#include "qsle/qsl.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace qsle {

namespace {

Eigen::Map<const Eigen::VectorXcd> as_vector(const PureState& s) {
    return Eigen::Map<const Eigen::VectorXcd>(s.amplitudes().data(),
                                              static_cast<Eigen::Index>(s.dim()));
}

void check_same_dims(const PureState& a, const PureState& b, const char* what) {
    if (a.dims() != b.dims())
        throw ShapeError(std::string(what) + " requires identical subsystem dimensions");
}

} // namespace

DenseHamiltonian::DenseHamiltonian(Eigen::MatrixXcd matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols()) throw ShapeError("Hamiltonian must be square");
    const double scale = std::max(1.0, matrix_.cwiseAbs().maxCoeff());
    const double dev = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
    if (dev > 1e-10 * scale)
        throw ValidationError("matrix is not Hermitian within 1e-10 (max deviation " +
                              std::to_string(dev) + ")");
}

OptHamiltonian::OptHamiltonian(PureState psi, PureState psi_bar, double omega)
    : psi_(std::move(psi)), psi_bar_(std::move(psi_bar)), omega_(omega) {
    if (omega_ <= 0.0) throw DomainError("omega must be positive");
    check_same_dims(psi_, psi_bar_, "OptHamiltonian");
    if (std::abs(inner_product(psi_, psi_bar_)) > 1e-10)
        throw ValidationError("psi and psi_bar must be orthogonal within 1e-10");
}

DenseHamiltonian OptHamiltonian::dense() const {
    const auto u = as_vector(psi_);
    const auto v = as_vector(psi_bar_);
    const cplx miw(0.0, -omega_);
    Eigen::MatrixXcd h = miw * (u * v.adjoint() - v * u.adjoint());
    return DenseHamiltonian(std::move(h));
}

PureState phase_align(const PureState& psi, const PureState& phi) {
    check_same_dims(psi, phi, "phase_align");
    const cplx ov = inner_product(psi, phi);
    const double mag = std::abs(ov);
    if (mag == 0.0 || (ov.imag() == 0.0 && ov.real() >= 0.0)) return phi;
    const cplx phase = std::conj(ov) / mag;
    std::vector<cplx> amps = phi.amplitudes();
    for (cplx& a : amps) a *= phase;
    return detail::make_state(std::move(amps), phi.dims());
}

PureState orthogonal_complement(const PureState& psi, const PureState& phi) {
    check_same_dims(psi, phi, "orthogonal_complement");
    const cplx ov = inner_product(psi, phi);
    const double mag = std::abs(ov);
    if (mag >= 1.0 - kDegenerateOverlap)
        throw DegeneratePairError("states coincide up to phase: |<psi|phi>| = " +
                                  std::to_string(mag));
    const double denom = std::sqrt(1.0 - mag * mag);
    std::vector<cplx> amps(phi.dim());
    const auto& pa = psi.amplitudes();
    const auto& fa = phi.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) amps[i] = (fa[i] - ov * pa[i]) / denom;
    return detail::make_state(std::move(amps), phi.dims());
}

OptHamiltonian build_h_opt(const PureState& psi, const PureState& phi, double omega) {
    if (omega <= 0.0) throw DomainError("omega must be positive");
    const PureState aligned = phase_align(psi, phi);
    PureState bar = orthogonal_complement(psi, aligned);
    return OptHamiltonian(psi, std::move(bar), omega);
}

PureState evolve_opt(const OptHamiltonian& h, double t) {
    if (t < 0.0) throw DomainError("evolution time must be non-negative");
    const double c = std::cos(h.omega() * t);
    const double s = std::sin(h.omega() * t);
    const auto& pa = h.psi().amplitudes();
    const auto& ba = h.psi_bar().amplitudes();
    std::vector<cplx> amps(pa.size());
    for (std::size_t i = 0; i < amps.size(); ++i) amps[i] = c * pa[i] + s * ba[i];
    return detail::make_state(std::move(amps), h.psi().dims());
}

PureState evolve_dense(const DenseHamiltonian& h, const PureState& psi, double t) {
    if (h.dim() != psi.dim())
        throw ShapeError("Hamiltonian dimension does not match the state");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.matrix());
    Eigen::VectorXcd coeffs = es.eigenvectors().adjoint() * as_vector(psi);
    for (Eigen::Index k = 0; k < coeffs.size(); ++k)
        coeffs(k) *= std::exp(cplx(0.0, -es.eigenvalues()(k) * t));
    Eigen::VectorXcd out = es.eigenvectors() * coeffs;
    std::vector<cplx> amps(out.data(), out.data() + out.size());
    return detail::make_state(std::move(amps), psi.dims());
}

double variance(const DenseHamiltonian& h, const PureState& psi) {
    if (h.dim() != psi.dim())
        throw ShapeError("Hamiltonian dimension does not match the state");
    const auto v = as_vector(psi);
    const Eigen::VectorXcd hv = h.matrix() * v;
    const double mean = v.dot(hv).real();
    const double second = hv.squaredNorm();
    double var2 = second - mean * mean;
    if (var2 < 0.0) {
        if (var2 < -1e-12)
            throw ConsistencyError("negative variance beyond the floating-point guard");
        var2 = 0.0;
    }
    return std::sqrt(var2);
}

double qsl_bound(const PureState& psi, const PureState& phi, double delta_h) {
    if (delta_h <= 0.0) throw DomainError("delta_h must be positive");
    check_same_dims(psi, phi, "qsl_bound");
    double mag = std::abs(inner_product(psi, phi));
    mag = std::clamp(mag, 0.0, 1.0);
    return std::acos(mag) / delta_h;
}

} // namespace qsle

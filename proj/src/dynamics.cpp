#include "biharm/dynamics.hpp"

#include <stdexcept>

namespace biharm {

PhaseState::PhaseState(Real t_, Real v_, Real v1_, Real v2_, Real v3_)
    : t(t_), v(v_), v1(v1_), v2(v2_), v3(v3_) {
    if (!std::isfinite(t) || !std::isfinite(v) || !std::isfinite(v1) || !std::isfinite(v2) ||
        !std::isfinite(v3)) {
        throw std::invalid_argument("PhaseState: all entries must be finite");
    }
}

PhaseState::PhaseState(Real t_, const State& y) : PhaseState(t_, y[0], y[1], y[2], y[3]) {}

double linearized_frequency_at_a0(const ProblemParams& P) {
    // omega^2 = (sqrt(A^2 + 4c) - A) / 2 = 2c / (sqrt(A^2 + 4c) + A), c = f'(a0) = (p-1) B
    const double c = (P.p - 1.0) * P.B;
    return std::sqrt(2.0 * c / (std::sqrt(P.A * P.A + 4.0 * c) + P.A));
}

Real ode_residual(const ProblemParams& P, const Jet& jet) {
    const Real fv = f_nonlinearity(P, jet[0]);
    const Real Av2 = static_cast<Real>(P.A) * jet[2];
    const Real scale = std::fabs(jet[4]) + std::fabs(Av2) + std::fabs(fv);
    if (scale == 0) return 0;
    return std::fabs(jet[4] - Av2 - fv) / scale;
}

void throw_generic_homoclinic() {
    throw std::invalid_argument(
        "homoclinic: the closed form needs params from make_params (dimension n)");
}

Jet homoclinic_jet(const ProblemParams& P, Real t, Real shift) {
    return homoclinic_jet_as<Real>(P, t, shift);
}

PhaseState homoclinic(const ProblemParams& P, Real t, Real shift) {
    const Jet j = homoclinic_jet(P, t, shift);
    return PhaseState(t, j[0], j[1], j[2], j[3]);
}

}  // namespace biharm

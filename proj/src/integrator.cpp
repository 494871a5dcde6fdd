#include "biharm/integrator.hpp"

#include <cmath>
#include <stdexcept>

#include "biharm/detail/ode_core.hpp"

namespace biharm {

const char* to_string(Termination t) {
    switch (t) {
        case Termination::ReachedHorizon: return "ReachedHorizon";
        case Termination::Event: return "Event";
        case Termination::BlowUp: return "BlowUp";
        case Termination::StepLimit: return "StepLimit";
    }
    return "?";
}

void IntegrationConfig::validate() const {
    if (!(rel_tol > 0.0 && rel_tol <= 1e-2))
        throw std::invalid_argument("IntegrationConfig: rel_tol must lie in (0, 1e-2]");
    if (!(abs_tol > 0.0 && abs_tol <= 1e-2))
        throw std::invalid_argument("IntegrationConfig: abs_tol must lie in (0, 1e-2]");
    if (!(max_step > 0.0)) throw std::invalid_argument("IntegrationConfig: max_step must be positive");
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::invalid_argument("IntegrationConfig: horizon must be positive and finite");
    if (!(blowup_threshold > 0.0))
        throw std::invalid_argument("IntegrationConfig: blowup_threshold must be positive");
    if (max_steps <= 0) throw std::invalid_argument("IntegrationConfig: max_steps must be positive");
    if (method == Method::FixedRk4 && !(fixed_step > 0.0))
        throw std::invalid_argument("IntegrationConfig: fixed_step must be positive");
}

Trajectory integrate(const ProblemParams& params, const PhaseState& init,
                     const IntegrationConfig& config, const std::vector<EventSpec>& events) {
    const auto field = [&params](const State& y) { return rhs(params, y); };
    const auto energy_fn = [&params](const State& y) { return energy(params, y); };
    return Trajectory(detail::integrate_system<4>(field, energy_fn, init.t, init.y(), config,
                                                  std::span<const EventSpec>(events)),
                      params);
}

PhaseState evaluate(const Trajectory& traj, Real t) { return PhaseState(t, traj.state_at(t)); }

Jet evaluate_jet(const Trajectory& traj, Real t) {
    const State y = traj.state_at(t);
    const State dy = traj.derivative_at(t);
    return {y[0], y[1], y[2], y[3], dy[3]};
}

}  // namespace biharm

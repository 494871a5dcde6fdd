#pragma once

#include <vector>

#include "biharm/dynamics.hpp"
#include "biharm/integrator_types.hpp"
#include "biharm/params.hpp"

namespace biharm {

// Solution of v'''' = A v'' + f(v) as a first-order system in (v, v', v'', v''').
class Trajectory : public BasicTrajectory<4> {
public:
    Trajectory(BasicTrajectory<4> base, const ProblemParams& params)
        : BasicTrajectory<4>(std::move(base)), params_(params) {}

    const ProblemParams& params() const { return params_; }

private:
    ProblemParams params_;
};

using StiffFailure = IntegrationError<4>;

// Adaptive DOP853 (or fixed-step RK4, see IntegrationConfig::method) from
// init.t to init.t + config.horizon. Stops at the horizon, at the first
// terminal event, when max |y_i| exceeds config.blowup_threshold, or after
// config.max_steps steps. Throws StiffFailure on step-size underflow and
// std::invalid_argument on a bad config or event spec.
Trajectory integrate(const ProblemParams& params, const PhaseState& init,
                     const IntegrationConfig& config, const std::vector<EventSpec>& events = {});

// Throws std::out_of_range outside the covered interval.
PhaseState evaluate(const Trajectory& traj, Real t);

// v^{(4)} from the derivative of the dense v''' interpolant; independent of rhs.
Jet evaluate_jet(const Trajectory& traj, Real t);

}  // namespace biharm

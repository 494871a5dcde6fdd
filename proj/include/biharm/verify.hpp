#pragma once

#include <string>
#include <vector>

#include "biharm/family.hpp"

namespace biharm {

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

using Checks = std::vector<Check>;

// Energy drift measurements over `horizon` time units. Bounded solutions of
// this equation are unstable, so long runs are assembled from segments that
// restart on the exact orbit: each period from (a, 0, beta*, 0), each
// homoclinic segment from the closed form.
Real constant_energy_drift(const ProblemParams& params, double horizon);
Real periodic_energy_drift(const ProblemParams& params, const PeriodicSolution& sol, double horizon);
Real homoclinic_energy_drift(const ProblemParams& params, double horizon, double segment = 5.0);

// Max relative ODE residual and max |energy| of the closed-form homoclinic.
Real homoclinic_max_residual(const ProblemParams& params, Real t_min, Real t_max, int samples);
Real homoclinic_max_energy(const ProblemParams& params, Real t_min, Real t_max, int samples);

// Relative v error after carrying the homoclinic state from t0 to t1 with
// the 50-digit Taylor integrator.
Real homoclinic_transport_error(const ProblemParams& params, Real t0, Real t1);

// max_{|t| <= window} |v_a(t + L/2) - cn (2 cosh t)^{-(n-4)/2}|.
Real homoclinic_profile_gap(const ProblemParams& params, const PeriodicSolution& sol, Real window);

Checks suite_energy(const ProblemParams& params);
Checks suite_symmetry(const ProblemParams& params);
Checks suite_ordering(const ProblemParams& params);
Checks suite_phase(const ProblemParams& params);
Checks suite_homoclinic(const ProblemParams& params);
Checks suite_oracle(const ProblemParams& params);

const std::vector<std::string>& suite_names();  // includes "all"

// Throws std::invalid_argument for an unknown suite.
Checks run_suite(const ProblemParams& params, const std::string& suite);

}  // namespace biharm

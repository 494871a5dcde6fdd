#pragma once

#include <memory>
#include <stdexcept>

#include "biharm/integrator_types.hpp"

namespace biharm {

// -v'' + c v = v^q with c = (n-2)^2/4, q = (n+2)/(n-2): the second-order
// analogue, used as an independent oracle for the period pipeline.
struct SecondOrderParams {
    int n = 0;
    Real c = 0;
    Real q = 0;
    Real equilibrium = 0;  // ((n-2)/2)^{(n-2)/2}
    Real cn_prime = 0;     // (n(n-2))^{(n-2)/4}
};

// Throws std::domain_error for n < 3.
SecondOrderParams make_second_order(int n);

Real second_order_potential(const SecondOrderParams& s, Real v);
// 2 pi / sqrt((q-1) c), the small-amplitude period about the equilibrium.
Real second_order_linear_period(const SecondOrderParams& s);
// cn' (2 cosh t)^{-(n-2)/2}
Real second_order_homoclinic(const SecondOrderParams& s, Real t);

// max |v(t) - equilibrium| when started at rest on the equilibrium.
Real second_order_equilibrium_drift(const SecondOrderParams& s, const IntegrationConfig& config);

class QuadratureFailed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SecondOrderOrbit {
    Real a2 = 0;
    Real v_max = 0;
    Real energy = 0;
    Real period_pipeline = 0;    // 2 t_max from the integrator's v' = 0 events
    Real period_quadrature = 0;  // 2 int dv / sqrt(2 (E - U))
    Real relative_gap = 0;
    std::shared_ptr<const BasicTrajectory<2>> profile;  // one period from the minimum
};

// Both periods for the orbit with minimum a2 in (0, equilibrium).
// Throws QuadratureFailed when the upper turning point cannot be bracketed.
SecondOrderOrbit second_order_oracle(int n, Real a2, const IntegrationConfig& config = {});

}  // namespace biharm

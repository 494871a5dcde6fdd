#pragma once

#include <array>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "biharm/params.hpp"

namespace biharm {

// 50 significant decimal digits.
using HighReal = boost::multiprecision::cpp_bin_float_50;
using HighState = std::array<HighReal, 4>;

struct TaylorRun {
    HighReal t_end;
    HighState y_end;
    long steps = 0;
    std::vector<HighReal> times;   // step endpoints, starting with t0
    std::vector<HighState> states;
};

// High-order Taylor-series integration of v'''' = A v'' + f(v) in 50-digit
// arithmetic, for stretches where the flow amplifies errors by more than
// binary64 or x87 precision can absorb (e.g. following the homoclinic
// orbit through its peak). Series coefficients come from the recurrence
//   (j+1)(j+2)(j+3)(j+4) c_{j+4} = A (j+1)(j+2) c_{j+2} + [f(v)]_j.
// Unless p is an odd integer, v must stay positive along the path. Requires t1 > t0.
TaylorRun integrate_taylor(const ProblemParams& params, const HighState& y0, const HighReal& t0,
                           const HighReal& t1, int order = 60);

HighReal energy_high(const ProblemParams& params, const HighState& y);

// Closed-form homoclinic state cn (2 cosh(t - shift))^{-(n-4)/2} in HighReal.
HighState homoclinic_state_high(const ProblemParams& params, const HighReal& t,
                                const HighReal& shift = 0);

}  // namespace biharm

#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "biharm/integrator.hpp"
#include "biharm/params.hpp"

namespace biharm {

enum class ShotKind { CrossedZero, ExceededR, BoundedToHorizon, BlowUp };

const char* to_string(ShotKind k);

// S side: the shot crossed zero. T side: it escaped above R or blew up.
inline bool in_S(ShotKind k) { return k == ShotKind::CrossedZero; }
inline bool in_T(ShotKind k) { return k == ShotKind::ExceededR || k == ShotKind::BlowUp; }

struct ShotOutcome {
    ShotKind kind = ShotKind::BoundedToHorizon;
    Real t = 0;  // event time; horizon end for BoundedToHorizon
    Real beta = 0;
    Real R = 0;
    std::shared_ptr<const Trajectory> trajectory;
};

struct ShotLogEntry {
    Real beta;
    ShotKind kind;
};

struct ShootingResult {
    Real a = 0;
    Real beta_star = 0;
    Real bracket_width = 0;
    ShotKind outcome_low = ShotKind::CrossedZero;
    ShotKind outcome_high = ShotKind::ExceededR;
    Real R = 0;
    std::shared_ptr<const Trajectory> trajectory;  // validation run at beta_star

    // Screen data from the validation run.
    Real departure_time = 0;
    int good_minima = 0;  // minima after t = 0 within 1e-4 a0 of a
    Real min_v = 0;

    std::vector<ShotLogEntry> log;     // every classified shot, in order
    bool monotone_consistent = true;   // no S shot above a T shot in the log
};

class BracketFailed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ValidationFailed : public std::runtime_error {
public:
    ValidationFailed(const std::string& what, std::shared_ptr<const Trajectory> traj = nullptr)
        : std::runtime_error(what), trajectory_(std::move(traj)) {}
    const std::shared_ptr<const Trajectory>& trajectory() const { return trajectory_; }

private:
    std::shared_ptr<const Trajectory> trajectory_;
};

// Tolerances used for classification runs: horizon 40 and x87-level
// accuracy, since the bracket must resolve beta* to a few ulps.
IntegrationConfig shooting_config();

inline constexpr double kDefaultBetaTol = 1e-18;

// Smallest R = a * 1.001^k with R > a and F(R) > beta_cap^2/2 + F(a), times 1.1.
// Requires 0 < a < a0 and beta_cap >= 0.
Real trapping_radius(const ProblemParams& params, Real a, Real beta_cap);

// Shoots from (a, 0, beta, 0) with terminal events v = 0 (falling) and v = R
// (rising). R defaults to trapping_radius(a, max(1.05 beta0, beta)).
// Throws StiffFailure with the partial trajectory on step underflow.
ShotOutcome classify_shot(const ProblemParams& params, Real a, Real beta,
                          const IntegrationConfig& config = shooting_config());
ShotOutcome classify_shot(const ProblemParams& params, Real a, Real beta, Real R,
                          const IntegrationConfig& config);

// True when v' >= 0 at every step endpoint (shots above beta0 rise monotonically).
bool monotone_increasing(const Trajectory& traj);

// Bisection on outcome kind between beta = 0 (S) and 1.05 beta0 (T), down to
// beta_tol or the working-precision resolution, whichever is coarser; then
// screens the beta* trajectory. Throws BracketFailed or ValidationFailed.
ShootingResult find_beta_star(const ProblemParams& params, Real a,
                              const IntegrationConfig& config = shooting_config(),
                              double beta_tol = kDefaultBetaTol);

}  // namespace biharm

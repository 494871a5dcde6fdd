#include "biharm/shooting.hpp"

#include <algorithm>
#include <cmath>

namespace biharm {

namespace {

constexpr int kPrescan = 16;
constexpr int kTieRetries = 4;

ShotKind kind_of(const Trajectory& traj) {
    switch (traj.termination()) {
        case Termination::BlowUp: return ShotKind::BlowUp;
        case Termination::ReachedHorizon: return ShotKind::BoundedToHorizon;
        case Termination::StepLimit:
            throw StiffFailure("classify_shot: step limit exhausted", traj);
        case Termination::Event: break;
    }
    const auto& last = traj.events().back();
    return last.label == "zero" ? ShotKind::CrossedZero : ShotKind::ExceededR;
}

// Two terminal events recorded at (almost) the same time.
bool has_terminal_tie(const Trajectory& traj) {
    if (traj.termination() != Termination::Event) return false;
    const auto& ev = traj.events();
    return ev.size() >= 2 && ev[ev.size() - 2].label != "dv" && ev[ev.size() - 2].label != ev.back().label &&
           std::fabs(ev.back().t - ev[ev.size() - 2].t) <= 1e-13L * (1 + std::fabs(ev.back().t));
}

}  // namespace

const char* to_string(ShotKind k) {
    switch (k) {
        case ShotKind::CrossedZero: return "CrossedZero";
        case ShotKind::ExceededR: return "ExceededR";
        case ShotKind::BoundedToHorizon: return "BoundedToHorizon";
        case ShotKind::BlowUp: return "BlowUp";
    }
    return "?";
}

IntegrationConfig shooting_config() {
    IntegrationConfig c;
    c.rel_tol = 1e-16;
    c.abs_tol = 1e-18;
    c.horizon = 40.0;
    return c;
}

Real trapping_radius(const ProblemParams& P, Real a, Real beta_cap) {
    if (!(a > 0 && a < P.a0)) throw std::domain_error("trapping_radius: need 0 < a < a0");
    if (!(beta_cap >= 0)) throw std::domain_error("trapping_radius: need beta_cap >= 0");
    const Real level = beta_cap * beta_cap / 2 + F_potential(P, a);
    Real R = a * 1.001L;
    while (!(F_potential(P, R) > level)) R *= 1.001L;
    return R * 1.1L;
}

ShotOutcome classify_shot(const ProblemParams& P, Real a, Real beta, const IntegrationConfig& config) {
    const Real cap = std::max<Real>(1.05L * P.beta0, beta);
    return classify_shot(P, a, beta, trapping_radius(P, a, cap), config);
}

ShotOutcome classify_shot(const ProblemParams& P, Real a, Real beta, Real R,
                          const IntegrationConfig& config) {
    if (!(a > 0 && a < P.a0)) throw std::domain_error("classify_shot: need 0 < a < a0");
    if (!(beta >= 0)) throw std::domain_error("classify_shot: need beta >= 0");
    const std::vector<EventSpec> events = {
        {"zero", 0, 0, Crossing::Falling, true},
        {"R", 0, R, Crossing::Rising, true},
    };
    IntegrationConfig cfg = config;
    for (int attempt = 0;; ++attempt) {
        auto traj = std::make_shared<const Trajectory>(integrate(P, PhaseState(0, a, 0, beta, 0), cfg, events));
        if (has_terminal_tie(*traj) && attempt < kTieRetries) {
            cfg.rel_tol /= 2;
            cfg.abs_tol /= 2;
            continue;
        }
        ShotOutcome out;
        out.kind = kind_of(*traj);
        out.t = traj->t_end();
        out.beta = beta;
        out.R = R;
        out.trajectory = std::move(traj);
        return out;
    }
}

bool monotone_increasing(const Trajectory& traj) {
    if (traj.initial_state()[1] < 0) return false;
    for (const auto& seg : traj.segments())
        if (seg.y1[1] < 0) return false;
    return traj.final_state()[1] >= 0;
}

namespace {

// Runs the beta* trajectory without zero/R termination and applies the
// periodicity screen up to the first exit from [a/2, R].
void screen(const ProblemParams& P, const IntegrationConfig& config, ShootingResult& res) {
    const std::vector<EventSpec> events = {
        {"dv", 1, 0, Crossing::Either, false},
        {"low", 0, res.a / 2, Crossing::Falling, true},
        {"high", 0, res.R, Crossing::Rising, true},
    };
    auto traj = std::make_shared<const Trajectory>(
        integrate(P, PhaseState(0, res.a, 0, res.beta_star, 0), config, events));
    res.trajectory = traj;
    res.departure_time = traj->t_end();
    res.good_minima = 0;
    Real vmin = res.a;
    for (const auto& seg : traj->segments()) vmin = std::min(vmin, seg.y1[0]);
    res.min_v = std::max(vmin, res.a / 2);
    for (const auto& e : traj->events()) {
        if (e.label != "dv" || !(e.y[2] > 0) || !(e.t > 0)) continue;
        if (std::fabs(e.y[0] - res.a) <= 1e-4L * P.a0) ++res.good_minima;
    }
    // With the even reflection about t = 0 every minimum after 0 has a
    // mirror image, so one good minimum gives three on the full line.
    if (res.good_minima < 1) {
        throw ValidationFailed("find_beta_star: beta* trajectory left [a/2, R] at t = " +
                                   std::to_string(static_cast<double>(res.departure_time)) +
                                   " before returning to its minimum",
                               traj);
    }
}

}  // namespace

ShootingResult find_beta_star(const ProblemParams& P, Real a, const IntegrationConfig& config,
                              double beta_tol) {
    if (!(a > 0 && a < P.a0)) throw std::domain_error("find_beta_star: need 0 < a < a0");
    if (!(beta_tol > 0)) throw std::domain_error("find_beta_star: beta_tol must be positive");

    ShootingResult res;
    res.a = a;
    const Real hi0 = 1.05L * P.beta0;
    res.R = trapping_radius(P, a, hi0);

    auto shoot = [&](Real beta) {
        ShotOutcome o = classify_shot(P, a, beta, res.R, config);
        res.log.push_back({beta, o.kind});
        return o;
    };

    // Coarse scan over [0, 1.05 beta0]; the endpoints double as the bracket check.
    std::vector<ShotOutcome> scan;
    for (int k = 0; k <= kPrescan; ++k) scan.push_back(shoot(hi0 * k / kPrescan));
    if (!in_S(scan.front().kind))
        throw BracketFailed("find_beta_star: beta = 0 classified " + std::string(to_string(scan.front().kind)));
    if (!in_T(scan.back().kind))
        throw BracketFailed("find_beta_star: beta = 1.05 beta0 classified " +
                            std::string(to_string(scan.back().kind)));

    std::size_t first_T = 0;
    while (!in_T(scan[first_T].kind) && !(scan[first_T].kind == ShotKind::BoundedToHorizon)) ++first_T;

    if (scan[first_T].kind == ShotKind::BoundedToHorizon) {
        res.beta_star = scan[first_T].beta;
        res.bracket_width = 0;
        res.outcome_low = scan[first_T - 1].kind;
        res.outcome_high = ShotKind::BoundedToHorizon;
        screen(P, config, res);
        return res;
    }

    ShotOutcome lo = scan[first_T - 1];
    ShotOutcome hi = scan[first_T];
    const Real tol = static_cast<Real>(beta_tol);
    while (hi.beta - lo.beta > tol) {
        const Real mid = lo.beta + (hi.beta - lo.beta) / 2;
        if (!(mid > lo.beta && mid < hi.beta)) break;
        ShotOutcome o = shoot(mid);
        if (o.kind == ShotKind::BoundedToHorizon) {
            lo = hi = o;
            break;
        }
        (in_S(o.kind) ? lo : hi) = std::move(o);
    }
    Real lowest_T = hi0;
    for (const auto& e : res.log)
        if (in_T(e.kind)) lowest_T = std::min(lowest_T, e.beta);
    for (const auto& e : res.log)
        if (in_S(e.kind) && e.beta > lowest_T) res.monotone_consistent = false;

    res.beta_star = lo.beta + (hi.beta - lo.beta) / 2;
    res.bracket_width = hi.beta - lo.beta;
    res.outcome_low = lo.kind;
    res.outcome_high = hi.kind;
    screen(P, config, res);
    return res;
}

}  // namespace biharm

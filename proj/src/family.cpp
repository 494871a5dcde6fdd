#include "biharm/family.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include <omp.h>

namespace biharm {

namespace {

constexpr int kSymmetrySamples = 200;
constexpr int kPositivitySamples = 400;

Real reduce_mod(Real t, Real L) {
    Real tau = std::fmod(t, L);
    if (tau < 0) tau += L;
    return tau;
}

std::string describe(Real x) { return std::to_string(static_cast<double>(x)); }

}  // namespace

PeriodicSolution PeriodicSolution::constant(const ProblemParams& P) {
    PeriodicSolution s;
    s.params = P;
    s.a = P.a0;
    s.beta_star = 0;
    s.period = 0;
    s.energy = F_potential(P, static_cast<Real>(P.a0));
    s.t_max = 0;
    s.v_max = P.a0;
    return s;
}

PhaseState PeriodicSolution::state_at(Real t) const {
    const Jet j = jet_at(t);
    return PhaseState(t, j[0], j[1], j[2], j[3]);
}

Jet PeriodicSolution::jet_at(Real t) const {
    if (is_constant()) return {static_cast<Real>(params.a0), 0, 0, 0, 0};
    const Real tau = reduce_mod(t, period);
    if (tau <= t_max) return evaluate_jet(*profile, tau);
    Jet j = evaluate_jet(*profile, std::max<Real>(period - tau, 0));
    j[1] = -j[1];
    j[3] = -j[3];
    return j;
}

PeriodicSolution extract_periodic(const ProblemParams& P, const ShootingResult& shot,
                                  const IntegrationConfig& config) {
    const Real a = shot.a;
    const Real beta = shot.beta_star;
    const std::vector<EventSpec> events = {
        {"dv", 1, 0, Crossing::Either, false},
        {"low", 0, a / 2, Crossing::Falling, true},
        {"high", 0, shot.R, Crossing::Rising, true},
    };
    auto traj = std::make_shared<const Trajectory>(integrate(P, PhaseState(0, a, 0, beta, 0), config, events));

    std::vector<EventRecord<4>> dv;
    for (const auto& e : traj->events())
        if (e.label == "dv" && e.t > 0) dv.push_back(e);
    if (dv.size() < 2)
        throw PeriodDetectionFailed("extract_periodic: only " + std::to_string(dv.size() + 1) +
                                    " v' = 0 events before the trajectory left at t = " +
                                    describe(traj->t_end()));
    if (!(dv[0].y[2] < 0))
        throw ValidationFailed("extract_periodic: first extremum after the minimum is not a maximum", traj);
    if (!(dv[1].y[2] > 0))
        throw ValidationFailed("extract_periodic: second extremum after the minimum is not a minimum", traj);

    PeriodicSolution sol;
    sol.params = P;
    sol.a = a;
    sol.beta_star = beta;
    sol.t_max = dv[0].t;
    sol.v_max = dv[0].y[0];
    sol.period = 2 * sol.t_max;
    sol.event_period = dv[1].t;
    sol.energy = energy(P, State{a, 0, beta, 0});
    sol.profile = traj;

    const Real L = sol.period;
    if (std::fabs(sol.event_period - L) > 1e-8L * L)
        throw ValidationFailed("extract_periodic: minimum-to-minimum spacing " + describe(sol.event_period) +
                                   " disagrees with 2 t_max = " + describe(L),
                               traj);

    for (int i = 0; i <= kSymmetrySamples; ++i) {
        const Real s = sol.t_max * i / kSymmetrySamples;
        const Real right = std::min(sol.t_max + s, traj->t_end());
        const Real left = std::max<Real>(0, sol.t_max - (right - sol.t_max));
        sol.symmetry_error = std::max(sol.symmetry_error,
                                      std::fabs(traj->state_at(right)[0] - traj->state_at(left)[0]));
    }
    if (sol.symmetry_error > 1e-7L * P.a0)
        throw ValidationFailed("extract_periodic: symmetry error " + describe(sol.symmetry_error), traj);

    const auto& E = traj->energy_samples();
    const auto& segs = traj->segments();
    for (std::size_t k = 0; k < segs.size() && segs[k].t1 <= sol.event_period; ++k)
        sol.energy_drift = std::max(sol.energy_drift, std::fabs(E[k + 1] - E[0]));
    if (sol.energy_drift > 1e-7L * (1 + std::fabs(sol.energy)))
        throw ValidationFailed("extract_periodic: energy drift " + describe(sol.energy_drift), traj);

    for (int i = 1; i < kPositivitySamples; ++i) {
        const Real t = L * i / kPositivitySamples;
        if (!(sol.state_at(t).v > a))
            throw ValidationFailed("extract_periodic: v <= a inside the period at t = " + describe(t), traj);
    }
    if (a > P.a0) throw ValidationFailed("extract_periodic: minimum above a0", traj);
    return sol;
}

PeriodicSolution solve_periodic(const ProblemParams& P, Real a, const IntegrationConfig& config,
                                double beta_tol) {
    return extract_periodic(P, find_beta_star(P, a, config, beta_tol), config);
}

int env_thread_cap() {
    const char* s = std::getenv("BIHARM_THREADS");
    if (!s) return 0;
    char* end = nullptr;
    const long v = std::strtol(s, &end, 10);
    return (end != s && *end == '\0' && v > 0) ? static_cast<int>(v) : 0;
}

namespace {

FamilyRecord sweep_row(const ProblemParams& P, double a, const IntegrationConfig& config) {
    FamilyRecord r;
    r.a = a;
    try {
        const auto sol = solve_periodic(P, a, config);
        r.beta_star = static_cast<double>(sol.beta_star);
        r.period = static_cast<double>(sol.period);
        r.energy = static_cast<double>(sol.energy);
        r.v_max = static_cast<double>(sol.v_max);
    } catch (const std::exception& e) {
        r.status = e.what();
    }
    return r;
}

}  // namespace

std::vector<FamilyRecord> sweep_family(const ProblemParams& P, std::vector<double> a_values,
                                       const IntegrationConfig& config, int threads) {
    std::sort(a_values.begin(), a_values.end());
    std::vector<FamilyRecord> rows(a_values.size());
    int nt = threads > 0 ? threads : omp_get_max_threads();
    if (const int cap = env_thread_cap(); cap > 0) nt = std::min(nt, cap);
    const long count = static_cast<long>(a_values.size());
#pragma omp parallel for schedule(dynamic) num_threads(nt)
    for (long i = 0; i < count; ++i) rows[i] = sweep_row(P, a_values[i], config);
    return rows;
}

std::vector<FamilyRecord> sweep_family_serial(const ProblemParams& P, std::vector<double> a_values,
                                              const IntegrationConfig& config) {
    std::sort(a_values.begin(), a_values.end());
    std::vector<FamilyRecord> rows;
    rows.reserve(a_values.size());
    for (const double a : a_values) rows.push_back(sweep_row(P, a, config));
    return rows;
}

Real reconstruct_u(const ProblemParams& P, const PeriodicSolution& sol, Real L, Real r) {
    if (!(r > 0)) throw std::domain_error("reconstruct_u: r must be positive");
    const Real k = P.weight_exponent();
    return std::pow(r, -k) * sol.jet_at(std::log(r) + L)[0];
}

}  // namespace biharm

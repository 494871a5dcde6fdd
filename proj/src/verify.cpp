#include "biharm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "biharm/second_order.hpp"
#include "biharm/taylor.hpp"

namespace biharm {

namespace {

std::string sci(Real x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.3Lg", x);
    return buf;
}

Check make_check(std::string name, bool pass, std::string detail) {
    return Check{std::move(name), pass, std::move(detail)};
}

// Runs body and turns any exception into a failed check.
void guarded(Checks& out, const std::string& name, const std::function<void()>& body) {
    try {
        body();
    } catch (const std::exception& e) {
        out.push_back(make_check(name, false, e.what()));
    }
}

const std::vector<double> kMemberFractions = {0.5, 0.7, 0.9};

std::vector<PeriodicSolution> members(const ProblemParams& P, const std::vector<double>& fractions) {
    std::vector<PeriodicSolution> out;
    for (const double f : fractions) out.push_back(solve_periodic(P, f * P.a0));
    return out;
}

std::string member_name(const ProblemParams& P, const PeriodicSolution& s) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "a=%.4g a0", static_cast<double>(s.a / P.a0));
    return buf;
}

IntegrationConfig tight_config(double horizon) {
    IntegrationConfig c = shooting_config();
    c.horizon = horizon;
    return c;
}

}  // namespace

Real constant_energy_drift(const ProblemParams& P, double horizon) {
    const Trajectory tr = integrate(P, PhaseState(0, P.a0, 0, 0, 0), tight_config(horizon));
    if (tr.termination() != Termination::ReachedHorizon)
        throw std::runtime_error("constant run ended early: " + std::string(to_string(tr.termination())));
    return tr.energy_drift();
}

Real periodic_energy_drift(const ProblemParams& P, const PeriodicSolution& sol, double horizon) {
    if (sol.is_constant()) return constant_energy_drift(P, horizon);
    const Real E0 = sol.energy;
    Real drift = 0;
    Real t = 0;
    while (t < horizon) {
        const double len = std::min<double>(static_cast<double>(sol.period), horizon - static_cast<double>(t));
        if (len <= 0) break;
        const Trajectory tr = integrate(P, PhaseState(t, sol.a, 0, sol.beta_star, 0), tight_config(len));
        if (tr.termination() != Termination::ReachedHorizon)
            throw std::runtime_error("periodic segment ended early: " + std::string(to_string(tr.termination())));
        for (const Real e : tr.energy_samples()) drift = std::max(drift, std::fabs(e - E0));
        t = tr.t_end();
    }
    return drift;
}

Real homoclinic_energy_drift(const ProblemParams& P, double horizon, double segment) {
    const Real t0 = -static_cast<Real>(horizon) / 2;
    const Real E0 = energy(P, homoclinic(P, t0));
    Real drift = 0;
    Real t = t0;
    while (t < t0 + static_cast<Real>(horizon)) {
        const double len = std::min<double>(segment, static_cast<double>(t0 + static_cast<Real>(horizon) - t));
        const Trajectory tr = integrate(P, homoclinic(P, t), tight_config(len));
        if (tr.termination() != Termination::ReachedHorizon)
            throw std::runtime_error("homoclinic segment ended early: " + std::string(to_string(tr.termination())));
        for (const Real e : tr.energy_samples()) drift = std::max(drift, std::fabs(e - E0));
        t = tr.t_end();
    }
    return drift;
}

Real homoclinic_max_residual(const ProblemParams& P, Real t_min, Real t_max, int samples) {
    Real worst = 0;
    for (int i = 0; i < samples; ++i) {
        const Real t = t_min + (t_max - t_min) * i / (samples - 1);
        worst = std::max(worst, ode_residual(P, homoclinic_jet(P, t)));
    }
    return worst;
}

Real homoclinic_max_energy(const ProblemParams& P, Real t_min, Real t_max, int samples) {
    Real worst = 0;
    for (int i = 0; i < samples; ++i) {
        const Real t = t_min + (t_max - t_min) * i / (samples - 1);
        worst = std::max(worst, std::fabs(energy(P, homoclinic(P, t))));
    }
    return worst;
}

Real homoclinic_transport_error(const ProblemParams& P, Real t0, Real t1) {
    const HighReal a(static_cast<double>(t0)), b(static_cast<double>(t1));
    const TaylorRun run = integrate_taylor(P, homoclinic_state_high(P, a), a, b);
    const HighReal exact = homoclinic_state_high(P, b)[0];
    return static_cast<Real>(HighReal(abs(run.y_end[0] - exact) / abs(exact)));
}

Real homoclinic_profile_gap(const ProblemParams& P, const PeriodicSolution& sol, Real window) {
    Real worst = 0;
    constexpr int kSamples = 601;
    for (int i = 0; i < kSamples; ++i) {
        const Real t = -window + 2 * window * i / (kSamples - 1);
        worst = std::max(worst, std::fabs(sol.jet_at(t + sol.t_max)[0] - homoclinic(P, t).v));
    }
    return worst;
}

Checks suite_energy(const ProblemParams& P) {
    Checks out;
    constexpr double kHorizon = 40.0;
    guarded(out, "energy: constant a0 over 40", [&] {
        const Real E = F_potential(P, static_cast<Real>(P.a0));
        const Real d = constant_energy_drift(P, kHorizon);
        out.push_back(make_check("energy: constant a0 over 40", d <= 1e-7L * (1 + std::fabs(E)), "drift " + sci(d)));
    });
    if (P.n) {
        guarded(out, "energy: homoclinic over 40", [&] {
            const Real d = homoclinic_energy_drift(P, kHorizon);
            out.push_back(make_check("energy: homoclinic over 40", d <= 1e-7L, "drift " + sci(d)));
        });
    }
    guarded(out, "energy: periodic members", [&] {
        for (const auto& s : members(P, kMemberFractions)) {
            const Real d = periodic_energy_drift(P, s, kHorizon);
            const Real bound = 1e-7L * (1 + std::fabs(s.energy));
            out.push_back(make_check("energy: periodic " + member_name(P, s) + " over 40", d <= bound,
                                     "drift " + sci(d) + ", bound " + sci(bound)));
            const auto ineq = check_energy_inequality(P, s);
            out.push_back(make_check("energy inequality: " + member_name(P, s), ineq.pass,
                                     "worst margin " + sci(ineq.worst_margin)));
        }
        const auto c = check_energy_inequality(P, PeriodicSolution::constant(P));
        out.push_back(make_check("energy inequality: constant a0", c.pass, "worst margin " + sci(c.worst_margin)));
    });
    return out;
}

Checks suite_symmetry(const ProblemParams& P) {
    Checks out;
    guarded(out, "symmetry: family members", [&] {
        for (const auto& s : members(P, kMemberFractions)) {
            const Real tol = 1e-7L * P.a0;
            out.push_back(make_check("symmetry about the maximum: " + member_name(P, s), s.symmetry_error <= tol,
                                     "error " + sci(s.symmetry_error / P.a0) + " a0"));
            // Reversal closure on the raw run: v(L - t) against v(t).
            Real rev = 0;
            const auto& raw = *s.profile;
            const Real span = std::min(s.period, raw.t_end());
            for (int i = 0; i <= 200; ++i) {
                const Real t = span * i / 200;
                rev = std::max(rev, std::fabs(raw.state_at(span - t)[0] - raw.state_at(t)[0]));
            }
            out.push_back(make_check("reversal closure: " + member_name(P, s), rev <= tol,
                                     "error " + sci(rev / P.a0) + " a0"));
            out.push_back(make_check("period cross-check: " + member_name(P, s),
                                     std::fabs(s.event_period - s.period) <= 1e-8L * s.period,
                                     "L = " + sci(s.period) + ", gap " + sci(s.event_period - s.period)));
            out.push_back(make_check("inf v <= a0: " + member_name(P, s), s.a <= P.a0 + 1e-8L,
                                     "min v = " + sci(s.a)));
        }
        const auto c = PeriodicSolution::constant(P);
        out.push_back(make_check("constant attains a0", c.state_at(0).v == static_cast<Real>(P.a0),
                                 "v = " + sci(c.state_at(0).v)));
    });
    return out;
}

Checks suite_ordering(const ProblemParams& P) {
    Checks out;
    guarded(out, "ordering", [&] {
        const auto sols = members(P, {0.5, 0.75});
        const auto rep = check_energy_ordering(P, sols[0], sols[1], 20);
        out.push_back(make_check("energy ordering: a = 0.5 a0 vs 0.75 a0", rep.pass && !rep.vacuous,
                                 std::to_string(rep.samples.size()) + " common values, E = " + sci(rep.energy1) +
                                     " / " + sci(rep.energy2)));
        const auto c = PeriodicSolution::constant(P);
        const auto rc = check_energy_ordering(P, sols[1], c, 20);
        out.push_back(make_check("energy ordering: periodic vs constant", rc.pass && !rc.vacuous,
                                 "E = " + sci(rc.energy1) + " / F(a0) = " + sci(rc.energy2)));
        const auto rs = check_energy_ordering(P, sols[0], sols[0], 20);
        out.push_back(make_check("energy ordering: self comparison is vacuous", rs.pass && rs.vacuous, ""));
    });
    return out;
}

Checks suite_phase(const ProblemParams& P) {
    Checks out;
    guarded(out, "phase", [&] {
        const auto sols = members(P, kMemberFractions);
        for (const auto& s : sols) {
            const auto rep = check_phase_curve_simple(s);
            out.push_back(make_check("phase curve simple: " + member_name(P, s), rep.simple,
                                     std::to_string(rep.crossings) + " crossings on " +
                                         std::to_string(rep.vertices) + " vertices"));
        }
        // Negative control: flipping the sign of v' mid-branch makes a figure eight.
        const auto& s = sols.front();
        std::vector<std::array<Real, 2>> pts;
        for (int k = 0; k < 400; ++k) {
            const Real t = s.period * k / 400;
            const Jet j = s.jet_at(t);
            pts.push_back({j[0], j[1] * std::cos(2 * std::numbers::pi_v<Real> * t / s.period)});
        }
        const auto neg = check_polyline_simple(pts);
        out.push_back(make_check("phase curve negative control rejected", !neg.simple,
                                 std::to_string(neg.crossings) + " crossings"));
    });
    return out;
}

Checks suite_homoclinic(const ProblemParams& P) {
    Checks out;
    if (!P.n) {
        out.push_back(make_check("homoclinic", false, "closed form needs the dimension n"));
        return out;
    }
    guarded(out, "homoclinic", [&] {
        const Real res = homoclinic_max_residual(P, -10, 10, 1000);
        out.push_back(make_check("homoclinic ODE residual on [-10, 10]", res <= 1e-9L, "max " + sci(res)));
        const Real E = homoclinic_max_energy(P, -10, 10, 1000);
        const Real bound = 1e-9L * std::max<Real>(1, std::fabs(F_potential(P, static_cast<Real>(P.a0))));
        out.push_back(make_check("homoclinic energy vanishes", E <= bound, "max |E| " + sci(E)));
        const PhaseState peak = homoclinic(P, 0);
        out.push_back(make_check("homoclinic peak cn/2^k", std::fabs(peak.v - *P.cn / std::pow(2.0L, P.weight_exponent())) <= 1e-15L * peak.v && peak.v1 == 0,
                                 "v(0) = " + sci(peak.v)));
        const Real err = homoclinic_transport_error(P, -10, 10);
        out.push_back(make_check("homoclinic transported from -10 to 10", err <= 1e-6L, "relative v error " + sci(err)));
    });
    return out;
}

Checks suite_oracle(const ProblemParams& P) {
    Checks out;
    if (!P.n) {
        out.push_back(make_check("second-order oracle", false, "needs the dimension n"));
        return out;
    }
    guarded(out, "second-order oracle", [&] {
        const auto s = make_second_order(*P.n);
        IntegrationConfig cfg;
        cfg.rel_tol = 1e-14;
        cfg.abs_tol = 1e-16;
        Real worst = 0;
        for (int i = 1; i <= 10; ++i) {
            const auto orb = second_order_oracle(*P.n, s.equilibrium * i / 11, cfg);
            worst = std::max(worst, orb.relative_gap);
        }
        out.push_back(make_check("second-order pipeline vs quadrature, 10 amplitudes", worst <= 1e-7L,
                                 "max relative gap " + sci(worst)));
        const Real fp = std::fabs(s.c * s.equilibrium - std::pow(s.equilibrium, s.q));
        IntegrationConfig fixed = cfg;
        fixed.horizon = 40;
        const Real tr = second_order_equilibrium_drift(s, fixed);
        out.push_back(make_check("second-order equilibrium is a fixed point", fp <= 1e-12L * s.equilibrium && tr <= 1e-12L * s.equilibrium,
                                 "equilibrium " + sci(s.equilibrium) + ", residual " + sci(fp) + ", drift " + sci(tr)));
        const auto near = second_order_oracle(*P.n, s.equilibrium * 0.999L, cfg);
        const Real lin = second_order_linear_period(s);
        out.push_back(make_check("second-order period near equilibrium", std::fabs(near.period_pipeline - lin) <= 0.01L * lin,
                                 "L = " + sci(near.period_pipeline) + ", linear " + sci(lin)));
        const auto small = second_order_oracle(*P.n, s.equilibrium * 1e-4L, cfg);
        const Real peak = second_order_homoclinic(s, 0);
        out.push_back(make_check("second-order small-amplitude maximum near homoclinic peak",
                                 std::fabs(small.v_max - peak) <= 0.02L * peak,
                                 "v_max " + sci(small.v_max) + ", peak " + sci(peak)));
    });
    return out;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"energy", "symmetry", "ordering", "phase",
                                                   "homoclinic", "oracle", "all"};
    return names;
}

Checks run_suite(const ProblemParams& P, const std::string& suite) {
    if (suite == "energy") return suite_energy(P);
    if (suite == "symmetry") return suite_symmetry(P);
    if (suite == "ordering") return suite_ordering(P);
    if (suite == "phase") return suite_phase(P);
    if (suite == "homoclinic") return suite_homoclinic(P);
    if (suite == "oracle") return suite_oracle(P);
    if (suite == "all") {
        Checks all;
        for (const auto& name : suite_names()) {
            if (name == "all") continue;
            auto part = run_suite(P, name);
            all.insert(all.end(), part.begin(), part.end());
        }
        return all;
    }
    throw std::invalid_argument("unknown suite '" + suite + "'");
}

}  // namespace biharm

#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "biharm/integrator.hpp"
#include "biharm/shooting.hpp"
#include "biharm/taylor.hpp"

using namespace biharm;

namespace {

IntegrationConfig tight(double horizon) {
    IntegrationConfig c = shooting_config();
    c.horizon = horizon;
    return c;
}

// beta* for n = 8, a = 4, pinned below against the fixed-step oracle.
constexpr Real kBetaStar8 = 9.29911498254047L;

}  // namespace

TEST_CASE("config validation") {
    IntegrationConfig c;
    CHECK_NOTHROW(c.validate());
    c.rel_tol = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.abs_tol = 0.1;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.horizon = -1;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.blowup_threshold = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.max_steps = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    const auto P = make_params(8);
    c = {};
    c.max_steps = 0;
    CHECK_THROWS_AS(integrate(P, PhaseState(0, 1, 0, 0, 0), c), std::invalid_argument);
}

TEST_CASE("invalid event specs are rejected") {
    const auto P = make_params(8);
    CHECK_THROWS_AS(integrate(P, PhaseState(0, 1, 0, 0, 0), {}, {{"bad", 4, 0, Crossing::Either, false}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(integrate(P, PhaseState(0, 1, 0, 0, 0), {}, {{"bad", 0, NAN, Crossing::Either, false}}),
                    std::invalid_argument);
}

TEST_CASE("constant a0 stays constant") {
    const auto P = make_params(8);
    IntegrationConfig c;
    c.horizon = 50;
    const Trajectory tr = integrate(P, PhaseState(0, 8, 0, 0, 0), c);
    CHECK(tr.termination() == Termination::ReachedHorizon);
    CHECK(tr.t_end() == 50);
    for (const auto& seg : tr.segments()) CHECK(std::fabs(seg.y1[0] - 8) <= 1e-9L);
    CHECK(std::fabs(evaluate(tr, 17.3L).v - 8) <= 1e-9L);
    CHECK(tr.energy_drift() <= 1e-7L * 1025);
}

TEST_CASE("homoclinic run matches the closed form") {
    const auto P = make_params(8);
    // From -10 to the peak the error only grows with the solution itself.
    const Trajectory tr = integrate(P, homoclinic(P, -10), tight(10));
    CHECK(tr.termination() == Termination::ReachedHorizon);
    const Real exact = homoclinic(P, 0).v;
    CHECK(std::fabs(tr.final_state()[0] - exact) <= 1e-6L * exact);
    for (const auto& seg : tr.segments()) {
        const Real tm = (seg.t0 + seg.t1) / 2;
        const Real ex = homoclinic(P, tm).v;
        CHECK(std::fabs(evaluate(tr, tm).v - ex) <= 1e-6L * ex);
    }
    CHECK(tr.energy_drift() <= 1e-7L);
}

TEST_CASE("homoclinic from -10 to +10 with the Taylor integrator") {
    for (int n : {5, 6, 8}) {
        const auto P = make_params(n);
        const HighReal t0 = -10, t1 = 10;
        const TaylorRun run = integrate_taylor(P, homoclinic_state_high(P, t0), t0, t1);
        const HighReal exact = homoclinic_state_high(P, t1)[0];
        CHECK(static_cast<double>(HighReal(abs(run.y_end[0] - exact) / exact)) <= 1e-6);
        CHECK(static_cast<double>(HighReal(abs(energy_high(P, run.y_end)))) <= 1e-20);
    }
}

TEST_CASE("Taylor and DOP853 agree on a short run") {
    const auto P = make_params(7);
    const State y0{1.2L, 0.1L, -0.4L, 0.3L};
    const Trajectory tr = integrate(P, PhaseState(0, y0), tight(0.5));
    const TaylorRun run = integrate_taylor(P, {y0[0], y0[1], y0[2], y0[3]}, 0, HighReal(0.5));
    for (int i = 0; i < 4; ++i)
        CHECK(std::fabs(tr.final_state()[i] - static_cast<Real>(run.y_end[i])) <= 1e-14L);
    CHECK_THROWS_AS(integrate_taylor(P, {1, 0, 0, 0}, 1, 0), std::invalid_argument);
}

TEST_CASE("beta = 2 beta0 from a0/2 blows up monotonically") {
    const auto P = make_params(8);
    const Trajectory tr = integrate(P, PhaseState(0, P.a0 / 2, 0, 2 * P.beta0, 0), {});
    CHECK(tr.termination() == Termination::BlowUp);
    for (const Real x : tr.final_state()) CHECK(x > 0);
    CHECK(tr.energy_drift() >= 0);
}

TEST_CASE("step-size underflow is a distinguishable failure") {
    const auto P = make_params(8);
    IntegrationConfig c;
    c.blowup_threshold = 1e300;
    c.horizon = 10;
    try {
        integrate(P, PhaseState(0, P.a0 / 2, 0, 2 * P.beta0, 0), c);
        FAIL("expected StiffFailure");
    } catch (const StiffFailure& e) {
        CHECK(e.partial().t_end() > 1);
        CHECK(e.partial().t_end() < 2);
        CHECK(!e.partial().segments().empty());
    }
}

TEST_CASE("evaluate is exact at step endpoints and rejects out-of-range times") {
    const auto P = make_params(8);
    const PhaseState init(0, 4, 0, 3, 0);
    const Trajectory tr = integrate(P, init, tight(1));
    const PhaseState s0 = evaluate(tr, 0);
    CHECK(s0.y() == init.y());
    for (const auto& seg : tr.segments()) {
        CHECK(evaluate(tr, seg.t1).y() == seg.y1);
        CHECK(evaluate(tr, seg.t0).y() == seg.y0);
    }
    CHECK_THROWS_AS(evaluate(tr, -0.1L), std::out_of_range);
    CHECK_THROWS_AS(evaluate(tr, 1.1L), std::out_of_range);
    IntegrationConfig nd = tight(1);
    nd.store_dense = false;
    CHECK_THROWS_AS(evaluate(integrate(P, init, nd), 0.5L), std::out_of_range);
}

TEST_CASE("segments are contiguous and increasing") {
    const auto P = make_params(5);
    const Trajectory tr = integrate(P, PhaseState(0, 0.5L, 0, 0.1L, 0), tight(5));
    const auto& segs = tr.segments();
    REQUIRE(!segs.empty());
    CHECK(segs.front().t0 == tr.t_start());
    CHECK(segs.back().t1 == tr.t_end());
    for (std::size_t i = 0; i < segs.size(); ++i) {
        CHECK(segs[i].t1 > segs[i].t0);
        if (i) CHECK(segs[i].t0 == segs[i - 1].t1);
    }
}

TEST_CASE("dense output derivative tracks the field") {
    const auto P = make_params(8);
    const Trajectory tr = integrate(P, PhaseState(0, 4, 0, kBetaStar8, 0), tight(3));
    for (Real t = 0.05L; t < 3; t += 0.25L) {
        const Jet j = evaluate_jet(tr, t);
        CHECK(ode_residual(P, j) <= 1e-10L);
    }
}

TEST_CASE("events are sorted and satisfy their equation") {
    const auto P = make_params(8);
    const std::vector<EventSpec> ev = {{"dv", 1, 0, Crossing::Either, false},
                                       {"v6", 0, 6, Crossing::Either, false},
                                       {"v2", 2, 0, Crossing::Rising, false}};
    const Trajectory tr = integrate(P, PhaseState(0, 4, 0, kBetaStar8, 0), tight(6), ev);
    REQUIRE(tr.events().size() > 6);
    Real prev = -1;
    for (const auto& e : tr.events()) {
        CHECK(e.t >= prev);
        prev = e.t;
        const auto& spec = ev[e.spec_index];
        CHECK(std::fabs(e.y[spec.component] - spec.level) <= 1e-10L);
        CHECK(e.label == spec.label);
        if (spec.direction == Crossing::Rising) CHECK(tr.derivative_at(e.t)[2] > 0);
    }
}

TEST_CASE("events already satisfied at the start do not fire there") {
    const auto P = make_params(8);
    const Trajectory tr =
        integrate(P, PhaseState(0, 4, 0, kBetaStar8, 0), tight(2), {{"dv", 1, 0, Crossing::Either, true}});
    REQUIRE(!tr.events().empty());
    CHECK(tr.events().front().t > 1.0L);
    CHECK(tr.termination() == Termination::Event);
    CHECK(tr.t_end() == tr.events().front().t);
}

TEST_CASE("time reversal") {
    for (int n : {5, 8}) {
        const auto P = make_params(n);
        const State y0{0.7L * static_cast<Real>(P.a0), 0.2L, 0.9L, -0.3L};
        const Trajectory fwd = integrate(P, PhaseState(0, y0), tight(0.8));
        const State f = fwd.final_state();
        const Trajectory back = integrate(P, PhaseState(0, f[0], -f[1], f[2], -f[3]), tight(0.8));
        const State b = back.final_state();
        const State r{b[0], -b[1], b[2], -b[3]};
        for (int i = 0; i < 4; ++i) CHECK(std::fabs(r[i] - y0[i]) <= 1e-8L);
    }
}

TEST_CASE("step limit terminates") {
    const auto P = make_params(8);
    IntegrationConfig c;
    c.max_steps = 3;
    const Trajectory tr = integrate(P, PhaseState(0, 4, 0, 1, 0), c);
    CHECK(tr.termination() == Termination::StepLimit);
    CHECK(tr.step_count() == 3);
}

TEST_CASE("fixed-step oracle reproduces the n=8, a=4 period") {
    // Classical RK4 at h = 1e-4 is an independent discretization.
    const auto P = make_params(8);
    IntegrationConfig c = tight(4);
    c.method = Method::FixedRk4;
    c.fixed_step = 1e-4;
    const Trajectory tr = integrate(P, PhaseState(0, 4, 0, kBetaStar8, 0), c, {{"dv", 1, 0, Crossing::Either, false}});
    REQUIRE(tr.events().size() >= 2);
    CHECK(static_cast<double>(2 * tr.events()[0].t) == doctest::Approx(3.170333079022).epsilon(1e-11));
    CHECK(static_cast<double>(tr.events()[1].t) == doctest::Approx(3.170333079022).epsilon(1e-9));
    CHECK(tr.energy_drift() <= 1e-9L);
}

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "biharm/dynamics.hpp"

using namespace biharm;

TEST_CASE("f_nonlinearity examples and oddness") {
    const auto P = make_params(8);
    CHECK(f_nonlinearity(P, 8.0L) == 0);
    CHECK(f_nonlinearity(P, 1.0L) == -63);
    CHECK(f_nonlinearity(P, -1.0L) == 63);
    const auto Q = make_params(7);  // non-integer p = 11/3
    for (Real v : {0.1L, 0.7L, 2.5L, 9.0L}) {
        CHECK(f_nonlinearity(Q, -v) == -f_nonlinearity(Q, v));
        CHECK(f_nonlinearity(Q, v) == doctest::Approx(static_cast<double>(std::pow(v, 11.0L / 3) - Q.B * v)).epsilon(1e-14));
    }
    // Even integer p still gives an odd nonlinearity.
    const auto R = make_params(12);
    CHECK(R.integer_p == 2);
    CHECK(f_nonlinearity(R, -3.0L) == -f_nonlinearity(R, 3.0L));
    CHECK(signed_power(R, -3.0L) == -9);
}

TEST_CASE("F_potential examples and evenness") {
    const auto P = make_params(8);
    CHECK(F_potential(P, 0.0L) == 0);
    CHECK(F_potential(P, 8.0L) == -1024);
    CHECK(F_potential(P, -8.0L) == -1024);
    const auto Q = make_params(9);
    CHECK(F_potential(Q, 1.3L) == F_potential(Q, -1.3L));
}

TEST_CASE("F is an antiderivative of f") {
    const auto P = make_params(6);
    for (Real v : {0.3L, 1.1L, 2.0L, 3.7L}) {
        const Real h = 1e-6L;
        const Real d = (F_potential(P, v + h) - F_potential(P, v - h)) / (2 * h);
        CHECK(static_cast<double>(d) == doctest::Approx(static_cast<double>(f_nonlinearity(P, v))).epsilon(1e-8));
    }
}

TEST_CASE("rhs examples") {
    const auto P = make_params(8);
    const auto z = rhs(P, PhaseState(0, 8, 0, 0, 0));
    for (Real x : z) CHECK(x == 0);
    const Real a = 3, beta = 2.5L;
    const auto s = rhs(P, PhaseState(0, a, 0, beta, 0));
    CHECK(s[0] == 0);
    CHECK(s[1] == beta);
    CHECK(s[2] == 0);
    CHECK(s[3] == 20 * beta + f_nonlinearity(P, a));
    const auto r = rhs(P, PhaseState(0, 1, 2, 3, 4));
    CHECK(r == State{2, 3, 4, -3});
}

TEST_CASE("rhs is odd and time independent") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-5, 5);
    for (int n : {5, 7, 8}) {
        const auto P = make_params(n);
        for (int i = 0; i < 100; ++i) {
            const State y{U(rng), U(rng), U(rng), U(rng)};
            const State m{-y[0], -y[1], -y[2], -y[3]};
            const auto fy = rhs(P, y), fm = rhs(P, m);
            for (int k = 0; k < 4; ++k) CHECK(fm[k] == -fy[k]);
            CHECK(rhs(P, PhaseState(0, y)) == rhs(P, PhaseState(123.5L, y)));
        }
    }
}

TEST_CASE("energy examples") {
    const auto P = make_params(8);
    CHECK(energy(P, PhaseState(0, 8, 0, 0, 0)) == -1024);
    const Real a = 4, beta = 1.75L;
    CHECK(energy(P, PhaseState(0, a, 0, beta, 0)) == beta * beta / 2 + F_potential(P, a));
    CHECK(energy(P, State{1, 2, 3, 4}) == -8 + 4.5L + 40 + F_potential(P, 1.0L));
}

TEST_CASE("PhaseState rejects non-finite entries") {
    const Real inf = std::numeric_limits<Real>::infinity();
    const Real nan = std::numeric_limits<Real>::quiet_NaN();
    CHECK_THROWS_AS(PhaseState(0, nan, 0, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(PhaseState(inf, 1, 0, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(PhaseState(0, 1, 0, 0, -inf), std::invalid_argument);
    CHECK_THROWS_AS(PhaseState(0, State{1, nan, 0, 0}), std::invalid_argument);
    CHECK_NOTHROW(PhaseState(0, 1, 2, 3, 4));
}

TEST_CASE("linearized frequency") {
    const auto P = make_params(8);
    const double w = linearized_frequency_at_a0(P);
    CHECK(w == doctest::Approx(2.258245).epsilon(1e-6));
    CHECK(2 * std::numbers::pi / w == doctest::Approx(2.782332).epsilon(1e-6));
    // -w^2 is a root of xi^4 - 20 xi^2 - 128 = 0 in xi^2 = -w^2.
    CHECK(w * w * w * w + 20 * w * w - 128 == doctest::Approx(0).epsilon(1e-10));
    double prev = 1e300;
    for (double B : {1e-2, 1e-4, 1e-6, 1e-8}) {
        const double wb = linearized_frequency_at_a0(make_generic_params(3, B, 2));
        CHECK(wb > 0);
        CHECK(wb < prev);
        prev = wb;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("homoclinic closed form") {
    const auto P = make_params(8);
    const PhaseState peak = homoclinic(P, 2.5L, 2.5L);
    CHECK(static_cast<double>(peak.v) == doctest::Approx(std::sqrt(1920.0) / 4).epsilon(1e-15));
    CHECK(static_cast<double>(peak.v) == doctest::Approx(10.954451).epsilon(1e-7));
    CHECK(peak.v1 == 0);
    CHECK(homoclinic(P, 60).v < 1e-40L);
    CHECK(homoclinic(P, -60).v < 1e-40L);
    CHECK(homoclinic(P, 1.3L).v == homoclinic(P, -1.3L).v);
    CHECK(homoclinic(P, 1.3L).v1 == -homoclinic(P, -1.3L).v1);
    CHECK_THROWS(homoclinic(make_generic_params(20, 64, 3), 0));
}

TEST_CASE("homoclinic derivatives match finite differences") {
    const auto P = make_params(6);
    const Real h = 1e-5L;
    for (Real t : {-2.0L, -0.3L, 0.0L, 0.9L, 3.0L}) {
        const Jet j = homoclinic_jet(P, t);
        const Jet jp = homoclinic_jet(P, t + h), jm = homoclinic_jet(P, t - h);
        for (int k = 0; k < 4; ++k)
            CHECK(static_cast<double>((jp[k] - jm[k]) / (2 * h)) ==
                  doctest::Approx(static_cast<double>(j[k + 1])).epsilon(1e-8).scale(1));
    }
}

TEST_CASE("homoclinic solves the ODE and has zero energy") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(-10, 10);
    for (int n = 5; n <= 12; ++n) {
        CAPTURE(n);
        const auto P = make_params(n);
        for (int i = 0; i < 200; ++i) {
            const Real t = U(rng), T = U(rng) / 5;
            CHECK(ode_residual(P, homoclinic_jet(P, t, T)) <= 1e-9L);
        }
        const Real bound = 1e-9L * std::max<Real>(1, std::fabs(F_potential(P, static_cast<Real>(P.a0))));
        Real worst = 0;
        for (int i = 0; i < 1000; ++i) {
            const Real t = -10 + 20.0L * i / 999;
            worst = std::max(worst, std::fabs(energy(P, homoclinic(P, t))));
        }
        CHECK(worst <= bound);
    }
}

TEST_CASE("ode_residual of the constant solution") {
    const auto P = make_params(8);
    CHECK(ode_residual(P, Jet{8, 0, 0, 0, 0}) == 0);
    CHECK(ode_residual(P, Jet{1, 0, 0, 0, 0}) == 1);
}

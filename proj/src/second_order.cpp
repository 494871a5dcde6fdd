#include "biharm/second_order.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "biharm/detail/ode_core.hpp"

namespace biharm {

SecondOrderParams make_second_order(int n) {
    if (n < 3) throw std::domain_error("make_second_order: requires n >= 3");
    SecondOrderParams s;
    s.n = n;
    const Real m = n - 2;
    s.c = m * m / 4;
    s.q = static_cast<Real>(n + 2) / m;
    s.equilibrium = std::pow(m / 2, m / 2);
    s.cn_prime = std::pow(static_cast<Real>(n) * m, m / 4);
    return s;
}

Real second_order_potential(const SecondOrderParams& s, Real v) {
    return -s.c * v * v / 2 + std::pow(std::fabs(v), s.q + 1) / (s.q + 1);
}

Real second_order_linear_period(const SecondOrderParams& s) {
    return 2 * std::numbers::pi_v<Real> / std::sqrt((s.q - 1) * s.c);
}

Real second_order_homoclinic(const SecondOrderParams& s, Real t) {
    const Real x = std::fabs(t);
    // log(2 cosh t) = |t| + log1p(e^{-2|t|})
    return s.cn_prime * std::exp(-(s.n - 2) / Real(2) * (x + std::log1p(std::exp(-2 * x))));
}

namespace {

Real signed_pow(Real v, Real q) { return v < 0 ? -std::pow(-v, q) : std::pow(v, q); }

Real quadrature_period(const SecondOrderParams& s, Real vmin, Real vmax, Real E) {
    const Real half = (vmax - vmin) / 2;
    const auto integrand = [&](Real theta) {
        const Real v = vmin + half * (1 - std::cos(theta));
        const Real gap = E - second_order_potential(s, v);
        if (!(gap > 0)) return Real(0);
        return half * std::sin(theta) / std::sqrt(2 * gap);
    };
    Real err = 0;
    const Real I = boost::math::quadrature::gauss_kronrod<Real, 61>::integrate(
        integrand, Real(0), std::numbers::pi_v<Real>, 15, 1e-15L, &err);
    return 2 * I;
}

std::array<Real, 2> second_order_field(const SecondOrderParams& s, const std::array<Real, 2>& y) {
    return {y[1], s.c * y[0] - signed_pow(y[0], s.q)};
}

}  // namespace

Real second_order_equilibrium_drift(const SecondOrderParams& s, const IntegrationConfig& config) {
    const auto field = [&s](const std::array<Real, 2>& y) { return second_order_field(s, y); };
    const auto energy_fn = [](const std::array<Real, 2>&) { return Real(0); };
    const auto traj = detail::integrate_system<2>(field, energy_fn, 0, {s.equilibrium, 0}, config, {});
    Real drift = std::fabs(traj.final_state()[0] - s.equilibrium);
    for (const auto& seg : traj.segments()) drift = std::max(drift, std::fabs(seg.y1[0] - s.equilibrium));
    return drift;
}

SecondOrderOrbit second_order_oracle(int n, Real a2, const IntegrationConfig& config) {
    const SecondOrderParams s = make_second_order(n);
    if (!(a2 > 0 && a2 < s.equilibrium))
        throw std::domain_error("second_order_oracle: need 0 < a2 < " + std::to_string(static_cast<double>(s.equilibrium)));

    SecondOrderOrbit orb;
    orb.a2 = a2;
    orb.energy = second_order_potential(s, a2);

    // Upper turning point: U(v) = E for v above the equilibrium.
    const auto g = [&](Real v) { return second_order_potential(s, v) - orb.energy; };
    Real hi = 2 * s.equilibrium;
    for (int k = 0; k < 200 && g(hi) <= 0; ++k) hi *= 2;
    if (!(g(hi) > 0) || !(g(s.equilibrium) < 0))
        throw QuadratureFailed("second_order_oracle: turning points not bracketed");
    boost::math::tools::eps_tolerance<Real> tol(std::numeric_limits<Real>::digits - 2);
    std::uintmax_t iters = 300;
    const auto root =
        boost::math::tools::toms748_solve(g, s.equilibrium, hi, g(s.equilibrium), g(hi), tol, iters);
    orb.v_max = (root.first + root.second) / 2;
    orb.period_quadrature = quadrature_period(s, a2, orb.v_max, orb.energy);

    const auto field = [&s](const std::array<Real, 2>& y) { return second_order_field(s, y); };
    const auto energy_fn = [&s](const std::array<Real, 2>& y) {
        return y[1] * y[1] / 2 + second_order_potential(s, y[0]);
    };
    IntegrationConfig cfg = config;
    cfg.horizon = std::max<double>(cfg.horizon, 4 * static_cast<double>(orb.period_quadrature));
    const std::vector<EventSpec> events = {{"max", 1, 0, Crossing::Falling, false},
                                           {"min", 1, 0, Crossing::Rising, true}};
    auto traj = std::make_shared<const BasicTrajectory<2>>(
        detail::integrate_system<2>(field, energy_fn, 0, {a2, 0}, cfg, std::span<const EventSpec>(events)));
    Real t_max = -1;
    for (const auto& e : traj->events())
        if (e.label == "max" && t_max < 0) t_max = e.t;
    if (t_max < 0 || traj->termination() != Termination::Event)
        throw std::runtime_error("second_order_oracle: pipeline found no full period");
    orb.period_pipeline = 2 * t_max;
    orb.profile = traj;
    orb.relative_gap = std::fabs(orb.period_pipeline - orb.period_quadrature) / orb.period_quadrature;
    return orb;
}

}  // namespace biharm

#include <algorithm>
#include <cmath>

#include <boost/math/tools/roots.hpp>

#include "biharm/family.hpp"

namespace biharm {

namespace {

// v' on the ascending branch [0, t_max] where v = c.
Real ascending_slope(const PeriodicSolution& sol, Real c) {
    if (sol.is_constant()) return 0;
    const auto g = [&](Real t) { return sol.jet_at(t)[0] - c; };
    Real lo = 0, hi = sol.t_max;
    const Real glo = g(lo), ghi = g(hi);
    if (glo >= 0) return sol.jet_at(lo)[1];
    if (ghi <= 0) return sol.jet_at(hi)[1];
    boost::math::tools::eps_tolerance<Real> tol(std::numeric_limits<Real>::digits - 4);
    std::uintmax_t iters = 200;
    const auto r = boost::math::tools::toms748_solve(g, lo, hi, glo, ghi, tol, iters);
    return sol.jet_at((r.first + r.second) / 2)[1];
}

int orientation(const std::array<Real, 2>& a, const std::array<Real, 2>& b, const std::array<Real, 2>& c) {
    const Real cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
    return (cross > 0) - (cross < 0);
}

bool on_segment(const std::array<Real, 2>& a, const std::array<Real, 2>& b, const std::array<Real, 2>& c) {
    return std::min(a[0], b[0]) <= c[0] && c[0] <= std::max(a[0], b[0]) && std::min(a[1], b[1]) <= c[1] &&
           c[1] <= std::max(a[1], b[1]);
}

bool segments_meet(const std::array<Real, 2>& p1, const std::array<Real, 2>& p2, const std::array<Real, 2>& q1,
                   const std::array<Real, 2>& q2) {
    const int o1 = orientation(p1, p2, q1), o2 = orientation(p1, p2, q2);
    const int o3 = orientation(q1, q2, p1), o4 = orientation(q1, q2, p2);
    if (o1 != o2 && o3 != o4) return true;
    return (o1 == 0 && on_segment(p1, p2, q1)) || (o2 == 0 && on_segment(p1, p2, q2)) ||
           (o3 == 0 && on_segment(q1, q2, p1)) || (o4 == 0 && on_segment(q1, q2, p2));
}

}  // namespace

OrderingReport check_energy_ordering(const ProblemParams& P, const PeriodicSolution& sol1,
                                     const PeriodicSolution& sol2, int samples) {
    (void)P;
    OrderingReport rep;
    rep.energy1 = sol1.energy;
    rep.energy2 = sol2.energy;
    const Real lo = std::max(sol1.a, sol2.a);
    const Real hi = std::min(sol1.v_max, sol2.v_max);
    if (lo > hi) {
        rep.vacuous = true;
        return rep;
    }
    const int count = lo == hi ? 1 : samples;
    bool any_strict = false;
    for (int i = 0; i < count; ++i) {
        const Real c = lo == hi ? lo : lo + (hi - lo) * (i + 0.5L) / count;
        OrderingSample s{c, ascending_slope(sol1, c), ascending_slope(sol2, c), true};
        if (s.slope1 > s.slope2) {
            s.ok = rep.energy1 > rep.energy2;
            any_strict = true;
        } else if (s.slope2 > s.slope1) {
            s.ok = rep.energy2 > rep.energy1;
            any_strict = true;
        }
        rep.pass = rep.pass && s.ok;
        rep.samples.push_back(s);
    }
    rep.vacuous = !any_strict;
    return rep;
}

PhaseReport check_polyline_simple(const std::vector<std::array<Real, 2>>& pts) {
    PhaseReport rep;
    const int m = static_cast<int>(pts.size());
    rep.vertices = m;
    for (int i = 0; i < m; ++i) {
        for (int j = i + 2; j < m; ++j) {
            if (i == 0 && j == m - 1) continue;  // edges sharing the closing vertex
            if (segments_meet(pts[i], pts[(i + 1) % m], pts[j], pts[(j + 1) % m])) ++rep.crossings;
        }
    }
    rep.simple = rep.crossings == 0;
    return rep;
}

PhaseReport check_phase_curve_simple(const PeriodicSolution& sol, int vertices) {
    if (sol.is_constant()) return PhaseReport{true, 1, 0};
    std::vector<std::array<Real, 2>> pts;
    for (int k = 0; k < vertices; ++k) {
        const Jet j = sol.jet_at(sol.period * k / vertices);
        pts.push_back({j[0], j[1]});
    }
    return check_polyline_simple(pts);
}

InequalityReport check_energy_inequality(const ProblemParams& P, const PeriodicSolution& sol, int samples) {
    InequalityReport rep;
    const Real tol = 1e-7L * (1 + std::fabs(sol.energy));
    const Real span = sol.is_constant() ? 1 : sol.period;
    rep.worst_margin = std::numeric_limits<Real>::infinity();
    for (int k = 0; k < samples; ++k) {
        const Jet j = sol.jet_at(span * k / samples);
        const State y{j[0], j[1], j[2], j[3]};
        const Real margin = energy(P, y) - (j[2] * j[2] / 2 + F_potential(P, j[0])) + tol;
        rep.worst_margin = std::min(rep.worst_margin, margin);
        ++rep.samples;
    }
    rep.pass = rep.worst_margin >= 0;
    return rep;
}

}  // namespace biharm

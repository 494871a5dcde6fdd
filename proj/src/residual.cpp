#include <algorithm>
#include <cmath>

#include <omp.h>

#include "biharm/family.hpp"

namespace biharm {

std::array<Real, 5> radial_derivatives(Real k, Real r, const Jet& vjet) {
    // d/dr [r^{-m} g(ln r)] = r^{-m-1} (g' - m g); track g in the basis v, v', ..., v''''.
    std::array<Real, 5> c{1, 0, 0, 0, 0};
    std::array<Real, 5> out{};
    Real rp = std::pow(r, -k);
    for (int j = 0; j <= 4; ++j) {
        Real g = 0;
        for (int i = 0; i <= 4; ++i) g += c[i] * vjet[i];
        out[j] = rp * g;
        std::array<Real, 5> next{};
        for (int i = 0; i < 4; ++i) next[i + 1] += c[i];
        for (int i = 0; i <= 4; ++i) next[i] -= (k + j) * c[i];
        c = next;
        rp /= r;
    }
    return out;
}

Real radial_residual(const ProblemParams& P, Real r, const Jet& vjet) {
    const Real n = static_cast<Real>(P.n.value());
    const auto u = radial_derivatives(P.weight_exponent(), r, vjet);
    const Real bilap = u[4] + 2 * (n - 1) / r * u[3] + (n - 1) * (n - 3) / (r * r) * u[2] -
                       (n - 1) * (n - 3) / (r * r * r) * u[1];
    const Real rhs_val = signed_power(P, u[0]);
    return std::fabs(bilap - rhs_val) / std::fabs(rhs_val);
}

namespace {

Jet shifted_jet(const PeriodicSolution& sol, Real L, Real r) { return sol.jet_at(std::log(r) + L); }

}  // namespace

Real biharmonic_residual(const ProblemParams& P, const JetFunction& vjet, const std::vector<Real>& r_grid) {
    const long count = static_cast<long>(r_grid.size());
    Real worst = 0;
#pragma omp parallel for reduction(max : worst)
    for (long i = 0; i < count; ++i) {
        const Real r = r_grid[i];
        worst = std::max(worst, radial_residual(P, r, vjet(std::log(r))));
    }
    return worst;
}

Real biharmonic_residual_serial(const ProblemParams& P, const JetFunction& vjet,
                                const std::vector<Real>& r_grid) {
    Real worst = 0;
    for (const Real r : r_grid) worst = std::max(worst, radial_residual(P, r, vjet(std::log(r))));
    return worst;
}

Real biharmonic_residual(const ProblemParams& P, const PeriodicSolution& sol, Real L,
                         const std::vector<Real>& r_grid) {
    const long count = static_cast<long>(r_grid.size());
    Real worst = 0;
#pragma omp parallel for reduction(max : worst)
    for (long i = 0; i < count; ++i)
        worst = std::max(worst, radial_residual(P, r_grid[i], shifted_jet(sol, L, r_grid[i])));
    return worst;
}

Real biharmonic_residual_serial(const ProblemParams& P, const PeriodicSolution& sol, Real L,
                                const std::vector<Real>& r_grid) {
    Real worst = 0;
    for (const Real r : r_grid) worst = std::max(worst, radial_residual(P, r, shifted_jet(sol, L, r)));
    return worst;
}

}  // namespace biharm

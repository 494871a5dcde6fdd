#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include <omp.h>

#include "biharm/family.hpp"

using namespace biharm;

namespace {

template <class F>
double time_ms(F&& f, int reps) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) f();
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count() / reps;
}

}  // namespace

int main() {
    const ProblemParams P = make_params(8);
    std::printf("threads available: %d\n", omp_get_max_threads());

    std::vector<double> as;
    for (int i = 1; i <= 8; ++i) as.push_back(P.a0 * (0.1 + 0.1 * i));
    std::vector<FamilyRecord> rs, rp;
    const double ts = time_ms([&] { rs = sweep_family_serial(P, as); }, 1);
    const double tp = time_ms([&] { rp = sweep_family(P, as); }, 1);
    bool same = rs.size() == rp.size();
    for (std::size_t i = 0; same && i < rs.size(); ++i) same = rs[i].period == rp[i].period;
    std::printf("sweep (8 rows)      serial %9.2f ms  parallel %9.2f ms  speedup %.2f  identical %s\n", ts, tp,
                ts / tp, same ? "yes" : "no");

    const PeriodicSolution sol = solve_periodic(P, 4.0L);
    std::vector<Real> grid;
    for (int i = 0; i < 20000; ++i) grid.push_back(std::pow(10.0L, -3 + 4.0L * i / 19999));
    Real a = 0, b = 0;
    const double rs_ms = time_ms([&] { a = biharmonic_residual_serial(P, sol, 0, grid); }, 5);
    const double rp_ms = time_ms([&] { b = biharmonic_residual(P, sol, 0, grid); }, 5);
    std::printf("residual (20k radii) serial %9.2f ms  parallel %9.2f ms  speedup %.2f  identical %s\n", rs_ms, rp_ms,
                rs_ms / rp_ms, a == b ? "yes" : "no");
    return 0;
}

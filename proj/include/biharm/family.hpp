#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "biharm/integrator.hpp"
#include "biharm/shooting.hpp"

namespace biharm {

class PeriodDetectionFailed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One member v_a of the periodic family, stored as half a period
// [0, L/2] from the minimum to the maximum. The rest of the line follows
// from the even reflection about t = L/2 and L-periodicity.
struct PeriodicSolution {
    ProblemParams params;
    Real a = 0;
    Real beta_star = 0;
    Real period = 0;  // 0 for the constant solution
    Real energy = 0;
    Real t_max = 0;
    Real v_max = 0;
    std::shared_ptr<const Trajectory> profile;  // covers at least [0, L/2]

    // Diagnostics measured during extraction.
    Real event_period = 0;     // next v' = 0 minimum on the raw run
    Real symmetry_error = 0;   // max |v(t_max + s) - v(t_max - s)| on the raw run
    Real energy_drift = 0;     // over one period of the raw run

    bool is_constant() const { return period == 0; }

    PhaseState state_at(Real t) const;
    Jet jet_at(Real t) const;

    // v = a0 for all t.
    static PeriodicSolution constant(const ProblemParams& params);
};

// Re-integrates from (a, 0, beta*, 0), takes L = 2 t_max from the first
// maximum, cross-checks the next minimum against L (1e-8 L), and checks
// unique extrema, symmetry (1e-7 a0), a < v on (0, L) and energy constancy.
// Throws PeriodDetectionFailed or ValidationFailed.
PeriodicSolution extract_periodic(const ProblemParams& params, const ShootingResult& shot,
                                  const IntegrationConfig& config = shooting_config());

PeriodicSolution solve_periodic(const ProblemParams& params, Real a,
                                const IntegrationConfig& config = shooting_config(),
                                double beta_tol = kDefaultBetaTol);

struct FamilyRecord {
    double a = 0;
    double beta_star = 0;
    double period = 0;
    double energy = 0;
    double v_max = 0;
    std::string status = "ok";  // error message for failed rows

    bool ok() const { return status == "ok"; }
};

// Rows sorted by a; failures are recorded in the row's status. threads <= 0
// uses the OpenMP default (capped by BIHARM_THREADS when set).
std::vector<FamilyRecord> sweep_family(const ProblemParams& params, std::vector<double> a_values,
                                       const IntegrationConfig& config = shooting_config(),
                                       int threads = 0);
std::vector<FamilyRecord> sweep_family_serial(const ProblemParams& params, std::vector<double> a_values,
                                              const IntegrationConfig& config = shooting_config());

// Threads requested through BIHARM_THREADS, or 0 when unset/invalid.
int env_thread_cap();

// r^{-(n-4)/2} v_a(ln r + L). Throws std::domain_error for r <= 0.
Real reconstruct_u(const ProblemParams& params, const PeriodicSolution& sol, Real L, Real r);

// u and its first four r-derivatives for u = r^{-k} v(ln r), given the v jet at ln r.
std::array<Real, 5> radial_derivatives(Real k, Real r, const Jet& vjet);

// |Delta^2 u - u^p| / |u^p| for radial u with the given v jet; requires n.
Real radial_residual(const ProblemParams& params, Real r, const Jet& vjet);

// Max relative residual of Delta^2 u = u^p over r_grid for u built from sol.
Real biharmonic_residual(const ProblemParams& params, const PeriodicSolution& sol, Real L,
                         const std::vector<Real>& r_grid);
Real biharmonic_residual_serial(const ProblemParams& params, const PeriodicSolution& sol, Real L,
                                const std::vector<Real>& r_grid);

// Same, for an arbitrary v jet (e.g. the closed-form homoclinic).
using JetFunction = std::function<Jet(Real)>;
Real biharmonic_residual(const ProblemParams& params, const JetFunction& vjet,
                         const std::vector<Real>& r_grid);
Real biharmonic_residual_serial(const ProblemParams& params, const JetFunction& vjet,
                                const std::vector<Real>& r_grid);

// ---- structural checks ----

struct OrderingSample {
    Real c;          // common value
    Real slope1;     // v' on sol1's ascending branch at v = c
    Real slope2;
    bool ok;
};

struct OrderingReport {
    bool pass = true;
    bool vacuous = false;
    Real energy1 = 0;
    Real energy2 = 0;
    std::vector<OrderingSample> samples;
};

// Compares ascending-branch slopes at `samples` common values; the solution
// with the strictly larger slope must have the strictly larger energy.
OrderingReport check_energy_ordering(const ProblemParams& params, const PeriodicSolution& sol1,
                                     const PeriodicSolution& sol2, int samples = 20);

struct PhaseReport {
    bool simple = true;
    int vertices = 0;
    int crossings = 0;
};

// (v, v') polyline over one period; simple when no two non-adjacent edges meet.
PhaseReport check_phase_curve_simple(const PeriodicSolution& sol, int vertices = 400);
PhaseReport check_polyline_simple(const std::vector<std::array<Real, 2>>& closed_curve);

struct InequalityReport {
    bool pass = true;
    Real worst_margin = 0;  // min of E - (v''^2/2 + F(v)) + tol
    int samples = 0;
};

// E >= v''^2/2 + F(v) - 1e-7 (1 + |E|) along one period.
InequalityReport check_energy_inequality(const ProblemParams& params, const PeriodicSolution& sol,
                                         int samples = 400);

}  // namespace biharm

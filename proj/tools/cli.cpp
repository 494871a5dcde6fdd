#include "cli.hpp"

#include <cmath>
#include <iostream>
#include <optional>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "biharm/family.hpp"
#include "biharm/io.hpp"
#include "biharm/verify.hpp"

namespace biharm::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ParamFlags {
    std::optional<int> n;
    std::optional<double> A, B, p;

    void add(CLI::App& app) {
        app.add_option("--n", n, "dimension (n >= 5)");
        app.add_option("--A", A, "coefficient of v'' (generic equation)");
        app.add_option("--B", B, "coefficient of v (generic equation)");
        app.add_option("--p", p, "exponent (generic equation)");
    }

    ProblemParams build() const {
        try {
            if (n) {
                if (A || B || p) throw UsageError("give either --n or --A/--B/--p, not both");
                return make_params(*n);
            }
            if (A && B && p) return make_generic_params(*A, *B, *p);
        } catch (const std::domain_error& e) {
            throw UsageError(e.what());
        }
        throw UsageError("need --n or all of --A, --B, --p");
    }

    ProblemParams build_with_n() const {
        if (!n) throw UsageError("this command needs --n (the closed forms use the dimension)");
        return build();
    }

    json to_json() const {
        json j;
        if (n) j["n"] = *n;
        if (A) j["A"] = *A;
        if (B) j["B"] = *B;
        if (p) j["p"] = *p;
        return j;
    }
};

struct SolveFlags {
    double tol = 0;  // 0: shooting default
    double horizon = 40.0;

    void add(CLI::App& app) {
        app.add_option("--tol", tol, "relative integration tolerance (default 1e-16)");
        app.add_option("--horizon", horizon, "classification horizon");
    }

    IntegrationConfig config() const {
        IntegrationConfig c = shooting_config();
        if (tol > 0) {
            c.rel_tol = tol;
            c.abs_tol = tol * 1e-2;
        }
        c.horizon = horizon;
        try {
            c.validate();
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        return c;
    }
};

void check_a(const ProblemParams& P, double a) {
    if (!(a > 0 && a < P.a0))
        throw UsageError("--a must lie in (0, a0) = (0, " + format_double(P.a0) + ")");
}

json manifest(const std::string& command, const std::vector<std::string>& args, const json& parameters,
              const std::vector<std::string>& outputs) {
    json m;
    m["artifact_version"] = kArtifactVersion;
    m["command"] = command;
    m["argv"] = args;
    m["parameters"] = parameters;
    m["outputs"] = outputs;
    return m;
}

void write_with_manifests(const json& m, const std::vector<std::string>& outputs) {
    for (const auto& path : outputs) write_json(manifest_path(path), m);
}

json num(Real x) { return static_cast<double>(x); }

int cmd_solve(const ProblemParams& P, double a, const SolveFlags& sf, const std::string& prefix, int samples,
              const json& params_json, const std::vector<std::string>& args, std::ostream& out) {
    check_a(P, a);
    if (samples < 2) throw UsageError("--samples must be at least 2");
    const IntegrationConfig cfg = sf.config();
    const PeriodicSolution sol = solve_periodic(P, a, cfg);
    const std::string csv = prefix + ".csv", js = prefix + ".json";
    write_csv(csv, profile_table(P, sol, samples));
    json summary;
    summary["a"] = num(sol.a);
    summary["beta_star"] = num(sol.beta_star);
    summary["period"] = num(sol.period);
    summary["energy"] = num(sol.energy);
    summary["v_max"] = num(sol.v_max);
    write_json(js, summary);
    json pj = params_json;
    pj["a"] = a;
    pj["rel_tol"] = cfg.rel_tol;
    pj["abs_tol"] = cfg.abs_tol;
    pj["horizon"] = cfg.horizon;
    pj["samples"] = samples;
    write_with_manifests(manifest("solve", args, pj, {csv, js}), {csv, js});
    out << "period " << format_double(static_cast<double>(sol.period)) << "\n";
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Singular radial solutions of the critical biharmonic equation", "biharm"};
    app.require_subcommand(1);

    ParamFlags pf_solve, pf_sweep, pf_hom, pf_rec, pf_ver;
    SolveFlags sf_solve, sf_sweep, sf_rec;

    auto* solve = app.add_subcommand("solve", "periodic solution with minimum a");
    double solve_a = 0;
    std::string solve_out = "solve";
    int solve_samples = 400;
    pf_solve.add(*solve);
    sf_solve.add(*solve);
    solve->add_option("--a", solve_a, "minimum value")->required();
    solve->add_option("--out", solve_out, "output prefix (writes PREFIX.csv and PREFIX.json)");
    solve->add_option("--samples", solve_samples, "profile rows per period");

    auto* sweep = app.add_subcommand("sweep", "family table over a grid of minima");
    double a_min = 0, a_max = 0;
    int steps = 0;
    int threads = 0;
    std::string grid = "linear", sweep_out = "sweep.csv";
    pf_sweep.add(*sweep);
    sf_sweep.add(*sweep);
    sweep->add_option("--a-min", a_min)->required();
    sweep->add_option("--a-max", a_max)->required();
    sweep->add_option("--steps", steps, "number of grid points")->required();
    sweep->add_option("--grid", grid, "linear or geometric")->check(CLI::IsMember({"linear", "geometric"}));
    sweep->add_option("--threads", threads, "worker threads (default: all, capped by BIHARM_THREADS)");
    sweep->add_option("--out", sweep_out, "CSV path");

    auto* hom = app.add_subcommand("homoclinic", "closed-form homoclinic profile");
    double t_min = -10, t_max = 10, shift = 0;
    int hom_samples = 1000;
    std::string hom_out = "homoclinic";
    pf_hom.add(*hom);
    hom->add_option("--t-min", t_min);
    hom->add_option("--t-max", t_max);
    hom->add_option("--samples", hom_samples);
    hom->add_option("--shift", shift, "translation T");
    hom->add_option("--out", hom_out, "output prefix");

    auto* rec = app.add_subcommand("reconstruct", "u(r) = r^{-(n-4)/2} v_a(ln r + L)");
    double rec_a = 0, rec_L = 0, r_min = 1e-3, r_max = 10;
    int rec_samples = 1000;
    std::string rec_out = "reconstruct";
    pf_rec.add(*rec);
    sf_rec.add(*rec);
    rec->add_option("--a", rec_a)->required();
    rec->add_option("--L", rec_L, "log-radius shift");
    rec->add_option("--r-min", r_min);
    rec->add_option("--r-max", r_max);
    rec->add_option("--samples", rec_samples);
    rec->add_option("--out", rec_out, "output prefix");

    auto* ver = app.add_subcommand("verify", "run property suites");
    std::string suite = "all";
    pf_ver.add(*ver);
    ver->add_option("--suite", suite, "energy, symmetry, ordering, phase, homoclinic, oracle or all");

    auto* rep = app.add_subcommand("replay", "re-run the command recorded in a manifest");
    std::string manifest_file;
    rep->add_option("manifest", manifest_file)->required();

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (solve->parsed()) {
            const auto P = pf_solve.build();
            return cmd_solve(P, solve_a, sf_solve, solve_out, solve_samples, pf_solve.to_json(), args, out);
        }
        if (sweep->parsed()) {
            const auto P = pf_sweep.build();
            if (steps < 1 || !(a_min <= a_max)) throw UsageError("empty grid");
            if (threads < 0) throw UsageError("--threads must be non-negative");
            std::vector<double> as;
            for (int i = 0; i < steps; ++i) {
                const double s = steps == 1 ? 0.0 : static_cast<double>(i) / (steps - 1);
                as.push_back(grid == "linear" ? a_min + (a_max - a_min) * s
                                              : a_min * std::pow(a_max / a_min, s));
            }
            for (const double a : as) check_a(P, a);
            const auto rows = sweep_family(P, as, sf_sweep.config(), threads);
            write_csv(sweep_out, family_table(rows));
            json pj = pf_sweep.to_json();
            pj["a_min"] = a_min;
            pj["a_max"] = a_max;
            pj["steps"] = steps;
            pj["grid"] = grid;
            write_with_manifests(manifest("sweep", args, pj, {sweep_out}), {sweep_out});
            int failed = 0;
            for (const auto& r : rows) failed += !r.ok();
            out << rows.size() << " rows, " << failed << " failed\n";
            return failed ? kExitNumeric : kExitOk;
        }
        if (hom->parsed()) {
            const auto P = pf_hom.build_with_n();
            if (hom_samples < 2 || !(t_min < t_max)) throw UsageError("need t-min < t-max and samples >= 2");
            CsvTable t;
            t.header = {"t", "v", "v1", "v2", "v3", "energy", "residual"};
            Real worst = 0, worst_e = 0;
            for (int i = 0; i < hom_samples; ++i) {
                const Real tt = t_min + (static_cast<Real>(t_max) - t_min) * i / (hom_samples - 1);
                const Jet j = homoclinic_jet(P, tt, shift);
                const Real e = energy(P, State{j[0], j[1], j[2], j[3]});
                const Real r = ode_residual(P, j);
                worst = std::max(worst, r);
                worst_e = std::max(worst_e, std::fabs(e));
                t.rows.push_back({format_double(static_cast<double>(tt)), format_double(static_cast<double>(j[0])),
                                  format_double(static_cast<double>(j[1])), format_double(static_cast<double>(j[2])),
                                  format_double(static_cast<double>(j[3])), format_double(static_cast<double>(e)),
                                  format_double(static_cast<double>(r))});
            }
            const std::string csv = hom_out + ".csv", js = hom_out + ".json";
            write_csv(csv, t);
            json summary;
            summary["max_residual"] = num(worst);
            summary["max_abs_energy"] = num(worst_e);
            summary["peak"] = num(homoclinic(P, shift, shift).v);
            write_json(js, summary);
            json pj = pf_hom.to_json();
            pj["t_min"] = t_min;
            pj["t_max"] = t_max;
            pj["samples"] = hom_samples;
            pj["shift"] = shift;
            write_with_manifests(manifest("homoclinic", args, pj, {csv, js}), {csv, js});
            out << "max residual " << format_double(static_cast<double>(worst)) << "\n";
            return kExitOk;
        }
        if (rec->parsed()) {
            const auto P = pf_rec.build_with_n();
            check_a(P, rec_a);
            if (!(r_min > 0)) throw UsageError("--r-min must be positive");
            if (!(r_max > r_min) || rec_samples < 2) throw UsageError("need r-max > r-min and samples >= 2");
            const PeriodicSolution sol = solve_periodic(P, rec_a, sf_rec.config());
            std::vector<Real> rs;
            CsvTable t;
            t.header = {"r", "u", "u_scaled"};
            const Real k = P.weight_exponent();
            for (int i = 0; i < rec_samples; ++i) {
                const Real r = std::exp(std::log(static_cast<Real>(r_min)) +
                                        (std::log(static_cast<Real>(r_max)) - std::log(static_cast<Real>(r_min))) * i /
                                            (rec_samples - 1));
                rs.push_back(r);
                const Real u = reconstruct_u(P, sol, rec_L, r);
                t.rows.push_back({format_double(static_cast<double>(r)), format_double(static_cast<double>(u)),
                                  format_double(static_cast<double>(std::pow(r, k) * u))});
            }
            const Real res = biharmonic_residual(P, sol, rec_L, rs);
            const std::string csv = rec_out + ".csv", js = rec_out + ".json";
            write_csv(csv, t);
            json summary;
            summary["a"] = num(sol.a);
            summary["beta_star"] = num(sol.beta_star);
            summary["period"] = num(sol.period);
            summary["v_max"] = num(sol.v_max);
            summary["L"] = rec_L;
            summary["max_residual"] = num(res);
            write_json(js, summary);
            json pj = pf_rec.to_json();
            pj["a"] = rec_a;
            pj["L"] = rec_L;
            pj["r_min"] = r_min;
            pj["r_max"] = r_max;
            pj["samples"] = rec_samples;
            write_with_manifests(manifest("reconstruct", args, pj, {csv, js}), {csv, js});
            out << "max residual " << format_double(static_cast<double>(res)) << "\n";
            return kExitOk;
        }
        if (ver->parsed()) {
            const auto P = pf_ver.build();
            const auto& names = suite_names();
            if (std::find(names.begin(), names.end(), suite) == names.end())
                throw UsageError("unknown suite '" + suite + "'");
            const Checks checks = run_suite(P, suite);
            bool ok = !checks.empty();
            for (const auto& c : checks) {
                out << (c.pass ? "PASS " : "FAIL ") << c.name << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
                ok = ok && c.pass;
            }
            return ok ? kExitOk : kExitValidation;
        }
        if (rep->parsed()) {
            const json m = read_json(manifest_file);
            const auto replay_args = m.at("argv").get<std::vector<std::string>>();
            if (!replay_args.empty() && replay_args.front() == "replay")
                throw UsageError("a manifest cannot replay another replay");
            return run(replay_args, out, err);
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ValidationFailed& e) {
        err << "validation failed: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitUsage;
}

}  // namespace biharm::cli

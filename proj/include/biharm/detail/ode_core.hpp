#pragma once

// Adaptive DOP853 and fixed-step RK4 drivers shared by the fourth-order
// problem and the second-order oracle. Instantiated for N = 4 and N = 2.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "biharm/detail/dop853_tableau.hpp"
#include "biharm/dynamics.hpp"
#include "biharm/integrator_types.hpp"

namespace biharm::detail {

template <std::size_t N>
using Vec = std::array<Real, N>;

template <std::size_t N>
Real max_abs(const Vec<N>& y) {
    Real m = 0;
    for (const Real x : y) m = std::max(m, std::fabs(x));
    return m;
}

template <std::size_t N>
bool all_finite(const Vec<N>& y) {
    for (const Real x : y)
        if (!std::isfinite(x)) return false;
    return true;
}

template <std::size_t N>
void validate_events(std::span<const EventSpec> events) {
    for (const auto& e : events) {
        if (e.component < 0 || e.component >= static_cast<int>(N))
            throw std::invalid_argument("event '" + e.label + "': component out of range");
        if (!std::isfinite(e.level))
            throw std::invalid_argument("event '" + e.label + "': level must be finite");
    }
}

// Event bookkeeping shared by both drivers: scan one accepted segment for
// sign changes of y[component] - level, refine them on the interpolant, and
// append them in time order. Returns the index of the terminal event that
// ends the run, or -1.
template <std::size_t N>
class EventScanner {
public:
    explicit EventScanner(std::span<const EventSpec> specs) : specs_(specs) {}

    long scan(const DenseSegment<N>& seg, std::vector<EventRecord<N>>& out) const {
        if (specs_.empty()) return -1;
        constexpr int kSub = 4;
        struct Hit {
            Real t;
            std::size_t spec;
        };
        std::vector<Hit> hits;
        std::array<Vec<N>, kSub + 1> samples;
        std::array<Real, kSub + 1> ts;
        for (int i = 0; i <= kSub; ++i) {
            ts[i] = i == kSub ? seg.t1 : seg.t0 + (seg.t1 - seg.t0) * i / kSub;
            samples[i] = seg.value(ts[i]);
        }
        for (std::size_t s = 0; s < specs_.size(); ++s) {
            const auto& e = specs_[s];
            const auto g_at = [&](int i) { return samples[i][e.component] - e.level; };
            for (int i = 0; i < kSub; ++i) {
                const Real gl = g_at(i);
                const Real gr = g_at(i + 1);
                if (gl == 0) continue;
                const bool changes = gr == 0 || ((gl < 0) != (gr < 0));
                if (!changes) continue;
                const bool rising = gl < 0;
                if (e.direction == Crossing::Rising && !rising) continue;
                if (e.direction == Crossing::Falling && rising) continue;
                hits.push_back({gr == 0 ? ts[i + 1] : refine(seg, e, ts[i], ts[i + 1]), s});
            }
        }
        std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.t < b.t; });
        long terminal = -1;
        Real t_terminal = 0;
        for (const auto& h : hits) {
            const auto& e = specs_[h.spec];
            if (terminal >= 0) {
                // Near-simultaneous terminal events are kept so callers can
                // detect ties; everything else after the terminal one is dropped.
                if (!(e.terminal && h.t - t_terminal <= 1e-13L * (1 + std::fabs(t_terminal))))
                    continue;
            }
            out.push_back({h.spec, e.label, h.t, seg.value(h.t)});
            if (e.terminal && terminal < 0) {
                terminal = static_cast<long>(out.size() - 1);
                t_terminal = h.t;
            }
        }
        return terminal;
    }

private:
    static Real refine(const DenseSegment<N>& seg, const EventSpec& e, Real lo, Real hi) {
        const auto g = [&](Real t) { return seg.value(t)[e.component] - e.level; };
        boost::math::tools::eps_tolerance<Real> tol(std::numeric_limits<Real>::digits - 3);
        std::uintmax_t iters = 200;
        const auto r = boost::math::tools::toms748_solve(g, lo, hi, g(lo), g(hi), tol, iters);
        const Real a = r.first, b = r.second;
        return std::fabs(g(a)) <= std::fabs(g(b)) ? a : b;
    }

    std::span<const EventSpec> specs_;
};

template <std::size_t N>
Vec<N> axpy(const Vec<N>& y, Real h, const Vec<N>& k) {
    Vec<N> r;
    for (std::size_t i = 0; i < N; ++i) r[i] = y[i] + h * k[i];
    return r;
}

template <std::size_t N>
struct Dop853Step {
    std::array<Vec<N>, 16> K;
    Vec<N> y_new;
    Real rtol = 0;
    Real atol = 0;
    bool finite = true;
};

template <std::size_t N, class Field>
void dop853_stages(Field& field, Real h, const Vec<N>& y, const Vec<N>& f0, Dop853Step<N>& st) {
    using namespace dop853;
    st.K[0] = f0;
    for (int s = 1; s < 12; ++s) {
        Vec<N> ys = y;
        for (int j = 0; j < s; ++j) {
            const Real a = kA[s][j];
            if (a == 0) continue;
            for (std::size_t i = 0; i < N; ++i) ys[i] += h * a * st.K[j][i];
        }
        st.K[s] = field(ys);
    }
    Vec<N> incr{};
    for (int j = 0; j < 12; ++j) {
        const Real b = kA[12][j];
        if (b == 0) continue;
        for (std::size_t i = 0; i < N; ++i) incr[i] += b * st.K[j][i];
    }
    st.y_new = axpy(y, h, incr);
    st.finite = all_finite(st.y_new);
    if (!st.finite) return;
    st.K[12] = field(st.y_new);
    st.finite = all_finite(st.K[12]);
}

// Combined 5th/3rd-order error estimate of Hairer's DOP853.
template <std::size_t N>
Real dop853_error_norm(const Dop853Step<N>& st, Real h, const Vec<N>& y) {
    using namespace dop853;
    Real e5 = 0, e3 = 0;
    for (std::size_t i = 0; i < N; ++i) {
        const Real scale = st.atol + st.rtol * std::max(std::fabs(y[i]), std::fabs(st.y_new[i]));
        Real s5 = 0, s3 = 0;
        for (int j = 0; j < 12; ++j) {
            s5 += kE5[j] * st.K[j][i];
            s3 += (kA[12][j] - kE3Shift[j]) * st.K[j][i];
        }
        e5 += (s5 / scale) * (s5 / scale);
        e3 += (s3 / scale) * (s3 / scale);
    }
    if (e5 == 0 && e3 == 0) return 0;
    return std::fabs(h) * e5 / std::sqrt((e5 + 0.01L * e3) * static_cast<Real>(N));
}

template <std::size_t N, class Field>
void dop853_dense(Field& field, Real t0, Real h, const Vec<N>& y0, Dop853Step<N>& st,
                  DenseSegment<N>& seg) {
    using namespace dop853;
    for (int s = 13; s < 16; ++s) {
        Vec<N> ys = y0;
        for (int j = 0; j < s; ++j) {
            const Real a = kA[s][j];
            if (a == 0) continue;
            for (std::size_t i = 0; i < N; ++i) ys[i] += h * a * st.K[j][i];
        }
        st.K[s] = field(ys);
    }
    seg.t0 = t0;
    seg.h = h;
    seg.t1 = t0 + h;
    seg.y0 = y0;
    seg.y1 = st.y_new;
    for (std::size_t i = 0; i < N; ++i) {
        const Real dy = st.y_new[i] - y0[i];
        seg.F[0][i] = dy;
        seg.F[1][i] = h * st.K[0][i] - dy;
        seg.F[2][i] = 2 * dy - h * (st.K[12][i] + st.K[0][i]);
        for (int r = 0; r < 4; ++r) {
            Real acc = 0;
            for (int j = 0; j < 16; ++j) acc += kD[r][j] * st.K[j][i];
            seg.F[3 + r][i] = h * acc;
        }
    }
}

template <std::size_t N>
Real rms_norm(const Vec<N>& v, const Vec<N>& scale) {
    Real s = 0;
    for (std::size_t i = 0; i < N; ++i) s += (v[i] / scale[i]) * (v[i] / scale[i]);
    return std::sqrt(s / static_cast<Real>(N));
}

template <std::size_t N, class Field>
Real initial_step(Field& field, const Vec<N>& y, const Vec<N>& f0, Real rtol, Real atol,
                  Real max_step) {
    Vec<N> scale;
    for (std::size_t i = 0; i < N; ++i) scale[i] = atol + rtol * std::fabs(y[i]);
    const Real d0 = rms_norm(y, scale);
    const Real d1 = rms_norm(f0, scale);
    Real h0 = (d0 < 1e-5L || d1 < 1e-5L) ? 1e-6L : 0.01L * d0 / d1;
    h0 = std::min(h0, max_step);
    const Vec<N> y1 = axpy(y, h0, f0);
    const Vec<N> f1 = field(y1);
    Vec<N> df;
    for (std::size_t i = 0; i < N; ++i) df[i] = f1[i] - f0[i];
    const Real d2 = all_finite(f1) ? rms_norm(df, scale) / h0 : std::numeric_limits<Real>::infinity();
    Real h1;
    if (d1 <= 1e-15L && d2 <= 1e-15L)
        h1 = std::max(1e-6L, h0 * 1e-3L);
    else
        h1 = std::pow(0.01L / std::max(d1, d2), 1.0L / 8);
    return std::min({100 * h0, h1, max_step});
}

template <std::size_t N>
struct TrajectoryBuilder {
// Integrates y' = field(y) from (t0, y0) over config.horizon.
template <class Field, class EnergyFn>
static BasicTrajectory<N> run(Field field, EnergyFn energy_fn, Real t0, const Vec<N>& y0,
                              const IntegrationConfig& config, std::span<const EventSpec> events) {
    config.validate();
    validate_events<N>(events);
    if (!all_finite(y0) || !std::isfinite(t0))
        throw std::invalid_argument("integrate: initial state must be finite");

    BasicTrajectory<N> traj;
    traj.t_start_ = t0;
    traj.t_end_ = t0;
    traj.y_start_ = y0;
    traj.y_end_ = y0;
    traj.energy_samples_.push_back(energy_fn(y0));
    traj.dense_ = config.store_dense;

    const EventScanner<N> scanner(events);
    const Real t_final = t0 + static_cast<Real>(config.horizon);
    const Real rtol = config.rel_tol, atol = config.abs_tol;
    const Real max_step = static_cast<Real>(config.max_step);
    const Real blowup = static_cast<Real>(config.blowup_threshold);

    Real t = t0;
    Vec<N> y = y0;
    Vec<N> f = field(y);
    long steps = 0;

    const auto accept = [&](DenseSegment<N>& seg) -> bool {
        // Returns true when the run terminates inside this segment.
        const long term = scanner.scan(seg, traj.events_);
        if (term >= 0) {
            const Real te = traj.events_[term].t;
            seg.t1 = te;
            seg.y1 = traj.events_[term].y;
            traj.termination_ = Termination::Event;
        }
        if (config.store_dense) traj.segments_.push_back(seg);
        traj.step_count_ += 1;
        traj.t_end_ = seg.t1;
        traj.y_end_ = seg.y1;
        traj.energy_samples_.push_back(energy_fn(seg.y1));
        if (term >= 0) return true;
        if (max_abs(seg.y1) > blowup) {
            traj.termination_ = Termination::BlowUp;
            return true;
        }
        return false;
    };

    if (config.method == Method::FixedRk4) {
        const Real hstep = static_cast<Real>(config.fixed_step);
        while (t < t_final) {
            if (steps >= config.max_steps) {
                traj.termination_ = Termination::StepLimit;
                return traj;
            }
            const Real h = std::min(hstep, t_final - t);
            const Vec<N> k1 = f;
            const Vec<N> k2 = field(axpy(y, h / 2, k1));
            const Vec<N> k3 = field(axpy(y, h / 2, k2));
            const Vec<N> k4 = field(axpy(y, h, k3));
            Vec<N> y_new;
            for (std::size_t i = 0; i < N; ++i)
                y_new[i] = y[i] + h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
            if (!all_finite(y_new)) {
                traj.termination_ = Termination::BlowUp;
                return traj;
            }
            const Vec<N> f_new = field(y_new);
            DenseSegment<N> seg;
            seg.t0 = t;
            seg.h = h;
            seg.t1 = (h == t_final - t) ? t_final : t + h;
            seg.y0 = y;
            seg.y1 = y_new;
            // Cubic Hermite interpolant in the same nested form as DOP853.
            for (std::size_t i = 0; i < N; ++i) {
                const Real dy = y_new[i] - y[i];
                seg.F[0][i] = dy;
                seg.F[1][i] = h * f[i] - dy;
                seg.F[2][i] = 2 * dy - h * (f_new[i] + f[i]);
                for (int r = 3; r < 7; ++r) seg.F[r][i] = 0;
            }
            ++steps;
            if (accept(seg)) return traj;
            t = seg.t1;
            y = y_new;
            f = f_new;
        }
        traj.termination_ = Termination::ReachedHorizon;
        return traj;
    }

    Real h = initial_step<N>(field, y, f, rtol, atol, max_step);
    Dop853Step<N> st;
    st.rtol = rtol;
    st.atol = atol;
    while (t < t_final) {
        if (steps >= config.max_steps) {
            traj.termination_ = Termination::StepLimit;
            return traj;
        }
        const Real min_step = 1e-14L * (1 + std::fabs(t));
        bool last = false;
        bool accepted = false;
        while (!accepted) {
            if (h < min_step) {
                traj.termination_ = Termination::StepLimit;
                throw IntegrationError<N>("integrate: step size underflow at t = " +
                                              std::to_string(static_cast<double>(t)),
                                          std::move(traj));
            }
            last = t + h >= t_final;
            const Real h_try = last ? t_final - t : h;
            dop853_stages<N>(field, h_try, y, f, st);
            const Real err = st.finite ? dop853_error_norm<N>(st, h_try, y)
                                       : std::numeric_limits<Real>::infinity();
            if (!std::isfinite(err)) {
                h *= 0.2L;
                continue;
            }
            if (err <= 1) {
                accepted = true;
                DenseSegment<N> seg;
                dop853_dense<N>(field, t, h_try, y, st, seg);
                if (last) seg.t1 = t_final;
                ++steps;
                const Real factor =
                    err == 0 ? 10 : std::min<Real>(10, 0.9L * std::pow(err, -1.0L / 8));
                if (accept(seg)) return traj;
                t = seg.t1;
                y = st.y_new;
                f = st.K[12];
                h = std::min(max_step, h_try * factor);
            } else {
                h = h_try * std::max<Real>(0.2L, 0.9L * std::pow(err, -1.0L / 8));
            }
        }
        if (last) break;
    }
    traj.termination_ = Termination::ReachedHorizon;
    return traj;
}
};

template <std::size_t N, class Field, class EnergyFn>
BasicTrajectory<N> integrate_system(Field field, EnergyFn energy_fn, Real t0, const Vec<N>& y0,
                                    const IntegrationConfig& config,
                                    std::span<const EventSpec> events) {
    return TrajectoryBuilder<N>::run(std::move(field), std::move(energy_fn), t0, y0, config, events);
}

}  // namespace biharm::detail

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "biharm/dynamics.hpp"

namespace biharm {

enum class Termination { ReachedHorizon, Event, BlowUp, StepLimit };
enum class Method { AdaptiveDop853, FixedRk4 };
enum class Crossing { Rising, Falling, Either };

const char* to_string(Termination t);

struct IntegrationConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    double horizon = 60.0;  // integration length from the initial time
    double blowup_threshold = 1e8;
    long max_steps = 2'000'000;

    Method method = Method::AdaptiveDop853;
    double fixed_step = 1e-4;  // FixedRk4 only
    bool store_dense = true;

    // Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

// Fires when y[component] - level changes sign in the requested direction.
struct EventSpec {
    std::string label;
    int component = 0;
    Real level = 0;
    Crossing direction = Crossing::Either;
    bool terminal = false;
};

template <std::size_t N>
struct EventRecord {
    std::size_t spec_index = 0;
    std::string label;
    Real t = 0;
    std::array<Real, N> y{};
};

// One accepted step. The interpolant is
//   y(t) = y0 + x(F0 + (1-x)(F1 + x(F2 + (1-x)(F3 + ...)))),  x = (t - t0) / h,
// valid on [t0, t1]; t1 < t0 + h when a terminal event cut the step short.
template <std::size_t N>
struct DenseSegment {
    Real t0 = 0;
    Real t1 = 0;
    Real h = 0;
    std::array<Real, N> y0{};
    std::array<Real, N> y1{};
    std::array<std::array<Real, N>, 7> F{};

    std::array<Real, N> value(Real t) const {
        if (t == t0) return y0;
        if (t == t1) return y1;
        const Real x = (t - t0) / h;
        std::array<Real, N> s{};
        for (int r = 6; r >= 0; --r) {
            const Real w = ((6 - r) % 2 == 0) ? x : 1 - x;
            for (std::size_t i = 0; i < N; ++i) s[i] = (s[i] + F[r][i]) * w;
        }
        for (std::size_t i = 0; i < N; ++i) s[i] += y0[i];
        return s;
    }

    // d/dt of the interpolant.
    std::array<Real, N> derivative(Real t) const {
        const Real x = (t - t0) / h;
        std::array<Real, N> s{}, ds{};
        for (int r = 6; r >= 0; --r) {
            const bool even = (6 - r) % 2 == 0;
            const Real w = even ? x : 1 - x;
            const Real dw = even ? 1 : -1;
            for (std::size_t i = 0; i < N; ++i) {
                const Real u = s[i] + F[r][i];
                ds[i] = ds[i] * w + u * dw;
                s[i] = u * w;
            }
        }
        for (std::size_t i = 0; i < N; ++i) ds[i] /= h;
        return ds;
    }
};

namespace detail {
template <std::size_t N>
struct TrajectoryBuilder;
}

// Immutable record of one integration run.
template <std::size_t N>
class BasicTrajectory {
public:
    using Vector = std::array<Real, N>;

    Real t_start() const { return t_start_; }
    Real t_end() const { return t_end_; }
    const Vector& initial_state() const { return y_start_; }
    const Vector& final_state() const { return y_end_; }
    const std::vector<DenseSegment<N>>& segments() const { return segments_; }
    const std::vector<EventRecord<N>>& events() const { return events_; }
    const std::vector<Real>& energy_samples() const { return energy_samples_; }
    Termination termination() const { return termination_; }
    long step_count() const { return step_count_; }
    bool has_dense_output() const { return dense_; }

    // Dense-output state; exact at step endpoints. Throws std::out_of_range
    // outside [t_start, t_end] or when dense output was not stored.
    Vector state_at(Real t) const { return segment_for(t).value(t); }
    Vector derivative_at(Real t) const { return segment_for(t).derivative(t); }

    // max_k |E_k - E_0| over the per-step energy samples.
    Real energy_drift() const {
        Real d = 0;
        for (const Real e : energy_samples_) d = std::max(d, std::fabs(e - energy_samples_.front()));
        return d;
    }

private:
    friend struct detail::TrajectoryBuilder<N>;

    const DenseSegment<N>& segment_for(Real t) const {
        if (!dense_) throw std::out_of_range("trajectory has no dense output");
        if (!(t >= t_start_ && t <= t_end_) || segments_.empty())
            throw std::out_of_range("time outside the trajectory's interval");
        std::size_t lo = 0, hi = segments_.size();
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            if (segments_[mid].t0 <= t)
                lo = mid;
            else
                hi = mid;
        }
        return segments_[lo];
    }

    Real t_start_ = 0;
    Real t_end_ = 0;
    Vector y_start_{};
    Vector y_end_{};
    std::vector<DenseSegment<N>> segments_;
    std::vector<EventRecord<N>> events_;
    std::vector<Real> energy_samples_;
    Termination termination_ = Termination::ReachedHorizon;
    long step_count_ = 0;
    bool dense_ = true;
};

// Step-size underflow; carries the partial trajectory.
template <std::size_t N>
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, BasicTrajectory<N> partial)
        : std::runtime_error(what), partial_(std::move(partial)) {}
    const BasicTrajectory<N>& partial() const { return partial_; }

private:
    BasicTrajectory<N> partial_;
};

}  // namespace biharm

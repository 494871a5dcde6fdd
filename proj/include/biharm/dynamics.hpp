#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "biharm/params.hpp"

namespace biharm {

// Working precision of trajectories. The periodic orbits are unstable with
// Floquet growth up to ~e^{25} per period (n = 5), so binary64 cannot hold
// them for a full period at the 1e-7 level; x87 extended precision can.
using Real = long double;

using State = std::array<Real, 4>;  // (v, v', v'', v''')
using Jet = std::array<Real, 5>;    // (v, v', v'', v''', v'''')

struct PhaseState {
    Real t = 0;
    Real v = 0;
    Real v1 = 0;
    Real v2 = 0;
    Real v3 = 0;

    PhaseState() = default;
    // Throws std::invalid_argument unless all entries are finite.
    PhaseState(Real t, Real v, Real v1, Real v2, Real v3);
    PhaseState(Real t, const State& y);

    State y() const { return {v, v1, v2, v3}; }
};

// sign(v) |v|^p, with an integer fast path.
template <class T>
T signed_power(const ProblemParams& P, const T& v) {
    using std::abs;
    using std::pow;
    if (P.integer_p > 0) {
        // |v|^{p-1} v, so even p stays odd in v.
        T result = v;
        T base = abs(v);
        int k = P.integer_p - 1;
        while (k > 0) {
            if (k & 1) result *= base;
            base *= base;
            k >>= 1;
        }
        return result;
    }
    if (v == 0) return T(0);
    const T mag = pow(abs(v), T(P.p));
    return v < 0 ? T(-mag) : mag;
}

template <class T>
T f_nonlinearity(const ProblemParams& P, const T& v) {
    return signed_power(P, v) - T(P.B) * v;
}

template <class T>
T F_potential(const ProblemParams& P, const T& v) {
    using std::abs;
    return abs(signed_power(P, v) * v) / T(P.p + 1.0) - T(P.B) / 2 * v * v;
}

template <class T>
std::array<T, 4> rhs(const ProblemParams& P, const std::array<T, 4>& y) {
    return {y[1], y[2], y[3], T(P.A) * y[2] + f_nonlinearity(P, y[0])};
}

template <class T>
T energy(const ProblemParams& P, const std::array<T, 4>& y) {
    return -y[3] * y[1] + y[2] * y[2] / 2 + T(P.A) / 2 * y[1] * y[1] + F_potential(P, y[0]);
}

inline State rhs(const ProblemParams& P, const PhaseState& s) { return rhs(P, s.y()); }
inline Real energy(const ProblemParams& P, const PhaseState& s) { return energy(P, s.y()); }

// Frequency of the oscillatory pair of v'''' - A v'' - (p-1) B v = 0,
// the linearization about a0; 2 pi / omega is the small-amplitude period.
double linearized_frequency_at_a0(const ProblemParams& P);

// Relative residual |v'''' - A v'' - f(v)| / (|v''''| + |A v''| + |f(v)|).
Real ode_residual(const ProblemParams& P, const Jet& jet);

[[noreturn]] void throw_generic_homoclinic();

namespace detail {

// Coefficients of Q_j with d^j/ds^j (2 cosh s)^{-k} = Q_j(tanh s) (2 cosh s)^{-k}.
// Q_{j+1}(x) = (1 - x^2) Q_j'(x) - k x Q_j(x).
template <class T>
std::vector<std::vector<T>> cosh_power_derivative_polys(const T& k, int order) {
    std::vector<std::vector<T>> Q(order + 1);
    Q[0] = {T(1)};
    for (int j = 0; j < order; ++j) {
        const auto& q = Q[j];
        std::vector<T> next(q.size() + 1, T(0));
        for (std::size_t i = 1; i < q.size(); ++i) {
            const T d = T(static_cast<int>(i)) * q[i];  // derivative term x^{i-1}
            next[i - 1] += d;
            next[i + 1] -= d;
        }
        for (std::size_t i = 0; i < q.size(); ++i) next[i + 1] -= k * q[i];
        Q[j + 1] = std::move(next);
    }
    return Q;
}

}  // namespace detail

// v(t) = cn (2 cosh(t - T))^{-(n-4)/2} and its first four derivatives from
// the differentiated closed form. Requires params built by make_params.
template <class T>
std::array<T, 5> homoclinic_jet_as(const ProblemParams& P, const T& t, const T& shift) {
    using std::abs;
    using std::exp;
    using std::log;
    using std::log1p;
    using std::tanh;
    using std::pow;
    if (!P.n || !P.cn) throw_generic_homoclinic();
    const int n = *P.n;
    const T k = T(n - 4) / 2;
    const T cn = pow(T((n - 4) * (n - 2) * n * (n + 2)), T(n - 4) / 8);
    const T s = t - shift;
    const T as = abs(s);
    // log(2 cosh s) = |s| + log1p(e^{-2|s|})
    const T g = cn * exp(-k * (as + log1p(exp(-2 * as))));
    const T x = tanh(s);
    const auto Q = detail::cosh_power_derivative_polys(k, 4);
    std::array<T, 5> out;
    for (int j = 0; j <= 4; ++j) {
        T acc = T(0);
        for (std::size_t i = Q[j].size(); i-- > 0;) acc = acc * x + Q[j][i];
        out[j] = acc * g;
    }
    return out;
}

Jet homoclinic_jet(const ProblemParams& P, Real t, Real shift = 0);
PhaseState homoclinic(const ProblemParams& P, Real t, Real shift = 0);

}  // namespace biharm

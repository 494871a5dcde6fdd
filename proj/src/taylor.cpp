#include "biharm/taylor.hpp"

#include <algorithm>
#include <stdexcept>

#include "biharm/dynamics.hpp"

namespace biharm {

namespace {

HighReal exact_constant(double x) { return HighReal(x); }

// Coefficient j of v^p for integer p via a chain of Cauchy products.
class IntegerPowerSeries {
public:
    IntegerPowerSeries(int p, int order) : p_(p), chain_(std::max(p - 1, 0), std::vector<HighReal>(order + 1)) {}

    // c holds v's coefficients 0..j; returns coefficient j of v^p.
    HighReal next(const std::vector<HighReal>& c, int j) {
        const std::vector<HighReal>* prev = &c;
        for (int k = 0; k < p_ - 1; ++k) {
            HighReal acc = 0;
            for (int i = 0; i <= j; ++i) acc += (*prev)[i] * c[j - i];
            chain_[k][j] = acc;
            prev = &chain_[k];
        }
        return (*prev)[j];
    }

private:
    int p_;
    std::vector<std::vector<HighReal>> chain_;
};

// Coefficient j of w = v^alpha from v w' = alpha w v'; needs c_0 != 0.
class RealPowerSeries {
public:
    RealPowerSeries(const HighReal& alpha, int order) : alpha_(alpha), w_(order + 1) {}

    HighReal next(const std::vector<HighReal>& c, int j) {
        using boost::multiprecision::pow;
        if (j == 0) {
            if (c[0] <= 0) throw std::domain_error("integrate_taylor: v must stay positive for this p");
            w_[0] = pow(c[0], alpha_);
            return w_[0];
        }
        HighReal acc = 0;
        for (int i = 1; i <= j; ++i) acc += (alpha_ * i - (j - i)) * c[i] * w_[j - i];
        w_[j] = acc / (j * c[0]);
        return w_[j];
    }

private:
    HighReal alpha_;
    std::vector<HighReal> w_;
};

}  // namespace

HighReal energy_high(const ProblemParams& P, const HighState& y) {
    using boost::multiprecision::abs;
    using boost::multiprecision::pow;
    const HighReal A = exact_constant(P.A);
    const HighReal B = exact_constant(P.B);
    HighReal vp1;
    if (P.integer_p > 0) {
        vp1 = y[0];
        for (int k = 0; k < P.integer_p; ++k) vp1 *= y[0];
        vp1 = abs(vp1);
    } else {
        vp1 = pow(abs(y[0]), HighReal(P.p) + 1);
    }
    const HighReal F = vp1 / (HighReal(P.p) + 1) - B / 2 * y[0] * y[0];
    return -y[3] * y[1] + y[2] * y[2] / 2 + A / 2 * y[1] * y[1] + F;
}

TaylorRun integrate_taylor(const ProblemParams& P, const HighState& y0, const HighReal& t0,
                           const HighReal& t1, int order) {
    using boost::multiprecision::abs;
    using boost::multiprecision::pow;
    if (!(t1 > t0)) throw std::invalid_argument("integrate_taylor: need t1 > t0");
    if (order < 8) throw std::invalid_argument("integrate_taylor: order must be at least 8");

    const HighReal A = exact_constant(P.A);
    const HighReal B = exact_constant(P.B);
    const HighReal eps = std::numeric_limits<HighReal>::epsilon();

    TaylorRun run;
    run.times.push_back(t0);
    run.states.push_back(y0);
    HighReal t = t0;
    HighState y = y0;
    std::vector<HighReal> c(order + 1);

    while (t < t1) {
        c[0] = y[0];
        c[1] = y[1];
        c[2] = y[2] / 2;
        c[3] = y[3] / 6;
        const bool odd_integer = P.integer_p % 2 == 1;
        IntegerPowerSeries ipow(P.integer_p, order);
        RealPowerSeries rpow(HighReal(P.p), order);
        for (int j = 0; j + 4 <= order; ++j) {
            const HighReal w = odd_integer ? ipow.next(c, j) : rpow.next(c, j);
            const HighReal fj = w - B * c[j];
            const HighReal j1 = j + 1, j2 = j + 2, j3 = j + 3, j4 = j + 4;
            c[j + 4] = (A * j1 * j2 * c[j + 2] + fj) / (j1 * j2 * j3 * j4);
        }

        HighReal scale = 1;
        for (int i = 0; i < 4; ++i) scale = std::max(scale, abs(y[i]));
        const HighReal tol = eps * scale;
        HighReal h = t1 - t;
        for (int j : {order - 1, order}) {
            if (c[j] != 0) h = std::min(h, HighReal(pow(tol / abs(c[j]), HighReal(1) / j)));
        }

        // Horner for the value and first three derivatives.
        HighState next{};
        for (int d = 0; d < 4; ++d) {
            HighReal acc = 0;
            for (int j = order; j >= d; --j) {
                HighReal fall = 1;  // j (j-1) ... (j-d+1)
                for (int q = 0; q < d; ++q) fall *= (j - q);
                acc = acc * h + c[j] * fall;
            }
            next[d] = acc;
        }
        const bool last = (t + h >= t1);
        t = last ? t1 : t + h;
        y = next;
        ++run.steps;
        run.times.push_back(t);
        run.states.push_back(y);
    }
    run.t_end = t;
    run.y_end = y;
    return run;
}

HighState homoclinic_state_high(const ProblemParams& P, const HighReal& t, const HighReal& shift) {
    const auto jet = homoclinic_jet_as<HighReal>(P, t, shift);
    return {jet[0], jet[1], jet[2], jet[3]};
}

}  // namespace biharm

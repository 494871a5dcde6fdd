#include "biharm/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace biharm {

namespace {

int as_integer(double x) {
    const double r = std::round(x);
    if (r >= 1.0 && r <= 64.0 && r == x) return static_cast<int>(r);
    return 0;
}

double integer_power(double x, int k) {
    double result = 1.0;
    double base = x;
    while (k > 0) {
        if (k & 1) result *= base;
        base *= base;
        k >>= 1;
    }
    return result;
}

void fill_derived(ProblemParams& P) {
    P.integer_p = as_integer(P.p);

    // lambda from B / mu avoids cancellation when B << A^2.
    const double half = 0.5 * P.A;
    const double disc = std::sqrt(half * half - P.B);
    P.mu = half + disc;
    P.lambda = P.B / P.mu;

    P.a0 = positive_power(P.B, 1.0 / (P.p - 1.0));

    const double vm = positive_power(P.B / P.p, 1.0 / (P.p - 1.0));
    P.b = P.B * (1.0 - 1.0 / P.p) * vm;
    P.beta0 = P.b / P.A;
}

}  // namespace

double positive_power(double x, double e) {
    if (!(x > 0.0)) throw std::domain_error("positive_power: base must be positive");
    if (e == 0.0) return 1.0;
    double y = std::exp(e * std::log(x));
    // y solves g(y) = y^{1/e} - x; one Newton step.
    const double inv = 1.0 / e;
    const int k = as_integer(inv);
    const double y_pow = k ? integer_power(y, k) : std::pow(y, inv);
    const double g = y_pow - x;
    const double dg = inv * y_pow / y;
    if (dg != 0.0 && std::isfinite(dg)) y -= g / dg;
    return y;
}

double ProblemParams::weight_exponent() const {
    if (!n) throw std::logic_error("weight exponent requires a dimension n");
    return 0.5 * (*n - 4);
}

ProblemParams make_params(int n) {
    if (n < 5) {
        throw std::domain_error("make_params: dimension must satisfy n >= 5, got n = " +
                                std::to_string(n));
    }
    ProblemParams P;
    P.n = n;
    const double nd = n;
    P.A = (nd * (nd - 4.0) + 8.0) / 2.0;
    P.B = nd * nd * (nd - 4.0) * (nd - 4.0) / 16.0;
    P.p = (nd + 4.0) / (nd - 4.0);
    fill_derived(P);
    P.cn = positive_power((nd - 4.0) * (nd - 2.0) * nd * (nd + 2.0), (nd - 4.0) / 8.0);
    return P;
}

ProblemParams make_generic_params(double A, double B, double p) {
    if (!std::isfinite(A) || !std::isfinite(B) || !std::isfinite(p))
        throw std::domain_error("make_generic_params: A, B and p must be finite");
    if (!(A > 0.0)) throw std::domain_error("make_generic_params: A > 0 violated");
    if (!(4.0 * B < A * A)) throw std::domain_error("make_generic_params: 4B < A^2 violated");
    if (!(B > 0.0)) throw std::domain_error("make_generic_params: B > 0 violated");
    if (!(p > 1.0)) throw std::domain_error("make_generic_params: p > 1 violated");
    ProblemParams P;
    P.A = A;
    P.B = B;
    P.p = p;
    fill_derived(P);
    return P;
}

}  // namespace biharm

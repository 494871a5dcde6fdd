#pragma once

#include <optional>

namespace biharm {

// Constants of v'''' - A v'' - f(v) = 0 with f(v) = |v|^{p-1} v - B v.
// For the Emden-Fowler reduction of Delta^2 u = u^{(n+4)/(n-4)} in dimension n
// all fields are closed forms in n; generic instances leave n and cn unset.
struct ProblemParams {
    std::optional<int> n;
    double A = 0.0;
    double B = 0.0;
    double p = 0.0;
    double a0 = 0.0;               // positive zero of f, B^{1/(p-1)}
    std::optional<double> cn;      // homoclinic amplitude; needs n
    double lambda = 0.0;           // smaller root of xi^2 of xi^4 - A xi^2 + B
    double mu = 0.0;               // larger root
    double b = 0.0;                // -min_{v>0} f(v)
    double beta0 = 0.0;            // shots with v''(0) > beta0 diverge monotonically

    // p as an integer when it is one (n = 5, 6, 8, 12), else 0.
    int integer_p = 0;

    // (n-4)/2, the Emden-Fowler weight exponent; requires n.
    double weight_exponent() const;
};

// Throws std::domain_error for n < 5.
ProblemParams make_params(int n);

// Throws std::domain_error naming the violated condition.
ProblemParams make_generic_params(double A, double B, double p);

// x^e for x > 0 via exp/log with one Newton polish on y^{1/e} = x.
double positive_power(double x, double e);

}  // namespace biharm

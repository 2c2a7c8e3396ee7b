#pragma once

#include <array>
#include <functional>

namespace invlim {

/// Nodes and weights of the 15-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
    std::array<double, 15> nodes;
    std::array<double, 15> weights;
};

const GaussLegendreRule& gauss_legendre_15();

struct QuadratureOptions {
    double rel_tol = 1e-9;
    double abs_tol = 0.0;
    int max_depth = 48;
    /// Cap on bisections per call; guards against noise-limited integrands.
    long max_subdivisions = 200000;
};

/// Single application of the 15-point rule on [a, b].
double gauss_legendre_panel(const std::function<double(double)>& f, double a, double b);

/// Adaptive composite Gauss-Legendre: a panel is accepted once the one-panel
/// and two-half-panel estimates agree to the tolerance. Throws NumericalError
/// naming the offending panel when the depth limit is hit.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          const QuadratureOptions& opts = {});

/// A positive nondecreasing modulus mu(s), s > 0, carried as the log ratio
/// l -> ln(mu(e^l) / e^l). Arguments far outside the double range
/// (s = exp(-1e10), say) stay representable, and the integrand s/mu(s) of
/// the inverse integral is formed without cancelling two huge logarithms.
class Modulus {
public:
    using LogFn = std::function<double(double)>;

    static Modulus from_function(std::function<double(double)> mu);
    /// From l -> ln mu(e^l).
    static Modulus from_log(LogFn log_mu);
    /// From l -> ln(mu(e^l) / e^l).
    static Modulus from_log_ratio(LogFn log_ratio);

    double log_ratio(double log_s) const { return log_ratio_(log_s); }
    double log_value(double log_s) const { return log_s + log_ratio_(log_s); }
    double operator()(double s) const;

private:
    explicit Modulus(LogFn f) : log_ratio_(std::move(f)) {}
    LogFn log_ratio_;
};

/// Integral of ds / mu(s) over [exp(log_lo), exp(log_hi)], evaluated in the
/// variable l = ln s on panels split at 0 and +-2^j, so the geometric panels
/// [d 2^j, d 2^(j+1)] in s near 1 become panels of logarithmic width deep
/// toward 0. Requires log_lo <= log_hi.
double inverse_integral(const Modulus& mu, double log_lo, double log_hi,
                        const QuadratureOptions& opts = {});

/// Finds ln u > log_lo with inverse_integral(mu, log_lo, ln u) = target by
/// doubling u from exp(log_lo) and then bisecting in ln u. Returns +inf when
/// the integral stays below target up to u = exp(log_cap).
double solve_inverse_integral(const Modulus& mu, double log_lo, double target,
                              double log_cap = 690.0, const QuadratureOptions& opts = {});

/// Finds ln x < log_hi with inverse_integral(mu, ln x, log_hi) = target by
/// halving downward. Returns -inf if the integral saturates below target
/// before ln x reaches log_floor.
double solve_inverse_integral_downward(const Modulus& mu, double log_hi, double target,
                                       double log_floor = -1e12,
                                       const QuadratureOptions& opts = {});

} // namespace invlim

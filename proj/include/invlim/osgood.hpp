#pragma once

#include "invlim/admissibility.hpp"
#include "invlim/quadrature.hpp"

#include <functional>
#include <vector>

namespace invlim {

/// The positive weight gamma(t) of the Osgood inequality.
class Forcing {
public:
    static Forcing constant(double value);
    /// values[i] on [breaks[i], breaks[i+1]); constant extension outside.
    static Forcing piecewise_constant(std::vector<double> breaks, std::vector<double> values);
    static Forcing from_function(std::function<double(double)> gamma);

    double value(double t) const;
    /// Integral of gamma over [t0, t]; exact for the constant and piecewise forms.
    double integral(double t0, double t) const;

private:
    enum class Form { Constant, Piecewise, General };
    Forcing() = default;

    Form form_ = Form::Constant;
    double constant_ = 1.0;
    std::vector<double> breaks_;
    std::vector<double> values_;
    std::function<double(double)> general_;
};

/// L(t) <= a + int_{t0}^t gamma(s) mu(L(s)) ds.
struct OsgoodProblem {
    double a = 0.0;
    Forcing gamma = Forcing::constant(1.0);
    Modulus mu = Modulus::from_log_ratio([](double) { return 0.0; });
    double t0 = 0.0;
    double t1 = 1.0;
};

struct OsgoodOptions {
    /// Used to decide whether int_0^1 ds/mu diverges when a = 0.
    CutoffSequence divergence_cutoffs{};
    double divergence_threshold = 0.2;
    /// ln of the lower-limit guard that replaces 0 when that integral converges.
    double log_zero_guard = -690.0;
    /// ln of the largest bound reported before giving up with +inf.
    double log_cap = 690.0;
    int monotonicity_samples = 200;
};

/// Largest L allowed by the Osgood bound at time t: the root of
/// M(L) = M(a) - int_{t0}^t gamma with M(x) = int_x^1 ds/mu(s). Returns 0
/// when a = 0 and M(0) is numerically infinite, and +inf when the root
/// lies beyond exp(log_cap). Throws DomainError if sampled mu decreases.
double osgood_upper_bound(const OsgoodProblem& problem, double t, const OsgoodOptions& opts = {});

/// (beta context, time horizon T, forcing constant R).
struct RateBound {
    BetaContext beta;
    double T = 1.0;
    double R = 0.0;

    void validate() const;
};

/// f(x): the value > x with int_x^{f(x)} ds/beta(s) = T.
double rate_function(const RateBound& rb, double x);

/// The x < y with int_x^y ds/beta(s) = T, i.e. f^{-1}(y); 0 when it underflows.
double inverse_rate_function(const RateBound& rb, double y);

/// f(R nu t), the bound on the squared L2 velocity difference; 0 when R = 0 or t = 0.
double theoretical_l2_bound(const RateBound& rb, double nu, double t);

/// Cached antiderivative G of 1/beta for repeated rate-function queries on
/// one (beta, T). G is tabulated in v with ln s = sinh(v), so panels are
/// logarithmic in ln s deep toward 0; each query is refined by Gauss-Legendre
/// and safeguarded Newton on the bracketing panel. Covers the same range as
/// the direct solvers (ln s in [-1e12, log_cap]). Not thread-safe.
class RateTable {
public:
    explicit RateTable(const RateBound& rb, double log_cap = 690.0, double log_floor = -1e12);

    /// Same as rate_function(rb, x).
    double rate(double x);
    /// Same as inverse_rate_function(rb, y).
    double inverse_rate(double y);
    /// Same as theoretical_l2_bound(rb, nu, t), +inf where rate_function would throw.
    double l2_bound(double nu, double t);
    const RateBound& bound() const { return rb_; }

private:
    double integrand(double v) const;
    double panel(double a, double b) const;
    /// G at v, exact up to quadrature; extends the table to cover v.
    double antiderivative(double v);
    void extend_to(double v);
    /// v with G(v) = target inside [lo, hi] where G(lo) <= target <= G(hi).
    double solve(double target, double lo, double hi);

    RateBound rb_;
    Modulus mu_;
    double v_cap_;
    double v_floor_;
    double step_ = 0.05;
    // nodes v = k * step_ for k in [k_min_, k_min_ + g_.size())
    long k_min_ = 0;
    std::vector<double> g_;
};

} // namespace invlim

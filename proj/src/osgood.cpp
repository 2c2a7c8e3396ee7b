#include "invlim/osgood.hpp"

#include "invlim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace invlim {

Forcing Forcing::constant(double value) {
    if (!(value > 0.0)) {
        throw DomainError("gamma must be positive");
    }
    Forcing f;
    f.form_ = Form::Constant;
    f.constant_ = value;
    return f;
}

Forcing Forcing::piecewise_constant(std::vector<double> breaks, std::vector<double> values) {
    if (values.empty() || breaks.size() != values.size() + 1) {
        throw DomainError("piecewise gamma needs one more break than values");
    }
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (!(breaks[i + 1] > breaks[i])) {
            throw DomainError("piecewise gamma breaks must increase");
        }
    }
    for (double v : values) {
        if (!(v > 0.0)) {
            throw DomainError("gamma must be positive");
        }
    }
    Forcing f;
    f.form_ = Form::Piecewise;
    f.breaks_ = std::move(breaks);
    f.values_ = std::move(values);
    return f;
}

Forcing Forcing::from_function(std::function<double(double)> gamma) {
    Forcing f;
    f.form_ = Form::General;
    f.general_ = std::move(gamma);
    return f;
}

double Forcing::value(double t) const {
    switch (form_) {
    case Form::Constant:
        return constant_;
    case Form::Piecewise: {
        auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
        std::size_t k = static_cast<std::size_t>(it - breaks_.begin());
        k = std::clamp<std::size_t>(k, 1, values_.size()) - 1;
        return values_[k];
    }
    case Form::General:
        return general_(t);
    }
    return constant_;
}

double Forcing::integral(double t0, double t) const {
    if (t < t0) {
        return -integral(t, t0);
    }
    switch (form_) {
    case Form::Constant:
        return constant_ * (t - t0);
    case Form::Piecewise: {
        // cumulative from t0 across the breakpoints that fall inside [t0, t]
        std::vector<double> cuts{t0};
        for (double b : breaks_) {
            if (b > t0 && b < t) {
                cuts.push_back(b);
            }
        }
        cuts.push_back(t);
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            acc += value(0.5 * (cuts[i] + cuts[i + 1])) * (cuts[i + 1] - cuts[i]);
        }
        return acc;
    }
    case Form::General:
        return integrate_adaptive(general_, t0, t);
    }
    return 0.0;
}

namespace {

void check_monotone(const Modulus& mu, double l_lo, double l_hi, int samples) {
    double prev = -std::numeric_limits<double>::infinity();
    double prev_l = l_lo;
    for (int i = 0; i < samples; ++i) {
        const double l = l_lo + (l_hi - l_lo) * i / (samples - 1);
        const double v = mu.log_value(l);
        if (std::isnan(v)) {
            throw DomainError("mu is not defined on the sampled range");
        }
        if (v < prev - 1e-12 * std::max(1.0, std::abs(prev))) {
            std::ostringstream msg;
            msg << "mu decreases between s = exp(" << prev_l << ") and s = exp(" << l << ")";
            throw DomainError(msg.str());
        }
        prev = v;
        prev_l = l;
    }
}

} // namespace

double osgood_upper_bound(const OsgoodProblem& problem, double t, const OsgoodOptions& opts) {
    if (!(problem.a >= 0.0)) {
        throw DomainError("osgood: a must be nonnegative");
    }
    if (!(t >= problem.t0 && t <= problem.t1)) {
        throw DomainError("osgood: t outside [t0, t1]");
    }
    if (problem.gamma.value(problem.t0) <= 0.0 || problem.gamma.value(t) <= 0.0 ||
        problem.gamma.value(0.5 * (problem.t0 + t)) <= 0.0) {
        throw DomainError("osgood: gamma must be positive");
    }
    const double l_start = problem.a > 0.0 ? std::log(problem.a) : opts.log_zero_guard;
    check_monotone(problem.mu, l_start, std::max(l_start + 1.0, std::min(opts.log_cap, 50.0)),
                   opts.monotonicity_samples);

    if (t == problem.t0) {
        return problem.a;
    }
    if (problem.a == 0.0) {
        const auto verdict =
            classify_divergence(problem.mu, opts.divergence_cutoffs, opts.divergence_threshold);
        if (verdict.verdict == Verdict::NumericallyDivergent) {
            return 0.0;
        }
    }
    const double budget = problem.gamma.integral(problem.t0, t);
    const double l_root = solve_inverse_integral(problem.mu, l_start, budget, opts.log_cap);
    return std::isinf(l_root) ? std::numeric_limits<double>::infinity() : std::exp(l_root);
}

void RateBound::validate() const {
    beta.validate();
    if (!(T > 0.0)) {
        throw DomainError("rate bound: T must be positive");
    }
    if (!(R >= 0.0)) {
        throw DomainError("rate bound: R must be nonnegative");
    }
}

double rate_function(const RateBound& rb, double x) {
    rb.validate();
    if (!(x > 0.0)) {
        throw DomainError("rate function requires x > 0");
    }
    const double l = solve_inverse_integral(beta_modulus(rb.beta), std::log(x), rb.T);
    if (std::isinf(l)) {
        std::ostringstream msg;
        msg << "rate function: bracketing failed below the overflow bound for x = " << x;
        throw NumericalError(msg.str());
    }
    return std::exp(l);
}

double inverse_rate_function(const RateBound& rb, double y) {
    rb.validate();
    if (!(y > 0.0)) {
        throw DomainError("inverse rate function requires y > 0");
    }
    const double l = solve_inverse_integral_downward(beta_modulus(rb.beta), std::log(y), rb.T);
    return std::isinf(l) ? 0.0 : std::exp(l);
}

double theoretical_l2_bound(const RateBound& rb, double nu, double t) {
    rb.validate();
    if (!(nu > 0.0)) {
        throw DomainError("theoretical bound requires nu > 0");
    }
    if (!(t >= 0.0) || t > rb.T * (1.0 + 1e-12)) {
        throw DomainError("theoretical bound requires t in [0, T]");
    }
    if (rb.R == 0.0 || t == 0.0) {
        return 0.0;
    }
    return rate_function(rb, rb.R * nu * t);
}

RateTable::RateTable(const RateBound& rb, double log_cap, double log_floor)
    : rb_(rb), mu_(beta_modulus(rb.beta)), v_cap_(std::asinh(log_cap)), v_floor_(std::asinh(log_floor)) {
    rb_.validate();
    g_.push_back(0.0);  // G(0) = 0, i.e. G(v) = integral from s = 1
}

double RateTable::integrand(double v) const {
    // ds / beta(s) with ln s = sinh(v)
    return std::exp(-mu_.log_ratio(std::sinh(v))) * std::cosh(v);
}

double RateTable::panel(double a, double b) const {
    return gauss_legendre_panel([this](double v) { return integrand(v); }, a, b);
}

void RateTable::extend_to(double v) {
    const long k = static_cast<long>(std::floor(v / step_));
    while (k_min_ + static_cast<long>(g_.size()) - 1 < k + 1) {
        const long top = k_min_ + static_cast<long>(g_.size()) - 1;
        g_.push_back(g_.back() + panel(top * step_, (top + 1) * step_));
    }
    while (k_min_ > k) {
        g_.insert(g_.begin(), g_.front() - panel((k_min_ - 1) * step_, k_min_ * step_));
        --k_min_;
    }
}

double RateTable::antiderivative(double v) {
    extend_to(v);
    const long k = static_cast<long>(std::floor(v / step_));
    const double base = g_[static_cast<std::size_t>(k - k_min_)];
    return base + panel(k * step_, v);
}

double RateTable::solve(double target, double lo, double hi) {
    // safeguarded Newton; G is increasing with derivative integrand(v)
    double v = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double g = antiderivative(v) - target;
        if (g > 0.0) {
            hi = v;
        } else {
            lo = v;
        }
        const double d = integrand(v);
        double next = v - g / d;
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (std::abs(next - v) <= 1e-15 * std::max(1.0, std::abs(v)) || hi - lo <= 1e-15 * std::max(1.0, std::abs(v))) {
            return next;
        }
        v = next;
    }
    return v;
}

double RateTable::rate(double x) {
    if (!(x > 0.0)) {
        throw DomainError("rate function requires x > 0");
    }
    const double vx = std::asinh(std::log(x));
    const double target = antiderivative(vx) + rb_.T;
    long k = static_cast<long>(std::floor(vx / step_));
    extend_to(vx);
    // walk up the table to the panel that brackets the target
    while (true) {
        if ((k + 1) * step_ > v_cap_) {
            if (antiderivative(v_cap_) < target) {
                throw NumericalError("rate function: bracketing failed below the overflow bound");
            }
            break;
        }
        extend_to((k + 1) * step_);
        if (g_[static_cast<std::size_t>(k + 1 - k_min_)] >= target) {
            break;
        }
        ++k;
    }
    const double lo = std::max(vx, k * step_);
    const double hi = std::min((k + 1) * step_, v_cap_);
    return std::exp(std::sinh(solve(target, lo, hi)));
}

double RateTable::inverse_rate(double y) {
    if (!(y > 0.0)) {
        throw DomainError("inverse rate function requires y > 0");
    }
    const double vy = std::asinh(std::log(y));
    const double target = antiderivative(vy) - rb_.T;
    long k = static_cast<long>(std::floor(vy / step_));
    while (true) {
        if (k * step_ < v_floor_) {
            if (antiderivative(v_floor_) > target) {
                return 0.0;
            }
            break;
        }
        extend_to(k * step_);
        if (g_[static_cast<std::size_t>(k - k_min_)] <= target) {
            break;
        }
        --k;
    }
    const double lo = std::max(k * step_, v_floor_);
    const double hi = std::min((k + 1) * step_, vy);
    const double l = std::sinh(solve(target, lo, hi));
    return std::exp(l);
}

double RateTable::l2_bound(double nu, double t) {
    if (!(nu > 0.0)) {
        throw DomainError("theoretical bound requires nu > 0");
    }
    if (!(t >= 0.0) || t > rb_.T * (1.0 + 1e-12)) {
        throw DomainError("theoretical bound requires t in [0, T]");
    }
    if (rb_.R == 0.0 || t == 0.0) {
        return 0.0;
    }
    try {
        return rate(rb_.R * nu * t);
    } catch (const NumericalError&) {
        return INFINITY;
    }
}

} // namespace invlim

#include "invlim/quadrature.hpp"

#include "invlim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

namespace invlim {

namespace {

GaussLegendreRule build_rule() {
    // Newton iteration on P_15 from the Chebyshev-like initial guesses.
    constexpr int n = 15;
    GaussLegendreRule rule{};
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        rule.nodes[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

double adaptive(const std::function<double(double)>& f, double a, double b, double whole,
                const QuadratureOptions& opts, int depth, long& budget) {
    const double mid = 0.5 * (a + b);
    const double left = gauss_legendre_panel(f, a, mid);
    const double right = gauss_legendre_panel(f, mid, b);
    const double refined = left + right;
    const double err = std::abs(refined - whole);
    // A panel a few ulps wide cannot be refined further; its contribution is noise.
    const double ulp_width = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(mid));
    if (err <= std::max(opts.rel_tol * std::abs(refined), opts.abs_tol) || b - a <= ulp_width) {
        return refined;
    }
    if (!std::isfinite(refined)) {
        std::ostringstream msg;
        msg << "non-finite integrand on panel [" << a << ", " << b << "]";
        throw NumericalError(msg.str());
    }
    if (depth >= opts.max_depth || --budget < 0) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "quadrature did not converge on panel [" << a << ", " << b << "] (error estimate "
            << err << ")";
        throw NumericalError(msg.str());
    }
    return adaptive(f, a, mid, left, opts, depth + 1, budget) +
           adaptive(f, mid, b, right, opts, depth + 1, budget);
}

// Panel edges in l = ln s: 0 and +-2^j.
std::vector<double> log_panel_edges(double lo, double hi) {
    std::vector<double> edges{lo};
    const double extent = std::max(std::abs(lo), std::abs(hi));
    std::vector<double> marks{0.0};
    for (double m = 0.5; m <= 2.0 * extent; m *= 2.0) {
        marks.push_back(m);
        marks.push_back(-m);
    }
    std::sort(marks.begin(), marks.end());
    for (double m : marks) {
        if (m > lo && m < hi) {
            edges.push_back(m);
        }
    }
    edges.push_back(hi);
    return edges;
}

double next_up(double l) {
    if (l < -1.0) {
        return 0.5 * l;
    }
    if (l < 1.0) {
        return l + std::numbers::ln2;
    }
    return 2.0 * l;
}

double next_down(double l) {
    if (l > 1.0) {
        return 0.5 * l;
    }
    if (l > -1.0) {
        return l - std::numbers::ln2;
    }
    return 2.0 * l;
}

double bisection_tolerance(double l) {
    return std::max(1e-13, 8.0 * std::numeric_limits<double>::epsilon() * std::abs(l));
}

} // namespace

const GaussLegendreRule& gauss_legendre_15() {
    static const GaussLegendreRule rule = build_rule();
    return rule;
}

double gauss_legendre_panel(const std::function<double(double)>& f, double a, double b) {
    const auto& rule = gauss_legendre_15();
    const double half = 0.5 * (b - a);
    const double centre = 0.5 * (a + b);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        sum += rule.weights[i] * f(centre + half * rule.nodes[i]);
    }
    return half * sum;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          const QuadratureOptions& opts) {
    if (a == b) {
        return 0.0;
    }
    long budget = opts.max_subdivisions;
    return adaptive(f, a, b, gauss_legendre_panel(f, a, b), opts, 0, budget);
}

Modulus Modulus::from_function(std::function<double(double)> mu) {
    return Modulus([mu = std::move(mu)](double log_s) {
        const double s = std::exp(log_s);
        return std::log(mu(s) / s);
    });
}

Modulus Modulus::from_log(LogFn log_mu) {
    return Modulus([log_mu = std::move(log_mu)](double log_s) { return log_mu(log_s) - log_s; });
}

Modulus Modulus::from_log_ratio(LogFn log_ratio) { return Modulus(std::move(log_ratio)); }

double Modulus::operator()(double s) const { return std::exp(log_value(std::log(s))); }

double inverse_integral(const Modulus& mu, double log_lo, double log_hi,
                        const QuadratureOptions& opts) {
    if (log_hi < log_lo) {
        throw DomainError("inverse_integral: lower limit exceeds upper limit");
    }
    if (log_hi == log_lo) {
        return 0.0;
    }
    const std::function<double(double)> integrand = [&mu](double l) {
        return std::exp(-mu.log_ratio(l));
    };
    const auto edges = log_panel_edges(log_lo, log_hi);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        total += integrate_adaptive(integrand, edges[i], edges[i + 1], opts);
    }
    return total;
}

double solve_inverse_integral(const Modulus& mu, double log_lo, double target, double log_cap,
                              const QuadratureOptions& opts) {
    if (!(target >= 0.0)) {
        throw DomainError("solve_inverse_integral: target must be nonnegative");
    }
    if (target == 0.0) {
        return log_lo;
    }
    double acc = 0.0;
    double a = log_lo;
    double b = next_up(a);
    for (;;) {
        if (a >= log_cap) {
            return std::numeric_limits<double>::infinity();
        }
        b = std::min(b, log_cap);
        const double piece = inverse_integral(mu, a, b, opts);
        if (acc + piece >= target) {
            break;
        }
        acc += piece;
        a = b;
        b = next_up(a);
    }
    for (int iter = 0; iter < 400 && b - a > bisection_tolerance(b); ++iter) {
        const double mid = 0.5 * (a + b);
        const double piece = inverse_integral(mu, a, mid, opts);
        if (acc + piece >= target) {
            b = mid;
        } else {
            acc += piece;
            a = mid;
        }
    }
    return 0.5 * (a + b);
}

double solve_inverse_integral_downward(const Modulus& mu, double log_hi, double target,
                                       double log_floor, const QuadratureOptions& opts) {
    if (!(target >= 0.0)) {
        throw DomainError("solve_inverse_integral_downward: target must be nonnegative");
    }
    if (target == 0.0) {
        return log_hi;
    }
    double acc = 0.0;
    double b = log_hi;
    double a = next_down(b);
    for (;;) {
        if (b <= log_floor) {
            return -std::numeric_limits<double>::infinity();
        }
        a = std::max(a, log_floor);
        const double piece = inverse_integral(mu, a, b, opts);
        if (acc + piece >= target) {
            break;
        }
        acc += piece;
        b = a;
        a = next_down(b);
    }
    for (int iter = 0; iter < 400 && b - a > bisection_tolerance(a); ++iter) {
        const double mid = 0.5 * (a + b);
        const double piece = inverse_integral(mu, mid, b, opts);
        if (acc + piece >= target) {
            a = mid;
        } else {
            acc += piece;
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

} // namespace invlim

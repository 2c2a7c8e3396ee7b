#include "invlim/admissibility.hpp"

#include "invlim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace invlim {

namespace {

constexpr double kGoldenRatio = 0.6180339887498949;

// Minimizes F over [lo, hi] (both in ln eps): grid scan, then golden section
// on the two cells around the best grid point.
template <class F>
EpsMinimum minimize_log_eps(const F& objective, double lo, double hi, const EpsSearch& search) {
    if (!(lo < hi)) {
        return {std::exp(hi), objective(hi)};
    }
    const double decades = (hi - lo) / std::numbers::ln10;
    const int n = std::max(2, static_cast<int>(std::ceil(decades * search.grid_points_per_decade)) + 1);
    const double step = (hi - lo) / (n - 1);

    double best_le = hi;
    double best_val = objective(hi);
    int best_i = n - 1;
    for (int i = 0; i < n - 1; ++i) {
        const double le = lo + i * step;
        const double val = objective(le);
        if (val < best_val) {
            best_val = val;
            best_le = le;
            best_i = i;
        }
    }

    double a = best_i > 0 ? lo + (best_i - 1) * step : lo;
    double b = best_i < n - 1 ? lo + (best_i + 1) * step : hi;
    double c = b - kGoldenRatio * (b - a);
    double d = a + kGoldenRatio * (b - a);
    double fc = objective(c);
    double fd = objective(d);
    while (b - a > search.refinement_tolerance) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kGoldenRatio * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kGoldenRatio * (b - a);
            fd = objective(d);
        }
    }
    if (fc < best_val) {
        best_val = fc;
        best_le = c;
    }
    if (fd < best_val) {
        best_val = fd;
        best_le = d;
    }
    return {std::exp(best_le), best_val};
}

// ln theta(1/eps) with 1/eps clamped onto the profile's domain against round-off.
double log_theta_inv_eps(const ThetaBound& theta, double le) {
    const double p = std::clamp(std::exp(-le), theta.p0(), theta.max_p());
    return theta.log_value(p);
}

double search_lower_log_eps(const ThetaBound& theta, const EpsSearch& search) {
    double eps_lo = search.eps_min;
    if (std::isfinite(theta.max_p())) {
        eps_lo = std::max(eps_lo, 1.0 / theta.max_p());
    }
    return std::log(eps_lo);
}

} // namespace

BetaContext BetaContext::make(double M, ThetaBound theta, EpsSearch search) {
    BetaContext ctx;
    ctx.M = M;
    ctx.p0 = theta.p0();
    ctx.theta = std::move(theta);
    ctx.search = search;
    ctx.validate();
    return ctx;
}

void BetaContext::validate() const {
    if (!(M > 0.0) || !std::isfinite(M)) {
        throw DomainError("M must be a positive finite real");
    }
    if (!(p0 > 1.0)) {
        throw DomainError("p0 must exceed 1");
    }
    if (p0 < theta.p0()) {
        throw DomainError("context p0 lies below the domain of theta");
    }
    if (!(search.eps_min > 0.0) || !(search.eps_min < 1.0 / p0)) {
        throw DomainError("eps_min must lie in (0, 1/p0)");
    }
    if (search.grid_points_per_decade < 1 || !(search.refinement_tolerance > 0.0)) {
        throw DomainError("invalid eps search settings");
    }
}

double log_beta_eps(const BetaContext& ctx, double eps, double log_x) {
    if (!(eps > 0.0) || eps > (1.0 / ctx.p0) * (1.0 + 1e-15)) {
        std::ostringstream msg;
        msg << "eps = " << eps << " outside (0, 1/p0] with p0 = " << ctx.p0;
        throw DomainError(msg.str());
    }
    const double le = std::log(eps);
    return eps * std::log(ctx.M) + (1.0 - eps) * log_x - le + log_theta_inv_eps(ctx.theta, le);
}

double eval_beta_eps(const BetaContext& ctx, double eps, double x) {
    if (!(x > 0.0)) {
        throw DomainError("beta_eps requires x > 0");
    }
    return std::exp(log_beta_eps(ctx, eps, std::log(x)));
}

EpsMinimum minimize_beta(const BetaContext& ctx, double log_x) {
    const double log_m = std::log(ctx.M);
    const ThetaBound& theta = ctx.theta;
    const auto objective = [&](double le) {
        const double eps = std::exp(le);
        return eps * (log_m - log_x) - le + log_theta_inv_eps(theta, le);
    };
    const double hi = -std::log(ctx.p0);
    const double lo = std::min(search_lower_log_eps(theta, ctx.search), hi);
    return minimize_log_eps(objective, lo, hi, ctx.search);
}

double log_beta_ratio(const BetaContext& ctx, double log_x) {
    return minimize_beta(ctx, log_x).log_value;
}

double log_beta(const BetaContext& ctx, double log_x) { return log_x + log_beta_ratio(ctx, log_x); }

double eval_beta(const BetaContext& ctx, double x) {
    if (!(x > 0.0)) {
        throw DomainError("beta requires x > 0");
    }
    return std::exp(log_beta(ctx, std::log(x)));
}

EpsMinimum minimize_psi(const ThetaBound& theta, double log_x, const EpsSearch& search) {
    if (!(log_x >= 0.0)) {
        throw DomainError("psi requires x >= 1");
    }
    const auto objective = [&](double le) {
        return std::exp(le) * log_x - le + log_theta_inv_eps(theta, le);
    };
    const double hi = -std::log(theta.p0());
    const double lo = std::min(search_lower_log_eps(theta, search), hi);
    return minimize_log_eps(objective, lo, hi, search);
}

double eval_psi(const ThetaBound& theta, double x, const EpsSearch& search) {
    if (!(x >= 1.0)) {
        throw DomainError("psi requires x >= 1");
    }
    return std::exp(minimize_psi(theta, std::log(x), search).log_value);
}

Modulus beta_modulus(const BetaContext& ctx) {
    ctx.validate();
    return Modulus::from_log_ratio([ctx](double log_s) { return log_beta_ratio(ctx, log_s); });
}

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::NumericallyDivergent:
        return "NumericallyDivergent";
    case Verdict::NumericallyConvergent:
        return "NumericallyConvergent";
    case Verdict::Inconclusive:
        return "Inconclusive";
    }
    return "Inconclusive";
}

double CutoffSequence::decades() const { return (count - 1) * std::log10(depth_ratio); }

void CutoffSequence::validate() const {
    if (!(initial_depth > 0.0) || !(depth_ratio > 1.0)) {
        throw DomainError("cutoff sequence needs initial_depth > 0 and depth_ratio > 1");
    }
    if (count < 5) {
        throw DomainError("cutoff sequence needs at least 5 cutoffs");
    }
    if (decades() < 6.0 - 1e-12) {
        throw DomainError("cutoff sequence must span at least 6 decades of depth");
    }
}

AdmissibilityVerdict classify_divergence(const Modulus& mu, const CutoffSequence& cutoffs,
                                         double threshold, const QuadratureOptions& opts) {
    cutoffs.validate();
    if (!(threshold > 0.0)) {
        throw DomainError("growth threshold must be positive");
    }
    AdmissibilityVerdict out;
    std::vector<double> increments;
    double depth = cutoffs.initial_depth;
    double value = inverse_integral(mu, -depth, 0.0, opts);
    out.partial_integrals.push_back({-depth, value});
    for (int k = 1; k < cutoffs.count; ++k) {
        const double next_depth = depth * cutoffs.depth_ratio;
        const double inc = inverse_integral(mu, -next_depth, -depth, opts);
        increments.push_back(inc);
        value += inc;
        out.partial_integrals.push_back({-next_depth, value});
        depth = next_depth;
    }

    const double log_ratio = std::log(cutoffs.depth_ratio);
    out.growth_per_decade = increments.back() / std::log10(cutoffs.depth_ratio);
    const std::size_t n = increments.size();
    for (std::size_t j = n - 4; j + 1 < n; ++j) {
        double kappa = std::numeric_limits<double>::infinity();
        if (increments[j] > 0.0 && increments[j + 1] > 0.0) {
            kappa = -std::log(increments[j + 1] / increments[j]) / log_ratio;
        }
        out.tail_exponents.push_back(kappa);
    }
    const bool all_small = std::all_of(out.tail_exponents.begin(), out.tail_exponents.end(),
                                       [&](double k) { return k <= threshold; });
    const bool all_large = std::all_of(out.tail_exponents.begin(), out.tail_exponents.end(),
                                       [&](double k) { return k >= 2.0 * threshold; });
    if (all_small) {
        out.verdict = Verdict::NumericallyDivergent;
    } else if (all_large) {
        out.verdict = Verdict::NumericallyConvergent;
    }
    return out;
}

AdmissibilityVerdict check_admissible(const BetaContext& ctx, const CutoffSequence& cutoffs,
                                      double growth_threshold) {
    ctx.validate();
    cutoffs.validate();
    BetaContext wide = ctx;
    const double deepest =
        cutoffs.initial_depth * std::pow(cutoffs.depth_ratio, cutoffs.count - 1) +
        std::abs(std::log(ctx.M));
    wide.search.eps_min = std::min(ctx.search.eps_min, 1e-3 / deepest);
    return classify_divergence(beta_modulus(wide), cutoffs, growth_threshold);
}

HolderChainResult check_holder_chain(std::span<const double> f, std::span<const double> g,
                                     double cell_measure, double M, std::span<const double> eps_list,
                                     double rel_tol) {
    if (f.size() != g.size()) {
        throw DomainError("holder chain: f and g must share a grid");
    }
    if (!(cell_measure > 0.0)) {
        throw DomainError("holder chain: cell measure must be positive");
    }
    double f_max = 0.0;
    double g_max = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] < 0.0 || g[i] < 0.0 || !std::isfinite(f[i]) || !std::isfinite(g[i])) {
            throw DomainError("holder chain: samples must be finite and nonnegative");
        }
        f_max = std::max(f_max, f[i]);
        g_max = std::max(g_max, g[i]);
    }
    if (M < f_max) {
        throw DomainError("holder chain: M must bound max f");
    }

    double fg = 0.0;
    double f_l1 = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        fg += f[i] * g[i];
        f_l1 += f[i];
    }
    fg *= cell_measure;
    f_l1 *= cell_measure;

    HolderChainResult out;
    out.min_slack = std::numeric_limits<double>::infinity();
    for (double eps : eps_list) {
        if (!(eps > 0.0 && eps < 1.0)) {
            throw DomainError("holder chain: eps must lie in (0, 1)");
        }
        const double m_eps = std::pow(M, eps);
        double middle = 0.0;
        double g_sum = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            middle += std::pow(f[i], 1.0 - eps) * g[i];
            if (g_max > 0.0) {
                g_sum += std::pow(g[i] / g_max, 1.0 / eps);
            }
        }
        middle *= m_eps * cell_measure;
        const double g_norm = g_max > 0.0 ? g_max * std::pow(g_sum * cell_measure, eps) : 0.0;
        const double right = m_eps * std::pow(f_l1, 1.0 - eps) * g_norm;

        const double gap1 = middle - fg;
        const double gap2 = right - middle;
        out.min_slack = std::min({out.min_slack, gap1, gap2});
        const double scale = std::max({std::abs(fg), std::abs(middle), std::abs(right)});
        if (gap1 < -rel_tol * scale || gap2 < -rel_tol * scale) {
            out.holds = false;
        }
    }
    if (eps_list.empty()) {
        out.min_slack = 0.0;
    }
    return out;
}

} // namespace invlim

#pragma once

#include "invlim/quadrature.hpp"
#include "invlim/theta.hpp"

#include <span>
#include <string>
#include <vector>

namespace invlim {

/// Settings of the numeric infimum over eps: a log-spaced grid scan over
/// [eps_min, 1/p0] followed by golden-section refinement (in ln eps) around
/// the best grid point.
struct EpsSearch {
    int grid_points_per_decade = 40;
    double eps_min = 1e-8;
    double refinement_tolerance = 1e-8;
};

/// (M, phi, p0) with phi(p) = p * theta(p).
struct BetaContext {
    double M = 1.0;
    ThetaBound theta = ThetaBound::constant(1.0);
    double p0 = 2.0;
    EpsSearch search{};

    /// Context whose p0 is taken from theta.
    static BetaContext make(double M, ThetaBound theta, EpsSearch search = {});

    /// Throws DomainError if M <= 0, p0 < theta.p0(), or eps_min >= 1/p0.
    void validate() const;
};

/// Location and value of the infimum over eps.
struct EpsMinimum {
    double eps;
    double log_value;
};

double eval_beta_eps(const BetaContext& ctx, double eps, double x);
/// ln beta_eps(e^{log_x}); no range restriction on log_x.
double log_beta_eps(const BetaContext& ctx, double eps, double log_x);

double eval_beta(const BetaContext& ctx, double x);
/// Minimizing eps and ln(beta(x) / x) at x = e^{log_x}.
EpsMinimum minimize_beta(const BetaContext& ctx, double log_x);
double log_beta(const BetaContext& ctx, double log_x);
/// ln(beta(x) / x) at x = e^{log_x}, free of the cancellation in log_beta - log_x.
double log_beta_ratio(const BetaContext& ctx, double log_x);

/// psi(x) = inf over eps in (0, 1/p0] of (x^eps / eps) theta(1/eps), x >= 1,
/// with p0 = theta.p0().
double eval_psi(const ThetaBound& theta, double x, const EpsSearch& search = {});
EpsMinimum minimize_psi(const ThetaBound& theta, double log_x, const EpsSearch& search = {});

/// beta as a Modulus (log form), for the quadrature and root-finding helpers.
Modulus beta_modulus(const BetaContext& ctx);

enum class Verdict { NumericallyDivergent, NumericallyConvergent, Inconclusive };

std::string to_string(Verdict v);

/// Cutoffs delta_k = exp(-depth_k) with depth_k = initial_depth * depth_ratio^k,
/// k = 0..count-1. The sequence is geometric in ln(1/delta), so each step
/// of ratio 10 is one decade of depth.
struct CutoffSequence {
    double initial_depth = 1.0;
    double depth_ratio = 10.0;
    int count = 11;

    double decades() const;
    void validate() const;
};

struct PartialIntegral {
    double log_cutoff;  ///< ln delta_k
    double value;       ///< integral over [delta_k, 1] of ds / beta(s)
};

/// A numerical heuristic, never a proof of (non-)admissibility.
struct AdmissibilityVerdict {
    Verdict verdict = Verdict::Inconclusive;
    std::vector<PartialIntegral> partial_integrals;
    /// Last increment of the partial integrals, normalised per decade of depth.
    double growth_per_decade = 0.0;
    /// Local decay exponents kappa_j = -log(I_{j+2} - I_{j+1})/(I_{j+1} - I_j) / log(ratio)
    /// over the last three steps; a tail ~ u^{-(1+kappa)} in the depth u.
    std::vector<double> tail_exponents;
};

/// Classifies the integral of ds/mu(s) on (0, 1] from its partial integrals.
/// Divergent when every tail exponent of the last three steps is <= threshold,
/// convergent when every one is >= 2 * threshold, inconclusive otherwise.
AdmissibilityVerdict classify_divergence(const Modulus& mu, const CutoffSequence& cutoffs,
                                         double threshold, const QuadratureOptions& opts = {});

/// Numeric version of the admissibility test: whether the integral of
/// ds/beta(s) over (0, 1] diverges. The eps search range of ctx is widened
/// downward when needed so the infimum stays interior at the deepest cutoff.
AdmissibilityVerdict check_admissible(const BetaContext& ctx, const CutoffSequence& cutoffs = {},
                                      double growth_threshold = 0.2);

struct HolderChainResult {
    bool holds = true;
    /// min over eps of both gaps of int fg <= M^eps int f^(1-eps) g <= M^eps |f|_1^(1-eps) |g|_(1/eps).
    double min_slack = 0.0;
};

/// Discrete check of the Hoelder interpolation chain on samples with a common
/// cell measure. Throws DomainError on negative samples, size mismatch,
/// eps outside (0, 1) or M < max f.
HolderChainResult check_holder_chain(std::span<const double> f, std::span<const double> g,
                                     double cell_measure, double M, std::span<const double> eps_list,
                                     double rel_tol = 1e-12);

} // namespace invlim

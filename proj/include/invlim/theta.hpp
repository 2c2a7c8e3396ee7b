#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace invlim {

enum class ThetaKind { Constant, IteratedLog, PowerLaw, Tabulated };

/// A vorticity-growth profile p -> theta(p) on [p0, inf), scaled by a
/// positive multiplier C. Construct through the named factories; each one
/// rejects a p0 at which the profile is not strictly positive.
class ThetaBound {
public:
    static ThetaBound constant(double scale, double p0 = 2.0);
    /// theta_m(p) = ln p * ln ln p * ... * ln^m p; m = 0 is the constant 1.
    static ThetaBound iterated_log(int m, double p0, double scale = 1.0);
    static ThetaBound power_law(double exponent, double p0 = 2.0, double scale = 1.0);
    /// Monotone piecewise-cubic (Fritsch-Carlson) through (p, theta) samples.
    /// The domain is [first p, last p].
    static ThetaBound tabulated(std::vector<std::pair<double, double>> samples, double scale = 1.0);

    /// Smallest p0 > 1 on the half-integer lattice where every factor of theta_m is positive.
    static double minimal_p0(int iterated_log_order);

    ThetaKind kind() const { return kind_; }
    double p0() const { return p0_; }
    double scale() const { return scale_; }
    int order() const { return order_; }
    double exponent() const { return exponent_; }
    /// Largest p at which the profile may be evaluated (finite only for tables).
    double max_p() const;

    /// C * theta(p). Throws DomainError for p < p0 or beyond a table.
    double operator()(double p) const;
    /// ln(C * theta(p)), accurate for p far beyond the double range of theta itself.
    double log_value(double p) const;

    /// Same profile on a new domain start (used when a context fixes p0).
    ThetaBound with_p0(double p0) const;
    ThetaBound scaled(double factor) const;

    std::string describe() const;

private:
    ThetaBound() = default;
    void check_positive_at_p0() const;
    double table_value(double p) const;

    ThetaKind kind_ = ThetaKind::Constant;
    double p0_ = 2.0;
    double scale_ = 1.0;
    int order_ = 0;
    double exponent_ = 0.0;
    std::vector<double> table_p_;
    std::vector<double> table_theta_;
    std::vector<double> table_slope_;
};

double eval_theta(const ThetaBound& theta, double p);

/// Parses `const:C`, `iterlog:m`, `pow:a` or `table:PATH` (CSV with a
/// `p,theta` header). For the first three the given p0 is used; when p0 is
/// not positive the smallest valid default is chosen.
ThetaBound parse_theta(std::string_view spec, double p0 = 0.0);

/// Reads a two-column CSV (header row required) of (p, theta) samples.
std::vector<std::pair<double, double>> read_theta_table(const std::string& path);

} // namespace invlim

#pragma once

#include "invlim/field.hpp"

#include <string>
#include <utility>

namespace invlim {

/// Smooth radial profile g supported in [r_min, r_max]. The plain profile
/// is a single windowed Gaussian ring; the neutralized one pairs a positive inner
/// ring with a negative outer ring so that int_0^inf rho g(rho) drho = 0.
struct RadialProfile {
    double amplitude = 1.0;
    double r_min = 0.1;
    double r_max = 1.5;
    bool neutralized = true;

    double operator()(double r) const;
    /// G(r) = int_0^r rho g(rho) drho.
    double circulation_integral(double r) const;
    /// Throws DomainError unless 0 < r_min < r_max.
    void validate() const;
};

/// The stationary field sigma = (-x2, x1) / r^2 * G(r) evaluated in the plane,
/// relative to the profile centre.
std::pair<double, double> stationary_velocity(const RadialProfile& g, double x, double y);

/// Samples sigma and its vorticity g(r) on the grid, centred at (cx, cy).
/// Requires r_max < L/4. The returned vorticity is mean-corrected.
std::pair<VectorField, ScalarField> stationary_field(const RadialProfile& g, double cx, double cy,
                                                     const Grid& grid);

enum class SingularProfile { LogLog, Log, SmoothBump };

/// Radial vorticity centred in the box: A ln ln(e^e r_c / r), A ln(e r_c / r) or a
/// bump, times a C-infinity cutoff equal to 1 for r <= r_c/2 and 0 for r >= r_c.
/// Radii below `cap` (<= 0 selects one grid spacing) take the value at `cap`.
/// Mean-corrected to zero. Requires core_radius < L/8.
ScalarField singular_vorticity(SingularProfile profile, double amplitude, double core_radius,
                               double cap, const Grid& grid);

/// -2 A cos(k0 x) cos(k0 y), k0 = 2 pi / L.
ScalarField taylor_green_vorticity(const Grid& grid, double amplitude = 1.0);

/// Fixed arrangement of four Gaussian vortices (two of each sign), mean-corrected.
ScalarField gaussian_vortices(const Grid& grid, double amplitude = 1.0, double core_radius = 0.3);

/// Initial-data descriptor as used by SimConfig and the config files.
struct InitialData {
    enum class Kind { TaylorGreen, Stationary, LogLog, Log, SmoothBump, GaussianVortices };
    Kind kind = Kind::TaylorGreen;
    double amplitude = 1.0;
    double core_radius = 0.5;  ///< singular profiles and Gaussian vortices
    double cap = 0.0;          ///< singular profiles; <= 0 means one grid cell
    double r_min = 0.1;        ///< stationary profile
    double r_max = 1.5;

    ScalarField build(const Grid& grid) const;
};

InitialData::Kind parse_initial_kind(const std::string& name);
std::string to_string(InitialData::Kind kind);

} // namespace invlim

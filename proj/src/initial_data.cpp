#include "invlim/initial_data.hpp"

#include "invlim/errors.hpp"
#include "invlim/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace invlim {

namespace {

double bump(double z) {
    if (std::abs(z) >= 1.0) {
        return 0.0;
    }
    return std::exp(1.0 - 1.0 / (1.0 - z * z));
}

// C-infinity step: 0 for t <= 0, 1 for t >= 1.
double smooth_step(double t) {
    if (t <= 0.0) {
        return 0.0;
    }
    if (t >= 1.0) {
        return 1.0;
    }
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

// Gaussian ring with a C-infinity window: equal to exp(-z^2) for |z| <= 4.5,
// zero for |z| >= 5.5. Its spectrum is Gaussian to ~1e-9, which keeps the
// sampled field resolved at modest N.
double ring(double z) {
    const double a = std::abs(z);
    if (a >= 5.5) {
        return 0.0;
    }
    return std::exp(-z * z) * smooth_step(5.5 - a);
}

constexpr double ring_halfwidth = 5.5;

double ring_moment(double c, double w) {
    return integrate_adaptive([&](double r) { return r * ring((r - c) / w); }, c - ring_halfwidth * w,
                              c + ring_halfwidth * w, QuadratureOptions{1e-13, 1e-16, 48, 200000});
}

// Two rings of width w centred at c1 < c2; the outer one is scaled by kappa
// so the circulation cancels. A single ring uses c1 only.
struct Annuli {
    double c1, c2, w, kappa;
};

Annuli annuli_of(const RadialProfile& g) {
    const double span = g.r_max - g.r_min;
    if (!g.neutralized) {
        const double w = span / (2.0 * ring_halfwidth);
        return {0.5 * (g.r_min + g.r_max), 0.0, w, 0.0};
    }
    const double w = span / (2.0 * ring_halfwidth + 2.0);
    const double c1 = g.r_min + ring_halfwidth * w;
    const double c2 = g.r_max - ring_halfwidth * w;
    return {c1, c2, w, ring_moment(c1, w) / ring_moment(c2, w)};
}

double annuli_value(const Annuli& a, double r) {
    const double inner = ring((r - a.c1) / a.w);
    return a.kappa == 0.0 ? inner : inner - a.kappa * ring((r - a.c2) / a.w);
}

// Cumulative G on a fine radial table, completed by one Gauss-Legendre panel.
class CirculationTable {
public:
    explicit CirculationTable(const RadialProfile& g, int nodes = 2048) : g_(g), a_(annuli_of(g)) {
        step_ = (g.r_max - g.r_min) / nodes;
        table_.resize(nodes + 1, 0.0);
        const auto integrand = [&](double r) { return r * g_.amplitude * annuli_value(a_, r); };
        for (int k = 0; k < nodes; ++k) {
            const double a = g.r_min + k * step_;
            table_[k + 1] = table_[k] + gauss_legendre_panel(integrand, a, a + step_);
        }
    }
    double operator()(double r) const {
        if (r <= g_.r_min) {
            return 0.0;
        }
        if (r >= g_.r_max) {
            return table_.back();
        }
        const auto k = static_cast<std::size_t>((r - g_.r_min) / step_);
        const double a = g_.r_min + k * step_;
        return table_[k] +
               gauss_legendre_panel([&](double rho) { return rho * g_.amplitude * annuli_value(a_, rho); }, a, r);
    }

private:
    RadialProfile g_;
    Annuli a_;
    double step_;
    std::vector<double> table_;
};

double periodic_offset(double x, double centre, double length) {
    double d = x - centre;
    d -= length * std::round(d / length);
    return d;
}

} // namespace

void RadialProfile::validate() const {
    if (!(r_min > 0.0) || !(r_max > r_min)) {
        throw DomainError("radial profile needs 0 < r_min < r_max");
    }
}

double RadialProfile::operator()(double r) const {
    if (r <= r_min || r >= r_max) {
        return 0.0;
    }
    return amplitude * annuli_value(annuli_of(*this), r);
}

double RadialProfile::circulation_integral(double r) const {
    validate();
    if (r <= r_min) {
        return 0.0;
    }
    const double upper = std::min(r, r_max);
    const Annuli a = annuli_of(*this);
    return amplitude * integrate_adaptive([&](double rho) { return rho * annuli_value(a, rho); }, r_min,
                                          upper, QuadratureOptions{1e-13, 1e-16, 48, 200000});
}

std::pair<double, double> stationary_velocity(const RadialProfile& g, double x, double y) {
    const double r2 = x * x + y * y;
    if (r2 == 0.0) {
        return {0.0, 0.0};
    }
    const double G = g.circulation_integral(std::sqrt(r2));
    return {-y / r2 * G, x / r2 * G};
}

std::pair<VectorField, ScalarField> stationary_field(const RadialProfile& g, double cx, double cy,
                                                     const Grid& grid) {
    grid.validate();
    g.validate();
    if (g.r_max >= grid.box_length / 4.0) {
        throw DomainError("stationary field support must lie within L/4 of its centre");
    }
    const Annuli a = annuli_of(g);
    const auto profile = [&](double r) {
        return (r <= g.r_min || r >= g.r_max) ? 0.0 : g.amplitude * annuli_value(a, r);
    };
    const CirculationTable table(g);
    VectorField sigma(grid);
    ScalarField omega(grid);
    const double h = grid.spacing();
    for (std::size_t iy = 0; iy < grid.n; ++iy) {
        const double y = periodic_offset(iy * h, cy, grid.box_length);
        for (std::size_t ix = 0; ix < grid.n; ++ix) {
            const double x = periodic_offset(ix * h, cx, grid.box_length);
            const double r2 = x * x + y * y;
            const std::size_t idx = iy * grid.n + ix;
            if (r2 > 0.0) {
                const double G = table(std::sqrt(r2));
                sigma.u[idx] = -y / r2 * G;
                sigma.v[idx] = x / r2 * G;
            }
            omega.values[idx] = profile(std::sqrt(r2));
        }
    }
    omega.remove_mean();
    return {std::move(sigma), std::move(omega)};
}

ScalarField singular_vorticity(SingularProfile profile, double amplitude, double core_radius,
                               double cap, const Grid& grid) {
    grid.validate();
    if (!(core_radius > 0.0) || core_radius >= grid.box_length / 8.0) {
        throw DomainError("singular vorticity core radius must lie in (0, L/8)");
    }
    const double floor_r = cap > 0.0 ? cap : grid.spacing();
    const double c = 0.5 * grid.box_length;
    const double h = grid.spacing();
    ScalarField omega(grid);
    for (std::size_t iy = 0; iy < grid.n; ++iy) {
        const double y = iy * h - c;
        for (std::size_t ix = 0; ix < grid.n; ++ix) {
            const double x = ix * h - c;
            const double r = std::hypot(x, y);
            if (r >= core_radius) {
                continue;
            }
            const double rr = std::max(r, floor_r);
            const double cutoff = smooth_step(2.0 * (1.0 - r / core_radius));
            double value = 0.0;
            switch (profile) {
            case SingularProfile::LogLog:
                value = std::log(std::numbers::e + std::log(core_radius / rr));
                break;
            case SingularProfile::Log:
                value = std::log(std::numbers::e * core_radius / rr);
                break;
            case SingularProfile::SmoothBump:
                value = bump(r / core_radius);
                break;
            }
            omega.at(ix, iy) = amplitude * value * cutoff;
        }
    }
    omega.remove_mean();
    return omega;
}

ScalarField taylor_green_vorticity(const Grid& grid, double amplitude) {
    grid.validate();
    const double k0 = 2.0 * std::numbers::pi / grid.box_length;
    const double h = grid.spacing();
    ScalarField omega(grid);
    for (std::size_t iy = 0; iy < grid.n; ++iy) {
        for (std::size_t ix = 0; ix < grid.n; ++ix) {
            omega.at(ix, iy) = -2.0 * amplitude * std::cos(k0 * ix * h) * std::cos(k0 * iy * h);
        }
    }
    return omega;
}

ScalarField gaussian_vortices(const Grid& grid, double amplitude, double core_radius) {
    grid.validate();
    struct Vortex {
        double x, y, strength;
    };
    // positions as fractions of the box, confined to the central half
    const Vortex vortices[] = {
        {0.40, 0.42, 1.0}, {0.60, 0.45, -0.8}, {0.47, 0.62, 0.9}, {0.58, 0.64, -1.1}};
    const double L = grid.box_length;
    const double h = grid.spacing();
    ScalarField omega(grid);
    for (const auto& vx : vortices) {
        for (std::size_t iy = 0; iy < grid.n; ++iy) {
            const double dy = periodic_offset(iy * h, vx.y * L, L);
            for (std::size_t ix = 0; ix < grid.n; ++ix) {
                const double dx = periodic_offset(ix * h, vx.x * L, L);
                omega.at(ix, iy) += amplitude * vx.strength *
                                    std::exp(-(dx * dx + dy * dy) / (core_radius * core_radius));
            }
        }
    }
    omega.remove_mean();
    return omega;
}

ScalarField InitialData::build(const Grid& grid) const {
    switch (kind) {
    case Kind::TaylorGreen:
        return taylor_green_vorticity(grid, amplitude);
    case Kind::Stationary: {
        RadialProfile g{amplitude, r_min, r_max, true};
        return stationary_field(g, 0.5 * grid.box_length, 0.5 * grid.box_length, grid).second;
    }
    case Kind::LogLog:
        return singular_vorticity(SingularProfile::LogLog, amplitude, core_radius, cap, grid);
    case Kind::Log:
        return singular_vorticity(SingularProfile::Log, amplitude, core_radius, cap, grid);
    case Kind::SmoothBump:
        return singular_vorticity(SingularProfile::SmoothBump, amplitude, core_radius, cap, grid);
    case Kind::GaussianVortices:
        return gaussian_vortices(grid, amplitude, core_radius);
    }
    throw DomainError("unknown initial data kind");
}

InitialData::Kind parse_initial_kind(const std::string& name) {
    using K = InitialData::Kind;
    if (name == "taylor_green") return K::TaylorGreen;
    if (name == "stationary") return K::Stationary;
    if (name == "loglog") return K::LogLog;
    if (name == "log") return K::Log;
    if (name == "smooth_bump") return K::SmoothBump;
    if (name == "gaussian_vortices") return K::GaussianVortices;
    throw DomainError("unknown initial data '" + name + "'");
}

std::string to_string(InitialData::Kind kind) {
    using K = InitialData::Kind;
    switch (kind) {
    case K::TaylorGreen: return "taylor_green";
    case K::Stationary: return "stationary";
    case K::LogLog: return "loglog";
    case K::Log: return "log";
    case K::SmoothBump: return "smooth_bump";
    case K::GaussianVortices: return "gaussian_vortices";
    }
    return "unknown";
}

} // namespace invlim

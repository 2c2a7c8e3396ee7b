#include "doctest.h"

#include "invlim/errors.hpp"
#include "invlim/initial_data.hpp"
#include "invlim/quadrature.hpp"
#include "invlim/spectral.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

using namespace invlim;

namespace {

constexpr double pi = std::numbers::pi;

template <class F>
ScalarField sample(const Grid& g, F f) {
    ScalarField out(g);
    const double h = g.spacing();
    for (std::size_t iy = 0; iy < g.n; ++iy) {
        for (std::size_t ix = 0; ix < g.n; ++ix) {
            out.at(ix, iy) = f(ix * h, iy * h);
        }
    }
    return out;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

// Velocity L2 norm from a direct O(N^4) DFT: |v|^2 = L^2 sum_k |w_k|^2 / |k|^2,
// with w_k the DFT divided by N^2 and Nyquist modes excluded.
double naive_velocity_l2(const ScalarField& w) {
    const std::size_t n = w.grid.n;
    const double L = w.grid.box_length;
    const long half = static_cast<long>(n / 2);
    double total = 0.0;
    for (long my = -half + 1; my < half; ++my) {
        for (long mx = -half + 1; mx < half; ++mx) {
            if (mx == 0 && my == 0) {
                continue;
            }
            std::complex<double> c = 0.0;
            for (std::size_t iy = 0; iy < n; ++iy) {
                for (std::size_t ix = 0; ix < n; ++ix) {
                    const double phase = -2.0 * pi * (mx * double(ix) + my * double(iy)) / double(n);
                    c += w.at(ix, iy) * std::polar(1.0, phase);
                }
            }
            c /= double(n * n);
            const double k0 = 2.0 * pi / L;
            const double k2 = k0 * k0 * double(mx * mx + my * my);
            total += std::norm(c) / k2;
        }
    }
    return std::sqrt(L * L * total);
}

} // namespace

TEST_CASE("biot_savart of sin x is (0, -cos x)") {
    const Grid g{64, 2.0 * pi};
    const auto w = sample(g, [](double x, double) { return std::sin(x); });
    const auto v = biot_savart(w);
    const auto expect_v = sample(g, [](double x, double) { return -std::cos(x); });
    CHECK(max_abs_diff(v.u, std::vector<double>(g.size(), 0.0)) < 1e-12);
    CHECK(max_abs_diff(v.v, expect_v.values) < 1e-12);
}

TEST_CASE("biot_savart of zero is zero") {
    const Grid g{32, 2.0 * pi};
    const auto v = biot_savart(ScalarField(g));
    CHECK(lp_norm(v, 2.0) == 0.0);
}

TEST_CASE("Taylor-Green velocity and curl round trip") {
    const Grid g{128, 2.0 * pi};
    const auto w = taylor_green_vorticity(g);
    const auto v = biot_savart(w);
    const auto eu = sample(g, [](double x, double y) { return std::cos(x) * std::sin(y); });
    const auto ev = sample(g, [](double x, double y) { return -std::sin(x) * std::cos(y); });
    CHECK(max_abs_diff(v.u, eu.values) < 1e-12);
    CHECK(max_abs_diff(v.v, ev.values) < 1e-12);
    CHECK(max_abs_diff(curl(v).values, w.values) < 1e-12);
    CHECK(lp_norm(divergence(v), INFINITY) < 1e-10);
}

TEST_CASE("biot_savart rejects a field with nonzero mean") {
    const Grid g{16, 2.0 * pi};
    const auto w = sample(g, [](double x, double) { return 1.0 + std::sin(x); });
    CHECK_THROWS_AS(biot_savart(w), DomainError);
}

TEST_CASE("random fields: divergence free, curl recovers omega, Parseval") {
    const Grid g{16, 3.0};
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 3; ++trial) {
        // smooth random field: a few low modes so Nyquist content is zero
        ScalarField w(g);
        for (int m = 0; m < 6; ++m) {
            const double a = nd(rng), kx = std::round(3 * nd(rng)), ky = std::round(3 * nd(rng));
            const double ph = nd(rng);
            const double k0 = 2.0 * pi / g.box_length;
            const auto part = sample(g, [&](double x, double y) { return a * std::cos(k0 * (kx * x + ky * y) + ph); });
            for (std::size_t i = 0; i < g.size(); ++i) w.values[i] += part.values[i];
        }
        w.remove_mean();
        const auto v = biot_savart(w);
        CHECK(lp_norm(divergence(v), INFINITY) < 1e-10);
        CHECK(max_abs_diff(curl(v).values, w.values) < 1e-10);
        CHECK(lp_norm(v, 2.0) == doctest::Approx(naive_velocity_l2(w)).epsilon(1e-10));
        CHECK(l2_velocity_diff(w, ScalarField(g)) == doctest::Approx(naive_velocity_l2(w)).epsilon(1e-10));
    }
}

TEST_CASE("lp norms") {
    const Grid g{64, 2.0 * pi};
    ScalarField c(g);
    std::fill(c.values.begin(), c.values.end(), -3.0);
    for (double p : {1.0, 2.0, 4.0, 32.0}) {
        CHECK(lp_norm(c, p) == doctest::Approx(3.0 * std::pow(2.0 * pi, 2.0 / p)).epsilon(1e-12));
    }
    CHECK(lp_norm(c, INFINITY) == 3.0);
    const auto s = sample(g, [](double x, double) { return std::sin(x); });
    CHECK(lp_norm(s, 2.0) == doctest::Approx(std::sqrt(2.0 * pi * pi)).epsilon(1e-12));

    // single nonzero cell: |f|_p = |a| h^(2/p)
    ScalarField one(g);
    one.at(3, 5) = 2.5;
    const double h = g.spacing();
    CHECK(lp_norm(one, 2.0) == doctest::Approx(2.5 * h).epsilon(1e-12));
    CHECK(lp_norm(one, 8.0) == doctest::Approx(2.5 * std::pow(h, 0.25)).epsilon(1e-12));
    CHECK(lp_norm(ScalarField(g), 4.0) == 0.0);
}

TEST_CASE("velocity difference of sin x against zero") {
    const Grid g{32, 2.0 * pi};
    const auto w = sample(g, [](double x, double) { return std::sin(x); });
    CHECK(l2_velocity_diff(w, ScalarField(g)) == doctest::Approx(pi * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(l2_velocity_diff(w, w) == 0.0);
}

TEST_CASE("spectral resampling is exact for band-limited fields") {
    const auto f = [](double x, double y) { return std::sin(3 * x) * std::cos(2 * y) + 0.5 * std::cos(x - y); };
    const Grid coarse{32, 2.0 * pi}, fine{64, 2.0 * pi};
    const auto up = resample_spectral(sample(coarse, f), 64);
    CHECK(max_abs_diff(up.values, sample(fine, f).values) < 1e-12);
    const auto down = resample_spectral(sample(fine, f), 32);
    CHECK(max_abs_diff(down.values, sample(coarse, f).values) < 1e-12);
}

TEST_CASE("neutralized radial profile has zero total circulation") {
    RadialProfile g{1.0, 0.1, 1.5, true};
    CHECK(std::abs(g.circulation_integral(1.5)) < 1e-12);
    CHECK(g.circulation_integral(0.8) > 0.0);
    CHECK(g.circulation_integral(0.05) == 0.0);
    RadialProfile plain{1.0, 0.1, 1.5, false};
    CHECK(plain.circulation_integral(2.0) > 0.1);
    CHECK_THROWS_AS((RadialProfile{1.0, 0.0, 1.0, true}.validate()), DomainError);
}

TEST_CASE("stationary field is divergence free and matches Biot-Savart") {
    const Grid g{256, 2.0 * pi};
    RadialProfile prof{1.0, 0.1, 1.5, true};
    const auto [sigma, omega] = stationary_field(prof, pi, pi, g);
    CHECK(std::abs(omega.mean()) < 1e-12);
    const auto v = biot_savart(omega);
    const double scale = lp_norm(sigma, INFINITY);
    CHECK(scale > 0.01);
    CHECK(max_abs_diff(v.u, sigma.u) < 1e-8 * scale);
    CHECK(max_abs_diff(v.v, sigma.v) < 1e-8 * scale);

    // plane formula at one point against direct quadrature of G
    const auto [u1, u2] = stationary_velocity(prof, 0.5, 0.4);
    const double r2 = 0.41;
    CHECK(u1 == doctest::Approx(-0.4 / r2 * prof.circulation_integral(std::sqrt(r2))).epsilon(1e-14));
    CHECK(u2 == doctest::Approx(0.5 / r2 * prof.circulation_integral(std::sqrt(r2))).epsilon(1e-14));

    CHECK_THROWS_AS(stationary_field(RadialProfile{1.0, 0.3, 1.7, true}, pi, pi, g), DomainError);
}

TEST_CASE("singular vorticity profiles") {
    const Grid g{128, 2.0 * pi};
    const double h = g.spacing();
    const auto w = singular_vorticity(SingularProfile::LogLog, 1.0, 0.5, 0.0, g);
    CHECK(std::abs(w.mean()) < 1e-12);
    // centre sample sits at r = 0 and takes the capped value ln ln(e^e rc / h)
    const std::size_t c = g.n / 2;
    CHECK(w.at(c, c) - w.at(0, 0) == doctest::Approx(std::log(std::numbers::e + std::log(0.5 / h))).epsilon(1e-12));
    const auto wl = singular_vorticity(SingularProfile::Log, 2.0, 0.5, 0.1, g);
    CHECK(wl.at(c, c) - wl.at(0, 0) == doctest::Approx(2.0 * std::log(std::numbers::e * 5.0)).epsilon(1e-12));
    CHECK_THROWS_AS(singular_vorticity(SingularProfile::LogLog, 1.0, 0.8, 0.0, g), DomainError);
    const auto v = biot_savart(w);
    CHECK(lp_norm(divergence(v), INFINITY) < 1e-10);
}

TEST_CASE("initial data descriptor") {
    const Grid g{32, 2.0 * pi};
    InitialData d;
    CHECK(max_abs_diff(d.build(g).values, taylor_green_vorticity(g).values) == 0.0);
    CHECK(parse_initial_kind("loglog") == InitialData::Kind::LogLog);
    CHECK(to_string(InitialData::Kind::GaussianVortices) == "gaussian_vortices");
    CHECK_THROWS_AS(parse_initial_kind("vortex"), DomainError);
    CHECK(std::abs(gaussian_vortices(g).mean()) < 1e-12);
}

TEST_CASE("stationary field: zero profile, far field and neutralized decay") {
    const Grid g{64, 2.0 * pi};
    const auto [s0, w0] = stationary_field(RadialProfile{0.0, 0.1, 1.5, true}, pi, pi, g);
    CHECK(lp_norm(s0, INFINITY) == 0.0);
    CHECK(lp_norm(w0, INFINITY) == 0.0);

    // outside the support the plain profile acts as a point vortex of strength c
    const RadialProfile plain{1.0, 0.1, 1.5, false};
    const double c2 = plain.circulation_integral(2.0), c3 = plain.circulation_integral(3.0);
    CHECK(c2 == c3);
    const auto [u, v] = stationary_velocity(plain, 1.2, 1.6);
    CHECK(u == doctest::Approx(-c2 * 1.6 / 4.0).epsilon(1e-14));
    CHECK(v == doctest::Approx(c2 * 1.2 / 4.0).epsilon(1e-14));

    const RadialProfile neutral{1.0, 0.1, 1.5, true};
    for (double r : {1.5, 1.6, 2.0, 5.0}) {
        const auto [a, b] = stationary_velocity(neutral, r, 0.0);
        CHECK(std::hypot(a, b) <= 1e-10);
    }
}

namespace {

// Continuum L^p norm of a mean-corrected radial profile: radial quadrature
// inside the core plus the constant shift over the rest of the box.
template <class F>
double radial_lp_oracle(F omega, double rc, double h_cap, double L, double p) {
    const QuadratureOptions opts{1e-12, 1e-14, 60, 400000};
    const auto split = [&](auto f) {
        double total = 0.0;
        const double cuts[] = {0.0, h_cap, 0.5 * rc, rc};
        for (int i = 0; i < 3; ++i) total += integrate_adaptive(f, cuts[i], cuts[i + 1], opts);
        return total;
    };
    const double mass = split([&](double r) { return 2.0 * pi * r * omega(r); });
    const double m = mass / (L * L);
    const double inner = split([&](double r) { return 2.0 * pi * r * std::pow(std::abs(omega(r) - m), p); });
    return std::pow(inner + std::pow(std::abs(m), p) * (L * L - pi * rc * rc), 1.0 / p);
}

double cutoff(double r, double rc) {
    const double t = 2.0 * (1.0 - r / rc);
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

} // namespace

TEST_CASE("singular vorticity L^p growth") {
    const Grid g{1024, 2.0 * pi};
    const double rc = 0.7, h = g.spacing();
    const auto loglog = singular_vorticity(SingularProfile::LogLog, 1.0, rc, 0.0, g);
    const auto logp = singular_vorticity(SingularProfile::Log, 1.0, rc, 0.0, g);
    const auto smooth = singular_vorticity(SingularProfile::SmoothBump, 1.0, rc, 0.0, g);

    const auto ll = [&](double r) {
        return std::log(std::numbers::e + std::log(rc / std::max(r, h))) * cutoff(r, rc);
    };
    const auto lg = [&](double r) { return std::log(std::numbers::e * rc / std::max(r, h)) * cutoff(r, rc); };

    const double ps[] = {2, 4, 8, 16, 32, 64};
    for (double p : ps) {
        CHECK(lp_norm(loglog, p) == doctest::Approx(radial_lp_oracle(ll, rc, h, g.box_length, p)).epsilon(1e-2));
        CHECK(lp_norm(logp, p) == doctest::Approx(radial_lp_oracle(lg, rc, h, g.box_length, p)).epsilon(1e-2));
    }
    // log-log data grows slower than p^0.2 across the range; log data grows faster
    // than log-log at every step
    CHECK(lp_norm(loglog, 64.0) / lp_norm(loglog, 2.0) < std::pow(32.0, 0.2));
    for (std::size_t i = 0; i + 1 < std::size(ps); ++i) {
        CHECK(lp_norm(logp, ps[i + 1]) / lp_norm(logp, ps[i]) > lp_norm(loglog, ps[i + 1]) / lp_norm(loglog, ps[i]));
    }
    CHECK(lp_norm(smooth, 64.0) / lp_norm(smooth, 2.0) < 10.0);
}

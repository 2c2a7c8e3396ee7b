#include "invlim/spectral.hpp"

#include "invlim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace invlim {

Wavenumbers::Wavenumbers(const Grid& grid) {
    grid.validate();
    auto& tr = transform_for(grid.n);
    const std::size_t cols = tr.columns();
    const std::size_t total = tr.spectral_size();
    const double k0 = 2.0 * std::numbers::pi / grid.box_length;
    const long nyq = static_cast<long>(grid.n / 2);
    kx.resize(total);
    ky.resize(total);
    k2.resize(total);
    inv_k2.resize(total);
    mode_x.resize(total);
    mode_y.resize(total);
    for (std::size_t i = 0; i < grid.n; ++i) {
        const long my = tr.row_mode(i);
        for (std::size_t j = 0; j < cols; ++j) {
            const long mx = tr.col_mode(j);
            const std::size_t idx = i * cols + j;
            mode_x[idx] = mx;
            mode_y[idx] = my;
            kx[idx] = mx == nyq ? 0.0 : k0 * mx;
            ky[idx] = std::abs(my) == nyq ? 0.0 : k0 * my;
            k2[idx] = k0 * k0 * static_cast<double>(mx * mx + my * my);
            inv_k2[idx] = idx == 0 ? 0.0 : 1.0 / k2[idx];
        }
    }
}

namespace {

std::vector<Complex> to_spectral(const Grid& g, const std::vector<double>& values) {
    auto& tr = transform_for(g.n);
    std::vector<Complex> spec(tr.spectral_size());
    tr.forward(values, spec);
    return spec;
}

std::vector<double> to_physical(const Grid& g, const std::vector<Complex>& spec) {
    auto& tr = transform_for(g.n);
    std::vector<double> out(g.size());
    tr.inverse(spec, out);
    return out;
}

// i k * f_hat for one axis.
std::vector<Complex> derivative(const std::vector<Complex>& spec, const std::vector<double>& k) {
    std::vector<Complex> out(spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i) {
        out[i] = Complex(0.0, k[i]) * spec[i];
    }
    return out;
}

void check_same_grid(const Grid& a, const Grid& b) {
    if (!(a == b)) {
        throw DomainError("fields live on different grids");
    }
}

} // namespace

void require_zero_mean(const ScalarField& omega) {
    double abs_mean = 0.0;
    for (double w : omega.values) {
        abs_mean += std::abs(w);
    }
    abs_mean /= static_cast<double>(omega.values.size());
    if (std::abs(omega.mean()) > 1e-12 * abs_mean) {
        throw DomainError("biot_savart: vorticity must have zero mean");
    }
}

ScalarField zero_mean_difference(const ScalarField& a, const ScalarField& b) {
    check_same_grid(a.grid, b.grid);
    require_zero_mean(a);
    require_zero_mean(b);
    ScalarField diff(a.grid);
    for (std::size_t i = 0; i < diff.values.size(); ++i) {
        diff.values[i] = a.values[i] - b.values[i];
    }
    diff.remove_mean();
    return diff;
}

VectorField biot_savart(const ScalarField& omega) {
    omega.grid.validate();
    require_zero_mean(omega);
    const Wavenumbers wn(omega.grid);
    auto psi = to_spectral(omega.grid, omega.values);
    for (std::size_t i = 0; i < psi.size(); ++i) {
        psi[i] *= wn.inv_k2[i];
    }
    VectorField v(omega.grid);
    v.u = to_physical(omega.grid, derivative(psi, wn.ky));
    auto dx = derivative(psi, wn.kx);
    for (auto& c : dx) {
        c = -c;
    }
    v.v = to_physical(omega.grid, dx);
    return v;
}

ScalarField curl(const VectorField& v) {
    const Wavenumbers wn(v.grid);
    const auto u_hat = to_spectral(v.grid, v.u);
    const auto v_hat = to_spectral(v.grid, v.v);
    std::vector<Complex> out(u_hat.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = Complex(0.0, wn.kx[i]) * v_hat[i] - Complex(0.0, wn.ky[i]) * u_hat[i];
    }
    return ScalarField(v.grid, to_physical(v.grid, out));
}

ScalarField divergence(const VectorField& v) {
    const Wavenumbers wn(v.grid);
    const auto u_hat = to_spectral(v.grid, v.u);
    const auto v_hat = to_spectral(v.grid, v.v);
    std::vector<Complex> out(u_hat.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = Complex(0.0, wn.kx[i]) * u_hat[i] + Complex(0.0, wn.ky[i]) * v_hat[i];
    }
    return ScalarField(v.grid, to_physical(v.grid, out));
}

ScalarField gradient_magnitude(const VectorField& v) {
    const Wavenumbers wn(v.grid);
    const auto u_hat = to_spectral(v.grid, v.u);
    const auto v_hat = to_spectral(v.grid, v.v);
    const auto ux = to_physical(v.grid, derivative(u_hat, wn.kx));
    const auto uy = to_physical(v.grid, derivative(u_hat, wn.ky));
    const auto vx = to_physical(v.grid, derivative(v_hat, wn.kx));
    const auto vy = to_physical(v.grid, derivative(v_hat, wn.ky));
    ScalarField out(v.grid);
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        out.values[i] = std::sqrt(ux[i] * ux[i] + uy[i] * uy[i] + vx[i] * vx[i] + vy[i] * vy[i]);
    }
    return out;
}

namespace {

template <class Magnitude>
double lp_norm_impl(std::size_t count, double cell_area, double p, Magnitude mag) {
    if (!(p >= 1.0)) {
        throw DomainError("lp_norm requires p >= 1");
    }
    double peak = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        peak = std::max(peak, mag(i));
    }
    if (std::isinf(p) || peak == 0.0) {
        return peak;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        sum += std::pow(mag(i) / peak, p);
    }
    return peak * std::pow(sum * cell_area, 1.0 / p);
}

} // namespace

double lp_norm(const ScalarField& f, double p) {
    return lp_norm_impl(f.values.size(), f.grid.cell_area(), p,
                        [&](std::size_t i) { return std::abs(f.values[i]); });
}

double lp_norm(const VectorField& v, double p) {
    return lp_norm_impl(v.u.size(), v.grid.cell_area(), p,
                        [&](std::size_t i) { return std::hypot(v.u[i], v.v[i]); });
}

double l2_velocity_diff(const ScalarField& a, const ScalarField& b) {
    return lp_norm(biot_savart(zero_mean_difference(a, b)), 2.0);
}

ScalarField resample_spectral(const ScalarField& f, std::size_t n) {
    Grid target{n, f.grid.box_length};
    target.validate();
    auto& src_tr = transform_for(f.grid.n);
    const auto src = to_spectral(f.grid, f.values);
    auto& dst_tr = transform_for(n);
    std::vector<Complex> dst(dst_tr.spectral_size(), Complex(0.0, 0.0));
    const double scale = static_cast<double>(n * n) / static_cast<double>(f.grid.n * f.grid.n);
    // Keep modes strictly inside both Nyquist limits.
    const long limit = static_cast<long>(std::min(n, f.grid.n) / 2);
    for (std::size_t i = 0; i < f.grid.n; ++i) {
        const long my = src_tr.row_mode(i);
        if (std::abs(my) >= limit) {
            continue;
        }
        const std::size_t di = my >= 0 ? static_cast<std::size_t>(my) : static_cast<std::size_t>(static_cast<long>(n) + my);
        for (std::size_t j = 0; j < src_tr.columns(); ++j) {
            if (static_cast<long>(j) >= limit) {
                continue;
            }
            dst[di * dst_tr.columns() + j] = src[i * src_tr.columns() + j] * scale;
        }
    }
    return ScalarField(target, to_physical(target, dst));
}

} // namespace invlim

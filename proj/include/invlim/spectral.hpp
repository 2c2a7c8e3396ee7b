#pragma once

#include "invlim/fft.hpp"
#include "invlim/field.hpp"

#include <vector>

namespace invlim {

/// Zero-mean, divergence-free v with curl v = omega:
/// psi_hat = omega_hat / |k|^2, v = (d_y psi, -d_x psi). Nyquist modes are
/// dropped from odd derivatives. Throws DomainError if the mean of omega
/// exceeds 1e-12 of its mean absolute value.
VectorField biot_savart(const ScalarField& omega);

/// Throws DomainError if |mean| exceeds 1e-12 of the mean absolute value.
void require_zero_mean(const ScalarField& omega);
/// a - b with its round-off mean removed; both inputs must have zero mean.
ScalarField zero_mean_difference(const ScalarField& a, const ScalarField& b);

/// Spectral d_x v2 - d_y v1.
ScalarField curl(const VectorField& v);
/// Spectral d_x v1 + d_y v2.
ScalarField divergence(const VectorField& v);
/// Pointwise Frobenius norm |grad v|.
ScalarField gradient_magnitude(const VectorField& v);

/// Discrete L^p norm with cell weight (L/N)^2; p = +inf gives max |value|.
double lp_norm(const ScalarField& f, double p);
/// L^p norm of the pointwise Euclidean magnitude.
double lp_norm(const VectorField& v, double p);

/// |biot_savart(a) - biot_savart(b)|_{L^2}.
double l2_velocity_diff(const ScalarField& a, const ScalarField& b);

/// Fourier truncation (or zero padding) of a field onto another resolution
/// of the same box.
ScalarField resample_spectral(const ScalarField& f, std::size_t n);

/// Wavenumber tables for a grid, with Nyquist modes marked.
struct Wavenumbers {
    std::vector<double> kx;        ///< per spectral entry, zero at the x Nyquist column
    std::vector<double> ky;        ///< per spectral entry, zero at the y Nyquist row
    std::vector<double> k2;        ///< |k|^2 with full modes (including Nyquist)
    std::vector<double> inv_k2;    ///< 1/|k|^2, 0 at k = 0
    std::vector<long> mode_x;
    std::vector<long> mode_y;

    explicit Wavenumbers(const Grid& grid);
};

} // namespace invlim

#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

namespace invlim {

using Complex = std::complex<double>;

/// Real-to-complex 2D FFT on an N x N grid (FFTW underneath). The spectral
/// layout is N rows (y wavenumber) by N/2 + 1 columns (x wavenumber).
/// Instances are not shared between threads; plan creation is serialized.
class SpectralTransform {
public:
    explicit SpectralTransform(std::size_t n);
    ~SpectralTransform();
    SpectralTransform(const SpectralTransform&) = delete;
    SpectralTransform& operator=(const SpectralTransform&) = delete;

    std::size_t n() const { return n_; }
    std::size_t spectral_size() const { return n_ * (n_ / 2 + 1); }
    std::size_t columns() const { return n_ / 2 + 1; }

    void forward(std::span<const double> real, std::span<Complex> spec);
    /// Normalized inverse: inverse(forward(x)) == x.
    void inverse(std::span<const Complex> spec, std::span<double> real);

    /// Integer wavenumber of spectral row i (y) / column j (x).
    long row_mode(std::size_t i) const { return i <= n_ / 2 ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(n_); }
    long col_mode(std::size_t j) const { return static_cast<long>(j); }

private:
    struct Impl;
    std::size_t n_;
    std::unique_ptr<Impl> impl_;
};

/// Per-thread cached transform for size n.
SpectralTransform& transform_for(std::size_t n);

} // namespace invlim

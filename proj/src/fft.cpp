#include "invlim/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>

namespace invlim {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

struct SpectralTransform::Impl {
    double* real = nullptr;
    fftw_complex* spec = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;
};

SpectralTransform::SpectralTransform(std::size_t n) : n_(n), impl_(std::make_unique<Impl>()) {
    std::lock_guard lock(planner_mutex());
    const int ni = static_cast<int>(n);
    impl_->real = fftw_alloc_real(n * n);
    impl_->spec = fftw_alloc_complex(spectral_size());
    // FFTW_ESTIMATE: deterministic plan choice, inputs untouched during planning.
    impl_->fwd = fftw_plan_dft_r2c_2d(ni, ni, impl_->real, impl_->spec, FFTW_ESTIMATE);
    impl_->inv = fftw_plan_dft_c2r_2d(ni, ni, impl_->spec, impl_->real, FFTW_ESTIMATE);
}

SpectralTransform::~SpectralTransform() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(impl_->fwd);
    fftw_destroy_plan(impl_->inv);
    fftw_free(impl_->real);
    fftw_free(impl_->spec);
}

void SpectralTransform::forward(std::span<const double> real, std::span<Complex> spec) {
    std::copy(real.begin(), real.end(), impl_->real);
    fftw_execute(impl_->fwd);
    const auto* src = reinterpret_cast<const Complex*>(impl_->spec);
    std::copy(src, src + spectral_size(), spec.begin());
}

void SpectralTransform::inverse(std::span<const Complex> spec, std::span<double> real) {
    std::copy(spec.begin(), spec.end(), reinterpret_cast<Complex*>(impl_->spec));
    fftw_execute(impl_->inv);
    const double scale = 1.0 / static_cast<double>(n_ * n_);
    for (std::size_t i = 0; i < n_ * n_; ++i) {
        real[i] = impl_->real[i] * scale;
    }
}

SpectralTransform& transform_for(std::size_t n) {
    thread_local std::map<std::size_t, std::unique_ptr<SpectralTransform>> cache;
    auto& slot = cache[n];
    if (!slot) {
        slot = std::make_unique<SpectralTransform>(n);
    }
    return *slot;
}

} // namespace invlim

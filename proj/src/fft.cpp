// Copyright 2026 The jumpdiff Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "jumpdiff/fft.hpp"

#include <fftw3.h>

#include <complex>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace jumpdiff::fft {

namespace {

// Planner calls are not thread-safe in FFTW; execution with the new-array
// interface is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <typename T>
FftwBuffer<T> allocate(std::size_t n) {
    auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
    if (p == nullptr) throw std::bad_alloc();
    return FftwBuffer<T>(p);
}

std::size_t padded_length(std::size_t min_length) {
    std::size_t n = 1;
    while (n < min_length) n <<= 1;
    return n;
}

}  // namespace

std::vector<double> convolve_centered(std::span<const double> a,
                                      std::span<const double> b, double step) {
    const std::size_t length = a.size();
    if (length == 0 || b.size() != length || length % 2 == 0) {
        throw std::invalid_argument("convolve_centered: need equal odd lengths");
    }
    const std::size_t n = padded_length(2 * length);
    const std::size_t spectrum = n / 2 + 1;

    auto ra = allocate<double>(n);
    auto rb = allocate<double>(n);
    auto ca = allocate<fftw_complex>(spectrum);
    auto cb = allocate<fftw_complex>(spectrum);

    for (std::size_t i = 0; i < n; ++i) {
        ra[i] = i < length ? a[i] : 0.0;
        rb[i] = i < length ? b[i] : 0.0;
    }
    if (length > 1) {
        ra[0] *= 0.5;
        ra[length - 1] *= 0.5;
    }

    fftw_plan forward;
    fftw_plan backward;
    {
        std::lock_guard lock(planner_mutex());
        forward = fftw_plan_dft_r2c_1d(static_cast<int>(n), ra.get(), ca.get(),
                                       FFTW_ESTIMATE);
        backward = fftw_plan_dft_c2r_1d(static_cast<int>(n), ca.get(), ra.get(),
                                        FFTW_ESTIMATE);
    }
    fftw_execute_dft_r2c(forward, ra.get(), ca.get());
    fftw_execute_dft_r2c(forward, rb.get(), cb.get());
    for (std::size_t k = 0; k < spectrum; ++k) {
        const std::complex<double> x(ca[k][0], ca[k][1]);
        const std::complex<double> y(cb[k][0], cb[k][1]);
        const std::complex<double> z = x * y;
        ca[k][0] = z.real();
        ca[k][1] = z.imag();
    }
    fftw_execute_dft_c2r(backward, ca.get(), ra.get());
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(forward);
        fftw_destroy_plan(backward);
    }

    // Full convolution index k corresponds to grid offset k - (L-1).
    const std::size_t offset = (length - 1) / 2;
    const double scale = step / static_cast<double>(n);
    std::vector<double> out(length);
    for (std::size_t i = 0; i < length; ++i) out[i] = ra[i + offset] * scale;
    return out;
}

double clip_negative(std::span<double> values, double step) {
    double removed = 0.0;
    for (double& v : values) {
        if (v < 0.0) {
            removed -= v;
            v = 0.0;
        }
    }
    return removed * step;
}

}  // namespace jumpdiff::fft

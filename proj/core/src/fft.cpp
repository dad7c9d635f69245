#include "ns2d/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>

#include "ns2d/error.hpp"

namespace ns2d {

namespace detail {
void* fft_alloc(std::size_t bytes) { return fftw_malloc(bytes); }
void fft_free(void* p) noexcept { fftw_free(p); }
}  // namespace detail

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

std::shared_ptr<const FourierTransform> FourierTransform::for_size(int n) {
    static std::mutex cache_mutex;
    static std::map<int, std::shared_ptr<const FourierTransform>> cache;
    std::lock_guard lock(cache_mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    auto t = std::make_shared<const FourierTransform>(n);
    cache.emplace(n, t);
    return t;
}

FourierTransform::FourierTransform(int n) : n_(n) {
    if (n < 2) throw ContractError("FourierTransform: size must be >= 2");
    const std::size_t real_size = static_cast<std::size_t>(n) * n;
    const std::size_t complex_size = static_cast<std::size_t>(n) * (n / 2 + 1);
    RealBuffer r(real_size);
    ComplexBuffer c(complex_size);
    std::lock_guard lock(planner_mutex());
    forward_plan_ = fftw_plan_dft_r2c_2d(n, n, r.data(), as_fftw(c.data()), FFTW_ESTIMATE);
    inverse_plan_ = fftw_plan_dft_c2r_2d(n, n, as_fftw(c.data()), r.data(), FFTW_ESTIMATE);
    if (!forward_plan_ || !inverse_plan_) throw Error("FourierTransform: FFTW planning failed");
}

FourierTransform::~FourierTransform() {
    std::lock_guard lock(planner_mutex());
    if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    if (inverse_plan_) fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

void FourierTransform::forward(std::span<const double> in, std::span<Complex> out) const {
    const std::size_t n2 = static_cast<std::size_t>(n_) * n_;
    if (in.size() != n2 || out.size() != static_cast<std::size_t>(n_) * (n_ / 2 + 1))
        throw ContractError("FourierTransform::forward: buffer size mismatch");
    // r2c out-of-place leaves the input untouched.
    fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), const_cast<double*>(in.data()),
                         as_fftw(out.data()));
    const double scale = 1.0 / static_cast<double>(n2);
    for (auto& c : out) c *= scale;
}

void FourierTransform::inverse_destroy(std::span<Complex> in, std::span<double> out) const {
    if (out.size() != static_cast<std::size_t>(n_) * n_ ||
        in.size() != static_cast<std::size_t>(n_) * (n_ / 2 + 1))
        throw ContractError("FourierTransform::inverse: buffer size mismatch");
    fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_), as_fftw(in.data()), out.data());
}

void FourierTransform::inverse(std::span<const Complex> in, std::span<double> out) const {
    ComplexBuffer scratch(in.begin(), in.end());
    inverse_destroy(scratch, out);
}

}  // namespace ns2d

#pragma once

#include <complex>
#include <cstddef>
#include <new>
#include <vector>

namespace ns2d {

namespace detail {
void* fft_alloc(std::size_t bytes);
void fft_free(void* p) noexcept;
}  // namespace detail

// Allocator returning SIMD-aligned storage so buffers can be handed to the
// FFT backend with the alignment it planned for.
template <class T>
struct AlignedAllocator {
    using value_type = T;

    AlignedAllocator() noexcept = default;
    template <class U>
    AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

    T* allocate(std::size_t n) {
        if (n == 0) return nullptr;
        void* p = detail::fft_alloc(n * sizeof(T));
        if (!p) throw std::bad_alloc();
        return static_cast<T*>(p);
    }
    void deallocate(T* p, std::size_t) noexcept { detail::fft_free(p); }

    template <class U>
    bool operator==(const AlignedAllocator<U>&) const noexcept {
        return true;
    }
};

template <class T>
using AlignedVector = std::vector<T, AlignedAllocator<T>>;

using Complex = std::complex<double>;
using RealBuffer = AlignedVector<double>;
using ComplexBuffer = AlignedVector<Complex>;

}  // namespace ns2d

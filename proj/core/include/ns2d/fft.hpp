#pragma once

#include <memory>
#include <span>

#include "ns2d/aligned.hpp"
#include "ns2d/grid.hpp"

namespace ns2d {

/// Real-to-complex 2D transform pair for one grid size, backed by FFTW.
///
/// Plans are created once (under a global lock, FFTW planning is not
/// reentrant) with FFTW_ESTIMATE so that results are bitwise reproducible run
/// to run. Execution uses the new-array interface and is safe to call from
/// several threads on distinct buffers.
class FourierTransform {
public:
    /// Shared instance for an N x N grid.
    static std::shared_ptr<const FourierTransform> for_size(int n);

    explicit FourierTransform(int n);
    ~FourierTransform();
    FourierTransform(const FourierTransform&) = delete;
    FourierTransform& operator=(const FourierTransform&) = delete;

    int n() const noexcept { return n_; }

    /// Unnormalized-to-normalized forward transform: out = DFT(in) / N^2.
    void forward(std::span<const double> in, std::span<Complex> out) const;
    /// Inverse transform. `in` is used as scratch and overwritten.
    void inverse_destroy(std::span<Complex> in, std::span<double> out) const;
    /// Inverse transform preserving the input (copies into scratch).
    void inverse(std::span<const Complex> in, std::span<double> out) const;

private:
    int n_;
    void* forward_plan_ = nullptr;
    void* inverse_plan_ = nullptr;
};

}  // namespace ns2d

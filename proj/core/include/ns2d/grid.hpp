#pragma once

#include <cstddef>
#include <numbers>

namespace ns2d {

/// Uniform periodic grid on the square torus [0, L)^2.
///
/// Physical samples are stored row-major with the x1 index outermost:
/// value(i, j) sits at `i * N + j` and represents the point (i h, j h).
/// Spectral coefficients use the real-to-complex half layout: k1 spans all
/// N wavenumbers, k2 only 0..N/2, so coefficient (k1, k2) sits at
/// `row(k1) * (N/2 + 1) + k2`.
struct GridSpec {
    int points_per_side = 64;
    double domain_length = 2.0 * std::numbers::pi;
    double dealias_fraction = 2.0 / 3.0;

    /// Throws ContractError unless N is even and >= 8, L > 0 and the dealias
    /// fraction lies in (0, 1].
    void validate() const;

    int n() const noexcept { return points_per_side; }
    int half() const noexcept { return points_per_side / 2 + 1; }
    std::size_t physical_size() const noexcept {
        return static_cast<std::size_t>(points_per_side) * points_per_side;
    }
    std::size_t spectral_size() const noexcept {
        return static_cast<std::size_t>(points_per_side) * half();
    }
    double spacing() const noexcept { return domain_length / points_per_side; }
    double cell_area() const noexcept { return spacing() * spacing(); }
    double area() const noexcept { return domain_length * domain_length; }
    /// 2 pi / L.
    double wavenumber_unit() const noexcept { return 2.0 * std::numbers::pi / domain_length; }

    /// Signed integer wavenumber of FFT row/column index `idx` in {-N/2+1, ..., N/2}.
    int signed_index(int idx) const noexcept {
        return idx <= points_per_side / 2 ? idx : idx - points_per_side;
    }
    /// Largest retained integer wavenumber under the dealias rule.
    double dealias_cutoff_index() const noexcept {
        return dealias_fraction * (points_per_side / 2);
    }
    /// Largest retained physical wavenumber under the dealias rule.
    double dealias_cutoff() const noexcept { return dealias_cutoff_index() * wavenumber_unit(); }

    bool operator==(const GridSpec&) const = default;
};

/// Throws ContractError if the grids differ.
void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where);

}  // namespace ns2d

#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ns2d/aligned.hpp"
#include "ns2d/grid.hpp"

namespace ns2d {

/// Point samples of a real scalar field on a periodic grid.
class PhysicalField {
public:
    PhysicalField() = default;
    /// Zero field.
    explicit PhysicalField(const GridSpec& grid);
    /// Takes ownership of samples; throws ContractError on shape mismatch or
    /// non-finite entries.
    PhysicalField(const GridSpec& grid, RealBuffer values);
    PhysicalField(const GridSpec& grid, std::span<const double> values);

    /// Samples f(x1, x2) at every node.
    static PhysicalField from_function(const GridSpec& grid,
                                       const std::function<double(double, double)>& f);

    const GridSpec& grid() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }
    RealBuffer& buffer() noexcept { return values_; }
    const RealBuffer& buffer() const noexcept { return values_; }

    double& operator()(int i, int j) noexcept { return values_[index(i, j)]; }
    double operator()(int i, int j) const noexcept { return values_[index(i, j)]; }

    bool all_finite() const noexcept;

    PhysicalField& operator+=(const PhysicalField& o);
    PhysicalField& operator-=(const PhysicalField& o);
    PhysicalField& operator*=(double s) noexcept;

    friend PhysicalField operator+(PhysicalField a, const PhysicalField& b) { return a += b; }
    friend PhysicalField operator-(PhysicalField a, const PhysicalField& b) { return a -= b; }
    friend PhysicalField operator*(PhysicalField a, double s) { return a *= s; }
    friend PhysicalField operator*(double s, PhysicalField a) { return a *= s; }

    /// Pointwise product.
    friend PhysicalField hadamard(const PhysicalField& a, const PhysicalField& b);

    /// Applies f to every sample.
    PhysicalField map(const std::function<double(double)>& f) const;

private:
    std::size_t index(int i, int j) const noexcept {
        return static_cast<std::size_t>(i) * grid_.n() + j;
    }

    GridSpec grid_{};
    RealBuffer values_;
};

/// Fourier coefficients of a real field in the half-spectrum layout described
/// on GridSpec. Hermitian symmetry is implied by the layout; the redundant
/// columns k2 = 0 and k2 = N/2 are kept self-consistent by every producer.
///
/// Normalization: coefficients are (1/N^2) times the raw DFT, so cos(k.x)
/// contributes 1/2 at +k and -k.
class SpectralField {
public:
    SpectralField() = default;
    explicit SpectralField(const GridSpec& grid);
    SpectralField(const GridSpec& grid, ComplexBuffer coeffs);

    /// Builds from a full N x N coefficient array indexed [row(k1) * N + row(k2)].
    /// Throws ContractError if coeff(-k) != conj(coeff(k)) beyond 1e-10 of the
    /// largest coefficient magnitude.
    static SpectralField from_full(const GridSpec& grid, std::span<const Complex> full);
    /// Inverse of from_full.
    std::vector<Complex> to_full() const;

    const GridSpec& grid() const noexcept { return grid_; }
    std::span<const Complex> coeffs() const noexcept { return coeffs_; }
    std::span<Complex> coeffs() noexcept { return coeffs_; }
    ComplexBuffer& buffer() noexcept { return coeffs_; }
    const ComplexBuffer& buffer() const noexcept { return coeffs_; }

    /// Coefficient at integer wavenumber (k1, k2), each in {-N/2+1, ..., N/2}.
    Complex coeff(int k1, int k2) const;
    /// Sets the coefficient at (k1, k2) and its Hermitian partner.
    void set_coeff(int k1, int k2, Complex value);

    Complex mean_coeff() const noexcept { return coeffs_.empty() ? Complex{} : coeffs_[0]; }
    bool is_mean_free() const noexcept { return mean_coeff() == Complex{}; }
    void remove_mean() noexcept {
        if (!coeffs_.empty()) coeffs_[0] = Complex{};
    }
    bool all_finite() const noexcept;

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double s) noexcept;

    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(SpectralField a, double s) { return a *= s; }
    friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

private:
    GridSpec grid_{};
    ComplexBuffer coeffs_;
};

/// Two-component vector field in point values.
struct VectorField {
    PhysicalField x1;
    PhysicalField x2;

    const GridSpec& grid() const noexcept { return x1.grid(); }
};

}  // namespace ns2d

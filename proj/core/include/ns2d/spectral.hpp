#pragma once

#include <span>

#include "ns2d/fields.hpp"

namespace ns2d {

/// Forward transform; throws ContractError on non-finite samples.
SpectralField forward_transform(const PhysicalField& f);

/// Inverse transform of a half-spectrum field (symmetric by construction).
PhysicalField inverse_transform(const SpectralField& f);

/// Inverse transform of a full N x N coefficient array; rejects inputs whose
/// Hermitian symmetry is broken beyond 1e-10 (relative).
PhysicalField inverse_transform_full(const GridSpec& grid, std::span<const Complex> full);

/// Velocity u = K * omega via u_hat = i (k2, -k1) omega_hat / |k|^2.
/// Throws ContractError when omega has a nonzero mean.
VectorField biot_savart(const SpectralField& omega);

/// Spectral Biot-Savart pair (u1_hat, u2_hat).
struct SpectralVector {
    SpectralField x1;
    SpectralField x2;
};
SpectralVector biot_savart_spectral(const SpectralField& omega);

/// Component j multiplied by i k_j. The Nyquist mode has no real derivative
/// and is dropped.
VectorField gradient(const SpectralField& f);
SpectralVector gradient_spectral(const SpectralField& f);

SpectralField laplacian(const SpectralField& f);

/// Spectral divergence of a vector field, in physical space.
PhysicalField divergence(const VectorField& v);
/// Scalar curl d1 v2 - d2 v1, in physical space.
PhysicalField curl(const VectorField& v);

/// Zeroes every coefficient with max(|k1|, |k2|) > dealias_fraction * N/2.
SpectralField dealias(SpectralField f);
/// True if coefficient (k1, k2) survives dealiasing.
bool retained_by_dealias(const GridSpec& grid, int k1, int k2) noexcept;

/// Deterministic pairwise (cascade) summation.
double pairwise_sum(std::span<const double> v) noexcept;

/// Trapezoidal quadrature sum a.b h^2 with pairwise reduction.
double inner_product(const PhysicalField& a, const PhysicalField& b);
double inner_product(const VectorField& a, const VectorField& b);
/// Coefficient-space form L^2 sum Re(a_k conj(b_k)); equals the quadrature
/// form exactly in exact arithmetic.
double inner_product(const SpectralField& a, const SpectralField& b);

/// ||grad f||^2 evaluated in coefficient space.
double gradient_norm_sq(const SpectralField& f);
/// ||K * f||^2 (kinetic energy of the velocity induced by f) in coefficient space.
double velocity_norm_sq(const SpectralField& omega);

struct Norms {
    double l1 = 0.0;
    double l2 = 0.0;
    double linf = 0.0;
};
Norms norms(const PhysicalField& f);
/// Sup norm of the trigonometric interpolant of f, sampled on a grid `factor`
/// times finer. Grid values alone miss peaks that fall between nodes.
double interpolant_sup(const SpectralField& f, int factor = 4);

/// Pointwise magnitude |v|.
PhysicalField magnitude(const VectorField& v);

}  // namespace ns2d

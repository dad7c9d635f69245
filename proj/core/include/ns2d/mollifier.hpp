#pragma once

#include <span>
#include <vector>

#include "ns2d/fields.hpp"
#include "ns2d/renormalizer.hpp"
#include "ns2d/spectral.hpp"

namespace ns2d {

/// Standard bump j(z) = C exp(-1 / (1 - |z|^2)) on |z| < 1 with C chosen so
/// that the integral over the plane is 1.
double mollifier_profile(double r) noexcept;

/// Quadrature node of the scaled kernel: offset (epsilon z) and weight.
struct KernelNode {
    double s1 = 0.0;
    double s2 = 0.0;
    double weight = 0.0;
};

struct KernelQuadrature {
    /// Gauss-Legendre nodes in the radius.
    int radial = 8;
    /// Uniform angles offset by half a step. Must be even and >= 4 so the node
    /// set is symmetric under z -> -z and under both axis reflections.
    int angular = 16;
};

/// j_eps(z) = eps^-2 j(z / eps) discretized by a polar product rule in the
/// kernel variable z, renormalized to unit discrete mass. Convolution with
/// the kernel is the weighted sum of Fourier shifts f(x - eps z_n), which is a
/// real even Fourier multiplier; the multiplier table is precomputed for the
/// grid and the kernel is immutable afterwards.
class MollifierKernel {
public:
    /// Throws ContractError when eps < 4 h (kernel under-resolved).
    MollifierKernel(const GridSpec& grid, double epsilon, KernelQuadrature quadrature = {});

    double epsilon() const noexcept { return epsilon_; }
    const GridSpec& grid() const noexcept { return grid_; }
    std::span<const KernelNode> nodes() const noexcept { return nodes_; }
    /// Multiplier m(k) in half-spectrum layout.
    std::span<const double> multiplier() const noexcept { return multiplier_; }
    /// m(k) at integer wavenumber (k1, k2).
    double gain(int k1, int k2) const;

    /// Smallest admissible epsilon for a grid.
    static double min_epsilon(const GridSpec& grid) noexcept { return 4.0 * grid.spacing(); }

private:
    GridSpec grid_;
    double epsilon_;
    std::vector<KernelNode> nodes_;
    RealBuffer multiplier_;
};

/// Coefficients of f(x - s). Off-grid shifts use exact phase factors; modes at
/// the Nyquist index use the symmetric (cosine) interpolant.
SpectralField shift(const SpectralField& f, double s1, double s2);

/// J_eps f.
PhysicalField mollify(const PhysicalField& f, const MollifierKernel& kernel);
SpectralField mollify(const SpectralField& f, const MollifierKernel& kernel);
VectorField mollify(const VectorField& v, const MollifierKernel& kernel);

/// J_eps f computed directly as the weighted sum of shifted copies; slow
/// reference path for the multiplier form.
PhysicalField mollify_by_shifts(const PhysicalField& f, const MollifierKernel& kernel);

/// alpha_eps(w) = J_eps beta(J_eps w).
PhysicalField alpha_eps(const PhysicalField& omega, const MollifierKernel& kernel,
                        const RenormalizerBeta& beta);

/// ||delta_h f||_2 with (delta_h f)(x) = f(x - h) - f(x).
double increment_norm(const PhysicalField& f, double h1, double h2);

}  // namespace ns2d

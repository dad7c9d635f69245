#include "ns2d/mollifier.hpp"

#include <cmath>
#include <numbers>

#include "modes.hpp"
#include "ns2d/error.hpp"
#include "ns2d/fft.hpp"

namespace ns2d {

using detail::for_each_mode;

namespace {

struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};

// Gauss-Legendre rule mapped to [a, b].
GaussRule gauss_legendre(int n, double a, double b) {
    GaussRule rule{std::vector<double>(n), std::vector<double>(n)};
    for (int i = 0; i < n; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        rule.x[i] = 0.5 * (b - a) * z + 0.5 * (b + a);
        rule.w[i] = (b - a) / ((1.0 - z * z) * dp * dp);
    }
    return rule;
}

double raw_bump(double r) noexcept { return r < 1.0 ? std::exp(-1.0 / (1.0 - r * r)) : 0.0; }

double profile_normalization() {
    static const double c = [] {
        // The bump is flat to all orders at r = 1, so a fine Gauss rule on
        // sub-intervals converges to machine precision.
        double sum = 0.0;
        constexpr int kPanels = 64;
        for (int p = 0; p < kPanels; ++p) {
            const auto rule = gauss_legendre(16, double(p) / kPanels, double(p + 1) / kPanels);
            for (std::size_t i = 0; i < rule.x.size(); ++i) sum += rule.w[i] * rule.x[i] * raw_bump(rule.x[i]);
        }
        return 1.0 / (2.0 * std::numbers::pi * sum);
    }();
    return c;
}

// Per-axis shift factor: exp(-i q s), or cos(q s) at the Nyquist index.
Complex axis_factor(int k, int nyq, double unit, double s) {
    const double phase = unit * k * s;
    if (k == nyq) return {std::cos(phase), 0.0};
    return {std::cos(phase), -std::sin(phase)};
}

void shift_coeffs(const GridSpec& g, std::span<const Complex> in, std::span<Complex> out, double s1,
                  double s2) {
    const int n = g.n();
    const int h = g.half();
    const int nyq = n / 2;
    const double unit = g.wavenumber_unit();
    std::vector<Complex> col(h);
    for (int c2 = 0; c2 < h; ++c2) col[c2] = axis_factor(c2, nyq, unit, s2);
    std::size_t idx = 0;
    for (int r1 = 0; r1 < n; ++r1) {
        const Complex row = axis_factor(g.signed_index(r1), nyq, unit, s1);
        for (int c2 = 0; c2 < h; ++c2, ++idx) out[idx] = in[idx] * row * col[c2];
    }
}

}  // namespace

double mollifier_profile(double r) noexcept { return profile_normalization() * raw_bump(r); }

MollifierKernel::MollifierKernel(const GridSpec& grid, double epsilon, KernelQuadrature quadrature)
    : grid_(grid), epsilon_(epsilon) {
    grid_.validate();
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw ContractError("MollifierKernel: epsilon must be positive");
    if (epsilon < min_epsilon(grid_) * (1.0 - 1e-12))
        throw ContractError("MollifierKernel: epsilon=" + std::to_string(epsilon) +
                            " is below the resolvable floor 4h=" + std::to_string(min_epsilon(grid_)));
    if (quadrature.radial < 1 || quadrature.angular < 4 || quadrature.angular % 2 != 0)
        throw ContractError("MollifierKernel: need radial >= 1 and an even angular count >= 4");

    const auto radial = gauss_legendre(quadrature.radial, 0.0, 1.0);
    const double dtheta = 2.0 * std::numbers::pi / quadrature.angular;
    double mass = 0.0;
    for (std::size_t i = 0; i < radial.x.size(); ++i) {
        const double r = radial.x[i];
        const double w = radial.w[i] * r * mollifier_profile(r) * dtheta;
        for (int a = 0; a < quadrature.angular; ++a) {
            const double theta = (a + 0.5) * dtheta;
            nodes_.push_back({epsilon * r * std::cos(theta), epsilon * r * std::sin(theta), w});
            mass += w;
        }
    }
    for (auto& node : nodes_) node.weight /= mass;

    multiplier_.assign(grid_.spectral_size(), 0.0);
    ComplexBuffer ones(grid_.spectral_size(), Complex{1.0, 0.0});
    ComplexBuffer shifted(grid_.spectral_size());
    for (const auto& node : nodes_) {
        shift_coeffs(grid_, ones, shifted, node.s1, node.s2);
        for (std::size_t i = 0; i < shifted.size(); ++i) multiplier_[i] += node.weight * shifted[i].real();
    }
}

double MollifierKernel::gain(int k1, int k2) const {
    const int n = grid_.n();
    if (k2 < 0) {
        k1 = -k1;
        k2 = -k2;
    }
    const int r1 = ((k1 % n) + n) % n;
    return multiplier_[static_cast<std::size_t>(r1) * grid_.half() + k2];
}

SpectralField shift(const SpectralField& f, double s1, double s2) {
    SpectralField out(f.grid());
    shift_coeffs(f.grid(), f.coeffs(), out.coeffs(), s1, s2);
    return out;
}

SpectralField mollify(const SpectralField& f, const MollifierKernel& kernel) {
    require_same_grid(f.grid(), kernel.grid(), "mollify");
    SpectralField out(f);
    auto c = out.coeffs();
    auto m = kernel.multiplier();
    for (std::size_t i = 0; i < c.size(); ++i) c[i] *= m[i];
    return out;
}

PhysicalField mollify(const PhysicalField& f, const MollifierKernel& kernel) {
    return inverse_transform(mollify(forward_transform(f), kernel));
}

VectorField mollify(const VectorField& v, const MollifierKernel& kernel) {
    return {mollify(v.x1, kernel), mollify(v.x2, kernel)};
}

PhysicalField mollify_by_shifts(const PhysicalField& f, const MollifierKernel& kernel) {
    require_same_grid(f.grid(), kernel.grid(), "mollify_by_shifts");
    const SpectralField fh = forward_transform(f);
    PhysicalField out(f.grid());
    for (const auto& node : kernel.nodes()) out += inverse_transform(shift(fh, node.s1, node.s2)) * node.weight;
    return out;
}

PhysicalField alpha_eps(const PhysicalField& omega, const MollifierKernel& kernel,
                        const RenormalizerBeta& beta) {
    const PhysicalField inner = mollify(omega, kernel);
    return mollify(inner.map([&](double y) { return beta.value(y); }), kernel);
}

double increment_norm(const PhysicalField& f, double h1, double h2) {
    PhysicalField d = inverse_transform(shift(forward_transform(f), h1, h2));
    d -= f;
    return norms(d).l2;
}

}  // namespace ns2d

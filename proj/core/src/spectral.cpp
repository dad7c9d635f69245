#include "ns2d/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "modes.hpp"
#include "ns2d/error.hpp"
#include "ns2d/fft.hpp"

namespace ns2d {

using detail::for_each_mode;
using detail::hermitian_weight;

namespace {

constexpr Complex kI{0.0, 1.0};

SpectralField transform_unchecked(const PhysicalField& f) {
    SpectralField out(f.grid());
    FourierTransform::for_size(f.grid().n())->forward(f.values(), out.coeffs());
    return out;
}

PhysicalField to_physical(SpectralField f) {
    PhysicalField out(f.grid());
    FourierTransform::for_size(f.grid().n())->inverse_destroy(f.coeffs(), out.values());
    return out;
}

}  // namespace

SpectralField forward_transform(const PhysicalField& f) {
    if (!f.all_finite()) throw ContractError("forward_transform: non-finite input");
    return transform_unchecked(f);
}

PhysicalField inverse_transform(const SpectralField& f) {
    if (!f.all_finite()) throw ContractError("inverse_transform: non-finite coefficient");
    return to_physical(f);
}

PhysicalField inverse_transform_full(const GridSpec& grid, std::span<const Complex> full) {
    return inverse_transform(SpectralField::from_full(grid, full));
}

SpectralVector biot_savart_spectral(const SpectralField& omega) {
    if (!omega.is_mean_free())
        throw ContractError("biot_savart: vorticity must be mean-free on the torus");
    const GridSpec& g = omega.grid();
    const double unit = g.wavenumber_unit();
    const int nyq = g.n() / 2;
    SpectralVector u{SpectralField(g), SpectralField(g)};
    auto w = omega.coeffs();
    auto a = u.x1.coeffs();
    auto b = u.x2.coeffs();
    for_each_mode(g, [&](std::size_t idx, int k1, int k2) {
        if (k1 == 0 && k2 == 0) return;
        const double q1 = k1 * unit;
        const double q2 = k2 * unit;
        const Complex s = w[idx] / (q1 * q1 + q2 * q2);
        a[idx] = (k2 == nyq) ? Complex{} : kI * q2 * s;
        b[idx] = (k1 == nyq) ? Complex{} : -kI * q1 * s;
    });
    return u;
}

VectorField biot_savart(const SpectralField& omega) {
    auto u = biot_savart_spectral(omega);
    return {to_physical(std::move(u.x1)), to_physical(std::move(u.x2))};
}

SpectralVector gradient_spectral(const SpectralField& f) {
    const GridSpec& g = f.grid();
    const double unit = g.wavenumber_unit();
    const int nyq = g.n() / 2;
    SpectralVector d{SpectralField(g), SpectralField(g)};
    auto c = f.coeffs();
    auto a = d.x1.coeffs();
    auto b = d.x2.coeffs();
    for_each_mode(g, [&](std::size_t idx, int k1, int k2) {
        a[idx] = (k1 == nyq) ? Complex{} : kI * (k1 * unit) * c[idx];
        b[idx] = (k2 == nyq) ? Complex{} : kI * (k2 * unit) * c[idx];
    });
    return d;
}

VectorField gradient(const SpectralField& f) {
    auto d = gradient_spectral(f);
    return {to_physical(std::move(d.x1)), to_physical(std::move(d.x2))};
}

SpectralField laplacian(const SpectralField& f) {
    const GridSpec& g = f.grid();
    const double unit = g.wavenumber_unit();
    SpectralField out(f);
    auto c = out.coeffs();
    for_each_mode(g, [&](std::size_t idx, int k1, int k2) {
        c[idx] *= -unit * unit * static_cast<double>(k1 * k1 + k2 * k2);
    });
    return out;
}

PhysicalField divergence(const VectorField& v) {
    require_same_grid(v.x1.grid(), v.x2.grid(), "divergence");
    auto a = gradient_spectral(forward_transform(v.x1));
    auto b = gradient_spectral(forward_transform(v.x2));
    a.x1 += b.x2;
    return to_physical(std::move(a.x1));
}

PhysicalField curl(const VectorField& v) {
    require_same_grid(v.x1.grid(), v.x2.grid(), "curl");
    auto a = gradient_spectral(forward_transform(v.x1));
    auto b = gradient_spectral(forward_transform(v.x2));
    b.x1 -= a.x2;
    return to_physical(std::move(b.x1));
}

bool retained_by_dealias(const GridSpec& grid, int k1, int k2) noexcept {
    const double cutoff = grid.dealias_cutoff_index();
    return std::max(std::abs(k1), std::abs(k2)) <= cutoff;
}

SpectralField dealias(SpectralField f) {
    const GridSpec& g = f.grid();
    auto c = f.coeffs();
    for_each_mode(g, [&](std::size_t idx, int k1, int k2) {
        if (!retained_by_dealias(g, k1, k2)) c[idx] = Complex{};
    });
    return f;
}

double pairwise_sum(std::span<const double> v) noexcept {
    constexpr std::size_t kBlock = 32;
    if (v.size() <= kBlock) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t mid = v.size() / 2;
    return pairwise_sum(v.first(mid)) + pairwise_sum(v.subspan(mid));
}

double inner_product(const PhysicalField& a, const PhysicalField& b) {
    require_same_grid(a.grid(), b.grid(), "inner_product");
    RealBuffer prod(a.values().size());
    auto av = a.values();
    auto bv = b.values();
    for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = av[i] * bv[i];
    return pairwise_sum(prod) * a.grid().cell_area();
}

double inner_product(const VectorField& a, const VectorField& b) {
    return inner_product(a.x1, b.x1) + inner_product(a.x2, b.x2);
}

double inner_product(const SpectralField& a, const SpectralField& b) {
    require_same_grid(a.grid(), b.grid(), "inner_product");
    const GridSpec& g = a.grid();
    RealBuffer terms(g.spectral_size());
    auto ac = a.coeffs();
    auto bc = b.coeffs();
    for_each_mode(g, [&](std::size_t idx, int, int c2) {
        terms[idx] = hermitian_weight(g, c2) * (ac[idx] * std::conj(bc[idx])).real();
    });
    return pairwise_sum(terms) * g.area();
}

double gradient_norm_sq(const SpectralField& f) {
    const GridSpec& g = f.grid();
    const double unit2 = g.wavenumber_unit() * g.wavenumber_unit();
    const int nyq = g.n() / 2;
    RealBuffer terms(g.spectral_size());
    auto c = f.coeffs();
    for_each_mode(g, [&](std::size_t idx, int k1, int k2) {
        const double q2 = unit2 * ((k1 == nyq ? 0 : k1 * k1) + (k2 == nyq ? 0 : k2 * k2));
        terms[idx] = hermitian_weight(g, k2) * q2 * std::norm(c[idx]);
    });
    return pairwise_sum(terms) * g.area();
}

double velocity_norm_sq(const SpectralField& omega) {
    const GridSpec& g = omega.grid();
    const double unit2 = g.wavenumber_unit() * g.wavenumber_unit();
    const int nyq = g.n() / 2;
    RealBuffer terms(g.spectral_size());
    auto c = omega.coeffs();
    for_each_mode(g, [&](std::size_t idx, int k1, int k2) {
        if (k1 == 0 && k2 == 0) {
            terms[idx] = 0.0;
            return;
        }
        // Matches the Nyquist handling of biot_savart_spectral.
        const double kk = static_cast<double>(k1 * k1 + k2 * k2);
        const double kept = (k2 == nyq ? 0 : k2 * k2) + (k1 == nyq ? 0 : k1 * k1);
        terms[idx] = hermitian_weight(g, k2) * std::norm(c[idx]) * kept / (kk * kk * unit2);
    });
    return pairwise_sum(terms) * g.area();
}

Norms norms(const PhysicalField& f) {
    auto v = f.values();
    RealBuffer a(v.size());
    RealBuffer s(v.size());
    double mx = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        a[i] = std::abs(v[i]);
        s[i] = v[i] * v[i];
        mx = std::max(mx, a[i]);
    }
    const double area = f.grid().cell_area();
    return {pairwise_sum(a) * area, std::sqrt(pairwise_sum(s) * area), mx};
}

double interpolant_sup(const SpectralField& f, int factor) {
    if (factor < 1) throw ContractError("interpolant_sup: factor must be >= 1");
    const GridSpec& g = f.grid();
    if (factor == 1) return norms(inverse_transform(f)).linf;
    GridSpec fine = g;
    fine.points_per_side = g.n() * factor;
    const int n = g.n();
    const int m = fine.n();
    const auto full = f.to_full();
    std::vector<Complex> big(static_cast<std::size_t>(m) * m);
    auto row = [m](int k) { return static_cast<std::size_t>(k >= 0 ? k : k + m); };
    for (int r1 = 0; r1 < n; ++r1)
        for (int r2 = 0; r2 < n; ++r2) {
            const int k1 = g.signed_index(r1);
            const int k2 = g.signed_index(r2);
            const Complex c = full[static_cast<std::size_t>(r1) * n + r2];
            // A Nyquist coefficient stands for a cosine: split it between +-N/2.
            const int n1 = k1 == n / 2 ? 2 : 1;
            const int n2 = k2 == n / 2 ? 2 : 1;
            const Complex share = c / static_cast<double>(n1 * n2);
            for (int a = 0; a < n1; ++a)
                for (int b = 0; b < n2; ++b)
                    big[row(a ? -k1 : k1) * m + row(b ? -k2 : k2)] += share;
        }
    return norms(inverse_transform_full(fine, big)).linf;
}

PhysicalField magnitude(const VectorField& v) {
    PhysicalField out(v.x1.grid());
    auto a = v.x1.values();
    auto b = v.x2.values();
    auto o = out.values();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = std::hypot(a[i], b[i]);
    return out;
}

}  // namespace ns2d

#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "ns2d/error.hpp"
#include "ns2d/fft.hpp"
#include "ns2d/spectral.hpp"
#include "test_support.hpp"

using namespace ns2d;
using namespace ns2d::testing;
using std::numbers::pi;

TEST(Grid, ValidatesShape) {
    EXPECT_NO_THROW(grid_of(8).validate());
    EXPECT_THROW(grid_of(6).validate(), ContractError);
    EXPECT_THROW(grid_of(33).validate(), ContractError);
    GridSpec g = grid_of(32);
    g.domain_length = -1.0;
    EXPECT_THROW(g.validate(), ContractError);
    g = grid_of(32);
    g.dealias_fraction = 1.5;
    EXPECT_THROW(g.validate(), ContractError);
}

TEST(Grid, WavenumberLayout) {
    const GridSpec g = grid_of(16);
    EXPECT_EQ(g.half(), 9);
    EXPECT_EQ(g.signed_index(0), 0);
    EXPECT_EQ(g.signed_index(8), 8);
    EXPECT_EQ(g.signed_index(9), -7);
    EXPECT_EQ(g.signed_index(15), -1);
    EXPECT_DOUBLE_EQ(g.wavenumber_unit(), 1.0);
    EXPECT_DOUBLE_EQ(grid_of(16, 4 * pi).wavenumber_unit(), 0.5);
}

TEST(Transform, CosineHasHalfCoefficients) {
    const GridSpec g = grid_of(16);
    const auto f = PhysicalField::from_function(g, [](double x1, double x2) { return std::cos(2 * x1 + 3 * x2); });
    const SpectralField h = forward_transform(f);
    EXPECT_NEAR(h.coeff(2, 3).real(), 0.5, 1e-15);
    EXPECT_NEAR(h.coeff(-2, -3).real(), 0.5, 1e-15);
    EXPECT_NEAR(std::abs(h.coeff(2, -3)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(h.mean_coeff()), 0.0, 1e-15);
}

TEST(Transform, RoundTripRandomFields) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const GridSpec g = grid_of(32);
        const SpectralField w = random_field(g, 10, seed);
        const PhysicalField f = inverse_transform(w);
        const PhysicalField back = inverse_transform(forward_transform(f));
        EXPECT_LT(max_diff(back.values(), f.values()), 1e-13 * max_abs(f.values()));
        EXPECT_LT(max_diff(forward_transform(f), w), 1e-15);
    }
}

TEST(Transform, RejectsNonFinite) {
    const GridSpec g = grid_of(8);
    RealBuffer v(g.physical_size(), 0.0);
    EXPECT_THROW(PhysicalField(g, std::span<const double>(v.data(), 3)), ContractError);
    v[5] = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(PhysicalField(g, std::move(v)), ContractError);
}

TEST(Transform, FullSpectrumHermitianCheck) {
    const GridSpec g = grid_of(8);
    const SpectralField w = random_field(g, 3, 11);
    std::vector<Complex> full = w.to_full();
    const SpectralField back = SpectralField::from_full(g, full);
    EXPECT_EQ(max_diff(back, w), 0.0);
    EXPECT_LT(max_diff(inverse_transform_full(g, full).values(), inverse_transform(w).values()), 1e-15);
    full[1 * 8 + 2] += Complex(0.0, 0.1);
    EXPECT_THROW(SpectralField::from_full(g, full), ContractError);
    EXPECT_THROW(inverse_transform_full(g, full), ContractError);
}

TEST(Transform, SetCoeffKeepsHermitianPartner) {
    const GridSpec g = grid_of(8);
    SpectralField w(g);
    w.set_coeff(-3, 0, Complex(1.0, 2.0));
    EXPECT_EQ(w.coeff(3, 0), Complex(1.0, -2.0));
    w.set_coeff(4, 4, Complex(1.0, 2.0));
    EXPECT_EQ(w.coeff(4, 4).imag(), 0.0);
    const PhysicalField f = inverse_transform(w);
    EXPECT_TRUE(f.all_finite());
}

TEST(InnerProduct, CosineClosedForms) {
    const GridSpec g = grid_of(32);
    const auto c = PhysicalField::from_function(g, [](double x1, double) { return std::cos(x1); });
    // <cos, cos> = 2 pi^2 on the 2 pi torus.
    EXPECT_NEAR(inner_product(c, c), 2 * pi * pi, 1e-12);
    const SpectralField ch = forward_transform(c);
    EXPECT_NEAR(inner_product(ch, ch), 2 * pi * pi, 1e-12);
    const Norms n = norms(c);
    EXPECT_NEAR(n.l2, std::sqrt(2.0) * pi, 1e-12);
    EXPECT_NEAR(n.linf, 1.0, 1e-15);
    // int |cos x1| = 4 per period in x1, times 2 pi in x2; the kink at the
    // zeros limits the grid sum to second order.
    EXPECT_NEAR(n.l1, 8 * pi, 0.1);
    const Norms fine = norms(PhysicalField::from_function(grid_of(64), [](double x1, double) { return std::cos(x1); }));
    EXPECT_NEAR((n.l1 - 8 * pi) / (fine.l1 - 8 * pi), 4.0, 0.2);
}

TEST(InnerProduct, ParsevalRandomPairs) {
    const GridSpec g = grid_of(32);
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const SpectralField a = random_field(g, 15, seed);
        const SpectralField b = random_field(g, 15, seed + 100);
        const double phys = inner_product(inverse_transform(a), inverse_transform(b));
        const double spec = inner_product(a, b);
        EXPECT_NEAR(phys, spec, 1e-12 * std::sqrt(inner_product(a, a) * inner_product(b, b)));
    }
}

TEST(InnerProduct, PairwiseSumIsExactOnIntegers) {
    std::vector<double> v(1000);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
    EXPECT_EQ(pairwise_sum(v), 499500.0);
    EXPECT_EQ(pairwise_sum(std::span<const double>{}), 0.0);
}

TEST(InterpolantSup, FindsPeaksBetweenNodes) {
    const GridSpec g = grid_of(8);
    const double h = g.spacing();
    const auto f = PhysicalField::from_function(g, [h](double x1, double) { return std::cos(x1 - 0.5 * h); });
    EXPECT_LT(norms(f).linf, 1.0 - 1e-2);
    EXPECT_NEAR(interpolant_sup(forward_transform(f)), 1.0, 1e-14);
    EXPECT_NEAR(interpolant_sup(forward_transform(f), 1), norms(f).linf, 1e-15);
    // Nyquist mode: the interpolant is the cosine itself.
    const auto ny = PhysicalField::from_function(g, [](double x1, double x2) { return std::cos(4 * x1) + std::cos(4 * x2); });
    EXPECT_NEAR(interpolant_sup(forward_transform(ny)), 2.0, 1e-14);
    EXPECT_THROW(interpolant_sup(forward_transform(f), 0), ContractError);
}

TEST(BiotSavart, SingleModeVelocity) {
    const GridSpec g = grid_of(16);
    // w = cos x1 -> stream function cos x1, u = (d2 psi, -d1 psi) = (0, sin x1).
    const auto w = PhysicalField::from_function(g, [](double x1, double) { return std::cos(x1); });
    SpectralField wh = forward_transform(w);
    wh.remove_mean();
    const VectorField u = biot_savart(wh);
    const auto expect = PhysicalField::from_function(g, [](double x1, double) { return std::sin(x1); });
    EXPECT_LT(max_abs(u.x1.values()), 1e-15);
    EXPECT_LT(max_diff(u.x2.values(), expect.values()), 1e-14);
}

TEST(BiotSavart, DivergenceFreeAndCurlRecovers) {
    for (int n : {16, 32, 64}) {
        const GridSpec g = grid_of(n, 3.0);
        const SpectralField w = random_field(g, n / 3, 7 + n);
        const VectorField u = biot_savart(w);
        const double umax = std::max(max_abs(u.x1.values()), max_abs(u.x2.values()));
        EXPECT_LT(max_abs(divergence(u).values()), 1e-12 * umax) << "N=" << n;
        const PhysicalField wp = inverse_transform(w);
        EXPECT_LT(max_diff(curl(u).values(), wp.values()), 1e-12 * max_abs(wp.values())) << "N=" << n;
    }
}

TEST(BiotSavart, RejectsNonzeroMean) {
    const GridSpec g = grid_of(8);
    SpectralField w(g);
    w.coeffs()[0] = 1.0;
    EXPECT_THROW(biot_savart(w), ContractError);
}

TEST(Derivatives, ExactOnTrigonometricPolynomials) {
    const GridSpec g = grid_of(32, 4 * pi);
    auto f = PhysicalField::from_function(g, [](double x1, double x2) { return std::sin(1.5 * x1) * std::cos(x2); });
    const VectorField d = gradient(forward_transform(f));
    const auto d1 = PhysicalField::from_function(g, [](double x1, double x2) { return 1.5 * std::cos(1.5 * x1) * std::cos(x2); });
    const auto d2 = PhysicalField::from_function(g, [](double x1, double x2) { return -std::sin(1.5 * x1) * std::sin(x2); });
    EXPECT_LT(max_diff(d.x1.values(), d1.values()), 1e-13);
    EXPECT_LT(max_diff(d.x2.values(), d2.values()), 1e-13);
    const PhysicalField lap = inverse_transform(laplacian(forward_transform(f)));
    EXPECT_LT(max_diff(lap.values(), (f * -3.25).values()), 1e-13);
}

TEST(Derivatives, GradientNormMatchesQuadrature) {
    const GridSpec g = grid_of(32);
    const SpectralField w = random_field(g, 10, 5);
    const VectorField d = gradient(w);
    EXPECT_NEAR(gradient_norm_sq(w), inner_product(d, d), 1e-12 * gradient_norm_sq(w));
    const VectorField u = biot_savart(w);
    EXPECT_NEAR(velocity_norm_sq(w), inner_product(u, u), 1e-12 * velocity_norm_sq(w));
}

TEST(Dealias, CutoffRule) {
    const GridSpec g = grid_of(48);
    // 2/3 * 24 = 16.
    EXPECT_TRUE(retained_by_dealias(g, 16, -16));
    EXPECT_FALSE(retained_by_dealias(g, 17, 0));
    EXPECT_FALSE(retained_by_dealias(g, 0, -17));
    const SpectralField w = dealias(random_field(g, 24, 3));
    EXPECT_EQ(std::abs(w.coeff(17, 3)), 0.0);
    EXPECT_NE(std::abs(w.coeff(16, 3)), 0.0);
}

TEST(Dealias, ProductOfBandLimitedFieldsIsAliasFreeInBand) {
    // The 2/3 rule: the band-limited part of a grid product equals the exact
    // product's band-limited part; check against a product computed on a
    // twice finer grid.
    const GridSpec g = grid_of(32);
    const GridSpec fine = grid_of(64);
    const SpectralField a = dealias(random_field(g, 10, 1));
    const SpectralField b = dealias(random_field(g, 10, 2));
    const SpectralField coarse = dealias(forward_transform(hadamard(inverse_transform(a), inverse_transform(b))));
    SpectralField af(fine), bf(fine);
    for (int k1 = -10; k1 <= 10; ++k1)
        for (int k2 = 0; k2 <= 10; ++k2) {
            af.set_coeff(k1, k2, a.coeff(k1, k2));
            bf.set_coeff(k1, k2, b.coeff(k1, k2));
        }
    const SpectralField exact = forward_transform(hadamard(inverse_transform(af), inverse_transform(bf)));
    for (int k1 = -10; k1 <= 10; ++k1)
        for (int k2 = 0; k2 <= 10; ++k2) EXPECT_LT(std::abs(coarse.coeff(k1, k2) - exact.coeff(k1, k2)), 1e-14);
}

TEST(FourierTransform, SharedPlansAreThreadSafe) {
    const GridSpec g = grid_of(32);
    const SpectralField w = random_field(g, 10, 9);
    const PhysicalField ref = inverse_transform(w);
    std::vector<std::thread> pool;
    std::atomic<int> bad{0};
    for (int t = 0; t < 4; ++t)
        pool.emplace_back([&] {
            for (int i = 0; i < 50; ++i)
                if (max_diff(inverse_transform(w).values(), ref.values()) != 0.0) ++bad;
        });
    for (auto& th : pool) th.join();
    EXPECT_EQ(bad.load(), 0);
}

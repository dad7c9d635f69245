#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "ns2d/averaging.hpp"
#include "ns2d/config.hpp"
#include "ns2d/error.hpp"
#include "ns2d/functionals.hpp"
#include "ns2d/spectral.hpp"
#include "test_support.hpp"

using namespace ns2d;
using namespace ns2d::testing;

namespace {

std::vector<TestFunctional> catalog(const GridSpec& g) {
    std::vector<TestFunctional> out;
    for (const auto& name : builtin_functional_names()) out.push_back(build_functional(builtin_functional(name), g));
    return out;
}

SolverParams params(double nu, double gamma, double dt, double horizon, double t0 = 0.0) {
    SolverParams p;
    p.nu = nu;
    p.gamma = gamma;
    p.dt = dt;
    p.horizon = horizon;
    p.t0 = t0;
    return p;
}

// Symmetric difference quotient of Psi along delta.
double directional(const TestFunctional& f, const SpectralField& w, const SpectralField& d, double h) {
    return (eval_psi(f, w + d * h) - eval_psi(f, w - d * h)) / (2.0 * h);
}

}  // namespace

TEST(OuterFunction, CatalogValuesAndGradients) {
    const std::vector<double> a{0.5, -1.0, 2.0};
    OuterFunction lin{OuterKind::linear, {1.0, 2.0, 3.0}};
    EXPECT_DOUBLE_EQ(lin.value(a), 0.5 - 2.0 + 6.0);
    EXPECT_EQ(lin.gradient(a), (std::vector<double>{1.0, 2.0, 3.0}));

    OuterFunction sq{OuterKind::half_sum_squares, {}};
    EXPECT_DOUBLE_EQ(sq.value(a), 0.5 * (0.25 + 1.0 + 4.0));
    EXPECT_EQ(sq.gradient(a), a);

    OuterFunction ch{OuterKind::cosine_character, {0.3, -0.2, 0.1}};
    const double s = 0.15 + 0.2 + 0.2;
    EXPECT_NEAR(ch.value(a), std::cos(s), 1e-15);
    const auto gr = ch.gradient(a);
    EXPECT_NEAR(gr[1], 0.2 * std::sin(s), 1e-15);

    EXPECT_THROW(lin.value(std::vector<double>{1.0}), ContractError);
    for (auto k : {OuterKind::linear, OuterKind::half_sum_squares, OuterKind::cosine_character})
        EXPECT_EQ(outer_kind_from_string(to_string(k)), k);
    EXPECT_THROW(outer_kind_from_string("exp"), ConfigError);
}

TEST(HarmonicBasis, OrthonormalAndMeanFree) {
    const GridSpec g = grid_of(32, 3.0);
    const auto b = harmonic_basis(g, 8);
    ASSERT_EQ(b.size(), 8u);
    for (std::size_t i = 0; i < b.size(); ++i) {
        EXPECT_NEAR(pairwise_sum(b[i].values()), 0.0, 1e-11);
        for (std::size_t j = 0; j < b.size(); ++j)
            EXPECT_NEAR(inner_product(b[i], b[j]), i == j ? 1.0 : 0.0, 1e-13) << i << "," << j;
    }
    // The first pair lives on the unit shell.
    const SpectralField h0 = forward_transform(b[0]);
    const double k0 = std::hypot(1.0, 0.0);
    EXPECT_NEAR(gradient_norm_sq(h0), k0 * k0 * g.wavenumber_unit() * g.wavenumber_unit(), 1e-12);
}

TEST(Functionals, TypeIArgumentsArePairings) {
    const GridSpec g = grid_of(32);
    const SpectralField w = random_field(g, 8, 1);
    const PhysicalField wp = inverse_transform(w);
    const TestFunctional f = build_functional(builtin_functional("quadratic_I"), g);
    const auto a = f.arguments(w);
    ASSERT_EQ(a.size(), f.test_fields().size());
    double half_sq = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        EXPECT_NEAR(a[j], inner_product(wp, f.test_fields()[j]), 1e-13);
        half_sq += 0.5 * a[j] * a[j];
    }
    EXPECT_NEAR(eval_psi(f, w), half_sq, 1e-13);
}

TEST(Functionals, TypeEpsReducesToGainWeightedTypeI) {
    // With |J w| below M, alpha_eps(w) = J J w, so each argument picks up the
    // squared multiplier of the harmonic it is paired with.
    const GridSpec g = grid_of(64);
    const auto basis = harmonic_basis(g, 4);
    auto kernel = std::make_shared<const MollifierKernel>(g, 0.5);
    const OuterFunction lin{OuterKind::linear, {1.0, 1.0, 1.0, 1.0}};
    const auto fi = TestFunctional::type_I("i", lin, basis);
    const auto fe = TestFunctional::type_eps("e", lin, basis, kernel, RenormalizerBeta(1e6));
    const SpectralField w = random_field(g, 10, 5);
    const auto ai = fi.arguments(w);
    const auto ae = fe.arguments(w);
    for (std::size_t j = 0; j < 4; ++j) {
        const SpectralField h = forward_transform(basis[j]);
        // Locate the harmonic's wavenumber.
        int k1 = 0, k2 = 0;
        double best = 0.0;
        for (int a = -3; a <= 3; ++a)
            for (int b = 0; b <= 3; ++b)
                if (std::abs(h.coeff(a, b)) > best) {
                    best = std::abs(h.coeff(a, b));
                    k1 = a;
                    k2 = b;
                }
        const double m = kernel->gain(k1, k2);
        EXPECT_NEAR(ae[j], m * m * ai[j], 1e-12);
    }
}

TEST(Functionals, PsiPrimeMatchesDifferenceQuotients) {
    const GridSpec g = grid_of(32);
    const SpectralField w = random_field(g, 10, 2) * 3.0;
    const SpectralField d = random_field(g, 10, 9);
    for (const auto& f : catalog(g)) {
        const double exact = inner_product(eval_psi_prime(f, w), inverse_transform(d));
        const double e1 = std::abs(directional(f, w, d, 1e-2) - exact);
        const double e2 = std::abs(directional(f, w, d, 5e-3) - exact);
        const double scale = std::abs(exact) + 1e-3;
        if (e1 < 1e-10 * scale) {
            // Linear and quadratic outer functions of linear arguments: exact.
            EXPECT_LT(e2, 1e-10 * scale) << f.name();
        } else {
            EXPECT_NEAR(e1 / e2, 4.0, 0.5) << f.name();
        }
    }
}

TEST(Functionals, F1VanishesAtForcedRest) {
    const GridSpec g = grid_of(32);
    const Forcing f = build_forcing(ForcingSpec::kolmogorov(2, 1.3), g);
    const double gamma = 0.25;
    const SpectralField w = f.g_hat * (1.0 / gamma);
    for (const auto& fn : catalog(g)) EXPECT_NEAR(functional_f1(fn, w, gamma, f), 0.0, 1e-13) << fn.name();
}

TEST(Functionals, F2AndF3FormsAgree) {
    const GridSpec g = grid_of(48);
    const SpectralField w = random_field(g, 10, 3) * 4.0;
    for (const auto& fn : catalog(g)) {
        const double f2 = functional_f2(fn, w);
        EXPECT_NEAR(f2, functional_f2_laplacian_form(fn, w), 1e-11 * (std::abs(f2) + 1.0)) << fn.name();
        const double f3 = functional_f3(fn, w);
        EXPECT_NEAR(f3, functional_f3_advection_form(fn, w), 1e-11 * (std::abs(f3) + 1.0)) << fn.name();
    }
}

TEST(Functionals, F2ClosedFormForQuadratic) {
    // Psi = 1/2 sum <w, h_j>^2 gives Psi' = sum a_j h_j and F2 = sum a_j^2 |k_j|^2
    // when every h_j lies on the unit shell.
    const GridSpec g = grid_of(32);
    const auto basis = harmonic_basis(g, 4);
    const auto f = TestFunctional::type_I("q", OuterFunction{OuterKind::half_sum_squares, {}}, basis);
    const SpectralField w = random_field(g, 6, 4);
    const auto a = f.arguments(w);
    double expect = 0.0;
    for (double x : a) expect += x * x;
    EXPECT_NEAR(functional_f2(f, w), expect, 1e-12);
}

TEST(Functionals, F3VanishesOnSingleMode) {
    const GridSpec g = grid_of(32);
    SpectralField w(g);
    w.set_coeff(2, 1, Complex(0.7, -0.4));
    for (const auto& fn : catalog(g)) {
        EXPECT_NEAR(functional_f3(fn, w), 0.0, 1e-13) << fn.name();
        EXPECT_NEAR(functional_f3_advection_form(fn, w), 0.0, 1e-13) << fn.name();
    }
}

TEST(Functionals, GeneratorIsMinusTimeDerivative) {
    const GridSpec g = grid_of(32);
    const Forcing f = build_forcing(ForcingSpec::kolmogorov(2, 1.0), g);
    const SolverParams p = params(0.02, 0.1, 1e-3, 0.05);
    const SpectralField w0 = random_field(g, 8, 6) * 5.0;
    for (const auto& fn : catalog(g)) {
        std::vector<FunctionalSample> s;
        integrate(w0, p, f, {[&](const TrajectoryState& st) { s.push_back(sample_functional(fn, st.omega, p.gamma, f)); }});
        double worst = 0.0, scale = 0.0;
        for (std::size_t i = 1; i + 1 < s.size(); ++i) {
            const double dpsi = (s[i + 1].psi - s[i - 1].psi) / (2.0 * p.dt);
            worst = std::max(worst, std::abs(dpsi + s[i].generator(p.nu)));
            scale = std::max(scale, std::abs(s[i].generator(p.nu)));
        }
        EXPECT_LT(worst, 1e-4 * scale + 1e-10) << fn.name();
    }
}

TEST(Averaging, TrapezoidMatchesClosedForm) {
    AverageAccumulator acc(1.0);
    const auto q = acc.register_quantity("cos");
    const auto r = acc.register_quantity("sin");
    for (int i = 0; i <= 4000; ++i) {
        const double t = 0.001 * i;
        acc.add(t, std::vector<double>{std::cos(t), std::sin(t)});
    }
    EXPECT_EQ(acc.sample_count(), 3001u);
    EXPECT_NEAR(acc.elapsed(), 3.0, 1e-12);
    const double expect = (std::sin(4.0) - std::sin(1.0)) / 3.0;
    EXPECT_NEAR(acc.average(q), expect, 1e-6);
    // The error bar is of the size of the actual quadrature error (ratio 4 for h vs 2h).
    EXPECT_NEAR(acc.quadrature_error(q) / std::abs(acc.average(q) - expect), 3.0, 0.1);
    EXPECT_NEAR(acc.average("sin"), (std::cos(1.0) - std::cos(4.0)) / 3.0, 1e-6);
    EXPECT_EQ(acc.first(r), std::sin(1.0));
    EXPECT_EQ(acc.last(r), std::sin(4.0));
}

TEST(Averaging, Linearity) {
    AverageAccumulator acc;
    acc.register_quantity("a");
    acc.register_quantity("b");
    acc.register_quantity("c");
    for (int i = 0; i <= 50; ++i) {
        const double t = 0.1 * i + 0.01 * (i % 3);
        const double a = std::exp(-t), b = t * t;
        acc.add(t, std::vector<double>{a, b, 2.0 * a - 3.0 * b});
    }
    EXPECT_NEAR(acc.average("c"), 2.0 * acc.average("a") - 3.0 * acc.average("b"), 1e-12);
}

TEST(Averaging, Contracts) {
    AverageAccumulator acc;
    acc.register_quantity("x");
    EXPECT_THROW(acc.average("x"), ContractError);
    acc.add(0.0, std::vector<double>{1.0});
    EXPECT_THROW(acc.average("x"), ContractError);
    EXPECT_THROW(acc.register_quantity("y"), ContractError);
    EXPECT_THROW(acc.add(0.0, std::vector<double>{1.0}), ContractError);
    EXPECT_THROW(acc.add(1.0, std::vector<double>{1.0, 2.0}), ContractError);
    EXPECT_THROW(acc.index_of("nope"), ContractError);
    acc.add(1.0, std::vector<double>{3.0});
    EXPECT_DOUBLE_EQ(acc.average("x"), 2.0);
}

TEST(Stationarity, RoutesAgreeOnSyntheticSeries) {
    // Psi(t) = sin t, generator = -dPsi/dt = -cos t.
    AverageAccumulator acc;
    acc.register_quantity(quantity::psi("s"));
    acc.register_quantity(quantity::generator("s"));
    for (int i = 0; i <= 1000; ++i) {
        const double t = 0.01 * i;
        acc.add(t, std::vector<double>{std::sin(t), -std::cos(t)});
    }
    const auto r = stationarity_residual(acc, "s");
    EXPECT_NEAR(r.telescoped, -std::sin(10.0) / 10.0, 1e-15);
    EXPECT_NEAR(r.residual, -std::sin(10.0) / 10.0, 1e-5);
    EXPECT_TRUE(r.routes_agree());
    EXPECT_NEAR(r.telescoped_bound, std::abs(std::sin(10.0)) / 10.0, 1e-15);
    EXPECT_THROW(stationarity_residual(acc, "missing"), ContractError);
}

TEST(Stationarity, RoutesAgreeAlongTrajectory) {
    const GridSpec g = grid_of(32);
    const Forcing f = build_forcing(ForcingSpec::kolmogorov(2, 1.0), g);
    const SolverParams p = params(0.02, 0.1, 2e-3, 1.0, 0.2);
    TrajectoryRecorder rec(p, f, catalog(g));
    integrate(random_field(g, 8, 7) * 5.0, p, f, {rec.observer()});
    EXPECT_NEAR(rec.accumulator().elapsed(), 1.0, 1e-12);
    EXPECT_NEAR(rec.accumulator().times().front(), 0.2, 1e-12);
    EXPECT_EQ(rec.samples().size(), 601u);
    const MeasureReport rep = measure_report(rec.accumulator(), p, f);
    ASSERT_EQ(rep.stationarity.size(), builtin_functional_names().size());
    for (const auto& s : rep.stationarity) {
        EXPECT_TRUE(s.routes_agree()) << s.functional << " " << s.residual << " vs " << s.telescoped;
        EXPECT_LE(std::abs(s.residual), s.telescoped_bound + s.quadrature_tolerance + 1e-12);
    }
}

TEST(Shells, SyntheticOccupancy) {
    // ||w|| = 1 on [0, 1), 3 on [1, 2]; gamma = 1 and no other terms.
    AverageAccumulator acc;
    for (const char* q : {quantity::enstrophy, quantity::palinstrophy, quantity::injection})
        acc.register_quantity(q);
    for (int i = 0; i <= 200; ++i) {
        const double t = 0.01 * i;
        acc.add(t, std::vector<double>{t < 1.0 ? 1.0 : 9.0, 0.0, 0.0});
    }
    const SolverParams p = params(0.0, 1.0, 0.01, 2.0);
    const auto low = shell_balance(acc, p, 0.0, 2.0);
    const auto high = shell_balance(acc, p, 2.0, 4.0);
    const auto none = shell_balance(acc, p, 5.0, 6.0);
    EXPECT_NEAR(low.occupancy + high.occupancy, 1.0, 1e-2);
    EXPECT_NEAR(low.occupancy, 0.5, 1e-2);
    EXPECT_NEAR(high.value, 9.0 * high.occupancy, 1e-12);
    EXPECT_NEAR(low.value, 1.0 * low.occupancy, 1e-12);
    EXPECT_TRUE(none.empty);
    EXPECT_EQ(none.occupancy, 0.0);
    EXPECT_THROW(shell_balance(acc, p, 2.0, 1.0), ContractError);
}

TEST(Report, SteadyStateSatisfiesBalanceWithEquality) {
    const GridSpec g = grid_of(32);
    const Forcing f = build_forcing(ForcingSpec::single_mode(1, 2, 0.8), g);
    const SolverParams p = params(0.05, 0.2, 1e-2, 5.0);
    InitialCondition ic;
    ic.kind = InitialKind::laminar;
    const SpectralField w0 = build_initial_condition(ic, g, f, p, 1);
    TrajectoryRecorder rec(p, f);
    integrate(w0, p, f, {rec.observer()});
    const MeasureReport r = measure_report(rec.accumulator(), p, f);
    // Closed form: w = (a / lam) cos(k.x), lam = gamma + nu |k|^2, ||w||^2 = 2 pi^2 (a / lam)^2.
    const double lam = 0.2 + 0.05 * 5.0;
    const double z = 2.0 * std::numbers::pi * std::numbers::pi * (0.8 / lam) * (0.8 / lam);
    EXPECT_NEAR(r.mean_enstrophy, z, 1e-10 * z);
    EXPECT_NEAR(r.mean_palinstrophy, 5.0 * z, 1e-10 * z);
    EXPECT_NEAR(r.dissipation_rate, 0.05 * 5.0 * z, 1e-10 * z);
    const double defect = r.mean_injection - p.gamma * r.mean_enstrophy - p.nu * r.mean_palinstrophy;
    EXPECT_LT(std::abs(defect), 1e-8 * r.mean_injection);
    EXPECT_TRUE(r.gineq_holds);
    EXPECT_NEAR(r.support_ball_radius, std::sqrt(2.0) * std::numbers::pi * 0.8 / 0.2, 1e-12);
    // Shells: the whole window is inside the ball; the full-space shell carries the balance.
    ASSERT_GE(r.shells.size(), 2u);
    EXPECT_TRUE(r.shells[0].empty);
    EXPECT_NEAR(r.shells[1].occupancy, 1.0, 1e-15);
    EXPECT_NEAR(r.shells[1].value, -defect, 1e-12 * z);
}

TEST(Report, ZeroForcingDecays) {
    const GridSpec g = grid_of(32);
    const Forcing f = build_forcing(ForcingSpec::none(), g);
    const SolverParams p = params(0.01, 0.5, 1e-2, 10.0, 40.0);
    TrajectoryRecorder rec(p, f);
    integrate(random_field(g, 8, 2) * 10.0, p, f, {rec.observer()});
    const MeasureReport r = measure_report(rec.accumulator(), p, f);
    EXPECT_LT(r.mean_enstrophy, 1e-10);
    EXPECT_EQ(r.mean_injection, 0.0);
    EXPECT_EQ(r.support_ball_radius, 0.0);
    EXPECT_TRUE(r.gineq_holds);
}

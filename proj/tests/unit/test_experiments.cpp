#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "ns2d/config.hpp"
#include "ns2d/error.hpp"
#include "ns2d/experiments.hpp"
#include "ns2d/spectral.hpp"
#include "test_support.hpp"

using namespace ns2d;
using namespace ns2d::testing;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::path(NS2D_TEST_TMP) / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string first_line(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    return line;
}

std::size_t line_count(const fs::path& p) {
    std::ifstream in(p);
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) ++n;
    return n;
}

std::string joined(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
    return s;
}

const char* kSingleMode = R"({
  "grid": {"N": 32},
  "solver": {"nu": 0.01, "gamma": 0.1, "dt": 0.01, "t0": 0, "horizon": 5},
  "forcing": {"kind": "single_mode", "k1": 1, "k2": 1, "amplitude": 0.5},
  "initial_condition": {"kind": "laminar"},
  "functionals": ["quadratic_I", "character_eps"],
  "observer_stride": 5
})";

const char* kLaminarSweep = R"({
  "grid": {"N": 64},
  "solver": {"gamma": 0.1, "dt": 0.01, "t0": 0, "horizon": 2},
  "forcing": {"kind": "single_mode", "k1": 2, "k2": 0, "amplitude": 1},
  "initial_condition": {"kind": "laminar"},
  "sweep": {"nu": [0.02, 0.01, 0.005]},
  "observer_stride": 10
})";

// ||w||^2 of the laminar state (a / lam) cos(k.x) on the 2 pi torus.
double laminar_enstrophy(double a, double lam) { return 2.0 * pi * pi * (a / lam) * (a / lam); }

}  // namespace

TEST(Config, ParsesFullDocument) {
    const auto c = parse_config(R"({
      "grid": {"N": 48, "L": 12.5, "dealias_fraction": 0.5},
      "solver": {"nu": 0.001, "gamma": 0.2, "dt": 0.005, "t0": 3, "horizon": 7},
      "forcing": {"kind": "localized_bump", "amplitude": 2, "center": [1, 2], "radius": 1.5, "direction": 0.3},
      "initial_condition": {"kind": "random", "amplitude": 4, "kmax": 6},
      "sweep": {"nu": [0.01, 0.005]},
      "mollifier": {"epsilon": [1.2, 2.4]},
      "functionals": ["linear_I", {"name": "mine", "kind": "type_eps", "psi": "cosine_character",
                                   "c": [1, 2], "m": 2, "epsilon": 1.5, "beta_M": 3}],
      "no_travel": {"threshold": 0.1},
      "output_dir": "out",
      "seed": 9,
      "observer_stride": 4,
      "workers": 3
    })");
    EXPECT_EQ(c.grid.n(), 48);
    EXPECT_DOUBLE_EQ(c.grid.domain_length, 12.5);
    EXPECT_DOUBLE_EQ(c.grid.dealias_fraction, 0.5);
    EXPECT_DOUBLE_EQ(c.solver.gamma, 0.2);
    EXPECT_TRUE(c.t0_explicit);
    EXPECT_DOUBLE_EQ(c.solver.t0, 3.0);
    EXPECT_EQ(c.forcing.kind, ForcingKind::localized_bump);
    EXPECT_DOUBLE_EQ(c.forcing.center_x2, 2.0);
    EXPECT_EQ(c.initial.kmax, 6);
    EXPECT_EQ(c.sweep_nu, (std::vector<double>{0.01, 0.005}));
    EXPECT_EQ(c.mollifier_epsilon.size(), 2u);
    ASSERT_EQ(c.functionals.size(), 2u);
    EXPECT_EQ(c.functionals[1].kind, FunctionalKind::type_eps);
    EXPECT_EQ(c.functionals[1].c, (std::vector<double>{1.0, 2.0}));
    EXPECT_DOUBLE_EQ(c.functionals[1].beta_m, 3.0);
    EXPECT_DOUBLE_EQ(c.no_travel.threshold, 0.1);
    EXPECT_EQ(c.seed, 9u);
    EXPECT_EQ(c.observer_stride, 4);
    EXPECT_EQ(c.workers, 3);
}

TEST(Config, DefaultsAndDerivedT0) {
    const auto c = parse_config(R"({"solver": {"nu": 0.01}})");
    EXPECT_FALSE(c.t0_explicit);
    EXPECT_EQ(c.grid.n(), 64);
    EXPECT_NEAR(c.grid.domain_length, 2 * pi, 1e-15);
}

TEST(Config, RejectsMalformedInput) {
    const std::vector<std::string> bad{
        "{",
        R"({"grid": {"N": 64, "M": 3}})",
        R"({"gird": {"N": 64}})",
        R"({"grid": {"N": "64"}})",
        R"({"grid": {"N": 63}})",
        R"({"solver": {"gamma": 0}})",
        R"({"solver": {"dt": -1}})",
        R"({"forcing": {"kind": "shear"}})",
        R"({"initial_condition": {"kind": "vortex"}})",
        R"({"sweep": {"nu": []}})",
        R"({"sweep": {"nu": [0.01, 0.02]}})",
        R"({"functionals": ["cubic_I"]})",
        R"({"observer_stride": 0})",
        R"({"workers": 0})",
    };
    for (const auto& text : bad) EXPECT_THROW(parse_config(text), ConfigError) << text;
    EXPECT_THROW(load_config(fs::path(NS2D_TEST_TMP) / "no_such_file.json"), ConfigError);
}

TEST(Config, BuiltinFunctionalsBuild) {
    const GridSpec g = grid_of(32);
    for (const auto& n : builtin_functional_names()) {
        const auto f = build_functional(builtin_functional(n), g);
        EXPECT_EQ(f.name(), n);
        EXPECT_EQ(f.test_fields().size(), 4u);
        const bool eps = n.ends_with("_eps");
        EXPECT_EQ(f.kind() == FunctionalKind::type_eps, eps);
        if (eps) EXPECT_DOUBLE_EQ(f.kernel()->epsilon(), std::max(4 * g.spacing(), g.domain_length / 16));
    }
}

TEST(Resolution, GuardMatchesDissipationScale) {
    const GridSpec g = grid_of(64);
    const Forcing f = build_forcing(ForcingSpec::kolmogorov(4, 2.0), g);
    // ||g||^2 = A^2 L^2 / 2, so eta = A^2 / (8 gamma).
    const double eta = 4.0 / (8.0 * 0.1);
    EXPECT_NEAR(dissipation_rate_bound(f, 0.1), eta, 1e-12);
    for (double nu : {1e-2, 1e-3, 1e-4, 1e-5}) {
        const auto r = check_resolution(g, f, 0.1, nu);
        const double kd = std::pow(eta / (nu * nu * nu), 1.0 / 6.0);
        EXPECT_NEAR(r.k_diss, kd, 1e-12 * kd);
        EXPECT_EQ(r.ok(), kd <= g.dealias_cutoff());
        if (!r.ok()) {
            EXPECT_THROW(require_resolution(g, f, 0.1, nu), ConfigError);
            GridSpec bigger = g;
            bigger.points_per_side = r.required_n;
            EXPECT_TRUE(check_resolution(bigger, build_forcing(ForcingSpec::kolmogorov(4, 2.0), bigger), 0.1, nu).ok());
        }
    }
    EXPECT_FALSE(check_resolution(g, f, 0.1, 1e-5).ok());
    EXPECT_TRUE(check_resolution(g, f, 0.1, 1e-2).ok());
    try {
        require_resolution(g, f, 0.1, 1e-5);
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("need N >="), std::string::npos);
    }
}

TEST(Transient, MatchesFormulaAndAlignsWithObserverGrid) {
    const double w0 = 30.0, g = 2.0, gamma = 0.1;
    const double G = g / gamma;
    const double expect = std::max(std::log(gamma * w0 / g + 1.0) / gamma, std::log((w0 - G) / (0.01 * G)) / gamma);
    EXPECT_NEAR(derived_transient(w0, g, gamma), expect, 1e-12);

    auto c = parse_config(R"({"grid": {"N": 32}, "solver": {"nu": 0.01, "dt": 0.01, "horizon": 1},
                              "forcing": {"kind": "kolmogorov", "kf": 2, "amplitude": 1},
                              "initial_condition": {"kind": "random", "amplitude": 50}, "observer_stride": 7})");
    const Forcing f = build_forcing(c.forcing, c.grid);
    const SpectralField w = build_initial_condition(c.initial, c.grid, f, c.solver, c.seed);
    const SolverParams p = effective_params(c, w, f);
    const double every = 0.07;
    EXPECT_NEAR(p.t0 / every, std::round(p.t0 / every), 1e-9);
    EXPECT_GE(p.t0 + 1e-12, derived_transient(std::sqrt(inner_product(w, w)), std::sqrt(inner_product(f.g_hat, f.g_hat)), 0.1));
    EXPECT_LT(p.t0, derived_transient(std::sqrt(inner_product(w, w)), std::sqrt(inner_product(f.g_hat, f.g_hat)), 0.1) + every);
}

TEST(InitialConditions, Kinds) {
    const GridSpec g = grid_of(64);
    const Forcing f = build_forcing(ForcingSpec::kolmogorov(2, 1.0), g);
    SolverParams p;
    InitialCondition ic;
    ic.amplitude = 7.0;
    const SpectralField r = build_initial_condition(ic, g, f, p, 3);
    EXPECT_NEAR(std::sqrt(inner_product(r, r)), 7.0, 1e-12);
    EXPECT_TRUE(r.is_mean_free());
    EXPECT_EQ(max_diff(r, build_initial_condition(ic, g, f, p, 3)), 0.0);
    EXPECT_GT(max_diff(r, build_initial_condition(ic, g, f, p, 4)), 0.0);

    ic.kind = InitialKind::single_mode;
    ic.k1 = 2;
    ic.k2 = -1;
    ic.amplitude = 3.0;
    const SpectralField s = build_initial_condition(ic, g, f, p, 1);
    EXPECT_NEAR(s.coeff(2, -1).real(), 1.5, 1e-15);

    ic.kind = InitialKind::bump;
    ic.center_x1 = ic.center_x2 = pi;
    ic.radius = 1.0;
    ic.amplitude = 1.0;
    const PhysicalField b = inverse_transform(build_initial_condition(ic, g, f, p, 1));
    EXPECT_NEAR(pairwise_sum(b.values()), 0.0, 1e-12);
    EXPECT_NEAR(b(0, 0), 0.0, 1e-12);
    EXPECT_NEAR(b(32, 32), std::exp(-1.0), 1e-12);

    ic.kind = InitialKind::zero;
    EXPECT_EQ(norms(inverse_transform(build_initial_condition(ic, g, f, p, 1))).linf, 0.0);
}

TEST(SingleRun, MatchesLaminarClosedForm) {
    const auto c = parse_config(kSingleMode);
    const fs::path dir = scratch("single");
    const RunResult r = run_single(c, dir);
    const double z = laminar_enstrophy(0.5, 0.1 + 0.01 * 2.0);
    EXPECT_NEAR(r.report.mean_enstrophy, z, 1e-6 * z);
    EXPECT_NEAR(r.report.dissipation_rate, 0.01 * 2.0 * z, 1e-6 * z);
    EXPECT_NEAR(r.report.horizon, 5.0, 1e-12);
    EXPECT_EQ(r.report.samples, 101u);
    for (const auto& s : r.report.stationarity) EXPECT_NEAR(s.residual, 0.0, 1e-10) << s.functional;

    ASSERT_TRUE(fs::exists(dir / "timeseries.csv"));
    ASSERT_TRUE(fs::exists(dir / "report.json"));
    EXPECT_EQ(first_line(dir / "timeseries.csv"), joined(timeseries_columns()));
    EXPECT_EQ(line_count(dir / "timeseries.csv"), 1 + r.samples.size());
    const std::string rep = slurp(dir / "report.json");
    for (const char* key : {"\"mean_enstrophy\"", "\"gineq_holds\"", "\"stationarity\"", "\"shells\"", "\"quadratic_I\""})
        EXPECT_NE(rep.find(key), std::string::npos) << key;
}

TEST(SingleRun, CsvSchemas) {
    EXPECT_EQ(joined(timeseries_columns()),
              "t,energy,enstrophy,palinstrophy,injection,l1,l2,linf,enstrophy_residual,outside_ball");
    EXPECT_EQ(joined(sweep_columns()),
              "nu,mean_enstrophy,mean_palinstrophy,dissipation_rate,balance_gap,telescoping_slack,T,t0");
    EXPECT_EQ(joined(no_travel_columns()), "t,enstrophy,Y_L8,Y_L4,Y_3L8");
}

TEST(SingleRun, DeterministicOutputs) {
    auto c = parse_config(R"({"grid": {"N": 32}, "solver": {"nu": 0.01, "dt": 0.01, "t0": 0.5, "horizon": 1},
                              "forcing": {"kind": "kolmogorov", "kf": 2, "amplitude": 1},
                              "initial_condition": {"kind": "random", "amplitude": 20},
                              "mollifier": {"epsilon": [1.0]},
                              "functionals": ["character_I", "quadratic_eps"], "observer_stride": 2})");
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    run_single(c, a);
    run_single(c, b);
    EXPECT_EQ(slurp(a / "timeseries.csv"), slurp(b / "timeseries.csv"));
    EXPECT_EQ(slurp(a / "report.json"), slurp(b / "report.json"));
    EXPECT_NE(slurp(a / "report.json").find("mollified_balance"), std::string::npos);
}

TEST(SingleRun, ZeroForcingDecaysToRest) {
    auto c = parse_config(R"({"grid": {"N": 32}, "solver": {"nu": 0.01, "gamma": 0.5, "dt": 0.01, "horizon": 5},
                              "forcing": {"kind": "none"},
                              "initial_condition": {"kind": "random", "amplitude": 10}})");
    const RunResult r = run_single(c);
    EXPECT_LT(r.report.mean_enstrophy, 1e-10);
    EXPECT_GT(r.params.t0, 0.0);
}

TEST(SingleRun, UnresolvedViscosityRejected) {
    auto c = parse_config(R"({"grid": {"N": 16}, "solver": {"nu": 1e-5},
                              "forcing": {"kind": "kolmogorov", "kf": 2, "amplitude": 1}})");
    EXPECT_THROW(run_single(c), ConfigError);
}

TEST(Sweep, LaminarClosedFormAndOutputs) {
    auto c = parse_config(kLaminarSweep);
    c.workers = 2;
    const fs::path dir = scratch("sweep");
    const SweepResult s = viscosity_sweep(c, dir);
    ASSERT_EQ(s.entries.size(), 3u);
    for (const auto& e : s.entries) {
        ASSERT_TRUE(e.report) << e.error;
        const double lam = 0.1 + 4.0 * e.nu;
        const double eps = e.nu * 4.0 * laminar_enstrophy(1.0, lam);
        EXPECT_NEAR(e.report->dissipation_rate, eps, 1e-6 * eps);
        EXPECT_TRUE(fs::exists(e.directory / "timeseries.csv"));
    }
    EXPECT_TRUE(s.trend.complete);
    EXPECT_TRUE(s.trend.decreasing);
    EXPECT_EQ(first_line(dir / "sweep.csv"), joined(sweep_columns()));
    EXPECT_EQ(line_count(dir / "sweep.csv"), 4u);
    EXPECT_EQ(slurp(dir / "failures.json"), "[]\n");
    EXPECT_TRUE(fs::exists(dir / "trend.json"));

    // Worker count does not change results.
    c.workers = 1;
    const fs::path dir1 = scratch("sweep1");
    viscosity_sweep(c, dir1);
    EXPECT_EQ(slurp(dir / "sweep.csv"), slurp(dir1 / "sweep.csv"));
}

TEST(Sweep, FailingMemberIsIsolated) {
    auto c = parse_config(kLaminarSweep);
    const fs::path dir = scratch("sweep_fail");
    // A regular file where member 1 wants its directory.
    std::ofstream(dir / "nu_1") << "blocked";
    const SweepResult s = viscosity_sweep(c, dir);
    EXPECT_TRUE(s.entries[0].report.has_value());
    EXPECT_FALSE(s.entries[1].report.has_value());
    EXPECT_FALSE(s.entries[1].error.empty());
    EXPECT_FALSE(s.entries[1].blew_up);
    EXPECT_TRUE(s.entries[2].report.has_value());
    EXPECT_FALSE(s.trend.complete);
    EXPECT_FALSE(s.trend.ok());
    EXPECT_EQ(line_count(dir / "sweep.csv"), 3u);
    EXPECT_NE(slurp(dir / "failures.json").find("0.01"), std::string::npos);
}

TEST(Sweep, TrendLogic) {
    auto entry = [](double nu, double eps, double gap) {
        SweepEntry e;
        e.nu = nu;
        MeasureReport r;
        r.dissipation_rate = eps;
        r.balance_gap = gap;
        e.report = r;
        return e;
    };
    auto t = sweep_trend({entry(1, 10, -9), entry(0.5, 8, -7), entry(0.25, 4, -3)});
    EXPECT_TRUE(t.ok());
    EXPECT_DOUBLE_EQ(t.final_over_initial, 0.4);
    // Within the 10% slack.
    EXPECT_TRUE(sweep_trend({entry(1, 10, -9), entry(0.5, 10.9, -7), entry(0.25, 4, -3)}).decreasing);
    EXPECT_FALSE(sweep_trend({entry(1, 10, -9), entry(0.5, 11.5, -7), entry(0.25, 4, -3)}).decreasing);
    EXPECT_FALSE(sweep_trend({entry(1, 10, -9), entry(0.5, 8, -7), entry(0.25, 6, -3)}).halved);
    EXPECT_FALSE(sweep_trend({entry(1, 10, -9), entry(0.5, 8, -9), entry(0.25, 4, -4.5)}).gap_within_bound);
    EXPECT_FALSE(sweep_trend({entry(1, 10, -1), entry(0.25, 4, -3)}).gap_shrinking);
}

TEST(NoTravel, CutoffAndOuterEnstrophy) {
    EXPECT_EQ(no_travel_cutoff(0.5), 0.0);
    EXPECT_EQ(no_travel_cutoff(1.0), 1.0);
    EXPECT_NEAR(no_travel_cutoff(0.75), 0.5, 1e-15);
    const GridSpec g = grid_of(32, 8 * pi);
    const PhysicalField w = inverse_transform(random_field(g, 8, 1));
    const double z = inner_product(w, w);
    // Tiny radius: only the centre node is excluded.
    const double h = g.spacing();
    EXPECT_NEAR(outer_enstrophy(w, 1e-3 * h), z - w(16, 16) * w(16, 16) * h * h, 1e-12 * z);
    // Radius beyond the half-diagonal: nothing counts.
    EXPECT_EQ(outer_enstrophy(w, 20 * pi), 0.0);
}

TEST(NoTravel, RequiresLargeTorusAndBump) {
    EXPECT_THROW(no_travel_experiment(parse_config(kSingleMode)), ConfigError);
    auto c = parse_config(R"({"grid": {"N": 32, "L": 25.2}, "solver": {"nu": 0.05, "horizon": 1},
                              "forcing": {"kind": "kolmogorov", "kf": 2, "amplitude": 1},
                              "initial_condition": {"kind": "bump"}})");
    EXPECT_THROW(no_travel_experiment(c), ConfigError);
}

#include "ns2d/invariants.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <limits>
#include <random>

#include "ns2d/averaging.hpp"
#include "ns2d/commutator.hpp"
#include "ns2d/diagnostics.hpp"
#include "ns2d/error.hpp"
#include "ns2d/experiments.hpp"
#include "ns2d/functionals.hpp"
#include "ns2d/mollifier.hpp"
#include "ns2d/renormalizer.hpp"
#include "ns2d/solver.hpp"
#include "ns2d/spectral.hpp"

namespace ns2d {

double invariant_tolerance(const std::string& name, double fallback) {
    std::string key = "NS2D_TOL_";
    for (char c : name) key += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    const char* v = std::getenv(key.c_str());
    if (!v || !*v) return fallback;
    char* end = nullptr;
    const double x = std::strtod(v, &end);
    return (end && *end == '\0') ? x : fallback;
}

namespace {

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double max_abs_diff(const SpectralField& a, const SpectralField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.coeffs().size(); ++i) m = std::max(m, std::abs(a.coeffs()[i] - b.coeffs()[i]));
    return m;
}

struct Setup {
    GridSpec grid;
    std::uint64_t seed = 1;
    Forcing forcing;
    SolverParams params;
    SpectralField omega0;
};

Setup make_setup(const ExperimentConfig& config) {
    Setup s;
    s.grid = config.grid;
    s.grid.points_per_side = std::min(config.grid.points_per_side, 64);
    s.grid.validate();
    s.seed = config.seed;
    s.forcing = build_forcing(ForcingSpec::kolmogorov(2, 1.0), s.grid);
    s.params.nu = 2e-2;
    s.params.gamma = 0.1;
    s.params.dt = 2e-3;
    s.params.t0 = 0.0;
    s.params.horizon = 0.4;
    InitialCondition ic;
    ic.kind = InitialKind::random;
    ic.amplitude = 30.0;
    ic.kmax = std::max(2, static_cast<int>(s.grid.dealias_cutoff_index()) / 2);
    s.omega0 = build_initial_condition(ic, s.grid, s.forcing, s.params, s.seed);
    return s;
}

using Check = std::function<std::pair<double, std::string>(const Setup&)>;

struct Entry {
    const char* name;
    double tolerance;
    Check run;
};

std::vector<Entry> catalog() {
    std::vector<Entry> e;
    e.push_back({"transform_roundtrip", 1e-12, [](const Setup& s) {
                     const PhysicalField f = inverse_transform(s.omega0);
                     const PhysicalField back = inverse_transform(forward_transform(f));
                     return std::pair{max_abs_diff(back.values(), f.values()) / max_abs(f.values()), std::string()};
                 }});
    e.push_back({"biot_savart_divergence", 1e-12, [](const Setup& s) {
                     const VectorField u = biot_savart(s.omega0);
                     const double scale = std::max(max_abs(u.x1.values()), max_abs(u.x2.values()));
                     return std::pair{max_abs(divergence(u).values()) / scale, std::string()};
                 }});
    e.push_back({"biot_savart_curl", 1e-12, [](const Setup& s) {
                     const PhysicalField w = inverse_transform(s.omega0);
                     const PhysicalField c = curl(biot_savart(s.omega0));
                     return std::pair{max_abs_diff(c.values(), w.values()) / max_abs(w.values()), std::string()};
                 }});
    e.push_back({"parseval", 1e-12, [](const Setup& s) {
                     const PhysicalField a = inverse_transform(s.omega0);
                     const PhysicalField b = s.forcing.g;
                     const double p = inner_product(a, b);
                     const double q = inner_product(s.omega0, s.forcing.g_hat);
                     const double scale = std::sqrt(inner_product(a, a) * inner_product(b, b));
                     return std::pair{std::abs(p - q) / scale, std::string()};
                 }});
    e.push_back({"advection_enstrophy_neutral", 1e-12, [](const Setup& s) {
                     const SpectralField n = nonlinear_term(s.omega0);
                     const double v = inner_product(n, s.omega0);
                     const double scale = std::sqrt(inner_product(n, n) * inner_product(s.omega0, s.omega0));
                     return std::pair{std::abs(v) / scale, std::string()};
                 }});
    e.push_back({"single_mode_decay", 1e-8, [](const Setup& s) {
                     SpectralField w(s.grid);
                     w.set_coeff(1, 0, 0.5);
                     SolverParams p = s.params;
                     p.nu = 1e-2;
                     p.horizon = 1.0;
                     const Forcing none = build_forcing(ForcingSpec::none(), s.grid);
                     const TrajectoryState end = integrate(w, p, none, {});
                     const double k2 = s.grid.wavenumber_unit() * s.grid.wavenumber_unit();
                     SpectralField expect = w * std::exp(-(p.gamma + p.nu * k2) * end.time);
                     return std::pair{max_abs_diff(end.omega, expect) / 0.5, std::string()};
                 }});
    e.push_back({"laminar_steady_state", 1e-10, [](const Setup& s) {
                     InitialCondition ic;
                     ic.kind = InitialKind::laminar;
                     const SpectralField w = build_initial_condition(ic, s.grid, s.forcing, s.params, s.seed);
                     const SteadyStateResidual r = steady_state_residual(w, s.params, s.forcing);
                     return std::pair{r.equation / norms(s.forcing.g).l2, std::string()};
                 }});
    e.push_back({"rk4_order", 4.0, [](const Setup& s) {
                     SolverParams p = s.params;
                     p.horizon = 0.4;
                     auto run = [&](double dt) {
                         SolverParams q = p;
                         q.dt = dt;
                         IntegrateOptions opts;
                         opts.warning_sink = [](const std::string&) {};
                         return integrate(s.omega0, q, s.forcing, {}, opts).omega;
                     };
                     const SpectralField ref = run(0.00125);
                     const double e1 = max_abs_diff(run(0.04), ref);
                     const double e2 = max_abs_diff(run(0.02), ref);
                     const double ratio = e1 / e2;
                     return std::pair{std::abs(ratio - 16.0), "ratio " + format_number(ratio)};
                 }});
    e.push_back({"energy_balance", 1e-4, [](const Setup& s) {
                     std::vector<BalanceSample> samples;
                     integrate(s.omega0, s.params, s.forcing,
                               {[&](const TrajectoryState& st) { samples.push_back(measure_sample(st, s.forcing)); }});
                     return std::pair{energy_balance_residual(samples, s.params), std::string()};
                 }});
    e.push_back({"enstrophy_balance", 1e-4, [](const Setup& s) {
                     std::vector<BalanceSample> samples;
                     integrate(s.omega0, s.params, s.forcing,
                               {[&](const TrajectoryState& st) { samples.push_back(measure_sample(st, s.forcing)); }});
                     return std::pair{enstrophy_balance_residual(samples, s.params), std::string()};
                 }});
    e.push_back({"decay_envelopes", 0.0, [](const Setup& s) {
                     std::vector<BalanceSample> samples;
                     integrate(s.omega0, s.params, s.forcing,
                               {[&](const TrajectoryState& st) { samples.push_back(measure_sample(st, s.forcing)); }});
                     const Norms n0 = norms(inverse_transform(s.omega0));
                     const Norms ng = norms(s.forcing.g);
                     const auto l2 = decay_envelope_check(samples, EnvelopeNorm::l2, n0.l2, ng.l2, s.params.gamma);
                     const auto li =
                         decay_envelope_check(samples, EnvelopeNorm::linf, interpolant_sup(s.omega0),
                                              interpolant_sup(s.forcing.g_hat), s.params.gamma);
                     const double worst = std::max(l2.worst_margin, li.worst_margin);
                     return std::pair{std::max(0.0, worst), "margin " + format_number(worst)};
                 }});
    e.push_back({"mollifier_routes", 1e-12, [](const Setup& s) {
                     const MollifierKernel k(s.grid, MollifierKernel::min_epsilon(s.grid) * 1.5);
                     const PhysicalField f = inverse_transform(s.omega0);
                     const PhysicalField a = mollify(f, k);
                     const PhysicalField b = mollify_by_shifts(f, k);
                     return std::pair{max_abs_diff(a.values(), b.values()) / max_abs(f.values()), std::string()};
                 }});
    e.push_back({"flux_identity", 1e-9, [](const Setup& s) {
                     const MollifierKernel k(s.grid, MollifierKernel::min_epsilon(s.grid) * 1.5);
                     // Band-limit the factors so the product is resolved.
                     SpectralField w = s.omega0;
                     auto c = w.coeffs();
                     for (int r1 = 0; r1 < s.grid.n(); ++r1)
                         for (int c2 = 0; c2 < s.grid.half(); ++c2) {
                             const int k1 = s.grid.signed_index(r1);
                             if (std::max(std::abs(k1), c2) > s.grid.n() / 4)
                                 c[static_cast<std::size_t>(r1) * s.grid.half() + c2] = 0.0;
                         }
                     const VectorField u = biot_savart(w);
                     const PhysicalField b = inverse_transform(w);
                     const FluxIdentity id = flux_identity(u, b, k);
                     const double scale = std::max(max_abs(id.lhs.x1.values()), max_abs(id.lhs.x2.values()));
                     return std::pair{id.max_defect / scale, std::string()};
                 }});
    e.push_back({"renormalizer_identity_window", 0.0, [](const Setup&) {
                     const RenormalizerBeta beta(2.0);
                     double worst = 0.0;
                     for (int i = -200; i <= 200; ++i) {
                         const double y = 2.0 * i / 200.0;
                         worst = std::max({worst, std::abs(beta(y) - y), std::abs(beta.first(y) - 1.0)});
                         const double far = 4.0 + std::abs(y);
                         worst = std::max(worst, std::abs(beta(far)));
                     }
                     return std::pair{worst, std::string()};
                 }});
    e.push_back({"psi_prime_directional", 1e-6, [](const Setup& s) {
                     std::mt19937_64 rng(s.seed + 7);
                     std::normal_distribution<double> nd;
                     SpectralField phi(s.grid);
                     for (int k1 = -3; k1 <= 3; ++k1)
                         for (int k2 = 0; k2 <= 3; ++k2)
                             if (k2 > 0 || k1 > 0) phi.set_coeff(k1, k2, Complex(nd(rng), nd(rng)) * 0.1);
                     const PhysicalField phys = inverse_transform(phi);
                     const SpectralField w = s.omega0 * (1.0 / 30.0);
                     double worst = 0.0;
                     for (const auto& name : builtin_functional_names()) {
                         const TestFunctional f = build_functional(builtin_functional(name), s.grid);
                         const double d = 1e-4;
                         const double fd = (eval_psi(f, w + phi * d) - eval_psi(f, w - phi * d)) / (2.0 * d);
                         const double an = inner_product(eval_psi_prime(f, w), phys);
                         worst = std::max(worst, std::abs(fd - an) / std::max(1.0, std::abs(an)));
                     }
                     return std::pair{worst, std::string()};
                 }});
    e.push_back({"f2_forms", 1e-10, [](const Setup& s) {
                     double worst = 0.0;
                     for (const auto& name : builtin_functional_names()) {
                         const TestFunctional f = build_functional(builtin_functional(name), s.grid);
                         const double a = functional_f2(f, s.omega0);
                         const double b = functional_f2_laplacian_form(f, s.omega0);
                         worst = std::max(worst, std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}));
                     }
                     return std::pair{worst, std::string()};
                 }});
    e.push_back({"f3_forms", 1e-10, [](const Setup& s) {
                     double worst = 0.0;
                     for (const auto& name : builtin_functional_names()) {
                         const TestFunctional f = build_functional(builtin_functional(name), s.grid);
                         const double a = functional_f3(f, s.omega0);
                         const double b = functional_f3_advection_form(f, s.omega0);
                         const PhysicalField p = eval_psi_prime(f, s.omega0);
                         const SpectralField n = nonlinear_term(s.omega0);
                         const double scale = std::sqrt(inner_product(p, p) * inner_product(n, n));
                         worst = std::max(worst, std::abs(a - b) / std::max(scale, 1e-300));
                     }
                     return std::pair{worst, std::string()};
                 }});
    e.push_back({"stationarity_routes", 0.0, [](const Setup& s) {
                     std::vector<TestFunctional> fs;
                     for (const auto& name : builtin_functional_names())
                         fs.push_back(build_functional(builtin_functional(name), s.grid));
                     TrajectoryRecorder rec(s.params, s.forcing, std::move(fs));
                     integrate(s.omega0, s.params, s.forcing, {rec.observer()});
                     double worst = 0.0;
                     for (const auto& f : rec.functionals()) {
                         const auto r = stationarity_residual(rec.accumulator(), f.name());
                         const double excess = std::abs(r.residual - r.telescoped) - r.quadrature_tolerance;
                         worst = std::max(worst, excess / std::max(1.0, r.telescoped_bound));
                     }
                     return std::pair{std::max(0.0, worst), std::string()};
                 }});
    e.push_back({"accumulator_linearity", 1e-12, [](const Setup& s) {
                     TrajectoryRecorder rec(s.params, s.forcing);
                     integrate(s.omega0, s.params, s.forcing, {rec.observer()});
                     const auto& acc = rec.accumulator();
                     const auto z = acc.series(acc.index_of(quantity::enstrophy));
                     const auto p = acc.series(acc.index_of(quantity::palinstrophy));
                     std::vector<double> combo(z.size());
                     for (std::size_t i = 0; i < z.size(); ++i) combo[i] = 2.0 * z[i] - 0.5 * p[i];
                     const double lhs = acc.average_of(combo);
                     const double rhs = 2.0 * acc.average(quantity::enstrophy) - 0.5 * acc.average(quantity::palinstrophy);
                     return std::pair{std::abs(lhs - rhs) / std::max(std::abs(lhs), 1.0), std::string()};
                 }});
    e.push_back({"gineq", 0.0, [](const Setup& s) {
                     TrajectoryRecorder rec(s.params, s.forcing);
                     integrate(s.omega0, s.params, s.forcing, {rec.observer()});
                     const MeasureReport r = measure_report(rec.accumulator(), s.params, s.forcing);
                     return std::pair{std::max(0.0, -r.gineq_margin), "margin " + format_number(r.gineq_margin)};
                 }});
    e.push_back({"determinism", 0.0, [](const Setup& s) {
                     const TrajectoryState a = integrate(s.omega0, s.params, s.forcing, {});
                     const TrajectoryState b = integrate(s.omega0, s.params, s.forcing, {});
                     return std::pair{max_abs_diff(a.omega, b.omega), std::string()};
                 }});
    return e;
}

}  // namespace

std::vector<InvariantResult> run_invariant_suite(const ExperimentConfig& config) {
    const Setup setup = make_setup(config);
    std::vector<InvariantResult> out;
    for (const Entry& entry : catalog()) {
        InvariantResult r;
        r.name = entry.name;
        r.tolerance = invariant_tolerance(entry.name, entry.tolerance);
        const auto start = std::chrono::steady_clock::now();
        try {
            auto [defect, detail] = entry.run(setup);
            r.defect = defect;
            r.detail = std::move(detail);
            r.passed = std::isfinite(defect) && defect <= r.tolerance;
        } catch (const std::exception& ex) {
            r.defect = std::numeric_limits<double>::quiet_NaN();
            r.detail = ex.what();
            r.passed = false;
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        out.push_back(std::move(r));
    }
    return out;
}

void print_invariant_table(std::ostream& out, const std::vector<InvariantResult>& results) {
    std::size_t width = 9;
    for (const auto& r : results) width = std::max(width, r.name.size());
    out << std::left << std::setw(static_cast<int>(width)) << "invariant" << "  status  " << std::setw(12) << "defect"
        << "  " << std::setw(12) << "tolerance" << "  time\n";
    for (const auto& r : results) {
        out << std::left << std::setw(static_cast<int>(width)) << r.name << "  " << (r.passed ? "PASS  " : "FAIL  ")
            << "  " << std::setw(12) << sci(r.defect) << "  " << std::setw(12)
            << sci(r.tolerance) << "  " << std::fixed << std::setprecision(2) << r.seconds << "s"
            << std::defaultfloat;
        if (!r.detail.empty()) out << "  " << r.detail;
        out << '\n';
    }
}

}  // namespace ns2d

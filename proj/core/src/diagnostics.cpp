#include "ns2d/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "ns2d/error.hpp"
#include "ns2d/spectral.hpp"

namespace ns2d {

BalanceSample measure_sample(const TrajectoryState& state, const Forcing& forcing) {
    const SpectralField& w = state.omega;
    require_same_grid(w.grid(), forcing.grid, "measure_sample");
    BalanceSample s;
    s.time = state.time;
    auto uh = biot_savart_spectral(w);
    s.energy = inner_product(uh.x1, uh.x1) + inner_product(uh.x2, uh.x2);
    s.velocity_gradient = gradient_norm_sq(uh.x1) + gradient_norm_sq(uh.x2);
    s.enstrophy = inner_product(w, w);
    s.palinstrophy = gradient_norm_sq(w);
    s.injection = inner_product(forcing.g_hat, w);

    PhysicalField wp = inverse_transform(w);
    VectorField u{inverse_transform(uh.x1), inverse_transform(uh.x2)};
    s.energy_injection = inner_product(forcing.f, u);
    s.abs_energy_injection = inner_product(magnitude(forcing.f), magnitude(u));
    auto absw = wp.map([](double v) { return std::abs(v); });
    auto absg = forcing.g.map([](double v) { return std::abs(v); });
    s.abs_injection = inner_product(absg, absw);
    auto n = norms(wp);
    s.l1 = n.l1;
    s.l2 = n.l2;
    s.linf = interpolant_sup(w);
    return s;
}

double three_point_rate(double t0, double t1, double t2, double f0, double f1, double f2) {
    const double a = t1 - t0;
    const double b = t2 - t1;
    if (!(a > 0.0) || !(b > 0.0)) throw ContractError("three_point_rate: sample times must increase");
    return (a * a * (f2 - f1) + b * b * (f1 - f0)) / (a * b * (a + b));
}

namespace {

template <class Residual, class Scale>
double max_normalized_residual(std::span<const BalanceSample> samples, Residual residual, Scale scale,
                               double quantity(const BalanceSample&)) {
    if (samples.size() < 3) throw ContractError("balance residual: need at least 3 samples");
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
        const auto& a = samples[i - 1];
        const auto& m = samples[i];
        const auto& b = samples[i + 1];
        const double half_rate =
            0.5 * three_point_rate(a.time, m.time, b.time, quantity(a), quantity(m), quantity(b));
        const double r = std::abs(half_rate + residual(samples[i]));
        const double sc = scale(samples[i]);
        if (r == 0.0) continue;
        worst = std::max(worst, sc > 0.0 ? r / sc : HUGE_VAL);
    }
    return worst;
}

}  // namespace

double energy_balance_residual(std::span<const BalanceSample> samples, const SolverParams& params) {
    return max_normalized_residual(
        samples,
        [&](const BalanceSample& s) {
            return params.gamma * s.energy + params.nu * s.velocity_gradient - s.energy_injection;
        },
        [&](const BalanceSample& s) { return s.abs_energy_injection + params.gamma * s.energy; },
        [](const BalanceSample& s) { return s.energy; });
}

double enstrophy_balance_residual(std::span<const BalanceSample> samples, const SolverParams& params) {
    return max_normalized_residual(
        samples,
        [&](const BalanceSample& s) {
            return params.gamma * s.enstrophy + params.nu * s.palinstrophy - s.injection;
        },
        [&](const BalanceSample& s) { return s.abs_injection + params.gamma * s.enstrophy; },
        [](const BalanceSample& s) { return s.enstrophy; });
}

double decay_envelope(double t, double omega0_norm, double g_norm, double gamma) noexcept {
    const double limit = g_norm / gamma;
    return std::exp(-gamma * t) * (omega0_norm - limit) + limit;
}

EnvelopeReport decay_envelope_check(std::span<const BalanceSample> samples, EnvelopeNorm norm,
                                    double omega0_norm, double g_norm, double gamma) {
    EnvelopeReport report;
    report.norm = norm;
    const double scale = omega0_norm + g_norm / gamma;
    report.tolerance = (norm == EnvelopeNorm::linf ? 1e-3 : 1e-10) * scale;
    report.worst_margin = samples.empty() ? 0.0 : -HUGE_VAL;
    const double t_start = samples.empty() ? 0.0 : samples.front().time;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double value = norm == EnvelopeNorm::linf ? samples[i].linf : samples[i].l2;
        const double bound = decay_envelope(samples[i].time - t_start, omega0_norm, g_norm, gamma);
        const double margin = value - (bound + report.tolerance);
        report.worst_margin = std::max(report.worst_margin, margin);
        if (margin > 0.0) report.violations.push_back({i, samples[i].time, value, bound});
    }
    return report;
}

SteadyStateResidual steady_state_residual(const SpectralField& omega, const SolverParams& params,
                                          const Forcing& forcing) {
    require_same_grid(omega.grid(), forcing.grid, "steady_state_residual");
    SpectralField r = nonlinear_term(omega);
    r += omega * params.gamma;
    r -= laplacian(omega) * params.nu;
    r -= forcing.g_hat;
    SteadyStateResidual out;
    out.equation = std::sqrt(std::max(0.0, inner_product(r, r)));
    out.balance = std::abs(params.gamma * inner_product(omega, omega) +
                           params.nu * gradient_norm_sq(omega) - inner_product(forcing.g_hat, omega));
    return out;
}

}  // namespace ns2d

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ns2d/forcing.hpp"
#include "ns2d/solver.hpp"

namespace ns2d {

/// Scalar diagnostics of one observed state. All integrals are over the
/// torus; squared norms are not halved.
struct BalanceSample {
    double time = 0.0;
    double energy = 0.0;              // ||u||^2
    double velocity_gradient = 0.0;   // ||grad u||^2
    double energy_injection = 0.0;    // <f, u>
    double abs_energy_injection = 0.0;  // <|f|, |u|>
    double enstrophy = 0.0;           // ||w||^2
    double palinstrophy = 0.0;        // ||grad w||^2
    double injection = 0.0;           // <g, w>
    double abs_injection = 0.0;       // <|g|, |w|>
    double l1 = 0.0;
    double l2 = 0.0;
    double linf = 0.0;                // interpolant_sup(w)
};

BalanceSample measure_sample(const TrajectoryState& state, const Forcing& forcing);

/// Second-order derivative at t1 from three samples with possibly unequal spacing.
double three_point_rate(double t0, double t1, double t2, double f0, double f1, double f2);

/// Max over interior samples of
///   |d/2dt ||u||^2 + gamma ||u||^2 + nu ||grad u||^2 - <f,u>|
/// divided by <|f|,|u|> + gamma ||u||^2, with the time derivative taken by
/// centered differences. Zero residual over zero scale counts as 0.
/// Throws ContractError with fewer than 3 samples.
double energy_balance_residual(std::span<const BalanceSample> samples, const SolverParams& params);

/// Same as energy_balance_residual for the enstrophy balance
///   d/2dt ||w||^2 + nu ||grad w||^2 + gamma ||w||^2 = <g, w>.
double enstrophy_balance_residual(std::span<const BalanceSample> samples, const SolverParams& params);

enum class EnvelopeNorm { l2, linf };

struct EnvelopeViolation {
    std::size_t sample_index = 0;
    double time = 0.0;
    double value = 0.0;
    double bound = 0.0;
};

struct EnvelopeReport {
    EnvelopeNorm norm = EnvelopeNorm::l2;
    double tolerance = 0.0;
    /// max over samples of value - (envelope + tolerance); <= 0 when satisfied.
    double worst_margin = 0.0;
    std::vector<EnvelopeViolation> violations;

    bool ok() const noexcept { return violations.empty(); }
};

/// Envelope e^{-gamma t} (||w0||_p - ||g||_p / gamma) + ||g||_p / gamma.
double decay_envelope(double t, double omega0_norm, double g_norm, double gamma) noexcept;

/// Checks every sample against the decay envelope; pass interpolant_sup(w0)
/// as the initial norm for p = inf. The slack is
/// 1e-3 (||w0||_p + ||g||_p / gamma) for p = inf and 1e-10 times the same for
/// p = 2. Sample times are measured from the initial state.
EnvelopeReport decay_envelope_check(std::span<const BalanceSample> samples, EnvelopeNorm norm,
                                    double omega0_norm, double g_norm, double gamma);

struct SteadyStateResidual {
    /// || gamma w + u.grad w - nu lap w - g ||_2
    double equation = 0.0;
    /// | gamma ||w||^2 + nu ||grad w||^2 - <g, w> |
    double balance = 0.0;
};

SteadyStateResidual steady_state_residual(const SpectralField& omega, const SolverParams& params,
                                          const Forcing& forcing);

}  // namespace ns2d

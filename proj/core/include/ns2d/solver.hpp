#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ns2d/fields.hpp"
#include "ns2d/forcing.hpp"

namespace ns2d {

/// Parameters of the damped-driven vorticity equation
///   d_t w + u.grad w - nu lap w + gamma w = g
/// and of the averaging window [t0, t0 + horizon].
struct SolverParams {
    double nu = 0.0;
    double gamma = 0.1;
    double dt = 1e-3;
    double t0 = 0.0;
    double horizon = 1.0;

    /// gamma > 0, nu >= 0, dt > 0, t0 >= 0, horizon >= 0.
    void validate() const;
};

struct TrajectoryState {
    double time = 0.0;
    SpectralField omega;
    std::int64_t step_count = 0;
};

/// Dealiased advection term P(u.grad w) with u the Biot-Savart velocity of w.
SpectralField nonlinear_term(const SpectralField& omega);

/// Integrating-factor RK4 stepper. The linear symbol -(gamma + nu |k|^2) is
/// integrated exactly; advection and forcing go through classical RK4 stages.
///
/// Holds precomputed exponentials and scratch buffers, so one instance must
/// not be shared between threads.
class IntegratingFactorRK4 {
public:
    using WarningSink = std::function<void(const std::string&)>;

    IntegratingFactorRK4(const GridSpec& grid, const SolverParams& params, const Forcing& forcing);

    /// Advances the state by one step of size params.dt in place.
    /// Throws BlowUpError if any coefficient becomes non-finite.
    void advance(TrajectoryState& state);

    /// P(u.grad w), written into `out` (reuses internal buffers).
    void advection(const SpectralField& omega, SpectralField& out);

    /// Largest |u| seen in the first stage of the most recent step.
    double last_max_velocity() const noexcept { return last_umax_; }
    /// Advective CFL number dt max|u| / h of the most recent step.
    double last_cfl() const noexcept;

    /// Receives a message the first time dt exceeds 0.5 h / max|u|. Defaults to stderr.
    void set_warning_sink(WarningSink sink) { warn_ = std::move(sink); }
    bool cfl_warned() const noexcept { return cfl_warned_; }

    const GridSpec& grid() const noexcept { return grid_; }
    const SolverParams& params() const noexcept { return params_; }

private:
    void rhs(const SpectralField& omega, SpectralField& out, bool record_cfl);

    GridSpec grid_;
    SolverParams params_;
    ComplexBuffer forcing_hat_;
    RealBuffer decay_full_;
    RealBuffer decay_half_;
    RealBuffer inv_k2_;
    RealBuffer q1_;
    RealBuffer q2_;
    std::vector<unsigned char> keep_;
    struct Scratch;
    std::shared_ptr<Scratch> scratch_;
    double last_umax_ = 0.0;
    bool cfl_warned_ = false;
    WarningSink warn_;
};

/// One integrating-factor RK4 step (convenience wrapper; builds a stepper).
TrajectoryState step(const TrajectoryState& state, const SolverParams& params, const Forcing& forcing);

using Observer = std::function<void(const TrajectoryState&)>;

struct IntegrateOptions {
    /// Observers fire at every `observer_stride`-th step, including step 0,
    /// and on the final state.
    int observer_stride = 1;
    IntegratingFactorRK4::WarningSink warning_sink;
};

/// Steps from t = 0 to t0 + horizon (rounded to whole steps), calling every
/// observer on the initial state and then at the configured stride.
TrajectoryState integrate(const SpectralField& omega0, const SolverParams& params,
                          const Forcing& forcing, const std::vector<Observer>& observers,
                          const IntegrateOptions& options = {});

/// Number of steps integrate() takes.
std::int64_t total_steps(const SolverParams& params);

}  // namespace ns2d

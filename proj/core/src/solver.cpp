#include "ns2d/solver.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

#include "modes.hpp"
#include "ns2d/error.hpp"
#include "ns2d/fft.hpp"

namespace ns2d {

using detail::for_each_mode;

void SolverParams::validate() const {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ConfigError("solver: gamma must be > 0");
    if (!(nu >= 0.0) || !std::isfinite(nu)) throw ConfigError("solver: nu must be >= 0");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("solver: dt must be > 0");
    if (!(t0 >= 0.0) || !std::isfinite(t0)) throw ConfigError("solver: t0 must be >= 0");
    if (!(horizon >= 0.0) || !std::isfinite(horizon)) throw ConfigError("solver: horizon must be >= 0");
}

struct IntegratingFactorRK4::Scratch {
    std::shared_ptr<const FourierTransform> fft;
    ComplexBuffer spec;
    RealBuffer u1, u2, wx, wy;
    ComplexBuffer k1, k2, k3, k4, stage;
    SpectralField stage_field;
    SpectralField out_field;
};

IntegratingFactorRK4::IntegratingFactorRK4(const GridSpec& grid, const SolverParams& params,
                                           const Forcing& forcing)
    : grid_(grid), params_(params) {
    grid_.validate();
    params_.validate();
    require_same_grid(grid_, forcing.grid, "IntegratingFactorRK4");
    const std::size_t S = grid_.spectral_size();
    const std::size_t P = grid_.physical_size();
    forcing_hat_.assign(forcing.g_hat.coeffs().begin(), forcing.g_hat.coeffs().end());
    decay_full_.resize(S);
    decay_half_.resize(S);
    inv_k2_.resize(S);
    q1_.resize(S);
    q2_.resize(S);
    keep_.resize(S);
    const double unit = grid_.wavenumber_unit();
    const int nyq = grid_.n() / 2;
    for_each_mode(grid_, [&](std::size_t idx, int k1, int k2) {
        const double kk = unit * unit * static_cast<double>(k1 * k1 + k2 * k2);
        const double rate = params_.gamma + params_.nu * kk;
        decay_full_[idx] = std::exp(-rate * params_.dt);
        decay_half_[idx] = std::exp(-rate * 0.5 * params_.dt);
        inv_k2_[idx] = (k1 == 0 && k2 == 0) ? 0.0 : 1.0 / kk;
        q1_[idx] = (k1 == nyq) ? 0.0 : unit * k1;
        q2_[idx] = (k2 == nyq) ? 0.0 : unit * k2;
        keep_[idx] = retained_by_dealias(grid_, k1, k2) ? 1 : 0;
    });
    scratch_ = std::make_shared<Scratch>();
    auto& s = *scratch_;
    s.fft = FourierTransform::for_size(grid_.n());
    s.spec.resize(S);
    s.u1.resize(P);
    s.u2.resize(P);
    s.wx.resize(P);
    s.wy.resize(P);
    s.k1.resize(S);
    s.k2.resize(S);
    s.k3.resize(S);
    s.k4.resize(S);
    s.stage.resize(S);
    s.stage_field = SpectralField(grid_);
    s.out_field = SpectralField(grid_);
    warn_ = [](const std::string& msg) { std::cerr << "warning: " << msg << '\n'; };
}

double IntegratingFactorRK4::last_cfl() const noexcept {
    return params_.dt * last_umax_ / grid_.spacing();
}

void IntegratingFactorRK4::advection(const SpectralField& omega, SpectralField& out) {
    require_same_grid(grid_, omega.grid(), "advection");
    auto& s = *scratch_;
    const std::size_t S = grid_.spectral_size();
    const Complex I{0.0, 1.0};
    auto w = omega.coeffs();
    auto inverse_of = [&](auto&& coeff, RealBuffer& dst) {
        for (std::size_t i = 0; i < S; ++i) s.spec[i] = keep_[i] ? coeff(i) : Complex{};
        s.spec[0] = Complex{};
        s.fft->inverse_destroy(s.spec, dst);
    };
    inverse_of([&](std::size_t i) { return I * q2_[i] * w[i] * inv_k2_[i]; }, s.u1);
    inverse_of([&](std::size_t i) { return -I * q1_[i] * w[i] * inv_k2_[i]; }, s.u2);
    inverse_of([&](std::size_t i) { return I * q1_[i] * w[i]; }, s.wx);
    inverse_of([&](std::size_t i) { return I * q2_[i] * w[i]; }, s.wy);
    double umax2 = 0.0;
    const std::size_t P = s.u1.size();
    for (std::size_t i = 0; i < P; ++i) {
        umax2 = std::max(umax2, s.u1[i] * s.u1[i] + s.u2[i] * s.u2[i]);
        s.wx[i] = s.u1[i] * s.wx[i] + s.u2[i] * s.wy[i];
    }
    last_umax_ = std::sqrt(umax2);
    if (out.grid() != grid_ || out.coeffs().size() != S) out = SpectralField(grid_);
    auto o = out.coeffs();
    s.fft->forward(s.wx, o);
    for (std::size_t i = 0; i < S; ++i)
        if (!keep_[i]) o[i] = Complex{};
    o[0] = Complex{};
}

void IntegratingFactorRK4::rhs(const SpectralField& omega, SpectralField& out, bool record_cfl) {
    const double umax_before = last_umax_;
    advection(omega, out);
    if (!record_cfl) last_umax_ = umax_before;
    auto o = out.coeffs();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = forcing_hat_[i] - o[i];
}

void IntegratingFactorRK4::advance(TrajectoryState& state) {
    require_same_grid(grid_, state.omega.grid(), "IntegratingFactorRK4::advance");
    if (!state.omega.is_mean_free())
        throw ContractError("IntegratingFactorRK4::advance: vorticity must be mean-free");
    auto& s = *scratch_;
    const std::size_t S = grid_.spectral_size();
    const double dt = params_.dt;
    auto w = state.omega.coeffs();
    auto& stage = s.stage_field;
    auto& out = s.out_field;
    auto st = stage.coeffs();

    rhs(state.omega, out, true);
    std::copy(out.coeffs().begin(), out.coeffs().end(), s.k1.begin());
    const double cfl = last_cfl();
    if (cfl > 0.5 && !cfl_warned_) {
        cfl_warned_ = true;
        if (warn_) {
            std::ostringstream msg;
            msg << "advective CFL " << cfl << " exceeds 0.5 at step " << state.step_count
                << " (dt=" << dt << ", max|u|=" << last_umax_ << ", h=" << grid_.spacing() << ")";
            warn_(msg.str());
        }
    }

    for (std::size_t i = 0; i < S; ++i) st[i] = decay_half_[i] * (w[i] + 0.5 * dt * s.k1[i]);
    rhs(stage, out, false);
    std::copy(out.coeffs().begin(), out.coeffs().end(), s.k2.begin());

    for (std::size_t i = 0; i < S; ++i) st[i] = decay_half_[i] * w[i] + 0.5 * dt * s.k2[i];
    rhs(stage, out, false);
    std::copy(out.coeffs().begin(), out.coeffs().end(), s.k3.begin());

    for (std::size_t i = 0; i < S; ++i) st[i] = decay_full_[i] * w[i] + dt * decay_half_[i] * s.k3[i];
    rhs(stage, out, false);
    std::copy(out.coeffs().begin(), out.coeffs().end(), s.k4.begin());

    bool finite = true;
    for (std::size_t i = 0; i < S; ++i) {
        const Complex next = decay_full_[i] * w[i] +
                             (dt / 6.0) * (decay_full_[i] * s.k1[i] +
                                           2.0 * decay_half_[i] * (s.k2[i] + s.k3[i]) + s.k4[i]);
        finite = finite && std::isfinite(next.real()) && std::isfinite(next.imag());
        w[i] = next;
    }
    w[0] = Complex{};
    state.step_count += 1;
    state.time = state.step_count * dt;
    if (!finite) throw BlowUpError(state.step_count, state.time, "non-finite vorticity coefficient");
}

SpectralField nonlinear_term(const SpectralField& omega) {
    if (!omega.is_mean_free()) throw ContractError("nonlinear_term: vorticity must be mean-free");
    SolverParams p;
    Forcing none = build_forcing(ForcingSpec::none(), omega.grid());
    IntegratingFactorRK4 stepper(omega.grid(), p, none);
    SpectralField out(omega.grid());
    stepper.advection(omega, out);
    return out;
}

TrajectoryState step(const TrajectoryState& state, const SolverParams& params, const Forcing& forcing) {
    IntegratingFactorRK4 stepper(state.omega.grid(), params, forcing);
    TrajectoryState next = state;
    stepper.advance(next);
    return next;
}

std::int64_t total_steps(const SolverParams& params) {
    return static_cast<std::int64_t>(std::llround((params.t0 + params.horizon) / params.dt));
}

TrajectoryState integrate(const SpectralField& omega0, const SolverParams& params,
                          const Forcing& forcing, const std::vector<Observer>& observers,
                          const IntegrateOptions& options) {
    params.validate();
    if (options.observer_stride < 1) throw ConfigError("integrate: observer stride must be >= 1");
    if (!omega0.is_mean_free()) throw ContractError("integrate: initial vorticity must be mean-free");
    TrajectoryState state{0.0, omega0, 0};
    for (const auto& obs : observers) obs(state);
    const std::int64_t steps = total_steps(params);
    if (steps == 0) return state;
    IntegratingFactorRK4 stepper(omega0.grid(), params, forcing);
    if (options.warning_sink) stepper.set_warning_sink(options.warning_sink);
    for (std::int64_t n = 0; n < steps; ++n) {
        stepper.advance(state);
        if (state.step_count % options.observer_stride == 0 || n + 1 == steps)
            for (const auto& obs : observers) obs(state);
    }
    return state;
}

}  // namespace ns2d

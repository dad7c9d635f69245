#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ns2d/diagnostics.hpp"
#include "ns2d/functionals.hpp"
#include "ns2d/solver.hpp"

namespace ns2d {

/// Finite-horizon Cesaro averages (1/T) int_{t0}^{t0+T} f(s) ds of registered
/// scalar quantities, by the trapezoid rule over the samples it receives.
/// Samples earlier than t0 are ignored. The full series is kept so that
/// restricted (shell) averages and boundary values are available afterwards.
class AverageAccumulator {
public:
    explicit AverageAccumulator(double t0 = 0.0) : t0_(t0) {}

    /// Must be called before the first sample. Returns the quantity index.
    std::size_t register_quantity(const std::string& name);
    std::size_t index_of(const std::string& name) const;
    bool has(const std::string& name) const noexcept;
    std::span<const std::string> names() const noexcept { return names_; }

    /// One value per registered quantity, in registration order.
    void add(double t, std::span<const double> values);

    double t0() const noexcept { return t0_; }
    double elapsed() const noexcept;
    std::size_t sample_count() const noexcept { return times_.size(); }
    std::span<const double> times() const noexcept { return times_; }
    std::span<const double> series(std::size_t q) const;

    /// Throws ContractError when elapsed() == 0.
    double average(std::size_t q) const;
    double average(const std::string& name) const { return average(index_of(name)); }
    /// |A_h - A_2h|: difference between the trapezoid average and the same
    /// rule on every other sample; a conservative error bar for A_h.
    double quadrature_error(std::size_t q) const;
    double first(std::size_t q) const;
    double last(std::size_t q) const;
    double max_value(std::size_t q) const;

    /// Trapezoid average of weights(t_i) * series(q)(t_i) and of the weights
    /// alone, for indicator-restricted averages.
    double weighted_average(std::size_t q, std::span<const double> weights) const;
    double weight_average(std::span<const double> weights) const;

    /// Trapezoid average and error bar of an arbitrary series sampled at times().
    double average_of(std::span<const double> f) const;
    double quadrature_error_of(std::span<const double> f) const;

private:
    double trapezoid(std::span<const double> f) const;
    double trapezoid_coarse(std::span<const double> f) const;
    void require_elapsed() const;

    double t0_;
    std::vector<std::string> names_;
    std::vector<double> times_;
    std::vector<std::vector<double>> values_;
};

/// Standard quantity names recorded by TrajectoryRecorder.
namespace quantity {
inline constexpr const char* energy = "energy";
inline constexpr const char* enstrophy = "enstrophy";
inline constexpr const char* palinstrophy = "palinstrophy";
inline constexpr const char* injection = "injection";
inline constexpr const char* l1 = "l1";
inline constexpr const char* l2 = "l2";
inline constexpr const char* linf = "linf";
std::string psi(const std::string& functional);
std::string generator(const std::string& functional);
}  // namespace quantity

/// Observer that samples balance diagnostics and test functionals along a
/// trajectory. Every observed state is kept as a BalanceSample; states at or
/// after t0 also feed the accumulator.
class TrajectoryRecorder {
public:
    TrajectoryRecorder(const SolverParams& params, const Forcing& forcing,
                       std::vector<TestFunctional> functionals = {});

    void operator()(const TrajectoryState& state);
    Observer observer();

    const AverageAccumulator& accumulator() const noexcept { return acc_; }
    std::span<const BalanceSample> samples() const noexcept { return samples_; }
    std::span<const TestFunctional> functionals() const noexcept { return functionals_; }
    const SolverParams& params() const noexcept { return params_; }
    const Forcing& forcing() const noexcept { return forcing_; }

private:
    SolverParams params_;
    Forcing forcing_;
    std::vector<TestFunctional> functionals_;
    AverageAccumulator acc_;
    std::vector<BalanceSample> samples_;
};

struct StationarityResidual {
    std::string functional;
    /// Time average of F1 + nu F2 + F3.
    double residual = 0.0;
    /// (Psi(t0) - Psi(t0 + T)) / T, the same quantity by the fundamental theorem of calculus.
    double telescoped = 0.0;
    /// |Psi(t0 + T) - Psi(t0)| / T.
    double telescoped_bound = 0.0;
    /// Trapezoid error bar of the residual average.
    double quadrature_tolerance = 0.0;

    bool routes_agree() const noexcept;
};

/// Throws ContractError when elapsed() == 0 or the functional was not recorded.
StationarityResidual stationarity_residual(const AverageAccumulator& acc, const std::string& functional);

struct ShellBalance {
    double lower = 0.0;
    double upper = 0.0;
    /// (1/T) int 1_{E1 <= ||w|| <= E2} (gamma ||w||^2 + nu ||grad w||^2 - <g,w>) dt
    double value = 0.0;
    /// Fraction of the window spent in the shell.
    double occupancy = 0.0;
    bool empty = true;
};

ShellBalance shell_balance(const AverageAccumulator& acc, const SolverParams& params, double lower,
                           double upper);

struct SupportRadii {
    double l1 = 0.0;
    double l2 = 0.0;
    double linf = 0.0;
};

struct MeasureReport {
    double t0 = 0.0;
    double horizon = 0.0;
    std::size_t samples = 0;
    double nu = 0.0;
    double gamma = 0.0;
    double mean_enstrophy = 0.0;
    double mean_palinstrophy = 0.0;
    double mean_injection = 0.0;
    double mean_energy = 0.0;
    /// nu * mean_palinstrophy
    double dissipation_rate = 0.0;
    /// gamma <||w||^2> - <<g,w>>
    double balance_gap = 0.0;
    /// (||w(t0)||^2 + ||w(t0+T)||^2) / (2T)
    double telescoping_slack = 0.0;
    /// Trapezoid error bar of the enstrophy-balance integrand average.
    double quadrature_tolerance = 0.0;
    /// <<g,w>> - gamma <||w||^2> - nu <||grad w||^2> + slack + tolerance; >= 0 when the
    /// finite-T dissipation inequality holds.
    double gineq_margin = 0.0;
    bool gineq_holds = false;
    /// ||g||_2 / gamma
    double support_ball_radius = 0.0;
    SupportRadii support_radii;
    std::vector<StationarityResidual> stationarity;
    std::vector<ShellBalance> shells;
};

/// Assembles all averaged quantities. Shell balances are evaluated for the
/// support-ball shell [||g||/gamma, inf), the full space [0, inf) and any
/// extra (E1, E2) pairs supplied.
MeasureReport measure_report(const AverageAccumulator& acc, const SolverParams& params,
                             const Forcing& forcing,
                             std::span<const std::pair<double, double>> extra_shells = {});

}  // namespace ns2d

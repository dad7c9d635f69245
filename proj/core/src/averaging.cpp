#include "ns2d/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ns2d/error.hpp"
#include "ns2d/spectral.hpp"

namespace ns2d {

std::size_t AverageAccumulator::register_quantity(const std::string& name) {
    if (!times_.empty()) throw ContractError("register_quantity after the first sample");
    if (has(name)) throw ContractError("quantity '" + name + "' registered twice");
    names_.push_back(name);
    values_.emplace_back();
    return names_.size() - 1;
}

std::size_t AverageAccumulator::index_of(const std::string& name) const {
    const auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) throw ContractError("unknown quantity '" + name + "'");
    return static_cast<std::size_t>(it - names_.begin());
}

bool AverageAccumulator::has(const std::string& name) const noexcept {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
}

void AverageAccumulator::add(double t, std::span<const double> values) {
    if (values.size() != names_.size()) throw ContractError("sample has the wrong number of quantities");
    if (t < t0_ - 1e-9 * std::max(1.0, std::abs(t0_))) return;
    if (!times_.empty() && t <= times_.back()) throw ContractError("sample times must increase");
    times_.push_back(t);
    for (std::size_t q = 0; q < values.size(); ++q) values_[q].push_back(values[q]);
}

double AverageAccumulator::elapsed() const noexcept {
    return times_.size() < 2 ? 0.0 : times_.back() - times_.front();
}

std::span<const double> AverageAccumulator::series(std::size_t q) const {
    if (q >= values_.size()) throw ContractError("quantity index out of range");
    return values_[q];
}

void AverageAccumulator::require_elapsed() const {
    if (elapsed() <= 0.0) throw ContractError("average over an empty window");
}

double AverageAccumulator::trapezoid(std::span<const double> f) const {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < times_.size(); ++i)
        s += 0.5 * (times_[i + 1] - times_[i]) * (f[i] + f[i + 1]);
    return s;
}

double AverageAccumulator::trapezoid_coarse(std::span<const double> f) const {
    const std::size_t n = times_.size();
    double s = 0.0;
    std::size_t i = 0;
    for (; i + 2 < n; i += 2) s += 0.5 * (times_[i + 2] - times_[i]) * (f[i] + f[i + 2]);
    if (i + 1 < n) s += 0.5 * (times_[n - 1] - times_[i]) * (f[i] + f[n - 1]);
    return s;
}

double AverageAccumulator::average_of(std::span<const double> f) const {
    require_elapsed();
    if (f.size() != times_.size()) throw ContractError("series length does not match sample count");
    return trapezoid(f) / elapsed();
}

double AverageAccumulator::quadrature_error_of(std::span<const double> f) const {
    require_elapsed();
    if (f.size() != times_.size()) throw ContractError("series length does not match sample count");
    if (times_.size() < 3) return std::abs(trapezoid(f)) / elapsed();
    return std::abs(trapezoid(f) - trapezoid_coarse(f)) / elapsed();
}

double AverageAccumulator::average(std::size_t q) const { return average_of(series(q)); }

double AverageAccumulator::quadrature_error(std::size_t q) const { return quadrature_error_of(series(q)); }

double AverageAccumulator::first(std::size_t q) const {
    const auto s = series(q);
    if (s.empty()) throw ContractError("no samples");
    return s.front();
}

double AverageAccumulator::last(std::size_t q) const {
    const auto s = series(q);
    if (s.empty()) throw ContractError("no samples");
    return s.back();
}

double AverageAccumulator::max_value(std::size_t q) const {
    const auto s = series(q);
    if (s.empty()) throw ContractError("no samples");
    return *std::max_element(s.begin(), s.end());
}

double AverageAccumulator::weighted_average(std::size_t q, std::span<const double> weights) const {
    const auto s = series(q);
    if (weights.size() != s.size()) throw ContractError("weights length does not match sample count");
    std::vector<double> f(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) f[i] = weights[i] * s[i];
    return average_of(f);
}

double AverageAccumulator::weight_average(std::span<const double> weights) const { return average_of(weights); }

namespace quantity {
std::string psi(const std::string& functional) { return "psi:" + functional; }
std::string generator(const std::string& functional) { return "generator:" + functional; }
}  // namespace quantity

TrajectoryRecorder::TrajectoryRecorder(const SolverParams& params, const Forcing& forcing,
                                       std::vector<TestFunctional> functionals)
    : params_(params), forcing_(forcing), functionals_(std::move(functionals)), acc_(params.t0) {
    for (const char* name : {quantity::energy, quantity::enstrophy, quantity::palinstrophy, quantity::injection,
                             quantity::l1, quantity::l2, quantity::linf})
        acc_.register_quantity(name);
    for (const auto& f : functionals_) {
        acc_.register_quantity(quantity::psi(f.name()));
        acc_.register_quantity(quantity::generator(f.name()));
    }
}

void TrajectoryRecorder::operator()(const TrajectoryState& state) {
    const BalanceSample b = measure_sample(state, forcing_);
    samples_.push_back(b);
    if (state.time < params_.t0 - 1e-9 * std::max(1.0, params_.t0)) return;
    std::vector<double> v{b.energy, b.enstrophy, b.palinstrophy, b.injection, b.l1, b.l2, b.linf};
    for (const auto& f : functionals_) {
        const FunctionalSample fs = sample_functional(f, state.omega, params_.gamma, forcing_);
        v.push_back(fs.psi);
        v.push_back(fs.generator(params_.nu));
    }
    acc_.add(state.time, v);
}

Observer TrajectoryRecorder::observer() {
    return [this](const TrajectoryState& s) { (*this)(s); };
}

bool StationarityResidual::routes_agree() const noexcept {
    const double slack = 1e-10 * (std::abs(residual) + std::abs(telescoped)) + 1e-14;
    return std::abs(residual - telescoped) <= quadrature_tolerance + slack;
}

StationarityResidual stationarity_residual(const AverageAccumulator& acc, const std::string& functional) {
    const std::size_t ip = acc.index_of(quantity::psi(functional));
    const std::size_t ig = acc.index_of(quantity::generator(functional));
    StationarityResidual r;
    r.functional = functional;
    r.residual = acc.average(ig);
    const double drop = acc.first(ip) - acc.last(ip);
    r.telescoped = drop / acc.elapsed();
    r.telescoped_bound = std::abs(drop) / acc.elapsed();
    r.quadrature_tolerance = acc.quadrature_error(ig);
    return r;
}

namespace {

std::vector<double> balance_integrand(const AverageAccumulator& acc, const SolverParams& params) {
    const auto z = acc.series(acc.index_of(quantity::enstrophy));
    const auto p = acc.series(acc.index_of(quantity::palinstrophy));
    const auto g = acc.series(acc.index_of(quantity::injection));
    std::vector<double> f(z.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = params.gamma * z[i] + params.nu * p[i] - g[i];
    return f;
}

}  // namespace

ShellBalance shell_balance(const AverageAccumulator& acc, const SolverParams& params, double lower,
                           double upper) {
    if (!(lower >= 0.0) || !(upper >= lower)) throw ContractError("shell_balance: need 0 <= E1 <= E2");
    const auto z = acc.series(acc.index_of(quantity::enstrophy));
    std::vector<double> in(z.size());
    const std::vector<double> f = balance_integrand(acc, params);
    std::vector<double> fw(z.size());
    bool any = false;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double r = std::sqrt(std::max(0.0, z[i]));
        in[i] = (r >= lower && r <= upper) ? 1.0 : 0.0;
        any = any || in[i] > 0.0;
        fw[i] = in[i] * f[i];
    }
    ShellBalance s;
    s.lower = lower;
    s.upper = upper;
    s.empty = !any;
    if (s.empty) return s;
    s.value = acc.average_of(fw);
    s.occupancy = acc.average_of(in);
    return s;
}

MeasureReport measure_report(const AverageAccumulator& acc, const SolverParams& params, const Forcing& forcing,
                             std::span<const std::pair<double, double>> extra_shells) {
    MeasureReport r;
    r.t0 = acc.times().empty() ? acc.t0() : acc.times().front();
    r.horizon = acc.elapsed();
    r.samples = acc.sample_count();
    r.nu = params.nu;
    r.gamma = params.gamma;
    const std::size_t iz = acc.index_of(quantity::enstrophy);
    r.mean_enstrophy = acc.average(iz);
    r.mean_palinstrophy = acc.average(quantity::palinstrophy);
    r.mean_injection = acc.average(quantity::injection);
    r.mean_energy = acc.average(quantity::energy);
    r.dissipation_rate = params.nu * r.mean_palinstrophy;
    r.balance_gap = params.gamma * r.mean_enstrophy - r.mean_injection;
    r.telescoping_slack = (acc.first(iz) + acc.last(iz)) / (2.0 * r.horizon);
    r.quadrature_tolerance = acc.quadrature_error_of(balance_integrand(acc, params));
    r.gineq_margin = r.mean_injection - params.gamma * r.mean_enstrophy - r.dissipation_rate +
                     r.telescoping_slack + r.quadrature_tolerance;
    r.gineq_holds = r.gineq_margin >= 0.0;
    r.support_ball_radius = norms(forcing.g).l2 / params.gamma;
    r.support_radii.l1 = acc.max_value(acc.index_of(quantity::l1));
    r.support_radii.l2 = acc.max_value(acc.index_of(quantity::l2));
    r.support_radii.linf = acc.max_value(acc.index_of(quantity::linf));

    for (const auto& name : acc.names()) {
        constexpr std::string_view prefix = "psi:";
        if (name.starts_with(prefix)) r.stationarity.push_back(stationarity_residual(acc, name.substr(prefix.size())));
    }
    constexpr double inf = std::numeric_limits<double>::infinity();
    r.shells.push_back(shell_balance(acc, params, r.support_ball_radius, inf));
    r.shells.push_back(shell_balance(acc, params, 0.0, inf));
    for (const auto& [lo, hi] : extra_shells) r.shells.push_back(shell_balance(acc, params, lo, hi));
    return r;
}

}  // namespace ns2d

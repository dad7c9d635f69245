#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ns2d/forcing.hpp"
#include "ns2d/functionals.hpp"
#include "ns2d/grid.hpp"
#include "ns2d/solver.hpp"

namespace ns2d {

enum class InitialKind { zero, random, single_mode, bump, laminar };

const char* to_string(InitialKind kind) noexcept;
InitialKind initial_kind_from_string(const std::string& name);

/// Initial vorticity.
///   zero
///   random:      random phases on the shell 1 <= |k| <= kmax, scaled to ||w0||_2 = amplitude
///   single_mode: amplitude cos(k1 x1 + k2 x2)
///   bump:        shielded vortex amplitude b(s) (1 - kappa s^2), s = |x - center| / radius,
///                with kappa fixed so the grid mean vanishes; supported in s < 1 and
///                not projected on the dealiased band
///   laminar:     (gamma - nu lap)^-1 g, the steady state for a single-shell forcing
struct InitialCondition {
    InitialKind kind = InitialKind::random;
    double amplitude = 1.0;
    int kmax = 8;
    int k1 = 1;
    int k2 = 0;
    double center_x1 = 0.0;
    double center_x2 = 0.0;
    double radius = 1.0;
};

/// A test functional as named in a config: one of the built-in entries or a
/// fully specified one.
struct FunctionalConfig {
    std::string name;
    FunctionalKind kind = FunctionalKind::type_I;
    OuterKind psi = OuterKind::half_sum_squares;
    std::vector<double> c;
    int m = 4;
    /// type_eps only; 0 selects max(4 h, L / 16).
    double epsilon = 0.0;
    double beta_m = 10.0;
};

/// Built-in names: linear_I, quadratic_I, character_I, linear_eps,
/// quadratic_eps, character_eps.
FunctionalConfig builtin_functional(const std::string& name);
const std::vector<std::string>& builtin_functional_names();

TestFunctional build_functional(const FunctionalConfig& fc, const GridSpec& grid);

struct NoTravelConfig {
    double threshold = 0.05;
};

struct ExperimentConfig {
    GridSpec grid;
    SolverParams solver;
    /// True when solver.t0 was given explicitly; otherwise it is derived.
    bool t0_explicit = false;
    ForcingSpec forcing;
    InitialCondition initial;
    std::vector<double> sweep_nu;
    std::vector<double> mollifier_epsilon;
    std::vector<FunctionalConfig> functionals;
    NoTravelConfig no_travel;
    std::filesystem::path output_dir = "ns2d-output";
    std::uint64_t seed = 1;
    int observer_stride = 10;
    int workers = 1;

    /// Structural checks: grid, solver, sweep strictly decreasing and
    /// positive, stride and workers positive. Throws ConfigError.
    void validate() const;
};

/// Parses a JSON document. Unknown keys are rejected. Throws ConfigError.
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
/// Throws ConfigError if the file is missing or malformed.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Builds w0 on the grid, mean-free and (except for bump) projected on the dealiased band.
SpectralField build_initial_condition(const InitialCondition& ic, const GridSpec& grid,
                                      const Forcing& forcing, const SolverParams& params,
                                      std::uint64_t seed);

/// A-priori enstrophy dissipation-rate bound per unit area,
/// ||g||^2 / (4 gamma L^2), from nu ||grad w||^2 <= <g,w> - gamma ||w||^2.
double dissipation_rate_bound(const Forcing& forcing, double gamma);
/// Kraichnan dissipation wavenumber (eta / nu^3)^(1/6).
double dissipation_wavenumber(double eta, double nu);

struct ResolutionCheck {
    double nu = 0.0;
    double k_diss = 0.0;
    double cutoff = 0.0;
    int required_n = 0;
    bool ok() const noexcept { return k_diss <= cutoff; }
};
ResolutionCheck check_resolution(const GridSpec& grid, const Forcing& forcing, double gamma, double nu);
/// Throws ConfigError naming nu and the required N when unresolved.
void require_resolution(const GridSpec& grid, const Forcing& forcing, double gamma, double nu);

/// Transient length after which the decay envelope keeps ||w||_2 within 1% of
/// the support ball: max((1/gamma) log(gamma ||w0|| / ||g|| + 1),
/// (1/gamma) log((||w0|| - G) / (0.01 G))) with G = ||g|| / gamma.
double derived_transient(double omega0_l2, double g_l2, double gamma);

}  // namespace ns2d

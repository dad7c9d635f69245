#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ns2d/averaging.hpp"
#include "ns2d/config.hpp"
#include "ns2d/diagnostics.hpp"

namespace ns2d {

/// Column names of the per-run time series CSV.
const std::vector<std::string>& timeseries_columns();
/// Column names of the merged sweep CSV.
const std::vector<std::string>& sweep_columns();
/// Column names of the no-travel CSV.
const std::vector<std::string>& no_travel_columns();

struct RunResult {
    SolverParams params;
    MeasureReport report;
    std::vector<BalanceSample> samples;
    TrajectoryState final_state;
    double omega0_l2 = 0.0;
};

/// Solver parameters actually used for a run: t0 is the configured value if
/// given, else derived_transient() of the initial data rounded up to a
/// multiple of the observer interval.
SolverParams effective_params(const ExperimentConfig& config, const SpectralField& omega0, const Forcing& forcing);

/// Integrates one trajectory and averages over [t0, t0 + horizon]. With an
/// output directory, writes timeseries.csv and report.json there.
/// Throws ConfigError for unresolved nu, BlowUpError on divergence.
RunResult run_single(const ExperimentConfig& config, const std::optional<std::filesystem::path>& out_dir = {});

struct SweepEntry {
    double nu = 0.0;
    std::optional<MeasureReport> report;
    /// Empty on success.
    std::string error;
    bool blew_up = false;
    std::filesystem::path directory;
};

struct SweepTrend {
    /// eps(nu_{i+1}) <= 1.1 eps(nu_i) for consecutive completed members.
    bool decreasing = false;
    double final_over_initial = 0.0;
    bool halved = false;
    /// |gamma <|w|^2> - <<g,w>>| <= eps(nu) + slack + tolerance for every member.
    bool gap_within_bound = false;
    bool gap_shrinking = false;
    bool complete = false;
    bool ok() const noexcept { return complete && decreasing && halved && gap_within_bound && gap_shrinking; }
};

struct SweepResult {
    std::vector<SweepEntry> entries;
    SweepTrend trend;
};

SweepTrend sweep_trend(const std::vector<SweepEntry>& entries);

/// Runs every nu of config.sweep_nu on config.workers threads. A failing
/// member is recorded in its entry and in failures.json; the others are
/// unaffected. Writes nu_<i>/ run outputs, sweep.csv and failures.json.
SweepResult viscosity_sweep(const ExperimentConfig& config, const std::optional<std::filesystem::path>& out_dir = {});

/// phi(s): 0 for s <= 1/2, 1 for s >= 1, C^3 septic smoothstep in between.
double no_travel_cutoff(double s) noexcept;

/// Y_R = int phi(|x - c| / R) |w|^2 dx with c the domain center (periodic metric).
double outer_enstrophy(const PhysicalField& omega, double radius);

struct NoTravelResult {
    std::array<double, 3> radii{};
    std::vector<double> times;
    std::vector<double> enstrophy;
    std::array<std::vector<double>, 3> y;
    /// max_t Y_R(t) / ||w(t)||^2 per radius.
    std::array<double, 3> max_fraction{};
    double threshold = 0.0;
    bool passed() const noexcept { return max_fraction[2] <= threshold; }
};

/// Tracks Y_R for R in {L/8, L/4, 3L/8} over [0, horizon]. Requires L >= 8 pi,
/// bump initial data and bump (or no) forcing; otherwise throws ConfigError.
NoTravelResult no_travel_experiment(const ExperimentConfig& config,
                                    const std::optional<std::filesystem::path>& out_dir = {});

/// JSON text of a report (stable key order).
std::string report_json(const MeasureReport& report, const SolverParams& params);

/// Shortest round-trip decimal form of x.
std::string format_number(double x);

}  // namespace ns2d

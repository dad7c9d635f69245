#include "ns2d/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "ns2d/commutator.hpp"
#include "ns2d/error.hpp"
#include "ns2d/spectral.hpp"

namespace ns2d {

using nlohmann::ordered_json;

const std::vector<std::string>& timeseries_columns() {
    static const std::vector<std::string> cols{"t",  "energy", "enstrophy", "palinstrophy", "injection",
                                               "l1", "l2",     "linf",      "enstrophy_residual", "outside_ball"};
    return cols;
}

const std::vector<std::string>& sweep_columns() {
    static const std::vector<std::string> cols{"nu",          "mean_enstrophy",    "mean_palinstrophy", "dissipation_rate",
                                               "balance_gap", "telescoping_slack", "T",                 "t0"};
    return cols;
}

const std::vector<std::string>& no_travel_columns() {
    static const std::vector<std::string> cols{"t", "enstrophy", "Y_L8", "Y_L4", "Y_3L8"};
    return cols;
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

namespace {

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
        out << '\n';
    }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << text;
}

// Non-finite values are not representable in JSON.
ordered_json number(double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(format_number(x)); }

std::vector<std::vector<double>> timeseries_rows(std::span<const BalanceSample> s, const SolverParams& p,
                                                 double ball) {
    std::vector<std::vector<double>> rows;
    rows.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        double dz = 0.0;
        if (s.size() > 2) {
            const std::size_t m = std::clamp<std::size_t>(i, 1, s.size() - 2);
            const double r = three_point_rate(s[m - 1].time, s[m].time, s[m + 1].time, s[m - 1].enstrophy,
                                              s[m].enstrophy, s[m + 1].enstrophy);
            // One-sided at the ends: extrapolate the rate with the local second difference.
            dz = r;
            if (i != m) {
                const double h = s[m + 1].time - s[m - 1].time;
                const double curv = 2.0 * ((s[m + 1].enstrophy - s[m].enstrophy) / (s[m + 1].time - s[m].time) -
                                           (s[m].enstrophy - s[m - 1].enstrophy) / (s[m].time - s[m - 1].time)) / h;
                dz = r + curv * (s[i].time - s[m].time);
            }
        } else if (s.size() == 2) {
            dz = (s[1].enstrophy - s[0].enstrophy) / (s[1].time - s[0].time);
        }
        const double residual =
            0.5 * dz + p.nu * s[i].palinstrophy + p.gamma * s[i].enstrophy - s[i].injection;
        rows.push_back({s[i].time, s[i].energy, s[i].enstrophy, s[i].palinstrophy, s[i].injection, s[i].l1,
                        s[i].l2, s[i].linf, residual, s[i].l2 > ball ? 1.0 : 0.0});
    }
    return rows;
}

}  // namespace

std::string report_json(const MeasureReport& r, const SolverParams& p) {
    ordered_json j;
    j["nu"] = number(p.nu);
    j["gamma"] = number(p.gamma);
    j["dt"] = number(p.dt);
    j["t0"] = number(r.t0);
    j["T"] = number(r.horizon);
    j["samples"] = r.samples;
    j["mean_energy"] = number(r.mean_energy);
    j["mean_enstrophy"] = number(r.mean_enstrophy);
    j["mean_palinstrophy"] = number(r.mean_palinstrophy);
    j["mean_injection"] = number(r.mean_injection);
    j["dissipation_rate"] = number(r.dissipation_rate);
    j["balance_gap"] = number(r.balance_gap);
    j["telescoping_slack"] = number(r.telescoping_slack);
    j["quadrature_tolerance"] = number(r.quadrature_tolerance);
    j["gineq_margin"] = number(r.gineq_margin);
    j["gineq_holds"] = r.gineq_holds;
    j["support_ball_radius"] = number(r.support_ball_radius);
    j["support_radii"] = {{"l1", number(r.support_radii.l1)},
                          {"l2", number(r.support_radii.l2)},
                          {"linf", number(r.support_radii.linf)}};
    ordered_json st = ordered_json::array();
    for (const auto& s : r.stationarity)
        st.push_back({{"functional", s.functional},
                      {"residual", number(s.residual)},
                      {"telescoped", number(s.telescoped)},
                      {"telescoped_bound", number(s.telescoped_bound)},
                      {"quadrature_tolerance", number(s.quadrature_tolerance)},
                      {"routes_agree", s.routes_agree()}});
    j["stationarity"] = st;
    ordered_json sh = ordered_json::array();
    for (const auto& s : r.shells)
        sh.push_back({{"E1", number(s.lower)},
                      {"E2", number(s.upper)},
                      {"value", number(s.value)},
                      {"occupancy", number(s.occupancy)},
                      {"empty", s.empty}});
    j["shells"] = sh;
    return j.dump(2) + "\n";
}

SolverParams effective_params(const ExperimentConfig& config, const SpectralField& omega0, const Forcing& forcing) {
    SolverParams p = config.solver;
    if (!config.t0_explicit) {
        const double w0 = std::sqrt(inner_product(omega0, omega0));
        const double g = std::sqrt(inner_product(forcing.g_hat, forcing.g_hat));
        // Round up to a whole observer interval so the window starts on a sample.
        const double t = derived_transient(w0, g, p.gamma);
        const double every = p.dt * config.observer_stride;
        p.t0 = std::ceil(t / every - 1e-9) * every;
    }
    return p;
}

RunResult run_single(const ExperimentConfig& config, const std::optional<std::filesystem::path>& out_dir) {
    config.validate();
    const Forcing forcing = build_forcing(config.forcing, config.grid);
    require_resolution(config.grid, forcing, config.solver.gamma, config.solver.nu);
    const SpectralField omega0 =
        build_initial_condition(config.initial, config.grid, forcing, config.solver, config.seed);

    RunResult result;
    result.params = effective_params(config, omega0, forcing);
    result.omega0_l2 = std::sqrt(inner_product(omega0, omega0));

    std::vector<TestFunctional> functionals;
    for (const auto& fc : config.functionals) functionals.push_back(build_functional(fc, config.grid));
    TrajectoryRecorder recorder(result.params, forcing, std::move(functionals));

    std::vector<std::shared_ptr<const MollifierKernel>> kernels;
    for (double e : config.mollifier_epsilon)
        kernels.push_back(std::make_shared<const MollifierKernel>(config.grid, e));
    std::vector<std::vector<MollifiedSample>> mollified(kernels.size());

    std::vector<Observer> observers{recorder.observer()};
    if (!kernels.empty()) {
        observers.emplace_back([&](const TrajectoryState& s) {
            for (std::size_t k = 0; k < kernels.size(); ++k)
                mollified[k].push_back(measure_mollified_sample(s, forcing, *kernels[k]));
        });
    }
    IntegrateOptions opts;
    opts.observer_stride = config.observer_stride;
    result.final_state = integrate(omega0, result.params, forcing, observers, opts);
    result.samples.assign(recorder.samples().begin(), recorder.samples().end());
    result.report = measure_report(recorder.accumulator(), result.params, forcing);

    if (out_dir) {
        std::filesystem::create_directories(*out_dir);
        write_csv(*out_dir / "timeseries.csv", timeseries_columns(),
                  timeseries_rows(result.samples, result.params, result.report.support_ball_radius));
        std::string text = report_json(result.report, result.params);
        if (!kernels.empty()) {
            auto j = ordered_json::parse(text);
            ordered_json mb = ordered_json::array();
            for (std::size_t k = 0; k < kernels.size(); ++k) {
                const auto rep = mollified_enstrophy_balance(mollified[k], result.params);
                mb.push_back({{"epsilon", kernels[k]->epsilon()},
                              {"max_normalized_defect", number(rep.max_normalized_defect)}});
            }
            j["mollified_balance"] = mb;
            text = j.dump(2) + "\n";
        }
        write_text(*out_dir / "report.json", text);
    }
    return result;
}

SweepTrend sweep_trend(const std::vector<SweepEntry>& entries) {
    SweepTrend t;
    t.complete = !entries.empty();
    for (const auto& e : entries) t.complete = t.complete && e.report.has_value();
    std::vector<const MeasureReport*> done;
    for (const auto& e : entries)
        if (e.report) done.push_back(&*e.report);
    if (done.size() < 2) return t;
    t.decreasing = true;
    t.gap_within_bound = true;
    for (std::size_t i = 0; i < done.size(); ++i) {
        const auto& r = *done[i];
        if (i > 0 && r.dissipation_rate > 1.1 * done[i - 1]->dissipation_rate) t.decreasing = false;
        if (std::abs(r.balance_gap) > r.dissipation_rate + r.telescoping_slack + r.quadrature_tolerance)
            t.gap_within_bound = false;
    }
    const double first = done.front()->dissipation_rate;
    t.final_over_initial = first > 0.0 ? done.back()->dissipation_rate / first : 0.0;
    t.halved = t.final_over_initial <= 0.5;
    t.gap_shrinking = std::abs(done.back()->balance_gap) < std::abs(done.front()->balance_gap);
    return t;
}

SweepResult viscosity_sweep(const ExperimentConfig& config, const std::optional<std::filesystem::path>& out_dir) {
    config.validate();
    if (config.sweep_nu.empty()) throw ConfigError("sweep: the nu list is empty");
    {
        const Forcing forcing = build_forcing(config.forcing, config.grid);
        for (double nu : config.sweep_nu) require_resolution(config.grid, forcing, config.solver.gamma, nu);
    }

    SweepResult result;
    result.entries.resize(config.sweep_nu.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < result.entries.size(); i = next++) {
            SweepEntry& e = result.entries[i];
            e.nu = config.sweep_nu[i];
            ExperimentConfig member = config;
            member.solver.nu = e.nu;
            member.sweep_nu.clear();
            std::optional<std::filesystem::path> dir;
            if (out_dir) {
                e.directory = *out_dir / ("nu_" + std::to_string(i));
                dir = e.directory;
            }
            try {
                e.report = run_single(member, dir).report;
            } catch (const BlowUpError& ex) {
                e.error = ex.what();
                e.blew_up = true;
            } catch (const std::exception& ex) {
                e.error = ex.what();
            }
        }
    };
    const int nthreads = std::min<int>(config.workers, static_cast<int>(result.entries.size()));
    std::vector<std::thread> pool;
    for (int t = 1; t < nthreads; ++t) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();

    result.trend = sweep_trend(result.entries);

    if (out_dir) {
        std::filesystem::create_directories(*out_dir);
        std::vector<std::vector<double>> rows;
        ordered_json failures = ordered_json::array();
        for (const auto& e : result.entries) {
            if (!e.report) {
                failures.push_back({{"nu", e.nu}, {"error", e.error}});
                continue;
            }
            const auto& r = *e.report;
            rows.push_back({e.nu, r.mean_enstrophy, r.mean_palinstrophy, r.dissipation_rate, r.balance_gap,
                            r.telescoping_slack, r.horizon, r.t0});
        }
        write_csv(*out_dir / "sweep.csv", sweep_columns(), rows);
        write_text(*out_dir / "failures.json", failures.dump(2) + "\n");
        const auto& t = result.trend;
        ordered_json trend{{"complete", t.complete},
                           {"decreasing", t.decreasing},
                           {"final_over_initial", number(t.final_over_initial)},
                           {"halved", t.halved},
                           {"gap_within_bound", t.gap_within_bound},
                           {"gap_shrinking", t.gap_shrinking}};
        write_text(*out_dir / "trend.json", trend.dump(2) + "\n");
    }
    return result;
}

double no_travel_cutoff(double s) noexcept {
    if (s <= 0.5) return 0.0;
    if (s >= 1.0) return 1.0;
    const double t = 2.0 * s - 1.0;
    const double t4 = t * t * t * t;
    return t4 * (35.0 - 84.0 * t + 70.0 * t * t - 20.0 * t * t * t);
}

double outer_enstrophy(const PhysicalField& omega, double radius) {
    const GridSpec& g = omega.grid();
    const double c = 0.5 * g.domain_length;
    const double h = g.spacing();
    const int n = g.n();
    std::vector<double> terms(g.physical_size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double w = omega(i, j);
            terms[static_cast<std::size_t>(i) * n + j] =
                no_travel_cutoff(periodic_distance(g, i * h, j * h, c, c) / radius) * w * w;
        }
    return pairwise_sum(terms) * g.cell_area();
}

NoTravelResult no_travel_experiment(const ExperimentConfig& config,
                                    const std::optional<std::filesystem::path>& out_dir) {
    config.validate();
    const double l = config.grid.domain_length;
    if (l < 8.0 * std::numbers::pi * (1.0 - 1e-12)) throw ConfigError("no-travel: the torus must have L >= 8 pi");
    if (config.initial.kind != InitialKind::bump) throw ConfigError("no-travel: initial data must be a bump");
    if (config.forcing.kind != ForcingKind::localized_bump && config.forcing.kind != ForcingKind::none)
        throw ConfigError("no-travel: forcing must be localized_bump or none");

    const Forcing forcing = build_forcing(config.forcing, config.grid);
    require_resolution(config.grid, forcing, config.solver.gamma, config.solver.nu);
    const SpectralField omega0 =
        build_initial_condition(config.initial, config.grid, forcing, config.solver, config.seed);
    SolverParams p = config.solver;
    p.t0 = 0.0;

    NoTravelResult r;
    r.radii = {l / 8.0, l / 4.0, 3.0 * l / 8.0};
    r.threshold = config.no_travel.threshold;
    auto observe = [&](const TrajectoryState& s) {
        const PhysicalField w = inverse_transform(s.omega);
        const double z = inner_product(w, w);
        r.times.push_back(s.time);
        r.enstrophy.push_back(z);
        for (std::size_t k = 0; k < 3; ++k) {
            const double y = outer_enstrophy(w, r.radii[k]);
            r.y[k].push_back(y);
            if (z > 0.0) r.max_fraction[k] = std::max(r.max_fraction[k], y / z);
        }
    };
    IntegrateOptions opts;
    opts.observer_stride = config.observer_stride;
    integrate(omega0, p, forcing, {observe}, opts);

    if (out_dir) {
        std::filesystem::create_directories(*out_dir);
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < r.times.size(); ++i)
            rows.push_back({r.times[i], r.enstrophy[i], r.y[0][i], r.y[1][i], r.y[2][i]});
        write_csv(*out_dir / "no_travel.csv", no_travel_columns(), rows);
        ordered_json j;
        j["cutoff"] = "phi(s) = 0 for s <= 1/2, 1 for s >= 1, septic smoothstep of 2s - 1 between; s = |x - c| / R";
        j["radii"] = {r.radii[0], r.radii[1], r.radii[2]};
        j["max_fraction"] = {number(r.max_fraction[0]), number(r.max_fraction[1]), number(r.max_fraction[2])};
        j["threshold"] = r.threshold;
        j["passed"] = r.passed();
        write_text(*out_dir / "no_travel.json", j.dump(2) + "\n");
    }
    return r;
}

}  // namespace ns2d

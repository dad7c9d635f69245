// ns2d: command line driver for single runs, viscosity sweeps, the no-travel
// experiment and the invariant suite.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ns2d/config.hpp"
#include "ns2d/error.hpp"
#include "ns2d/experiments.hpp"
#include "ns2d/invariants.hpp"

namespace {

enum Exit { ok = 0, assertion_failed = 1, config_error = 2, blow_up = 3 };

struct Overrides {
    std::string output_dir;
    int workers = 0;
    std::optional<std::uint64_t> seed;
    int observer_stride = 0;

    void apply(ns2d::ExperimentConfig& c) const {
        if (!output_dir.empty()) c.output_dir = output_dir;
        if (workers > 0) c.workers = workers;
        if (seed) c.seed = *seed;
        if (observer_stride > 0) c.observer_stride = observer_stride;
        c.validate();
    }
};

ns2d::ExperimentConfig load(const std::string& path, const Overrides& o) {
    if (!std::filesystem::exists(path)) throw ns2d::ConfigError("config file '" + path + "' does not exist");
    auto c = ns2d::load_config(path);
    o.apply(c);
    return c;
}

int simulate(const std::string& path, const Overrides& o) {
    const auto c = load(path, o);
    const auto r = ns2d::run_single(c, c.output_dir);
    const auto& m = r.report;
    std::printf("t0 %.6g  T %.6g  samples %zu\n", m.t0, m.horizon, m.samples);
    std::printf("mean enstrophy %.10g  mean palinstrophy %.10g  dissipation rate %.10g\n", m.mean_enstrophy,
                m.mean_palinstrophy, m.dissipation_rate);
    std::printf("balance gap %.6g  telescoping slack %.6g  gineq margin %.6g\n", m.balance_gap,
                m.telescoping_slack, m.gineq_margin);
    std::printf("wrote %s\n", c.output_dir.string().c_str());
    bool good = m.gineq_holds;
    for (const auto& s : m.stationarity) {
        if (!s.routes_agree()) {
            std::fprintf(stderr, "stationarity routes disagree for '%s'\n", s.functional.c_str());
            good = false;
        }
    }
    if (!m.gineq_holds) std::fprintf(stderr, "dissipation inequality violated (margin %g)\n", m.gineq_margin);
    return good ? ok : assertion_failed;
}

int sweep(const std::string& path, const Overrides& o) {
    const auto c = load(path, o);
    const auto r = ns2d::viscosity_sweep(c, c.output_dir);
    bool blew = false;
    std::printf("%-12s %-16s %-16s %-16s\n", "nu", "dissipation", "balance_gap", "slack");
    for (const auto& e : r.entries) {
        if (!e.report) {
            std::printf("%-12.6g failed: %s\n", e.nu, e.error.c_str());
            blew = blew || e.blew_up;
            continue;
        }
        std::printf("%-12.6g %-16.8g %-16.8g %-16.8g\n", e.nu, e.report->dissipation_rate, e.report->balance_gap,
                    e.report->telescoping_slack);
    }
    const auto& t = r.trend;
    std::printf("decreasing %s  final/initial %.4g  gap bound %s  gap shrinking %s\n", t.decreasing ? "yes" : "no",
                t.final_over_initial, t.gap_within_bound ? "yes" : "no", t.gap_shrinking ? "yes" : "no");
    std::printf("wrote %s\n", c.output_dir.string().c_str());
    if (blew) return blow_up;
    return t.ok() ? ok : assertion_failed;
}

int no_travel(const std::string& path, const Overrides& o) {
    const auto c = load(path, o);
    const auto r = ns2d::no_travel_experiment(c, c.output_dir);
    const char* labels[] = {"L/8", "L/4", "3L/8"};
    for (std::size_t k = 0; k < 3; ++k)
        std::printf("R = %-5s (%.4g)  max Y_R/|w|^2 = %.6g\n", labels[k], r.radii[k], r.max_fraction[k]);
    std::printf("threshold %.4g: %s\n", r.threshold, r.passed() ? "pass" : "FAIL");
    return r.passed() ? ok : assertion_failed;
}

int check(const std::string& path, const Overrides& o) {
    ns2d::ExperimentConfig c;
    if (!path.empty()) c = load(path, o);
    else o.apply(c);
    const auto results = ns2d::run_invariant_suite(c);
    ns2d::print_invariant_table(std::cout, results);
    int status = ok;
    for (const auto& r : results) {
        if (!r.passed) {
            std::cerr << "invariant failed: " << r.name << '\n';
            status = assertion_failed;
        }
    }
    return status;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Damped-driven 2D Navier-Stokes experiments"};
    app.require_subcommand(1);
    Overrides o;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--output-dir", o.output_dir, "Directory for CSV and report output");
        sub->add_option("--workers", o.workers, "Concurrent sweep members")->check(CLI::PositiveNumber);
        sub->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& s) { o.seed = s; },
                                                "Seed for random initial data");
        sub->add_option("--observer-stride", o.observer_stride, "Steps between samples")->check(CLI::PositiveNumber);
    };

    std::string path;
    auto* sim = app.add_subcommand("simulate", "Run one trajectory and average it");
    sim->add_option("config", path, "Config file (JSON)")->required();
    add_common(sim);
    auto* sw = app.add_subcommand("sweep", "Viscosity sweep");
    sw->add_option("config", path, "Config file (JSON)")->required();
    add_common(sw);
    auto* nt = app.add_subcommand("no-travel", "Localized-data enstrophy confinement experiment");
    nt->add_option("config", path, "Config file (JSON)")->required();
    add_common(nt);
    auto* ck = app.add_subcommand("check", "Run the invariant suite");
    ck->add_option("config", path, "Config file (JSON)");
    add_common(ck);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : config_error;
    }

    try {
        if (sim->parsed()) return simulate(path, o);
        if (sw->parsed()) return sweep(path, o);
        if (nt->parsed()) return no_travel(path, o);
        if (ck->parsed()) return check(path, o);
    } catch (const ns2d::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const ns2d::BlowUpError& e) {
        std::cerr << "blow-up: " << e.what() << '\n';
        return blow_up;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return assertion_failed;
    }
    return config_error;
}

#include "ns2d/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "ns2d/error.hpp"
#include "ns2d/mollifier.hpp"
#include "ns2d/spectral.hpp"

namespace ns2d {

using nlohmann::json;

const char* to_string(InitialKind kind) noexcept {
    switch (kind) {
        case InitialKind::zero: return "zero";
        case InitialKind::random: return "random";
        case InitialKind::single_mode: return "single_mode";
        case InitialKind::bump: return "bump";
        case InitialKind::laminar: return "laminar";
    }
    return "unknown";
}

InitialKind initial_kind_from_string(const std::string& name) {
    for (auto k : {InitialKind::zero, InitialKind::random, InitialKind::single_mode, InitialKind::bump,
                   InitialKind::laminar})
        if (name == to_string(k)) return k;
    throw ConfigError("unknown initial condition '" + name + "'");
}

const std::vector<std::string>& builtin_functional_names() {
    static const std::vector<std::string> names{"linear_I",   "quadratic_I",   "character_I",
                                                "linear_eps", "quadratic_eps", "character_eps"};
    return names;
}

FunctionalConfig builtin_functional(const std::string& name) {
    FunctionalConfig fc;
    fc.name = name;
    fc.m = 4;
    const auto stem = name.substr(0, name.rfind('_'));
    const auto suffix = name.substr(name.rfind('_') + 1);
    if (suffix == "I") fc.kind = FunctionalKind::type_I;
    else if (suffix == "eps") fc.kind = FunctionalKind::type_eps;
    else throw ConfigError("unknown functional '" + name + "'");
    if (stem == "linear") {
        fc.psi = OuterKind::linear;
        fc.c = {1.0, 0.5, -0.25, 0.125};
    } else if (stem == "quadratic") {
        fc.psi = OuterKind::half_sum_squares;
    } else if (stem == "character") {
        fc.psi = OuterKind::cosine_character;
        fc.c = {0.3, -0.2, 0.1, 0.05};
    } else {
        throw ConfigError("unknown functional '" + name + "'");
    }
    return fc;
}

TestFunctional build_functional(const FunctionalConfig& fc, const GridSpec& grid) {
    OuterFunction psi{fc.psi, fc.c};
    auto w = harmonic_basis(grid, fc.m);
    if (fc.kind == FunctionalKind::type_I) return TestFunctional::type_I(fc.name, psi, std::move(w));
    const double eps = fc.epsilon > 0.0 ? fc.epsilon
                                        : std::max(MollifierKernel::min_epsilon(grid), grid.domain_length / 16.0);
    auto kernel = std::make_shared<const MollifierKernel>(grid, eps);
    return TestFunctional::type_eps(fc.name, psi, std::move(w), std::move(kernel), RenormalizerBeta(fc.beta_m));
}

void ExperimentConfig::validate() const {
    try {
        grid.validate();
        solver.validate();
    } catch (const ContractError& e) {
        throw ConfigError(e.what());
    }
    for (std::size_t i = 0; i < sweep_nu.size(); ++i) {
        if (!(sweep_nu[i] > 0.0)) throw ConfigError("sweep: nu values must be positive");
        if (i > 0 && !(sweep_nu[i] < sweep_nu[i - 1])) throw ConfigError("sweep: nu values must strictly decrease");
    }
    for (double e : mollifier_epsilon)
        if (!(e > 0.0)) throw ConfigError("mollifier: epsilon values must be positive");
    if (observer_stride < 1) throw ConfigError("observer_stride must be >= 1");
    if (workers < 1) throw ConfigError("workers must be >= 1");
    if (!(no_travel.threshold > 0.0)) throw ConfigError("no_travel.threshold must be positive");
    for (const auto& f : functionals) {
        if (f.m < 1) throw ConfigError("functional '" + f.name + "': m must be >= 1");
        if (f.psi != OuterKind::half_sum_squares && static_cast<int>(f.c.size()) != f.m)
            throw ConfigError("functional '" + f.name + "': need m coefficients");
    }
}

namespace {

// Reads an object, rejecting keys outside `allowed`.
class Reader {
public:
    Reader(const json& j, std::string where, std::initializer_list<const char*> allowed)
        : j_(j), where_(std::move(where)) {
        if (!j_.is_object()) throw ConfigError(where_ + ": expected an object");
        for (const auto& [key, _] : j_.items()) {
            if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
                throw ConfigError(where_ + ": unknown key '" + key + "'");
        }
    }

    bool has(const char* key) const { return j_.contains(key) && !j_.at(key).is_null(); }

    template <class T>
    void get(const char* key, T& out) const {
        if (!has(key)) return;
        try {
            out = j_.at(key).get<T>();
        } catch (const json::exception&) {
            throw ConfigError(where_ + "." + key + ": wrong type");
        }
    }

    const json& at(const char* key) const { return j_.at(key); }
    const std::string& where() const { return where_; }

private:
    const json& j_;
    std::string where_;
};

ForcingSpec parse_forcing(const json& j, const std::filesystem::path& base) {
    Reader r(j, "forcing", {"kind", "amplitude", "k1", "k2", "kf", "center", "radius", "direction", "path"});
    ForcingSpec f;
    std::string kind = "none";
    r.get("kind", kind);
    f.kind = forcing_kind_from_string(kind);
    r.get("amplitude", f.amplitude);
    r.get("k1", f.k1);
    r.get("k2", f.k2);
    r.get("kf", f.kf);
    if (r.has("center")) {
        std::vector<double> c;
        r.get("center", c);
        if (c.size() != 2) throw ConfigError("forcing.center: expected two numbers");
        f.center_x1 = c[0];
        f.center_x2 = c[1];
    }
    r.get("radius", f.radius);
    r.get("direction", f.direction);
    r.get("path", f.path);
    if (!f.path.empty() && std::filesystem::path(f.path).is_relative() && !base.empty())
        f.path = (base / f.path).string();
    return f;
}

InitialCondition parse_initial(const json& j) {
    Reader r(j, "initial_condition", {"kind", "amplitude", "kmax", "k1", "k2", "center", "radius"});
    InitialCondition ic;
    std::string kind = to_string(ic.kind);
    r.get("kind", kind);
    ic.kind = initial_kind_from_string(kind);
    r.get("amplitude", ic.amplitude);
    r.get("kmax", ic.kmax);
    r.get("k1", ic.k1);
    r.get("k2", ic.k2);
    if (r.has("center")) {
        std::vector<double> c;
        r.get("center", c);
        if (c.size() != 2) throw ConfigError("initial_condition.center: expected two numbers");
        ic.center_x1 = c[0];
        ic.center_x2 = c[1];
    }
    r.get("radius", ic.radius);
    return ic;
}

FunctionalConfig parse_functional(const json& j) {
    if (j.is_string()) return builtin_functional(j.get<std::string>());
    Reader r(j, "functionals[]", {"name", "kind", "psi", "c", "m", "epsilon", "beta_M"});
    FunctionalConfig fc;
    r.get("name", fc.name);
    if (fc.name.empty()) throw ConfigError("functionals[]: name is required");
    std::string kind = "type_I";
    r.get("kind", kind);
    if (kind == "type_I") fc.kind = FunctionalKind::type_I;
    else if (kind == "type_eps") fc.kind = FunctionalKind::type_eps;
    else throw ConfigError("functionals[]: unknown kind '" + kind + "'");
    std::string psi = "half_sum_squares";
    r.get("psi", psi);
    fc.psi = outer_kind_from_string(psi);
    r.get("c", fc.c);
    fc.m = fc.c.empty() ? 4 : static_cast<int>(fc.c.size());
    r.get("m", fc.m);
    r.get("epsilon", fc.epsilon);
    r.get("beta_M", fc.beta_m);
    return fc;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
    json j;
    try {
        j = json::parse(text, nullptr, true, true);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    Reader top(j, "config", {"grid", "solver", "forcing", "initial_condition", "sweep", "mollifier", "functionals",
                             "no_travel", "output_dir", "seed", "observer_stride", "workers"});
    ExperimentConfig c;
    if (top.has("grid")) {
        Reader r(top.at("grid"), "grid", {"N", "L", "dealias_fraction"});
        r.get("N", c.grid.points_per_side);
        r.get("L", c.grid.domain_length);
        r.get("dealias_fraction", c.grid.dealias_fraction);
    }
    if (top.has("solver")) {
        Reader r(top.at("solver"), "solver", {"nu", "gamma", "dt", "t0", "horizon"});
        r.get("nu", c.solver.nu);
        r.get("gamma", c.solver.gamma);
        r.get("dt", c.solver.dt);
        c.t0_explicit = r.has("t0");
        r.get("t0", c.solver.t0);
        r.get("horizon", c.solver.horizon);
    }
    if (top.has("forcing")) c.forcing = parse_forcing(top.at("forcing"), base_dir);
    if (top.has("initial_condition")) c.initial = parse_initial(top.at("initial_condition"));
    if (top.has("sweep")) {
        Reader r(top.at("sweep"), "sweep", {"nu"});
        r.get("nu", c.sweep_nu);
        if (c.sweep_nu.empty()) throw ConfigError("sweep: the nu list is empty");
    }
    if (top.has("mollifier")) {
        Reader r(top.at("mollifier"), "mollifier", {"epsilon"});
        r.get("epsilon", c.mollifier_epsilon);
    }
    if (top.has("functionals")) {
        const json& fs = top.at("functionals");
        if (!fs.is_array()) throw ConfigError("functionals: expected a list");
        for (const auto& f : fs) c.functionals.push_back(parse_functional(f));
    }
    if (top.has("no_travel")) {
        Reader r(top.at("no_travel"), "no_travel", {"threshold"});
        r.get("threshold", c.no_travel.threshold);
    }
    std::string out;
    top.get("output_dir", out);
    if (!out.empty()) c.output_dir = out;
    top.get("seed", c.seed);
    top.get("observer_stride", c.observer_stride);
    top.get("workers", c.workers);
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.parent_path());
}

SpectralField build_initial_condition(const InitialCondition& ic, const GridSpec& grid, const Forcing& forcing,
                                      const SolverParams& params, std::uint64_t seed) {
    SpectralField w(grid);
    const double q = grid.wavenumber_unit();
    switch (ic.kind) {
        case InitialKind::zero: return w;
        case InitialKind::single_mode:
            if (!retained_by_dealias(grid, ic.k1, ic.k2) || (ic.k1 == 0 && ic.k2 == 0))
                throw ConfigError("initial_condition: mode is zero or beyond the dealias cutoff");
            w.set_coeff(ic.k1, ic.k2, 0.5 * ic.amplitude);
            return w;
        case InitialKind::random: {
            if (ic.kmax < 1) throw ConfigError("initial_condition.kmax must be >= 1");
            std::mt19937_64 rng(seed);
            std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
            // Visit the half plane in a fixed order so the draw sequence is
            // independent of the grid size.
            for (int k2 = 0; k2 <= ic.kmax; ++k2) {
                for (int k1 = -ic.kmax; k1 <= ic.kmax; ++k1) {
                    if (k2 == 0 && k1 <= 0) continue;
                    const int r2 = k1 * k1 + k2 * k2;
                    const double theta = phase(rng);
                    if (r2 > ic.kmax * ic.kmax || !retained_by_dealias(grid, k1, k2)) continue;
                    // Spectrum flat in |k| per shell: |w_k|^2 ~ 1 / |k|.
                    const double amp = 1.0 / std::sqrt(std::sqrt(static_cast<double>(r2)));
                    w.set_coeff(k1, k2, std::polar(amp, theta));
                }
            }
            const double n = std::sqrt(inner_product(w, w));
            if (n > 0.0) w *= ic.amplitude / n;
            return w;
        }
        case InitialKind::bump: {
            if (!(ic.radius > 0.0)) throw ConfigError("initial_condition.radius must be positive");
            const std::size_t np = grid.physical_size();
            std::vector<double> core(np), ring(np);
            const double h = grid.spacing();
            for (int i = 0; i < grid.n(); ++i)
                for (int j = 0; j < grid.n(); ++j) {
                    const double r =
                        periodic_distance(grid, i * h, j * h, ic.center_x1, ic.center_x2) / ic.radius;
                    const std::size_t idx = static_cast<std::size_t>(i) * grid.n() + j;
                    core[idx] = bump_profile(r);
                    ring[idx] = core[idx] * r * r;
                }
            const double kappa = pairwise_sum(core) / pairwise_sum(ring);
            RealBuffer v(np);
            for (std::size_t i = 0; i < np; ++i) v[i] = ic.amplitude * (core[i] - kappa * ring[i]);
            w = forward_transform(PhysicalField(grid, std::move(v)));
            w.remove_mean();
            return w;
        }
        case InitialKind::laminar: {
            auto out = w.coeffs();
            auto g = forcing.g_hat.coeffs();
            const int n = grid.n();
            const int h = grid.half();
            for (int r1 = 0; r1 < n; ++r1) {
                const double k1 = q * grid.signed_index(r1);
                for (int c2 = 0; c2 < h; ++c2) {
                    const double k2 = q * c2;
                    const std::size_t idx = static_cast<std::size_t>(r1) * h + c2;
                    out[idx] = g[idx] / (params.gamma + params.nu * (k1 * k1 + k2 * k2));
                }
            }
            return w;
        }
    }
    return w;
}

double dissipation_rate_bound(const Forcing& forcing, double gamma) {
    const double g2 = inner_product(forcing.g_hat, forcing.g_hat);
    return g2 / (4.0 * gamma * forcing.grid.area());
}

double dissipation_wavenumber(double eta, double nu) {
    if (!(nu > 0.0)) return std::numeric_limits<double>::infinity();
    return std::pow(eta / (nu * nu * nu), 1.0 / 6.0);
}

ResolutionCheck check_resolution(const GridSpec& grid, const Forcing& forcing, double gamma, double nu) {
    ResolutionCheck c;
    c.nu = nu;
    c.k_diss = dissipation_wavenumber(dissipation_rate_bound(forcing, gamma), nu);
    c.cutoff = grid.dealias_cutoff();
    // Smallest even N whose cutoff clears k_diss.
    const double per_point = grid.dealias_fraction * 0.5 * grid.wavenumber_unit();
    c.required_n = std::isfinite(c.k_diss) ? 2 * static_cast<int>(std::ceil(c.k_diss / per_point / 2.0)) : 0;
    if (c.required_n < 8) c.required_n = 8;
    return c;
}

void require_resolution(const GridSpec& grid, const Forcing& forcing, double gamma, double nu) {
    const ResolutionCheck c = check_resolution(grid, forcing, gamma, nu);
    if (c.ok()) return;
    std::ostringstream os;
    os << "nu = " << nu << " is not resolved on N = " << grid.n() << ": dissipation wavenumber " << c.k_diss
       << " exceeds the dealias cutoff " << c.cutoff << "; need N >= " << c.required_n;
    throw ConfigError(os.str());
}

double derived_transient(double omega0_l2, double g_l2, double gamma) {
    if (!(g_l2 > 0.0)) return omega0_l2 > 1e-6 ? std::log(omega0_l2 / 1e-6) / gamma : 0.0;
    double t = std::log(gamma * omega0_l2 / g_l2 + 1.0) / gamma;
    const double ball = g_l2 / gamma;
    if (omega0_l2 > ball) t = std::max(t, std::log((omega0_l2 - ball) / (0.01 * ball)) / gamma);
    return std::max(t, 0.0);
}

}  // namespace ns2d

#include "ns2d/forcing.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "modes.hpp"
#include "ns2d/error.hpp"

namespace ns2d {

const char* to_string(ForcingKind kind) noexcept {
    switch (kind) {
        case ForcingKind::none: return "none";
        case ForcingKind::single_mode: return "single_mode";
        case ForcingKind::kolmogorov: return "kolmogorov";
        case ForcingKind::localized_bump: return "localized_bump";
        case ForcingKind::from_file: return "from_file";
    }
    return "unknown";
}

ForcingKind forcing_kind_from_string(const std::string& name) {
    for (auto k : {ForcingKind::none, ForcingKind::single_mode, ForcingKind::kolmogorov,
                   ForcingKind::localized_bump, ForcingKind::from_file})
        if (name == to_string(k)) return k;
    throw ConfigError("unknown forcing kind '" + name + "'");
}

ForcingSpec ForcingSpec::single_mode(int k1, int k2, double amplitude) {
    ForcingSpec s;
    s.kind = ForcingKind::single_mode;
    s.k1 = k1;
    s.k2 = k2;
    s.amplitude = amplitude;
    return s;
}

ForcingSpec ForcingSpec::kolmogorov(int kf, double amplitude) {
    ForcingSpec s;
    s.kind = ForcingKind::kolmogorov;
    s.kf = kf;
    s.amplitude = amplitude;
    return s;
}

ForcingSpec ForcingSpec::localized_bump(double cx1, double cx2, double radius, double amplitude,
                                        double direction) {
    ForcingSpec s;
    s.kind = ForcingKind::localized_bump;
    s.center_x1 = cx1;
    s.center_x2 = cx2;
    s.radius = radius;
    s.amplitude = amplitude;
    s.direction = direction;
    return s;
}

ForcingSpec ForcingSpec::from_file(std::string path) {
    ForcingSpec s;
    s.kind = ForcingKind::from_file;
    s.path = std::move(path);
    return s;
}

bool Forcing::is_zero() const {
    for (const auto& c : g_hat.coeffs())
        if (c != Complex{}) return false;
    return true;
}

double bump_profile(double r) noexcept {
    if (r >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - r * r));
}

double periodic_distance(const GridSpec& grid, double ax1, double ax2, double bx1,
                         double bx2) noexcept {
    const double L = grid.domain_length;
    auto wrap = [L](double d) {
        d = std::fmod(d, L);
        if (d < -0.5 * L) d += L;
        if (d > 0.5 * L) d -= L;
        return d;
    };
    return std::hypot(wrap(ax1 - bx1), wrap(ax2 - bx2));
}

namespace {

void require_in_band(const GridSpec& grid, int k1, int k2, const char* what) {
    if (k1 == 0 && k2 == 0) throw ConfigError(std::string(what) + ": wavenumber (0,0) is not mean-free");
    if (!retained_by_dealias(grid, k1, k2))
        throw ConfigError(std::string(what) + ": wavenumber (" + std::to_string(k1) + "," +
                          std::to_string(k2) + ") lies beyond the dealias cutoff");
}

SpectralField read_forcing_file(const GridSpec& grid, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("forcing file '" + path + "' cannot be opened");
    RealBuffer values;
    values.reserve(grid.physical_size());
    double v = 0.0;
    while (in >> v) values.push_back(v);
    if (!in.eof()) throw ConfigError("forcing file '" + path + "': unparsable value");
    if (values.size() != grid.physical_size())
        throw ConfigError("forcing file '" + path + "': expected " +
                          std::to_string(grid.physical_size()) + " samples, found " +
                          std::to_string(values.size()));
    PhysicalField g(grid, std::move(values));
    auto n = norms(g);
    SpectralField gh = forward_transform(g);
    if (std::abs(gh.mean_coeff()) * grid.area() > 1e-10 * std::max(n.l1, 1e-300))
        throw ConfigError("forcing file '" + path + "': vorticity source must be mean-free");
    return gh;
}

}  // namespace

Forcing build_forcing(const ForcingSpec& spec, const GridSpec& grid) {
    grid.validate();
    SpectralField gh(grid);
    bool derived_velocity = true;
    VectorField f;
    switch (spec.kind) {
        case ForcingKind::none: break;
        case ForcingKind::single_mode:
            require_in_band(grid, spec.k1, spec.k2, "single_mode forcing");
            gh.set_coeff(spec.k1, spec.k2, 0.5 * spec.amplitude);
            break;
        case ForcingKind::kolmogorov:
            if (spec.kf <= 0) throw ConfigError("kolmogorov forcing: k_f must be positive");
            require_in_band(grid, 0, spec.kf, "kolmogorov forcing");
            gh.set_coeff(0, spec.kf, 0.5 * spec.amplitude);
            break;
        case ForcingKind::localized_bump: {
            if (!(spec.radius > 0.0)) throw ConfigError("localized_bump forcing: radius must be positive");
            const double c = std::cos(spec.direction);
            const double s = std::sin(spec.direction);
            PhysicalField profile = PhysicalField::from_function(grid, [&](double x1, double x2) {
                return spec.amplitude *
                       bump_profile(periodic_distance(grid, x1, x2, spec.center_x1, spec.center_x2) /
                                    spec.radius);
            });
            SpectralField ph = dealias(forward_transform(profile));
            SpectralField f1 = ph * c;
            SpectralField f2 = ph * s;
            auto d1 = gradient_spectral(f1);
            auto d2 = gradient_spectral(f2);
            gh = d2.x1 - d1.x2;
            f = {inverse_transform(f1), inverse_transform(f2)};
            derived_velocity = false;
            break;
        }
        case ForcingKind::from_file: gh = read_forcing_file(grid, spec.path); break;
    }
    gh = dealias(std::move(gh));
    gh.remove_mean();
    if (derived_velocity) f = biot_savart(gh);
    Forcing out{grid, gh, inverse_transform(gh), std::move(f)};
    return out;
}

}  // namespace ns2d

#pragma once

#include <string>

#include "ns2d/fields.hpp"
#include "ns2d/spectral.hpp"

namespace ns2d {

enum class ForcingKind { none, single_mode, kolmogorov, localized_bump, from_file };

const char* to_string(ForcingKind kind) noexcept;
/// Throws ConfigError for unknown names.
ForcingKind forcing_kind_from_string(const std::string& name);

/// Description of the vorticity source g.
///
/// - single_mode:    g = amplitude cos(k1 x1 + k2 x2) (integer wavenumbers
///                   in units of 2 pi / L).
/// - kolmogorov:     g = amplitude cos(k_f x2), the curl of a shear force.
/// - localized_bump: f = amplitude b(|x - center| / radius) (cos a, sin a) with
///                   b(r) = exp(-1 / (1 - r^2)) on r < 1, and g = curl f taken
///                   spectrally.
/// - from_file:      N x N whitespace-separated samples of g (row i is x1 = i h);
///                   must be mean-free.
struct ForcingSpec {
    ForcingKind kind = ForcingKind::none;
    double amplitude = 0.0;
    int k1 = 1;
    int k2 = 0;
    int kf = 4;
    double center_x1 = 0.0;
    double center_x2 = 0.0;
    double radius = 1.0;
    double direction = 0.0;
    std::string path;

    static ForcingSpec none() { return {}; }
    static ForcingSpec single_mode(int k1, int k2, double amplitude);
    static ForcingSpec kolmogorov(int kf, double amplitude);
    static ForcingSpec localized_bump(double cx1, double cx2, double radius, double amplitude,
                                      double direction = 0.0);
    static ForcingSpec from_file(std::string path);

};

/// Forcing realized on a grid: the vorticity source g (mean-free, projected on
/// the dealiased band) and a velocity forcing f with curl f = g on that band.
/// For every kind except localized_bump, f is the Biot-Savart velocity of g.
struct Forcing {
    GridSpec grid;
    SpectralField g_hat;
    PhysicalField g;
    VectorField f;

    bool is_zero() const;
};

/// Throws ConfigError if the forcing cannot be represented (mode beyond the
/// dealias cutoff, non-mean-free file, ...).
Forcing build_forcing(const ForcingSpec& spec, const GridSpec& grid);

/// Smooth compactly supported bump exp(-1/(1-r^2)) for r < 1, else 0.
double bump_profile(double r) noexcept;
/// Periodic minimum-image distance between two points on the torus.
double periodic_distance(const GridSpec& grid, double ax1, double ax2, double bx1, double bx2) noexcept;

}  // namespace ns2d

#pragma once

#include <span>
#include <vector>

#include "ns2d/diagnostics.hpp"
#include "ns2d/mollifier.hpp"
#include "ns2d/solver.hpp"

namespace ns2d {

/// r_eps(u, b) = sum_n w_n (u(x - eps z_n) - u(x)) (b(x - eps z_n) - b(x)).
VectorField commutator_r(const VectorField& u, const PhysicalField& b, const MollifierKernel& kernel);

/// rho_eps(u, b) = r_eps(u, b) - (u - u_eps)(b - b_eps).
VectorField commutator_rho(const VectorField& u, const PhysicalField& b, const MollifierKernel& kernel);

/// Both sides of (u b)_eps - u_eps b_eps = rho_eps(u, b). The left side is
/// built from grid products and the multiplier form of J_eps; the right side
/// from shifted increments. They agree to rounding whenever u b is resolved
/// on the grid.
struct FluxIdentity {
    VectorField lhs;
    VectorField rho;
    VectorField r;
    /// max pointwise |lhs - rho| over both components.
    double max_defect = 0.0;
};
FluxIdentity flux_identity(const VectorField& u, const PhysicalField& b, const MollifierKernel& kernel);

/// L1 norm of a vector field, sum of the component L1 norms.
double l1_norm(const VectorField& v);

/// Terms of the mollified enstrophy balance at one observed state:
///   d/2dt ||w_e||^2 + nu ||grad w_e||^2 + gamma ||w_e||^2 - <g_e, w_e> = <rho_e(u, w), grad w_e>.
struct MollifiedSample {
    double time = 0.0;
    double enstrophy = 0.0;       // ||w_e||^2
    double palinstrophy = 0.0;    // ||grad w_e||^2
    double injection = 0.0;       // <g_e, w_e>
    double abs_injection = 0.0;   // <|g_e|, |w_e|>
    double flux = 0.0;            // <rho_e(u, w), grad w_e>
};

MollifiedSample measure_mollified_sample(const TrajectoryState& state, const Forcing& forcing,
                                         const MollifierKernel& kernel);

struct MollifiedBalanceReport {
    /// max over interior samples of |lhs - rhs| / (<|g_e|,|w_e|> + gamma ||w_e||^2 + |flux|)
    double max_normalized_defect = 0.0;
    std::vector<double> defects;
};

/// Throws ContractError with fewer than 3 samples.
MollifiedBalanceReport mollified_enstrophy_balance(std::span<const MollifiedSample> samples,
                                                   const SolverParams& params);

/// q_eps = u.grad(J w) + gamma J w - J g and the commutator
/// [u.grad, J] w = u.grad(J w) - J(u.grad w), with their L1 norms.
struct DiPernaLionsDefect {
    PhysicalField q;
    double q_l1 = 0.0;
    PhysicalField commutator;
    double commutator_l1 = 0.0;
};
DiPernaLionsDefect diperna_lions_defect(const SpectralField& omega, const Forcing& forcing, double gamma,
                                        const MollifierKernel& kernel);

}  // namespace ns2d

#include "ns2d/commutator.hpp"

#include <algorithm>
#include <cmath>

#include "ns2d/error.hpp"
#include "ns2d/fft.hpp"
#include "ns2d/spectral.hpp"

namespace ns2d {

namespace {

// Shift-route pieces: r_eps, and the shift-sum mollifications of u and b.
struct ShiftSums {
    VectorField r;
    VectorField u_eps;
    PhysicalField b_eps;
};

ShiftSums shift_sums(const VectorField& u, const PhysicalField& b, const MollifierKernel& kernel) {
    const GridSpec& g = b.grid();
    require_same_grid(g, u.x1.grid(), "commutator");
    require_same_grid(g, u.x2.grid(), "commutator");
    require_same_grid(g, kernel.grid(), "commutator");
    const auto fft = FourierTransform::for_size(g.n());
    const SpectralField u1h = forward_transform(u.x1);
    const SpectralField u2h = forward_transform(u.x2);
    const SpectralField bh = forward_transform(b);

    ShiftSums out{{PhysicalField(g), PhysicalField(g)}, {PhysicalField(g), PhysicalField(g)}, PhysicalField(g)};
    RealBuffer su1(g.physical_size()), su2(g.physical_size()), sb(g.physical_size());
    auto u1 = u.x1.values();
    auto u2 = u.x2.values();
    auto bv = b.values();
    auto r1 = out.r.x1.values();
    auto r2 = out.r.x2.values();
    auto e1 = out.u_eps.x1.values();
    auto e2 = out.u_eps.x2.values();
    auto eb = out.b_eps.values();
    for (const auto& node : kernel.nodes()) {
        SpectralField t1 = shift(u1h, node.s1, node.s2);
        SpectralField t2 = shift(u2h, node.s1, node.s2);
        SpectralField tb = shift(bh, node.s1, node.s2);
        fft->inverse_destroy(t1.coeffs(), su1);
        fft->inverse_destroy(t2.coeffs(), su2);
        fft->inverse_destroy(tb.coeffs(), sb);
        const double w = node.weight;
        for (std::size_t i = 0; i < su1.size(); ++i) {
            const double db = sb[i] - bv[i];
            r1[i] += w * (su1[i] - u1[i]) * db;
            r2[i] += w * (su2[i] - u2[i]) * db;
            e1[i] += w * su1[i];
            e2[i] += w * su2[i];
            eb[i] += w * sb[i];
        }
    }
    return out;
}

VectorField rho_from(const ShiftSums& s, const VectorField& u, const PhysicalField& b) {
    VectorField rho = s.r;
    auto bv = b.values();
    auto eb = s.b_eps.values();
    auto out1 = rho.x1.values();
    auto out2 = rho.x2.values();
    auto u1 = u.x1.values();
    auto u2 = u.x2.values();
    auto e1 = s.u_eps.x1.values();
    auto e2 = s.u_eps.x2.values();
    for (std::size_t i = 0; i < out1.size(); ++i) {
        const double db = bv[i] - eb[i];
        out1[i] -= (u1[i] - e1[i]) * db;
        out2[i] -= (u2[i] - e2[i]) * db;
    }
    return rho;
}

}  // namespace

VectorField commutator_r(const VectorField& u, const PhysicalField& b, const MollifierKernel& kernel) {
    return shift_sums(u, b, kernel).r;
}

VectorField commutator_rho(const VectorField& u, const PhysicalField& b, const MollifierKernel& kernel) {
    return rho_from(shift_sums(u, b, kernel), u, b);
}

FluxIdentity flux_identity(const VectorField& u, const PhysicalField& b, const MollifierKernel& kernel) {
    auto sums = shift_sums(u, b, kernel);
    FluxIdentity out;
    out.rho = rho_from(sums, u, b);
    out.r = std::move(sums.r);
    const PhysicalField b_eps = mollify(b, kernel);
    out.lhs.x1 = mollify(hadamard(u.x1, b), kernel) - hadamard(mollify(u.x1, kernel), b_eps);
    out.lhs.x2 = mollify(hadamard(u.x2, b), kernel) - hadamard(mollify(u.x2, kernel), b_eps);
    double worst = 0.0;
    for (auto [a, c] : {std::pair{&out.lhs.x1, &out.rho.x1}, std::pair{&out.lhs.x2, &out.rho.x2}}) {
        auto av = a->values();
        auto cv = c->values();
        for (std::size_t i = 0; i < av.size(); ++i) worst = std::max(worst, std::abs(av[i] - cv[i]));
    }
    out.max_defect = worst;
    return out;
}

double l1_norm(const VectorField& v) { return norms(v.x1).l1 + norms(v.x2).l1; }

MollifiedSample measure_mollified_sample(const TrajectoryState& state, const Forcing& forcing,
                                         const MollifierKernel& kernel) {
    const SpectralField& w = state.omega;
    require_same_grid(w.grid(), forcing.grid, "measure_mollified_sample");
    MollifiedSample s;
    s.time = state.time;
    const SpectralField we = mollify(w, kernel);
    const SpectralField ge = mollify(forcing.g_hat, kernel);
    s.enstrophy = inner_product(we, we);
    s.palinstrophy = gradient_norm_sq(we);
    s.injection = inner_product(ge, we);
    const PhysicalField we_p = inverse_transform(we);
    const PhysicalField ge_p = inverse_transform(ge);
    auto absf = [](double v) { return std::abs(v); };
    s.abs_injection = inner_product(ge_p.map(absf), we_p.map(absf));
    const VectorField u = biot_savart(w);
    const VectorField rho = commutator_rho(u, inverse_transform(w), kernel);
    s.flux = inner_product(rho, gradient(we));
    return s;
}

MollifiedBalanceReport mollified_enstrophy_balance(std::span<const MollifiedSample> samples,
                                                   const SolverParams& params) {
    if (samples.size() < 3) throw ContractError("mollified_enstrophy_balance: need at least 3 samples");
    MollifiedBalanceReport report;
    for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
        const auto& s = samples[i];
        const auto& a = samples[i - 1];
        const auto& b = samples[i + 1];
        const double lhs = 0.5 * three_point_rate(a.time, s.time, b.time, a.enstrophy, s.enstrophy, b.enstrophy) +
                           params.nu * s.palinstrophy + params.gamma * s.enstrophy - s.injection;
        const double defect = std::abs(lhs - s.flux);
        const double scale = s.abs_injection + params.gamma * s.enstrophy + std::abs(s.flux);
        const double normalized = defect == 0.0 ? 0.0 : (scale > 0.0 ? defect / scale : HUGE_VAL);
        report.defects.push_back(normalized);
        report.max_normalized_defect = std::max(report.max_normalized_defect, normalized);
    }
    return report;
}

DiPernaLionsDefect diperna_lions_defect(const SpectralField& omega, const Forcing& forcing, double gamma,
                                        const MollifierKernel& kernel) {
    require_same_grid(omega.grid(), forcing.grid, "diperna_lions_defect");
    const VectorField u = biot_savart(omega);
    const SpectralField we = mollify(omega, kernel);
    const VectorField grad_we = gradient(we);
    const VectorField grad_w = gradient(omega);
    PhysicalField transport_of_mollified = hadamard(u.x1, grad_we.x1) + hadamard(u.x2, grad_we.x2);
    PhysicalField transport = hadamard(u.x1, grad_w.x1) + hadamard(u.x2, grad_w.x2);

    DiPernaLionsDefect out;
    out.q = transport_of_mollified + inverse_transform(we) * gamma -
            inverse_transform(mollify(forcing.g_hat, kernel));
    out.q_l1 = norms(out.q).l1;
    out.commutator = transport_of_mollified - mollify(transport, kernel);
    out.commutator_l1 = norms(out.commutator).l1;
    return out;
}

}  // namespace ns2d

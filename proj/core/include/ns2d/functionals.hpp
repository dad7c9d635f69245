#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ns2d/fields.hpp"
#include "ns2d/forcing.hpp"
#include "ns2d/mollifier.hpp"
#include "ns2d/renormalizer.hpp"

namespace ns2d {

enum class OuterKind { linear, half_sum_squares, cosine_character };

const char* to_string(OuterKind kind) noexcept;
OuterKind outer_kind_from_string(const std::string& name);

/// Outer function psi: R^m -> R from the closed catalog, with its gradient.
///   linear(c):           sum_j c_j a_j
///   half_sum_squares:    1/2 sum_j a_j^2
///   cosine_character(c): cos(sum_j c_j a_j)
struct OuterFunction {
    OuterKind kind = OuterKind::half_sum_squares;
    std::vector<double> c;

    double value(std::span<const double> a) const;
    std::vector<double> gradient(std::span<const double> a) const;
};

enum class FunctionalKind { type_I, type_eps };

/// Cylindrical test functional
///   type_I:   Psi(w) = psi(<w, w_1>, ..., <w, w_m>)
///   type_eps: Psi(w) = psi(<alpha_eps(w), w_1>, ...), alpha_eps(w) = J_eps beta(J_eps w).
class TestFunctional {
public:
    static TestFunctional type_I(std::string name, OuterFunction psi, std::vector<PhysicalField> w);
    static TestFunctional type_eps(std::string name, OuterFunction psi, std::vector<PhysicalField> w,
                                   std::shared_ptr<const MollifierKernel> kernel, RenormalizerBeta beta);

    const std::string& name() const noexcept { return name_; }
    FunctionalKind kind() const noexcept { return kind_; }
    const OuterFunction& psi() const noexcept { return psi_; }
    std::span<const PhysicalField> test_fields() const noexcept { return w_; }
    const MollifierKernel* kernel() const noexcept { return kernel_.get(); }
    const std::optional<RenormalizerBeta>& beta() const noexcept { return beta_; }
    const GridSpec& grid() const noexcept { return w_.front().grid(); }

    /// The m arguments handed to psi.
    std::vector<double> arguments(const SpectralField& omega) const;

private:
    TestFunctional() = default;
    void validate() const;

    std::string name_;
    FunctionalKind kind_ = FunctionalKind::type_I;
    OuterFunction psi_;
    std::vector<PhysicalField> w_;
    std::vector<SpectralField> w_hat_;
    std::shared_ptr<const MollifierKernel> kernel_;
    std::optional<RenormalizerBeta> beta_;
};

/// First m fields of the orthonormal, mean-free low-harmonic family
/// cos(k.x)/n_k, sin(k.x)/n_k with k ordered by |k| then lexicographically.
std::vector<PhysicalField> harmonic_basis(const GridSpec& grid, int m);

double eval_psi(const TestFunctional& spec, const SpectralField& omega);

/// Riesz representative Psi'(w):
///   type_I:   sum_j d_j psi w_j
///   type_eps: sum_j d_j psi J_eps(beta'(J_eps w) J_eps w_j)
PhysicalField eval_psi_prime(const TestFunctional& spec, const SpectralField& omega);

/// F1 = <Psi'(w), gamma w - g>
double functional_f1(const TestFunctional& spec, const SpectralField& omega, double gamma,
                     const Forcing& forcing);
/// F2 = <grad Psi'(w), grad w>, spectral gradients.
double functional_f2(const TestFunctional& spec, const SpectralField& omega);
/// F2 in the form -<lap Psi'(w), w>.
double functional_f2_laplacian_form(const TestFunctional& spec, const SpectralField& omega);
/// F3 = -<u.grad(P Psi'(w)), w> with P the dealias projection.
double functional_f3(const TestFunctional& spec, const SpectralField& omega);
/// F3 in the form <Psi'(w), P(u.grad w)>, paired against the solver's advection term.
double functional_f3_advection_form(const TestFunctional& spec, const SpectralField& omega);

/// Values needed per observed state: Psi and F1 + nu F2 + F3 (= -dPsi/dt).
struct FunctionalSample {
    double psi = 0.0;
    double f1 = 0.0;
    double f2 = 0.0;
    double f3 = 0.0;
    double generator(double nu) const noexcept { return f1 + nu * f2 + f3; }
};
FunctionalSample sample_functional(const TestFunctional& spec, const SpectralField& omega,
                                   double gamma, const Forcing& forcing);

}  // namespace ns2d

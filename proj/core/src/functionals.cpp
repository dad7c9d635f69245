#include "ns2d/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include "ns2d/error.hpp"
#include "ns2d/solver.hpp"
#include "ns2d/spectral.hpp"

namespace ns2d {

const char* to_string(OuterKind kind) noexcept {
    switch (kind) {
        case OuterKind::linear: return "linear";
        case OuterKind::half_sum_squares: return "half_sum_squares";
        case OuterKind::cosine_character: return "cosine_character";
    }
    return "unknown";
}

OuterKind outer_kind_from_string(const std::string& name) {
    if (name == "linear") return OuterKind::linear;
    if (name == "half_sum_squares") return OuterKind::half_sum_squares;
    if (name == "cosine_character") return OuterKind::cosine_character;
    throw ConfigError("unknown outer function '" + name + "'");
}

namespace {

double dot(std::span<const double> c, std::span<const double> a) {
    if (c.size() != a.size()) throw ContractError("outer function: coefficient count does not match arguments");
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += c[j] * a[j];
    return s;
}

}  // namespace

double OuterFunction::value(std::span<const double> a) const {
    switch (kind) {
        case OuterKind::linear: return dot(c, a);
        case OuterKind::half_sum_squares: {
            double s = 0.0;
            for (double x : a) s += x * x;
            return 0.5 * s;
        }
        case OuterKind::cosine_character: return std::cos(dot(c, a));
    }
    return 0.0;
}

std::vector<double> OuterFunction::gradient(std::span<const double> a) const {
    std::vector<double> grad(a.size());
    switch (kind) {
        case OuterKind::linear:
            if (c.size() != a.size()) throw ContractError("outer function: coefficient count does not match arguments");
            std::copy(c.begin(), c.end(), grad.begin());
            break;
        case OuterKind::half_sum_squares:
            std::copy(a.begin(), a.end(), grad.begin());
            break;
        case OuterKind::cosine_character: {
            const double s = -std::sin(dot(c, a));
            for (std::size_t j = 0; j < a.size(); ++j) grad[j] = s * c[j];
            break;
        }
    }
    return grad;
}

TestFunctional TestFunctional::type_I(std::string name, OuterFunction psi, std::vector<PhysicalField> w) {
    TestFunctional t;
    t.name_ = std::move(name);
    t.kind_ = FunctionalKind::type_I;
    t.psi_ = std::move(psi);
    t.w_ = std::move(w);
    t.validate();
    for (const auto& f : t.w_) t.w_hat_.push_back(forward_transform(f));
    return t;
}

TestFunctional TestFunctional::type_eps(std::string name, OuterFunction psi, std::vector<PhysicalField> w,
                                        std::shared_ptr<const MollifierKernel> kernel, RenormalizerBeta beta) {
    TestFunctional t;
    t.name_ = std::move(name);
    t.kind_ = FunctionalKind::type_eps;
    t.psi_ = std::move(psi);
    t.w_ = std::move(w);
    t.kernel_ = std::move(kernel);
    t.beta_ = beta;
    if (!t.kernel_) throw ContractError("type_eps functional needs a mollifier kernel");
    t.validate();
    return t;
}

void TestFunctional::validate() const {
    if (w_.empty()) throw ContractError("test functional '" + name_ + "' has no test fields");
    const GridSpec& g = w_.front().grid();
    for (const auto& f : w_) require_same_grid(g, f.grid(), "test functional");
    if (kernel_) require_same_grid(g, kernel_->grid(), "test functional");
    if (psi_.kind != OuterKind::half_sum_squares && psi_.c.size() != w_.size())
        throw ContractError("test functional '" + name_ + "': need one coefficient per test field");
}

std::vector<double> TestFunctional::arguments(const SpectralField& omega) const {
    require_same_grid(grid(), omega.grid(), "test functional");
    std::vector<double> a(w_.size());
    if (kind_ == FunctionalKind::type_I) {
        for (std::size_t j = 0; j < w_.size(); ++j) a[j] = inner_product(omega, w_hat_[j]);
        return a;
    }
    const PhysicalField al = alpha_eps(inverse_transform(omega), *kernel_, *beta_);
    for (std::size_t j = 0; j < w_.size(); ++j) a[j] = inner_product(al, w_[j]);
    return a;
}

std::vector<PhysicalField> harmonic_basis(const GridSpec& grid, int m) {
    grid.validate();
    if (m < 1) throw ContractError("harmonic_basis: m must be positive");
    // Half-plane representatives: k2 > 0, or k2 == 0 and k1 > 0.
    std::vector<std::tuple<int, int, int>> ks;
    const int kmax = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(m)))) + 1;
    for (int k1 = -kmax; k1 <= kmax; ++k1)
        for (int k2 = 0; k2 <= kmax; ++k2)
            if (k2 > 0 || k1 > 0) ks.emplace_back(k1 * k1 + k2 * k2, k1, k2);
    std::sort(ks.begin(), ks.end());

    const double q = grid.wavenumber_unit();
    const double scale = std::sqrt(2.0 / grid.area());
    std::vector<PhysicalField> out;
    for (const auto& [r2, k1, k2] : ks) {
        if (!retained_by_dealias(grid, k1, k2)) continue;
        for (int s = 0; s < 2 && static_cast<int>(out.size()) < m; ++s) {
            out.push_back(PhysicalField::from_function(grid, [=](double x1, double x2) {
                const double ph = q * (k1 * x1 + k2 * x2);
                return scale * (s == 0 ? std::cos(ph) : std::sin(ph));
            }));
        }
        if (static_cast<int>(out.size()) == m) break;
    }
    if (static_cast<int>(out.size()) < m) throw ContractError("harmonic_basis: grid too coarse for m fields");
    return out;
}

double eval_psi(const TestFunctional& spec, const SpectralField& omega) {
    return spec.psi().value(spec.arguments(omega));
}

PhysicalField eval_psi_prime(const TestFunctional& spec, const SpectralField& omega) {
    const std::vector<double> a = spec.arguments(omega);
    const std::vector<double> d = spec.psi().gradient(a);
    const GridSpec& g = spec.grid();
    PhysicalField out(g);
    auto o = out.values();
    if (spec.kind() == FunctionalKind::type_I) {
        for (std::size_t j = 0; j < d.size(); ++j) {
            auto w = spec.test_fields()[j].values();
            for (std::size_t i = 0; i < o.size(); ++i) o[i] += d[j] * w[i];
        }
        return out;
    }
    const MollifierKernel& kernel = *spec.kernel();
    const RenormalizerBeta& beta = *spec.beta();
    const PhysicalField slope = mollify(inverse_transform(omega), kernel).map(
        [&](double y) { return beta.first(y); });
    // sum_j d_j J(beta'(Jw) J w_j) = J(beta'(Jw) J(sum_j d_j w_j)) by linearity.
    PhysicalField combo(g);
    auto c = combo.values();
    for (std::size_t j = 0; j < d.size(); ++j) {
        auto w = spec.test_fields()[j].values();
        for (std::size_t i = 0; i < c.size(); ++i) c[i] += d[j] * w[i];
    }
    return mollify(hadamard(slope, mollify(combo, kernel)), kernel);
}

namespace {

double f1_of(const PhysicalField& p, const SpectralField& omega, double gamma, const Forcing& forcing) {
    PhysicalField rhs = inverse_transform(omega) * gamma;
    rhs -= forcing.g;
    return inner_product(p, rhs);
}

double f2_of(const SpectralField& p, const SpectralField& omega) {
    const SpectralVector gp = gradient_spectral(p);
    const SpectralVector gw = gradient_spectral(omega);
    return inner_product(gp.x1, gw.x1) + inner_product(gp.x2, gw.x2);
}

// -<u.grad(P p), w> by grid quadrature. Every factor lies in the dealiased
// band, so for 3 K < N the quadrature is exact and the value equals
// <P p, P(u.grad w)> up to rounding.
double f3_of(const SpectralField& p, const SpectralField& omega) {
    const VectorField u = biot_savart(omega);
    const VectorField gp = gradient(dealias(p));
    PhysicalField adv = hadamard(u.x1, gp.x1);
    adv += hadamard(u.x2, gp.x2);
    return -inner_product(adv, inverse_transform(omega));
}

}  // namespace

double functional_f1(const TestFunctional& spec, const SpectralField& omega, double gamma,
                     const Forcing& forcing) {
    return f1_of(eval_psi_prime(spec, omega), omega, gamma, forcing);
}

double functional_f2(const TestFunctional& spec, const SpectralField& omega) {
    return f2_of(forward_transform(eval_psi_prime(spec, omega)), omega);
}

double functional_f2_laplacian_form(const TestFunctional& spec, const SpectralField& omega) {
    const SpectralField p = forward_transform(eval_psi_prime(spec, omega));
    return -inner_product(laplacian(p), omega);
}

double functional_f3(const TestFunctional& spec, const SpectralField& omega) {
    return f3_of(forward_transform(eval_psi_prime(spec, omega)), omega);
}

double functional_f3_advection_form(const TestFunctional& spec, const SpectralField& omega) {
    return inner_product(forward_transform(eval_psi_prime(spec, omega)), nonlinear_term(omega));
}

FunctionalSample sample_functional(const TestFunctional& spec, const SpectralField& omega, double gamma,
                                   const Forcing& forcing) {
    const PhysicalField p = eval_psi_prime(spec, omega);
    const SpectralField ph = forward_transform(p);
    FunctionalSample s;
    s.psi = eval_psi(spec, omega);
    s.f1 = f1_of(p, omega, gamma, forcing);
    s.f2 = f2_of(ph, omega);
    s.f3 = f3_of(ph, omega);
    return s;
}

}  // namespace ns2d

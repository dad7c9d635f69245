#include "ns2d/fields.hpp"

#include <algorithm>
#include <cmath>

#include "ns2d/error.hpp"

namespace ns2d {

namespace {

int wrap(int k, int n) noexcept {
    int r = k % n;
    return r < 0 ? r + n : r;
}

}  // namespace

PhysicalField::PhysicalField(const GridSpec& grid) : grid_(grid), values_(grid.physical_size(), 0.0) {
    grid_.validate();
}

PhysicalField::PhysicalField(const GridSpec& grid, RealBuffer values)
    : grid_(grid), values_(std::move(values)) {
    grid_.validate();
    if (values_.size() != grid_.physical_size())
        throw ContractError("PhysicalField: sample count does not match grid");
    if (!all_finite()) throw ContractError("PhysicalField: non-finite sample");
}

PhysicalField::PhysicalField(const GridSpec& grid, std::span<const double> values)
    : PhysicalField(grid, RealBuffer(values.begin(), values.end())) {}

PhysicalField PhysicalField::from_function(const GridSpec& grid,
                                           const std::function<double(double, double)>& f) {
    PhysicalField out(grid);
    const int n = grid.n();
    const double h = grid.spacing();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(i, j) = f(i * h, j * h);
    if (!out.all_finite()) throw ContractError("PhysicalField::from_function: non-finite sample");
    return out;
}

bool PhysicalField::all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

PhysicalField& PhysicalField::operator+=(const PhysicalField& o) {
    require_same_grid(grid_, o.grid_, "PhysicalField::operator+=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
}

PhysicalField& PhysicalField::operator-=(const PhysicalField& o) {
    require_same_grid(grid_, o.grid_, "PhysicalField::operator-=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
}

PhysicalField& PhysicalField::operator*=(double s) noexcept {
    for (auto& v : values_) v *= s;
    return *this;
}

PhysicalField hadamard(const PhysicalField& a, const PhysicalField& b) {
    require_same_grid(a.grid_, b.grid_, "hadamard");
    PhysicalField out(a);
    for (std::size_t i = 0; i < out.values_.size(); ++i) out.values_[i] *= b.values_[i];
    return out;
}

PhysicalField PhysicalField::map(const std::function<double(double)>& f) const {
    PhysicalField out(*this);
    for (auto& v : out.values_) v = f(v);
    return out;
}

SpectralField::SpectralField(const GridSpec& grid) : grid_(grid), coeffs_(grid.spectral_size()) {
    grid_.validate();
}

SpectralField::SpectralField(const GridSpec& grid, ComplexBuffer coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
    grid_.validate();
    if (coeffs_.size() != grid_.spectral_size())
        throw ContractError("SpectralField: coefficient count does not match grid");
}

SpectralField SpectralField::from_full(const GridSpec& grid, std::span<const Complex> full) {
    grid.validate();
    const int n = grid.n();
    if (full.size() != grid.physical_size())
        throw ContractError("SpectralField::from_full: expected N*N coefficients");
    double scale = 0.0;
    for (const auto& c : full) scale = std::max(scale, std::abs(c));
    const double tol = 1e-10 * std::max(scale, 1e-300);
    for (int r1 = 0; r1 < n; ++r1) {
        for (int r2 = 0; r2 < n; ++r2) {
            const Complex a = full[static_cast<std::size_t>(r1) * n + r2];
            const Complex b = full[static_cast<std::size_t>(wrap(-r1, n)) * n + wrap(-r2, n)];
            if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
                throw ContractError("SpectralField::from_full: non-finite coefficient");
            if (std::abs(a - std::conj(b)) > tol)
                throw ContractError("SpectralField::from_full: Hermitian symmetry violated at k=(" +
                                    std::to_string(grid.signed_index(r1)) + "," +
                                    std::to_string(grid.signed_index(r2)) + ")");
        }
    }
    SpectralField out(grid);
    const int h = grid.half();
    for (int r1 = 0; r1 < n; ++r1)
        for (int c2 = 0; c2 < h; ++c2)
            out.coeffs_[static_cast<std::size_t>(r1) * h + c2] = full[static_cast<std::size_t>(r1) * n + c2];
    return out;
}

std::vector<Complex> SpectralField::to_full() const {
    const int n = grid_.n();
    std::vector<Complex> full(grid_.physical_size());
    for (int r1 = 0; r1 < n; ++r1)
        for (int r2 = 0; r2 < n; ++r2)
            full[static_cast<std::size_t>(r1) * n + r2] =
                coeff(grid_.signed_index(r1), grid_.signed_index(r2));
    return full;
}

Complex SpectralField::coeff(int k1, int k2) const {
    const int n = grid_.n();
    const int h = grid_.half();
    const int c2 = wrap(k2, n);
    if (c2 < h) return coeffs_[static_cast<std::size_t>(wrap(k1, n)) * h + c2];
    return std::conj(coeffs_[static_cast<std::size_t>(wrap(-k1, n)) * h + wrap(-k2, n)]);
}

void SpectralField::set_coeff(int k1, int k2, Complex value) {
    const int n = grid_.n();
    const int h = grid_.half();
    int r1 = wrap(k1, n);
    int c2 = wrap(k2, n);
    if (c2 >= h) {
        r1 = wrap(-k1, n);
        c2 = wrap(-k2, n);
        value = std::conj(value);
    }
    coeffs_[static_cast<std::size_t>(r1) * h + c2] = value;
    if (c2 == 0 || c2 == n / 2) {
        const int p1 = wrap(-r1, n);
        if (p1 == r1)
            coeffs_[static_cast<std::size_t>(r1) * h + c2] = Complex(value.real(), 0.0);
        else
            coeffs_[static_cast<std::size_t>(p1) * h + c2] = std::conj(value);
    }
}

bool SpectralField::all_finite() const noexcept {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Complex& c) {
        return std::isfinite(c.real()) && std::isfinite(c.imag());
    });
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    require_same_grid(grid_, o.grid_, "SpectralField::operator+=");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
    require_same_grid(grid_, o.grid_, "SpectralField::operator-=");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double s) noexcept {
    for (auto& c : coeffs_) c *= s;
    return *this;
}

}  // namespace ns2d

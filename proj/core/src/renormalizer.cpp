#include "ns2d/renormalizer.hpp"

#include <cmath>

#include "ns2d/error.hpp"

namespace ns2d {

namespace {

// chi(s) and its first three derivatives for s >= 0.
struct Cutoff {
    double v, d1, d2, d3;
};

Cutoff cutoff(double s) noexcept {
    if (s <= 1.0) return {1.0, 0.0, 0.0, 0.0};
    if (s >= 2.0) return {0.0, 0.0, 0.0, 0.0};
    const double t = s - 1.0;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double p = t2 * t2 * (35.0 - 84.0 * t + 70.0 * t2 - 20.0 * t3);
    const double p1 = t3 * (140.0 - 420.0 * t + 420.0 * t2 - 140.0 * t3);
    const double p2 = t2 * (420.0 - 1680.0 * t + 2100.0 * t2 - 840.0 * t3);
    const double p3 = t * (840.0 - 5040.0 * t + 8400.0 * t2 - 4200.0 * t3);
    return {1.0 - p, -p1, -p2, -p3};
}

}  // namespace

RenormalizerBeta::RenormalizerBeta(double family_parameter) : m_(family_parameter) {
    if (!(m_ > 0.0) || !std::isfinite(m_)) throw ContractError("RenormalizerBeta: M must be > 0");
    id_ = "identity_taper(M=" + std::to_string(m_) + ")";
}

double RenormalizerBeta::value(double y) const noexcept {
    return y * cutoff(std::abs(y) / m_).v;
}

double RenormalizerBeta::first(double y) const noexcept {
    const double s = std::abs(y) / m_;
    const auto c = cutoff(s);
    return c.v + s * c.d1;
}

double RenormalizerBeta::second(double y) const noexcept {
    const double s = std::abs(y) / m_;
    const auto c = cutoff(s);
    const double sign = y < 0.0 ? -1.0 : 1.0;
    return sign * (2.0 * c.d1 + s * c.d2) / m_;
}

double RenormalizerBeta::third(double y) const noexcept {
    const double s = std::abs(y) / m_;
    const auto c = cutoff(s);
    return (3.0 * c.d2 + s * c.d3) / (m_ * m_);
}

}  // namespace ns2d

#pragma once

#include <string>

namespace ns2d {

/// Compactly supported C^3 renormalization beta_M approximating beta(y) = y:
///
///   beta_M(y) = y chi(|y| / M),   chi = 1 on [0,1], 0 on [2, inf),
///
/// with chi(s) = 1 - P(s - 1) on [1, 2] and P the C^3 septic smoothstep
/// 35t^4 - 84t^5 + 70t^6 - 20t^7. Hence beta_M(y) = y and beta_M'(y) = 1 for
/// |y| <= M, supp beta_M = [-2M, 2M], and beta_M', beta_M'' are bounded
/// independently of M.
class RenormalizerBeta {
public:
    /// Throws ContractError unless M > 0.
    explicit RenormalizerBeta(double family_parameter);

    static RenormalizerBeta identity_taper(double m) { return RenormalizerBeta(m); }

    const std::string& id() const noexcept { return id_; }
    double family_parameter() const noexcept { return m_; }
    double support_radius() const noexcept { return 2.0 * m_; }

    double value(double y) const noexcept;
    double first(double y) const noexcept;
    double second(double y) const noexcept;
    double third(double y) const noexcept;

    double operator()(double y) const noexcept { return value(y); }

private:
    std::string id_;
    double m_;
};

}  // namespace ns2d

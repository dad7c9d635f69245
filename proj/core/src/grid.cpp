#include "ns2d/grid.hpp"

#include <cmath>
#include <string>

#include "ns2d/error.hpp"

namespace ns2d {

void GridSpec::validate() const {
    if (points_per_side < 8 || points_per_side % 2 != 0)
        throw ContractError("grid: points_per_side must be even and >= 8, got " +
                            std::to_string(points_per_side));
    if (!(domain_length > 0.0) || !std::isfinite(domain_length))
        throw ContractError("grid: domain_length must be positive");
    if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0))
        throw ContractError("grid: dealias_fraction must lie in (0, 1]");
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where) {
    if (!(a == b)) throw ContractError(std::string(where) + ": grid mismatch");
}

}  // namespace ns2d

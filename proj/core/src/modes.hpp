#pragma once

#include <cstddef>

#include "ns2d/grid.hpp"

namespace ns2d::detail {

// Visits every stored half-spectrum coefficient as f(index, k1, k2) with
// integer wavenumbers.
template <class F>
void for_each_mode(const GridSpec& grid, F&& f) {
    const int n = grid.n();
    const int h = grid.half();
    std::size_t idx = 0;
    for (int r1 = 0; r1 < n; ++r1) {
        const int k1 = grid.signed_index(r1);
        for (int c2 = 0; c2 < h; ++c2, ++idx) f(idx, k1, c2);
    }
}

// Multiplicity of a stored coefficient in the full spectrum sum.
inline double hermitian_weight(const GridSpec& grid, int c2) noexcept {
    return (c2 == 0 || c2 == grid.n() / 2) ? 1.0 : 2.0;
}

}  // namespace ns2d::detail

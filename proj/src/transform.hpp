#pragma once

#include <algorithm>

#include "ac2d/spectral.hpp"
#include "fft.hpp"

namespace ac2d::detail {

// Writes weight(m1, m2) * coeff(m) into the half spectrum of `ws` for all
// stored modes with m2 >= 0. Requires G >= 2 * cutoff + 1.
template <class Weight>
void scatter_half(const SpectralField& f, FftWorkspace& ws, Weight&& weight)
{
    const int g = ws.grid_size;
    const int hw = ws.half_width;
    std::fill(ws.half, ws.half + static_cast<std::size_t>(g) * hw, cplx{});
    const int n = f.cutoff();
    for (int m1 = -n; m1 <= n; ++m1) {
        const int row = m1 < 0 ? m1 + g : m1;
        for (int m2 = 0; m2 <= n; ++m2) {
            if (!f.in_ball(m1, m2))
                continue;
            const double w = weight(m1, m2);
            if (w != 0.0)
                ws.half[static_cast<std::size_t>(row) * hw + m2] = w * f.at(m1, m2);
        }
    }
}

inline void scatter_half(const SpectralField& f, FftWorkspace& ws)
{
    scatter_half(f, ws, [](int, int) { return 1.0; });
}

// Reads the normalized coefficients |m| <= cutoff back from an r2c output.
// Negative-m2 modes (and the m2 = 0, m1 < 0 column) are taken as conjugates
// so the result is exactly Hermitian.
inline SpectralField gather_half(const FftWorkspace& ws, int cutoff)
{
    const int g = ws.grid_size;
    const int hw = ws.half_width;
    const double scale = 1.0 / (static_cast<double>(g) * g);
    SpectralField out(cutoff);
    for (int m1 = -cutoff; m1 <= cutoff; ++m1) {
        for (int m2 = 0; m2 <= cutoff; ++m2) {
            if (!out.in_ball(m1, m2))
                continue;
            if (m2 == 0 && m1 < 0)
                continue;
            const int row = m1 < 0 ? m1 + g : m1;
            cplx c = ws.half[static_cast<std::size_t>(row) * hw + m2] * scale;
            if (m1 == 0 && m2 == 0)
                c.imag(0.0);
            out.set_pair(m1, m2, c);
        }
    }
    return out;
}

}  // namespace ac2d::detail

#pragma once

// Littlewood-Paley blocks and the Hoelder-Besov norm
//   ||u||_s = sup_{j >= -1} 2^{js} ||Delta_j u||_{L^inf}
// for band-limited fields.
//
// The default partition is sharp: block -1 is the zero mode and block j >= 0
// is the annulus 2^{j-1} < |m| <= 2^j, so blocks are exact Fourier
// projections and sum back to u bit-for-bit. The smooth partition uses the
// radial bump chi = 1 on |xi| <= 3/4, chi = 0 on |xi| >= 4/3, and
// theta(xi) = chi(xi/2) - chi(xi); it meets the support conditions of a
// dyadic partition of unity and gives an equivalent norm.
//
// L^inf starts from the max over a collocation grid. Block j is sampled on a
// grid of oversample * fast_grid_size(2 b_j + 1) points per axis, where b_j
// is the largest |m| component the block can hold, so grids for oversample k
// and 2k are nested and the grid max is nondecreasing under doubling. With
// `refine`, the four largest grid-local maxima of |Delta_j u| are then
// polished by Newton ascent on the exact trigonometric polynomial; the
// result is still a value the block attains, hence a lower bound of the sup.

#include <vector>

#include "ac2d/spectral.hpp"

namespace ac2d {

struct DyadicPartition {
    enum class Kind { sharp, smooth };
    Kind kind = Kind::sharp;

    /// Largest block index for a cutoff-N field: ceil(log2 N), or -1 for N = 0.
    static int top_block(int cutoff);
    /// Weight of block j at a mode with |m|^2 = norm2.
    double multiplier(int j, int norm2) const;
    /// Largest |m| that can carry weight in block j.
    double outer_radius(int j) const;
};

/// Block index of a mode under the sharp partition.
int sharp_block_of(int norm2);

SpectralField lp_block(const SpectralField& u, int j, DyadicPartition part = {});

struct BesovNormResult {
    double s = 0.0;
    double value = 0.0;
    /// 2^{js} ||Delta_j u||_inf for j = -1, 0, ..., top_block; index j + 1.
    std::vector<double> contributions;
    /// ||Delta_j u||_inf, same indexing.
    std::vector<double> block_sup;
};

BesovNormResult besov_norm(const SpectralField& u, double s, DyadicPartition part = {}, int oversample = 4,
                           bool refine = true);

/// t^gamma ||a - b||_s. The field with the smaller cutoff is zero-padded, so
/// modes present in only one field count fully toward the error.
double weighted_error_norm(const SpectralField& a, const SpectralField& b, double s, double t, double gamma,
                           DyadicPartition part = {}, int oversample = 4, bool refine = true);

}  // namespace ac2d

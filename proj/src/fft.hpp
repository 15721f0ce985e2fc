#pragma once

// Thin FFTW wrapper shared by the spectral and Besov code. Plans are created
// once per grid size with FFTW_ESTIMATE (deterministic plan selection) and
// executed through the new-array interface, which is thread-safe.

#include <complex>
#include <span>

namespace ac2d::detail {

/// Scratch buffers for one G x G real grid and its G x (G/2+1) half spectrum.
/// One workspace per (thread, G), allocated lazily with fftw_malloc.
struct FftWorkspace {
    int grid_size;
    int half_width;  // G/2 + 1
    double* real;
    std::complex<double>* half;
};

FftWorkspace& workspace(int grid_size);

/// half -> real, unnormalized: real(x) = sum_k half(k) e^{+2 pi i k.x/G}.
/// Destroys the contents of `half`.
void execute_c2r(FftWorkspace& ws);
/// real -> half, unnormalized.
void execute_r2c(FftWorkspace& ws);

}  // namespace ac2d::detail

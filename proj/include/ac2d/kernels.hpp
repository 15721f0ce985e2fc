#pragma once

// Data-parallel inner loops. Each kernel has a serial reference version and
// an OpenMP version; the two are required to agree bit-for-bit (every
// element is computed independently, and the only reduction is a max), which
// tests/test_kernels.cpp checks and bench/ times.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>

#include "ac2d/rng.hpp"

namespace ac2d::kernels {

/// Per-mode Gaussian draw parameters for a set of canonical modes.
/// Mode i draws (re, im) = (re_scale[i] * g0, im_scale[i] * g1) where
/// (g0, g1) = gaussian_pair({m1[i], m2[i], word, sample}, key).
struct ModeDraws {
    std::span<const int> m1;
    std::span<const int> m2;
    std::span<const double> re_scale;
    std::span<const double> im_scale;
};

namespace serial {

/// state[i] = draw[i]
void ou_sample(const ModeDraws& d, std::span<std::complex<double>> state, PhiloxKey key,
               std::uint32_t sample, std::uint32_t word);

/// state[i] = decay[i] * state[i] + draw[i]
void ou_advance(const ModeDraws& d, std::span<const double> decay, std::span<std::complex<double>> state,
                PhiloxKey key, std::uint32_t sample, std::uint32_t word);

/// max_i |values[i]|
double max_abs(std::span<const double> values);

/// Calls fn(i) for i in [0, n).
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace serial

namespace omp {

void ou_sample(const ModeDraws& d, std::span<std::complex<double>> state, PhiloxKey key,
               std::uint32_t sample, std::uint32_t word);

void ou_advance(const ModeDraws& d, std::span<const double> decay, std::span<std::complex<double>> state,
                PhiloxKey key, std::uint32_t sample, std::uint32_t word);

double max_abs(std::span<const double> values);

/// Dynamic schedule over `workers` threads (0 = OpenMP default). `fn` must
/// only write to index-owned storage.
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& fn, int workers = 0);

}  // namespace omp

/// Number of worker threads OpenMP would use by default.
int default_workers();

}  // namespace ac2d::kernels

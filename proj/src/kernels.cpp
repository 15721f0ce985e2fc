#include "ac2d/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

namespace ac2d::kernels {

namespace {

inline std::complex<double> draw(const ModeDraws& d, std::size_t i, PhiloxKey key, std::uint32_t sample,
                                 std::uint32_t word)
{
    const auto [g0, g1] = gaussian_pair(
        {static_cast<std::uint32_t>(d.m1[i]), static_cast<std::uint32_t>(d.m2[i]), word, sample}, key);
    return {d.re_scale[i] * g0, d.im_scale[i] * g1};
}

// Parallel regions nested inside the Monte Carlo worker loop run on one thread.
inline bool nested() { return omp_in_parallel() != 0; }

}  // namespace

namespace serial {

void ou_sample(const ModeDraws& d, std::span<std::complex<double>> state, PhiloxKey key, std::uint32_t sample,
               std::uint32_t word)
{
    for (std::size_t i = 0; i < state.size(); ++i)
        state[i] = draw(d, i, key, sample, word);
}

void ou_advance(const ModeDraws& d, std::span<const double> decay, std::span<std::complex<double>> state,
                PhiloxKey key, std::uint32_t sample, std::uint32_t word)
{
    for (std::size_t i = 0; i < state.size(); ++i)
        state[i] = decay[i] * state[i] + draw(d, i, key, sample, word);
}

double max_abs(std::span<const double> values)
{
    double m = 0.0;
    for (double v : values)
        m = std::max(m, std::abs(v));
    return m;
}

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& fn)
{
    for (std::size_t i = 0; i < n; ++i)
        fn(i);
}

}  // namespace serial

namespace omp {

void ou_sample(const ModeDraws& d, std::span<std::complex<double>> state, PhiloxKey key, std::uint32_t sample,
               std::uint32_t word)
{
    const auto n = static_cast<std::ptrdiff_t>(state.size());
#pragma omp parallel for schedule(static) if (!nested())
    for (std::ptrdiff_t i = 0; i < n; ++i)
        state[i] = draw(d, static_cast<std::size_t>(i), key, sample, word);
}

void ou_advance(const ModeDraws& d, std::span<const double> decay, std::span<std::complex<double>> state,
                PhiloxKey key, std::uint32_t sample, std::uint32_t word)
{
    const auto n = static_cast<std::ptrdiff_t>(state.size());
#pragma omp parallel for schedule(static) if (!nested())
    for (std::ptrdiff_t i = 0; i < n; ++i)
        state[i] = decay[i] * state[i] + draw(d, static_cast<std::size_t>(i), key, sample, word);
}

double max_abs(std::span<const double> values)
{
    double m = 0.0;
    const auto n = static_cast<std::ptrdiff_t>(values.size());
#pragma omp parallel for schedule(static) reduction(max : m) if (!nested())
    for (std::ptrdiff_t i = 0; i < n; ++i)
        m = std::max(m, std::abs(values[i]));
    return m;
}

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& fn, int workers)
{
    const int threads = workers > 0 ? workers : omp_get_max_threads();
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::ptrdiff_t i = 0; i < count; ++i)
        fn(static_cast<std::size_t>(i));
}

}  // namespace omp

int default_workers() { return omp_get_max_threads(); }

}  // namespace ac2d::kernels

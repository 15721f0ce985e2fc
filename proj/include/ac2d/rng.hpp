#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace ac2d {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key);

/// Uniform double in (0, 1] built from 53 bits of `bits`.
inline double uniform_open_closed(std::uint64_t bits)
{
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

/// Two independent standard normals from one Philox block (Box-Muller).
std::pair<double, double> gaussian_pair(PhiloxCounter ctr, PhiloxKey key);

/// Identifies one Monte Carlo realization of the driving noise.
///
/// Stream derivation: the Gaussian pair attached to mode (m1, m2) and
/// event word w is gaussian_pair({m1, m2, w, sample_index},
/// {lo32(master_seed), hi32(master_seed)}), with m1, m2 cast to uint32.
/// Word 0 draws the stationary initial state, word k+1 the increment of
/// base-grid step k. Nothing in the key or counter depends on the cutoff or
/// on the number of steps of a coarse grid.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint32_t sample_index = 0;

    PhiloxKey key() const
    {
        return {static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32)};
    }

    friend constexpr bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

/// Key for auxiliary streams (initial data, bootstrap) derived from a seed.
inline PhiloxKey derived_key(std::uint64_t seed, std::uint32_t domain)
{
    const std::uint64_t mixed = seed ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(domain) + 1));
    return {static_cast<std::uint32_t>(mixed), static_cast<std::uint32_t>(mixed >> 32)};
}

/// Sequential uniform integers from a Philox stream (used for resampling).
class CounterStream {
public:
    CounterStream(PhiloxKey key, std::uint32_t stream) : key_(key), stream_(stream) {}

    std::uint64_t next_u64();
    /// Uniform in [0, n).
    std::uint64_t below(std::uint64_t n);

private:
    PhiloxKey key_;
    std::uint32_t stream_;
    std::uint64_t counter_ = 0;
    PhiloxCounter block_{};
    int used_ = 4;
};

}  // namespace ac2d

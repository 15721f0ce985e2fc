#include "ac2d/rng.hpp"

#include <cmath>
#include <numbers>

namespace ac2d {

namespace {

constexpr std::uint32_t kMulA = 0xD2511F53;
constexpr std::uint32_t kMulB = 0xCD9E8D57;
constexpr std::uint32_t kWeylA = 0x9E3779B9;
constexpr std::uint32_t kWeylB = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi)
{
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    lo = static_cast<std::uint32_t>(p);
    hi = static_cast<std::uint32_t>(p >> 32);
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key)
{
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kWeylA;
            key[1] += kWeylB;
        }
        std::uint32_t lo0, hi0, lo1, hi1;
        mulhilo(kMulA, ctr[0], lo0, hi0);
        mulhilo(kMulB, ctr[2], lo1, hi1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

std::pair<double, double> gaussian_pair(PhiloxCounter ctr, PhiloxKey key)
{
    const auto r = philox4x32_10(ctr, key);
    const std::uint64_t b0 = (static_cast<std::uint64_t>(r[0]) << 32) | r[1];
    const std::uint64_t b1 = (static_cast<std::uint64_t>(r[2]) << 32) | r[3];
    const double radius = std::sqrt(-2.0 * std::log(uniform_open_closed(b0)));
    const double angle = 2.0 * std::numbers::pi * uniform_open_closed(b1);
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

std::uint64_t CounterStream::next_u64()
{
    if (used_ >= 4) {
        block_ = philox4x32_10({static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
                                stream_, 0x5EED5EEDu},
                               key_);
        ++counter_;
        used_ = 0;
    }
    const std::uint64_t v = (static_cast<std::uint64_t>(block_[used_]) << 32) | block_[used_ + 1];
    used_ += 2;
    return v;
}

std::uint64_t CounterStream::below(std::uint64_t n)
{
    // Lemire's multiply-shift; the residual bias is below 2^-40 for the n used here.
    const unsigned __int128 p = static_cast<unsigned __int128>(next_u64()) * n;
    return static_cast<std::uint64_t>(p >> 64);
}

}  // namespace ac2d

#include <doctest.h>

#include <cmath>
#include <cstring>

#include "ac2d/noise.hpp"

using namespace ac2d;

namespace {

bool same_bytes(std::span<const cplx> a, std::span<const cplx> b)
{
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size_bytes()) == 0;
}

}  // namespace

TEST_SUITE("noise") {

TEST_CASE("mode table is the canonical half lattice in (m2, m1) order")
{
    ModeTable t(2);
    // |m| <= 2: (0,0), (1,0), (2,0), then m2 = 1: m1 = -1..1, then m2 = 2: (0,2)
    REQUIRE(t.size() == 7);
    CHECK(t.m1()[0] == 0);
    CHECK(t.m2()[0] == 0);
    CHECK((t.m1()[1] == 1 && t.m2()[1] == 0));
    CHECK((t.m1()[3] == -1 && t.m2()[3] == 1));
    CHECK((t.m1()[6] == 0 && t.m2()[6] == 2));
    // restriction is a stable filter
    ModeTable big(9);
    std::vector<std::pair<int, int>> kept;
    for (std::size_t i = 0; i < big.size(); ++i)
        if (big.norm2(i) <= 4)
            kept.emplace_back(big.m1()[i], big.m2()[i]);
    for (std::size_t i = 0; i < t.size(); ++i)
        CHECK(kept[i] == std::make_pair(t.m1()[i], t.m2()[i]));
}

TEST_CASE("restricted and subsampled paths are byte-identical to direct coarse paths")
{
    const SeedSpec seed{77, 3};
    const NoisePath fine = NoisePath::generate({32, 512, 512, 1.0}, seed);
    const NoisePath direct = NoisePath::generate({8, 64, 512, 1.0}, seed);
    const NoisePath a = subsample_times(restrict_modes(fine, 8), 64);
    const NoisePath b = restrict_modes(subsample_times(fine, 64), 8);
    CHECK(same_bytes(a.data(), direct.data()));
    CHECK(same_bytes(b.data(), direct.data()));
    for (int k = 0; k <= 64; ++k)
        CHECK(a.time(k) == direct.time(k));
    CHECK_THROWS_AS(subsample_times(fine, 3), std::invalid_argument);
    CHECK_THROWS_AS(restrict_modes(fine, 40), std::invalid_argument);
}

TEST_CASE("serial and parallel generation agree")
{
    const NoisePath a = NoisePath::generate({12, 16, 32, 1.0}, {5, 1}, false);
    const NoisePath b = NoisePath::generate({12, 16, 32, 1.0}, {5, 1}, true);
    CHECK(same_bytes(a.data(), b.data()));
}

TEST_CASE("streams reproduce stored paths")
{
    const NoisePath p = NoisePath::generate({6, 8, 8, 0.5}, {1, 0});
    NoiseStream s(6, 8, 0.5, {1, 0});
    for (int k = 0; k <= 8; ++k) {
        CHECK(same_bytes(s.state(), p.slice(k)));
        CHECK(s.time() == p.time(k));
        CHECK(s.zero_initial_field(6) == p.zero_initial_value(k));
        CHECK(s.stationary_field(4) == p.stationary(k, 4));
        if (k < 8)
            s.advance();
    }
    CHECK_THROWS_AS(s.advance(), std::out_of_range);
}

TEST_CASE("zero-initial field vanishes at t = 0 and is Hermitian")
{
    const NoisePath p = NoisePath::generate({10, 4, 4, 1.0}, {3, 9});
    CHECK(p.zero_initial_value(0).is_zero());
    CHECK(p.zero_initial_value(3).is_hermitian());
    CHECK(p.stationary(2).is_hermitian());
    CHECK(p.stationary(2).ball_supported());
}

TEST_CASE("exact OU transition composes over half steps")
{
    ModeTable modes(6);
    std::vector<cplx> one(modes.size(), {1.0, 0.5}), two = one, zero(modes.size());
    ou_advance(one, modes.eigenvalues(), 0.02, zero);
    ou_advance(two, modes.eigenvalues(), 0.01, zero);
    ou_advance(two, modes.eigenvalues(), 0.01, zero);
    for (std::size_t i = 0; i < one.size(); ++i)
        CHECK(std::abs(one[i] - two[i]) <= 1e-14 * std::abs(cplx{1.0, 0.5}));
}

TEST_CASE("stationary variance per mode")
{
    ModeTable modes(3);
    const int n = 20000;
    std::vector<double> acc(modes.size(), 0.0);
    for (int s = 0; s < n; ++s) {
        const auto v = sample_stationary_initial(modes, {11, std::uint32_t(s)});
        for (std::size_t i = 0; i < v.size(); ++i)
            acc[i] += std::norm(v[i]);
    }
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const double target = 0.5 / modes.eigenvalues()[i];
        // E|c|^2 estimate; relative SE is sqrt(2/n) for real, sqrt(1/n) for complex modes
        CHECK(std::abs(acc[i] / n - target) <= 5.0 * std::sqrt(2.0 / n) * target);
    }
}

TEST_CASE("stored paths beyond the memory limit are refused")
{
    CHECK_THROWS(NoisePath::generate({512, 4096, 4096, 1.0}, {1, 0}));
}

}

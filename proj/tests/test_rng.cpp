#include <doctest.h>

#include <cmath>
#include <set>

#include "ac2d/rng.hpp"

using namespace ac2d;

TEST_SUITE("rng") {

// Known-answer vectors of the Random123 distribution.
TEST_CASE("philox4x32-10 known answers")
{
    CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == PhiloxCounter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
          PhiloxCounter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
          PhiloxCounter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("uniforms lie in (0, 1]")
{
    CHECK(uniform_open_closed(0) > 0.0);
    CHECK(uniform_open_closed(~0ULL) == 1.0);
}

TEST_CASE("gaussian pairs have unit variance and are reproducible")
{
    const PhiloxKey key = SeedSpec{42, 0}.key();
    double s = 0.0, ss = 0.0, cross = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const auto [a, b] = gaussian_pair({std::uint32_t(i), 7, 0, 0}, key);
        s += a + b;
        ss += a * a + b * b;
        cross += a * b;
    }
    CHECK(std::abs(s / (2 * n)) < 5.0 / std::sqrt(2.0 * n));
    CHECK(std::abs(ss / (2 * n) - 1.0) < 5.0 * std::sqrt(2.0 / (2 * n)));
    CHECK(std::abs(cross / n) < 5.0 / std::sqrt(double(n)));
    CHECK(gaussian_pair({1, 2, 3, 4}, key) == gaussian_pair({1, 2, 3, 4}, key));
    CHECK(gaussian_pair({1, 2, 3, 4}, key) != gaussian_pair({1, 2, 3, 5}, key));
}

TEST_CASE("seed keys split the master seed")
{
    const SeedSpec s{0x0123456789abcdefULL, 3};
    CHECK(s.key() == PhiloxKey{0x89abcdefu, 0x01234567u});
    CHECK(derived_key(1, 1) != derived_key(1, 2));
    CHECK(derived_key(1, 1) != SeedSpec{1, 0}.key());
}

TEST_CASE("counter stream draws are bounded and deterministic")
{
    CounterStream a(derived_key(9, 2), 0), b(derived_key(9, 2), 0), c(derived_key(9, 2), 1);
    std::set<std::uint64_t> seen;
    bool differs = false;
    for (int i = 0; i < 1000; ++i) {
        const auto x = a.below(10);
        CHECK(x < 10);
        CHECK(x == b.below(10));
        differs |= x != c.below(10);
        seen.insert(x);
    }
    CHECK(differs);
    CHECK(seen.size() == 10);
}

}

#include <doctest.h>

#include <atomic>
#include <cstring>
#include <random>
#include <vector>

#include "ac2d/kernels.hpp"
#include "ac2d/noise.hpp"

using namespace ac2d;
using namespace ac2d::kernels;

namespace {

struct Fixture {
    ModeTable modes{24};
    std::vector<double> re, im, decay;
    Fixture()
    {
        for (std::size_t i = 0; i < modes.size(); ++i) {
            re.push_back(0.1 + 0.01 * i);
            im.push_back(modes.norm2(i) == 0 ? 0.0 : 0.2);
            decay.push_back(0.9);
        }
    }
    ModeDraws draws() const { return {modes.m1(), modes.m2(), re, im}; }
};

bool same_bytes(const std::vector<std::complex<double>>& a, const std::vector<std::complex<double>>& b)
{
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(a[0])) == 0;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("ou_sample: OpenMP matches serial bit for bit")
{
    Fixture f;
    std::vector<std::complex<double>> a(f.modes.size()), b(f.modes.size());
    serial::ou_sample(f.draws(), a, SeedSpec{5, 2}.key(), 2, 0);
    omp::ou_sample(f.draws(), b, SeedSpec{5, 2}.key(), 2, 0);
    CHECK(same_bytes(a, b));
    for (std::size_t i = 0; i < a.size(); ++i)
        if (f.modes.norm2(i) == 0)
            CHECK(a[i].imag() == 0.0);
}

TEST_CASE("ou_advance: OpenMP matches serial bit for bit")
{
    Fixture f;
    std::vector<std::complex<double>> a(f.modes.size(), {1.0, -1.0}), b = a;
    for (std::uint32_t w = 1; w <= 5; ++w) {
        serial::ou_advance(f.draws(), f.decay, a, SeedSpec{5, 0}.key(), 0, w);
        omp::ou_advance(f.draws(), f.decay, b, SeedSpec{5, 0}.key(), 0, w);
    }
    CHECK(same_bytes(a, b));
}

TEST_CASE("max_abs agrees and for_each_index visits every index once")
{
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    std::vector<double> v(100003);
    for (double& x : v)
        x = g(rng);
    CHECK(serial::max_abs(v) == omp::max_abs(v));
    CHECK(serial::max_abs(std::vector<double>{}) == 0.0);

    std::vector<std::atomic<int>> hits(1000);
    omp::for_each_index(hits.size(), [&](std::size_t i) { hits[i]++; }, 4);
    bool once = true;
    for (auto& h : hits)
        once &= h.load() == 1;
    CHECK(once);
    std::vector<int> order;
    serial::for_each_index(5, [&](std::size_t i) { order.push_back(int(i)); });
    CHECK(order == std::vector<int>{0, 1, 2, 3, 4});
    CHECK(default_workers() >= 1);
}

}

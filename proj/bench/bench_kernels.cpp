// Serial reference kernels vs their OpenMP versions.

#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>
#include <initializer_list>
#include <random>
#include <vector>

#include "ac2d/kernels.hpp"
#include "ac2d/noise.hpp"
#include "ac2d/spectral.hpp"

using namespace ac2d;

namespace {

struct Modes {
    ModeTable table;
    std::vector<double> re, im, decay;
    std::vector<std::complex<double>> state;

    explicit Modes(int cutoff) : table(cutoff)
    {
        for (std::size_t i = 0; i < table.size(); ++i) {
            const double lam = mode_eigenvalue(table.m1()[i] * table.m1()[i] + table.m2()[i] * table.m2()[i]);
            re.push_back(std::sqrt(0.25 / lam));
            im.push_back(std::sqrt(0.25 / lam));
            decay.push_back(std::exp(-lam / 4096.0));
        }
        state.assign(table.size(), {});
    }

    kernels::ModeDraws draws() const { return {table.m1(), table.m2(), re, im}; }
};

template <bool Parallel>
void ou_advance(benchmark::State& st)
{
    Modes m(static_cast<int>(st.range(0)));
    std::uint32_t word = 1;
    for (auto _ : st) {
        if constexpr (Parallel)
            kernels::omp::ou_advance(m.draws(), m.decay, m.state, {1, 2}, 0, word++);
        else
            kernels::serial::ou_advance(m.draws(), m.decay, m.state, {1, 2}, 0, word++);
        benchmark::DoNotOptimize(m.state.data());
    }
    st.SetItemsProcessed(st.iterations() * static_cast<long>(m.state.size()));
}

template <bool Parallel>
void max_abs(benchmark::State& st)
{
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    std::vector<double> v(static_cast<std::size_t>(st.range(0)) * st.range(0));
    for (double& x : v)
        x = g(rng);
    for (auto _ : st) {
        const double r = Parallel ? kernels::omp::max_abs(v) : kernels::serial::max_abs(v);
        benchmark::DoNotOptimize(r);
    }
    st.SetItemsProcessed(st.iterations() * static_cast<long>(v.size()));
}

template <bool Parallel>
void for_each_index(benchmark::State& st)
{
    const std::size_t n = static_cast<std::size_t>(st.range(0));
    std::vector<double> out(n);
    const auto fn = [&](std::size_t i) {
        double s = 0.0;
        for (int k = 1; k <= 2000; ++k)
            s += std::sin(static_cast<double>(i * k));
        out[i] = s;
    };
    for (auto _ : st) {
        if constexpr (Parallel)
            kernels::omp::for_each_index(n, fn);
        else
            kernels::serial::for_each_index(n, fn);
        benchmark::DoNotOptimize(out.data());
    }
    st.SetItemsProcessed(st.iterations() * static_cast<long>(n));
}

}  // namespace

BENCHMARK(ou_advance<false>)->Arg(16)->Arg(64)->Arg(128);
BENCHMARK(ou_advance<true>)->Arg(16)->Arg(64)->Arg(128);
BENCHMARK(max_abs<false>)->Arg(128)->Arg(512);
BENCHMARK(max_abs<true>)->Arg(128)->Arg(512);
BENCHMARK(for_each_index<false>)->Arg(8)->Arg(64);
BENCHMARK(for_each_index<true>)->Arg(8)->Arg(64);

BENCHMARK_MAIN();

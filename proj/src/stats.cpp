#include "ac2d/stats.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "ac2d/kernels.hpp"
#include "ac2d/noise.hpp"
#include "ac2d/wick.hpp"

namespace ac2d {

bool StatCheck::passed() const
{
    if (!std::isfinite(estimate))
        return false;
    if (standard_error == 0.0)
        return estimate == target;
    return std::abs(estimate - target) <= tolerance_se * standard_error;
}

namespace {

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& v)
{
    const double n = static_cast<double>(v.size());
    double s = 0.0;
    for (double x : v)
        s += x;
    const double mean = s / n;
    double ss = 0.0;
    for (double x : v)
        ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

struct LagSpec {
    int m1, m2;
    int k_t, k_s;  // base-grid indices
};

// Canonical half-lattice modes only.
constexpr std::array<LagSpec, 10> kLagChecks{{
    {0, 0, 0, 0},
    {0, 0, 0, 32},
    {0, 0, 16, 64},
    {1, 0, 32, 32},
    {1, 0, 32, 33},
    {0, 1, 16, 18},
    {1, 1, 48, 48},
    {1, 1, 0, 1},
    {2, 1, 64, 64},
    {-1, 1, 32, 33},
}};

}  // namespace

std::vector<StatCheck> run_wick_stats(const WickStatsConfig& cfg)
{
    if (cfg.samples < 2 || cfg.cutoff < 2 || cfg.base_steps < 64 || cfg.base_steps % 64 != 0)
        throw std::invalid_argument("run_wick_stats: need samples >= 2, cutoff >= 2, base_steps a multiple of 64");
    const std::size_t n = static_cast<std::size_t>(cfg.samples);
    const RenormConstant r = renorm_constant(cfg.cutoff);
    const ModeTable modes(cfg.cutoff);

    std::vector<double> w2(n), w3(n), w2sq(n), w3sq(n);
    std::vector<std::array<double, kLagChecks.size()>> lag(n);

    std::array<std::size_t, kLagChecks.size()> mode_index{};
    for (std::size_t c = 0; c < kLagChecks.size(); ++c) {
        bool found = false;
        for (std::size_t i = 0; i < modes.size(); ++i)
            if (modes.m1()[i] == kLagChecks[c].m1 && modes.m2()[i] == kLagChecks[c].m2) {
                mode_index[c] = i;
                found = true;
            }
        if (!found)
            throw std::logic_error("run_wick_stats: lag-check mode outside the cutoff");
    }
    const double lag_step = cfg.horizon / 64.0;
    const int lag_stride = cfg.base_steps / 64;

    kernels::omp::for_each_index(
        n,
        [&](std::size_t s) {
            NoiseStream stream(cfg.cutoff, cfg.base_steps, cfg.horizon,
                               {cfg.seed, static_cast<std::uint32_t>(s)}, false);
            // Exact pointwise Wick powers: keep every mode of the products.
            const auto [p2, p3] = wick_powers_pointwise(stream.stationary_field(cfg.cutoff), r, 3 * cfg.cutoff);
            w2[s] = p2.evaluate(0.0, 0.0);
            w3[s] = p3.evaluate(0.0, 0.0);
            w2sq[s] = w2[s] * w2[s];
            w3sq[s] = w3[s] * w3[s];

            std::vector<std::vector<cplx>> at(65);
            for (int k = 0; k <= 64; ++k) {
                at[k].assign(stream.state().begin(), stream.state().end());
                if (k < 64)
                    for (int i = 0; i < lag_stride; ++i)
                        stream.advance();
            }
            for (std::size_t c = 0; c < kLagChecks.size(); ++c) {
                const cplx a = at[kLagChecks[c].k_t][mode_index[c]];
                const cplx b = at[kLagChecks[c].k_s][mode_index[c]];
                lag[s][c] = (a * std::conj(b)).real();
            }
        },
        cfg.workers);

    std::vector<StatCheck> out;
    auto add = [&](std::string name, const std::vector<double>& v, double target) {
        const MeanSe m = mean_se(v);
        out.push_back({std::move(name), m.mean, target, m.se, cfg.tolerance_se});
    };
    const double R = r.value;
    add("E[:Z^2:] = 0", w2, 0.0);
    add("E[:Z^3:] = 0", w3, 0.0);
    add("E[(:Z^2:)^2] = 2 R^2", w2sq, 2.0 * R * R);
    add("E[(:Z^3:)^2] = 6 R^3", w3sq, 6.0 * R * R * R);
    for (std::size_t c = 0; c < kLagChecks.size(); ++c) {
        const LagSpec& l = kLagChecks[c];
        const double eig = mode_eigenvalue(l.m1 * l.m1 + l.m2 * l.m2);
        const double dt = std::abs(l.k_t - l.k_s) * lag_step;
        std::vector<double> v(n);
        for (std::size_t s = 0; s < n; ++s)
            v[s] = lag[s][c];
        add("cov m=(" + std::to_string(l.m1) + "," + std::to_string(l.m2) + ") t=" +
                std::to_string(l.k_t * lag_step) + " s=" + std::to_string(l.k_s * lag_step),
            v, std::exp(-dt * eig) / (2.0 * eig));
    }
    return out;
}

}  // namespace ac2d

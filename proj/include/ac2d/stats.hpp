#pragma once

// Statistical checks of the sampled Gaussian field and its Wick powers.

#include <cstdint>
#include <string>
#include <vector>

namespace ac2d {

struct StatCheck {
    std::string name;
    double estimate = 0.0;
    double target = 0.0;
    double standard_error = 0.0;
    double tolerance_se = 5.0;

    double z_score() const { return standard_error > 0.0 ? (estimate - target) / standard_error : 0.0; }
    bool passed() const;
};

struct WickStatsConfig {
    int samples = 10000;
    int cutoff = 16;
    std::uint64_t seed = 20240601;
    /// Grid of the lag checks: base_steps steps over [0, horizon].
    int base_steps = 64;
    double horizon = 1.0;
    double tolerance_se = 5.0;
    int workers = 0;
};

/// Moments of :Z^2: and :Z^3: at a point of the stationary field of the
/// given cutoff (means 0, second moments 2 R^2 and 6 R^3) and ten lag
/// covariances E[Re c_m(t) conj c_m(s)] = exp(-|t-s| I_m) / (2 I_m).
std::vector<StatCheck> run_wick_stats(const WickStatsConfig& cfg);

}  // namespace ac2d

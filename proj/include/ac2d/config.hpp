#pragma once

// JSON run configuration. Every section and key is optional; unknown keys
// are rejected. Scalars can be overridden with "section.key=value" strings
// whose value is parsed as JSON (falling back to a plain string).

#include <cstdint>
#include <string>
#include <vector>

#include "ac2d/experiment.hpp"
#include "ac2d/scheme.hpp"
#include "ac2d/stats.hpp"

namespace ac2d {

struct InitialSpec {
    std::string kind = "zero";  // zero | modes | rough
    /// kind == "modes": (m1, m2, re, im) per listed mode; partners -m are implied.
    std::vector<std::array<double, 4>> modes;
    /// kind == "rough"; negative alpha_prime means alpha - 0.01.
    double alpha_prime = -1.0;
    std::uint64_t seed = 0;
};

struct SimulateConfig {
    int samples = 1;
    int dump_every = 1;
    /// Base grid of the noise; 0 means M.
    int noise_base_steps = 0;
};

struct NormConfig {
    std::string input;
    double s = -0.3;
    int oversample = 4;
};

struct Config {
    std::uint64_t seed = 1;
    int workers = 0;
    std::string output_dir = "out";
    SchemeParams scheme{};
    InitialSpec initial{};
    ExperimentConfig experiment{};
    SimulateConfig simulate{};
    NormConfig norm{};
    WickStatsConfig wick_stats{};

    std::vector<std::string> warnings;
    /// Canonical JSON of every resolved value, the basis of the config hash.
    std::string resolved_json;
};

/// Parses and validates. Throws ConfigError (named constraint; parse errors
/// report the byte offset) or IoError when the file cannot be read.
Config parse_config_file(const std::string& path, const std::vector<std::string>& overrides = {});
Config parse_config_text(const std::string& text, const std::vector<std::string>& overrides = {});

/// Worker count from AC2D_WORKERS when set, else `fallback`.
int workers_from_env(int fallback);

/// 64-bit FNV-1a, as 16 hex digits.
std::string fnv1a_hex(const std::string& data);

}  // namespace ac2d

#pragma once

// File formats. All doubles in text artifacts use %.17g, so values round-trip.
//
// Field snapshot: one JSON header line
//   {"version":1,"kind":"spectral"|"physical","cutoff_or_grid":n,"time":t}\n
// then little-endian float64 data, row-major. Spectral snapshots store the
// full (2n+1)^2 square of modes, m1 outer and m2 inner, each from -n to n,
// as interleaved (re, im); physical snapshots store the g x g grid values.

#include <string>
#include <vector>

#include "ac2d/experiment.hpp"
#include "ac2d/spectral.hpp"

namespace ac2d {

struct Snapshot {
    std::string kind;  // spectral | physical
    double time = 0.0;
    SpectralField spectral;
    PhysicalField physical;
};

constexpr int kSnapshotVersion = 1;
constexpr const char* kToolVersion = "1.0.0";

void write_snapshot(const std::string& path, const SpectralField& f, double time);
void write_snapshot(const std::string& path, const PhysicalField& f, double time);
/// Throws IoError on unreadable or malformed files.
Snapshot read_snapshot(const std::string& path);

/// metric,N,M,sample,error
void write_results_csv(const std::string& path, const std::vector<ErrorSample>& rows);
/// metric,N,M,moment,bootstrap_se
void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows);
/// Rate fits with their CIs and the reference-proxy statement.
void write_rates_json(const std::string& path, const ExperimentConfig& cfg, const Summary& s);
/// Whitespace table: metric axis log2_resolution log2_error log2_fit.
void write_plot_data(const std::string& path, const ExperimentConfig& cfg, const Summary& s);

/// Writes `content` to `path`, creating parent directories. Throws IoError.
void write_text(const std::string& path, const std::string& content);

/// "%.17g"
std::string format_double(double v);

/// UTC time, ISO 8601.
std::string utc_timestamp();

/// Statement carried by every report: what stands in for the exact solution.
std::string reference_statement(const ExperimentConfig& cfg);

}  // namespace ac2d

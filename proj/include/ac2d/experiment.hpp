#pragma once

// Coupled-path Monte Carlo estimation of strong errors.
//
// Every sample drives one reference run at (N_ref, M_ref) and any number of
// coarse runs from a single noise stream; the coarse runs see the reference
// linear part projected to their cutoff, taken at their own grid times. The
// continuum solution is replaced by the reference run throughout.
//
// The sup over [0, T] is approximated by the max over evaluated grid times
// (k >= 1): the coarse grid of a cell, thinned to the grid of eval_M steps
// when the cell is finer than that.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ac2d/rng.hpp"
#include "ac2d/scheme.hpp"

namespace ac2d {

enum class Metric {
    X_err_neg_alpha_weighted,  // t^gamma ||X_ref - X^{N,M}||_{-alpha}
    Y_err_beta,                // ||Y_ref - Y^{N,M}||_beta
    Y_err_beta_weighted,       // t^gamma ||Y_ref - Y^{N,M}||_beta
    Z_wick_err,                // t^{(n-1)(alpha+kappa)+kappa1} ||Zbar_ref^{:n:} - (Zbar^N)^{:n:}||_{-alpha}
};

std::string to_string(Metric m);
/// Throws ConfigError for unknown names.
Metric metric_from_string(const std::string& name);

struct ExperimentConfig {
    /// N and M of the template are ignored; everything else applies to all runs.
    SchemeParams scheme{};
    std::vector<int> N_list{4, 8, 16, 32};
    std::vector<int> M_list{8, 32, 128, 512};
    int N_ref = 64;
    int M_ref = 4096;
    int samples = 200;
    double p = 2.0;
    Metric metric = Metric::X_err_neg_alpha_weighted;
    double kappa = 0.01;
    /// Negative means alpha / 2.
    double kappa1 = -1.0;
    int wick_order = 1;
    int eval_M = 128;
    int bootstrap_resamples = 1000;
    int norm_oversample = 4;

    double resolved_kappa1() const { return kappa1 < 0.0 ? scheme.alpha / 2.0 : kappa1; }

    /// Throws ConfigError on violated nesting/divisibility/ordering rules;
    /// returns the scheme's regime warnings.
    std::vector<std::string> validate() const;
};

/// One (metric, N, M) combination of a sweep. `order` is the Wick order for
/// Z_wick_err and ignored otherwise; Z cells always use M = M_ref.
struct Cell {
    Metric metric = Metric::X_err_neg_alpha_weighted;
    int N = 0;
    int M = 0;
    int order = 1;

    /// Metric name, with "_n<order>" appended for Wick errors.
    std::string label() const;
    friend bool operator==(const Cell&, const Cell&) = default;
};

struct ErrorSample {
    std::string metric;
    int N = 0;
    int M = 0;
    long sample = 0;
    double error = 0.0;
};

struct SweepResult {
    std::vector<Cell> cells;
    /// errors[c][s]: sample s of cell c.
    std::vector<std::vector<double>> errors;

    std::vector<ErrorSample> flatten() const;
};

/// Cells of a spatial sweep: the configured metric at (N, M_ref) for N in
/// N_list, followed by the drift-free companion Z_wick_err (n = 1).
std::vector<Cell> space_cells(const ExperimentConfig& cfg);
/// The configured metric at (N_ref, M) for M in M_list.
std::vector<Cell> time_cells(const ExperimentConfig& cfg);
/// Z_wick_err of the configured order at (N, M_ref) for N in N_list.
std::vector<Cell> wick_cells(const ExperimentConfig& cfg);

/// Per-sample errors of every cell. Samples run in parallel on `workers`
/// threads (0: OpenMP default); results do not depend on the worker count.
/// A scheme abort is rethrown as NumericalAbort carrying the lowest failing
/// sample index. `progress` is called from the calling thread's loop as
/// samples complete (count so far) and may be empty.
SweepResult run_sweep(const ExperimentConfig& cfg, const std::vector<Cell>& cells, int workers = 0,
                      const std::function<void(int)>& progress = {});

/// Errors of a single sample for the given cells.
std::vector<double> coupled_sample(const ExperimentConfig& cfg, const std::vector<Cell>& cells,
                                   std::uint32_t sample);

ErrorSample coupled_error(const ExperimentConfig& cfg, int N, int M, std::uint32_t sample);
double z_wick_error(const ExperimentConfig& cfg, int N, int order, std::uint32_t sample);

struct Moment {
    double value = 0.0;
    double bootstrap_se = 0.0;
};

/// (mean e^p)^{1/p}.
double mc_moment(const std::vector<double>& errors, double p);
/// Moment with the standard deviation of `resamples` bootstrap replicates
/// drawn from stream `stream` of `key`.
Moment mc_moment(const std::vector<double>& errors, double p, int resamples, PhiloxKey key, std::uint32_t stream);

struct RatePoint {
    double log2_resolution = 0.0;
    double log2_error = 0.0;
};

struct RateFit {
    std::string axis;  // "space" or "time"
    double slope = 0.0;      // positive for decaying errors
    double intercept = 0.0;  // log2 error at resolution 1
    double residual = 0.0;   // RMS of the fit residuals in log2 units
    std::vector<RatePoint> points;
    double ci_low = 0.0, ci_high = 0.0;  // bootstrap percentile interval of the slope
};

/// Least squares log2 error ~ intercept - slope * log2 resolution. Needs >= 2 points.
RateFit fit_rate(const std::vector<RatePoint>& points, const std::string& axis = "space");

struct SummaryRow {
    std::string metric;
    int N = 0;
    int M = 0;
    double moment = 0.0;
    double bootstrap_se = 0.0;
};

struct RateReport {
    std::string metric;
    RateFit fit;
    std::vector<std::string> notes;
};

struct Summary {
    std::vector<SummaryRow> rows;
    std::vector<RateReport> rates;
};

/// Moments per cell, and per metric label up to two rate fits: "space"
/// over the cells with M = M_ref and "time" over the cells with N = N_ref,
/// each when it has 2 or more distinct resolutions. Zero moments are left out
/// of fits. The CI resamples sample indices jointly across cells.
Summary summarize(const ExperimentConfig& cfg, const SweepResult& res, double ci_level = 0.95);

}  // namespace ac2d

#include "ac2d/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "ac2d/besov.hpp"
#include "ac2d/errors.hpp"
#include "ac2d/kernels.hpp"
#include "ac2d/noise.hpp"
#include "ac2d/wick.hpp"

namespace ac2d {

namespace {

constexpr std::pair<Metric, const char*> kMetricNames[] = {
    {Metric::X_err_neg_alpha_weighted, "X_err_neg_alpha_weighted"},
    {Metric::Y_err_beta, "Y_err_beta"},
    {Metric::Y_err_beta_weighted, "Y_err_beta_weighted"},
    {Metric::Z_wick_err, "Z_wick_err"},
};

}  // namespace

std::string to_string(Metric m)
{
    for (const auto& [k, name] : kMetricNames)
        if (k == m)
            return name;
    throw std::logic_error("to_string: unknown metric");
}

Metric metric_from_string(const std::string& name)
{
    for (const auto& [k, n] : kMetricNames)
        if (name == n)
            return k;
    throw ConfigError("metric in {X_err_neg_alpha_weighted, Y_err_beta, Y_err_beta_weighted, Z_wick_err}",
                      "unknown metric '" + name + "'");
}

std::string Cell::label() const
{
    if (metric == Metric::Z_wick_err)
        return to_string(metric) + "_n" + std::to_string(order);
    return to_string(metric);
}

std::vector<std::string> ExperimentConfig::validate() const
{
    SchemeParams probe = scheme;
    probe.N = N_ref;
    probe.M = M_ref;
    std::vector<std::string> warnings = probe.validate();

    if (N_ref < 1)
        throw ConfigError("N_ref >= 1", "reference cutoff must be positive");
    if (M_ref < 1)
        throw ConfigError("M_ref >= 1", "reference step count must be positive");
    if (N_list.empty() || M_list.empty())
        throw ConfigError("nonempty N_list and M_list", "N_list and M_list must be nonempty");
    if (!std::is_sorted(N_list.begin(), N_list.end()) || !std::is_sorted(M_list.begin(), M_list.end()))
        throw ConfigError("N_list and M_list sorted ascending", "N_list and M_list must be sorted ascending");
    for (int n : N_list)
        if (n < 0 || n > N_ref)
            throw ConfigError("N <= N_ref", "N = " + std::to_string(n) + " not in [0, N_ref = " +
                                                std::to_string(N_ref) + "]");
    for (int m : M_list)
        if (m < 1 || M_ref % m != 0)
            throw ConfigError("M divides M_ref", "M = " + std::to_string(m) + " does not divide M_ref = " +
                                                     std::to_string(M_ref));
    if (eval_M < 1 || M_ref % eval_M != 0)
        throw ConfigError("eval_M divides M_ref", "eval_M = " + std::to_string(eval_M) +
                                                      " does not divide M_ref = " + std::to_string(M_ref));
    if (samples < 1)
        throw ConfigError("samples >= 1", "at least one sample is required");
    if (!(p >= 1.0))
        throw ConfigError("p >= 1", "moment order must be at least 1");
    if (wick_order < 1 || wick_order > 3)
        throw ConfigError("wick_order in {1, 2, 3}", "Wick order must be 1, 2 or 3");
    if (!(kappa >= 0.0))
        throw ConfigError("kappa >= 0", "kappa must be non-negative");
    if (bootstrap_resamples < 1)
        throw ConfigError("bootstrap_resamples >= 1", "need at least one bootstrap resample");
    if (norm_oversample < 2)
        throw ConfigError("norm_oversample >= 2", "norm oversample must be at least 2");
    if (p < 2.0)
        warnings.push_back("p < 2: moment order below the range of the convergence results");
    return warnings;
}

std::vector<ErrorSample> SweepResult::flatten() const
{
    std::vector<ErrorSample> out;
    for (std::size_t c = 0; c < cells.size(); ++c)
        for (std::size_t s = 0; s < errors[c].size(); ++s)
            out.push_back({cells[c].label(), cells[c].N, cells[c].M, static_cast<long>(s), errors[c][s]});
    return out;
}

std::vector<Cell> space_cells(const ExperimentConfig& cfg)
{
    std::vector<Cell> cells;
    for (int n : cfg.N_list)
        cells.push_back({cfg.metric, n, cfg.M_ref, cfg.wick_order});
    if (cfg.metric != Metric::Z_wick_err || cfg.wick_order != 1)
        for (int n : cfg.N_list)
            cells.push_back({Metric::Z_wick_err, n, cfg.M_ref, 1});
    return cells;
}

std::vector<Cell> time_cells(const ExperimentConfig& cfg)
{
    std::vector<Cell> cells;
    for (int m : cfg.M_list)
        cells.push_back({cfg.metric, cfg.N_ref, m, cfg.wick_order});
    return cells;
}

std::vector<Cell> wick_cells(const ExperimentConfig& cfg)
{
    std::vector<Cell> cells;
    for (int n : cfg.N_list)
        cells.push_back({Metric::Z_wick_err, n, cfg.M_ref, cfg.wick_order});
    return cells;
}

namespace {

struct Run {
    int N = 0;
    int M = 0;
    int stride = 1;
    std::unique_ptr<SchemeRunner> runner;  // null: the reference run itself
};

void check_cell(const ExperimentConfig& cfg, const Cell& c)
{
    if (c.N < 0 || c.N > cfg.N_ref)
        throw ConfigError("N <= N_ref", "cell cutoff outside [0, N_ref]");
    if (c.metric == Metric::Z_wick_err) {
        if (c.order < 1 || c.order > 3)
            throw ConfigError("wick_order in {1, 2, 3}", "Wick order must be 1, 2 or 3");
        if (c.M != cfg.M_ref)
            throw ConfigError("Z_wick_err uses M = M_ref", "Wick errors are evaluated on the reference time grid");
    } else if (c.M < 1 || cfg.M_ref % c.M != 0) {
        throw ConfigError("M divides M_ref", "cell step count does not divide M_ref");
    }
}

}  // namespace

std::vector<double> coupled_sample(const ExperimentConfig& cfg, const std::vector<Cell>& cells, std::uint32_t sample)
{
    for (const Cell& c : cells)
        check_cell(cfg, c);
    const SchemeParams& tpl = cfg.scheme;
    const double alpha = tpl.alpha;
    const int eval_stride = cfg.M_ref / cfg.eval_M;
    const DyadicPartition part = tpl.partition;
    const int os = cfg.norm_oversample;

    SchemeParams ref_params = tpl;
    ref_params.N = cfg.N_ref;
    ref_params.M = cfg.M_ref;
    ref_params.seed.sample_index = sample;

    // One runner per distinct (N, M) among scheme cells; cell -> run index.
    std::vector<Run> runs;
    std::vector<int> run_of(cells.size(), -1);
    bool need_ref = false;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        if (cells[c].metric == Metric::Z_wick_err)
            continue;
        need_ref = true;
        auto it = std::find_if(runs.begin(), runs.end(),
                               [&](const Run& r) { return r.N == cells[c].N && r.M == cells[c].M; });
        if (it == runs.end()) {
            Run r;
            r.N = cells[c].N;
            r.M = cells[c].M;
            r.stride = cfg.M_ref / r.M;
            if (r.N != cfg.N_ref || r.M != cfg.M_ref) {
                SchemeParams p = ref_params;
                p.N = r.N;
                p.M = r.M;
                r.runner = std::make_unique<SchemeRunner>(p, renorm_constant(r.N));
            }
            runs.push_back(std::move(r));
            it = runs.end() - 1;
        }
        run_of[c] = static_cast<int>(it - runs.begin());
    }
    std::optional<SchemeRunner> ref;
    if (need_ref)
        ref.emplace(ref_params, renorm_constant(cfg.N_ref));

    const RenormConstant r_ref = renorm_constant(cfg.N_ref);
    std::map<int, RenormConstant> r_cell;
    for (const Cell& c : cells)
        if (c.metric == Metric::Z_wick_err && c.order >= 2 && !r_cell.count(c.N))
            r_cell.emplace(c.N, renorm_constant(c.N));

    std::vector<double> err(cells.size(), 0.0);
    NoiseStream stream(cfg.N_ref, cfg.M_ref, tpl.T, {tpl.seed.master_seed, sample}, false);

    for (int b = 0; b <= cfg.M_ref; ++b) {
        const double t = stream.time();
        const SpectralField zref = tpl.x0.evolved(t, cfg.N_ref) + stream.zero_initial_field(cfg.N_ref);

        std::vector<std::optional<SpectralField>> zcell(runs.size());
        auto zbar_of = [&](int n) { return n == cfg.N_ref ? zref : project(zref, n); };
        for (std::size_t r = 0; r < runs.size(); ++r)
            if (b % runs[r].stride == 0)
                zcell[r] = zbar_of(runs[r].N);

        if (b > 0 && b % eval_stride == 0) {
            std::optional<SpectralField> xref;
            std::map<int, std::pair<SpectralField, SpectralField>> ref_powers;
            for (std::size_t c = 0; c < cells.size(); ++c) {
                const Cell& cell = cells[c];
                double e = 0.0;
                if (cell.metric == Metric::Z_wick_err) {
                    const double w = (cell.order - 1) * (alpha + cfg.kappa) + cfg.resolved_kappa1();
                    const SpectralField zc = zbar_of(cell.N);
                    if (cell.order == 1) {
                        e = weighted_error_norm(zref, zc, -alpha, t, w, part, os);
                    } else {
                        if (ref_powers.empty())
                            ref_powers.emplace(0, wick_powers_pointwise(zref, r_ref, cfg.N_ref));
                        const auto& rp = ref_powers.at(0);
                        const auto cp = wick_powers_pointwise(zc, r_cell.at(cell.N), cfg.N_ref);
                        e = cell.order == 2 ? weighted_error_norm(rp.first, cp.first, -alpha, t, w, part, os)
                                            : weighted_error_norm(rp.second, cp.second, -alpha, t, w, part, os);
                    }
                } else {
                    const Run& run = runs[run_of[c]];
                    if (b % run.stride != 0)
                        continue;
                    const SpectralField& ycell = run.runner ? run.runner->y() : ref->y();
                    switch (cell.metric) {
                    case Metric::X_err_neg_alpha_weighted:
                        if (!xref)
                            xref = ref->y() + zref;
                        e = weighted_error_norm(*xref, ycell + *zcell[run_of[c]], -alpha, t, tpl.gamma, part, os);
                        break;
                    case Metric::Y_err_beta:
                        e = weighted_error_norm(ref->y(), ycell, tpl.beta, t, 0.0, part, os);
                        break;
                    case Metric::Y_err_beta_weighted:
                        e = weighted_error_norm(ref->y(), ycell, tpl.beta, t, tpl.gamma, part, os);
                        break;
                    default:
                        break;
                    }
                }
                if (!std::isfinite(e))
                    throw NumericalAbort("non-finite error for " + cell.label() + " at t = " + std::to_string(t),
                                         sample);
                err[c] = std::max(err[c], e);
            }
        }

        if (b == cfg.M_ref)
            break;
        try {
            if (ref)
                ref->advance(zref);
            for (std::size_t r = 0; r < runs.size(); ++r)
                if (runs[r].runner && b % runs[r].stride == 0)
                    runs[r].runner->advance(*zcell[r]);
        } catch (const NumericalAbort& e) {
            throw NumericalAbort(std::string(e.what()) + " (sample " + std::to_string(sample) + ", base step " +
                                     std::to_string(b) + ")",
                                 sample);
        }
        stream.advance();
    }
    return err;
}

SweepResult run_sweep(const ExperimentConfig& cfg, const std::vector<Cell>& cells, int workers,
                      const std::function<void(int)>& progress)
{
    cfg.validate();
    for (const Cell& c : cells)
        check_cell(cfg, c);

    const std::size_t n = static_cast<std::size_t>(cfg.samples);
    std::vector<std::vector<double>> per_sample(n);
    std::vector<std::exception_ptr> failure(n);
    std::mutex progress_mutex;
    int done = 0;

    kernels::omp::for_each_index(
        n,
        [&](std::size_t s) {
            try {
                per_sample[s] = coupled_sample(cfg, cells, static_cast<std::uint32_t>(s));
            } catch (...) {
                failure[s] = std::current_exception();
            }
            if (progress) {
                std::lock_guard lock(progress_mutex);
                progress(++done);
            }
        },
        workers);

    for (std::size_t s = 0; s < n; ++s)
        if (failure[s]) {
            try {
                std::rethrow_exception(failure[s]);
            } catch (const NumericalAbort& e) {
                throw NumericalAbort(e.what(), static_cast<long>(s));
            }
        }

    SweepResult res;
    res.cells = cells;
    res.errors.assign(cells.size(), std::vector<double>(n));
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t c = 0; c < cells.size(); ++c)
            res.errors[c][s] = per_sample[s][c];
    return res;
}

ErrorSample coupled_error(const ExperimentConfig& cfg, int N, int M, std::uint32_t sample)
{
    const Cell cell{cfg.metric == Metric::Z_wick_err ? Metric::X_err_neg_alpha_weighted : cfg.metric, N, M, 1};
    const double e = coupled_sample(cfg, {cell}, sample)[0];
    return {cell.label(), N, M, static_cast<long>(sample), e};
}

double z_wick_error(const ExperimentConfig& cfg, int N, int order, std::uint32_t sample)
{
    return coupled_sample(cfg, {{Metric::Z_wick_err, N, cfg.M_ref, order}}, sample)[0];
}

double mc_moment(const std::vector<double>& errors, double p)
{
    if (errors.empty())
        throw std::invalid_argument("mc_moment: empty error list");
    if (!(p > 0.0))
        throw std::invalid_argument("mc_moment: p must be positive");
    double acc = 0.0;
    for (double e : errors)
        acc += std::pow(e, p);
    return std::pow(acc / static_cast<double>(errors.size()), 1.0 / p);
}

namespace {

double std_dev(const std::vector<double>& v)
{
    if (v.size() < 2)
        return 0.0;
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v)
        ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

std::vector<std::size_t> draw_indices(CounterStream& rng, std::size_t n)
{
    std::vector<std::size_t> idx(n);
    for (auto& i : idx)
        i = static_cast<std::size_t>(rng.below(n));
    return idx;
}

double moment_of(const std::vector<double>& errors, const std::vector<std::size_t>& idx, double p)
{
    double acc = 0.0;
    for (std::size_t i : idx)
        acc += std::pow(errors[i], p);
    return std::pow(acc / static_cast<double>(idx.size()), 1.0 / p);
}

double quantile(std::vector<double> v, double q)
{
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

Moment mc_moment(const std::vector<double>& errors, double p, int resamples, PhiloxKey key, std::uint32_t stream)
{
    Moment m;
    m.value = mc_moment(errors, p);
    CounterStream rng(key, stream);
    std::vector<double> reps;
    reps.reserve(static_cast<std::size_t>(std::max(resamples, 0)));
    for (int r = 0; r < resamples; ++r)
        reps.push_back(moment_of(errors, draw_indices(rng, errors.size()), p));
    m.bootstrap_se = std_dev(reps);
    return m;
}

RateFit fit_rate(const std::vector<RatePoint>& points, const std::string& axis)
{
    if (points.size() < 2)
        throw std::invalid_argument("fit_rate: need at least 2 points");
    const double n = static_cast<double>(points.size());
    double mx = 0.0, my = 0.0;
    for (const auto& pt : points) {
        mx += pt.log2_resolution;
        my += pt.log2_error;
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& pt : points) {
        sxx += (pt.log2_resolution - mx) * (pt.log2_resolution - mx);
        sxy += (pt.log2_resolution - mx) * (pt.log2_error - my);
    }
    if (sxx == 0.0)
        throw std::invalid_argument("fit_rate: resolutions must not all coincide");
    RateFit fit;
    fit.axis = axis;
    const double b = sxy / sxx;
    fit.slope = -b;
    fit.intercept = my - b * mx;
    double rss = 0.0;
    for (const auto& pt : points) {
        const double r = pt.log2_error - (fit.intercept + b * pt.log2_resolution);
        rss += r * r;
    }
    fit.residual = std::sqrt(rss / n);
    fit.points = points;
    fit.ci_low = fit.ci_high = fit.slope;
    return fit;
}

Summary summarize(const ExperimentConfig& cfg, const SweepResult& res, double ci_level)
{
    Summary out;
    const std::uint64_t seed = cfg.scheme.seed.master_seed;
    for (std::size_t c = 0; c < res.cells.size(); ++c) {
        const Cell& cell = res.cells[c];
        const Moment m = mc_moment(res.errors[c], cfg.p, cfg.bootstrap_resamples, derived_key(seed, 2),
                                   static_cast<std::uint32_t>(c));
        out.rows.push_back({cell.label(), cell.N, cell.M, m.value, m.bootstrap_se});
    }

    std::vector<std::string> labels;
    for (const Cell& cell : res.cells)
        if (std::find(labels.begin(), labels.end(), cell.label()) == labels.end())
            labels.push_back(cell.label());

    std::uint32_t stream = 0;
    for (const std::string& label : labels) {
        std::vector<std::size_t> members;
        for (std::size_t c = 0; c < res.cells.size(); ++c)
            if (res.cells[c].label() == label)
                members.push_back(c);

        bool fitted = false;
        for (const bool space : {true, false}) {
            RateReport rep;
            rep.metric = label;
            std::vector<std::size_t> used;
            std::vector<int> resolutions;
            for (std::size_t c : members) {
                const Cell& cell = res.cells[c];
                if (space ? cell.M != cfg.M_ref : cell.N != cfg.N_ref)
                    continue;
                const int r = space ? cell.N : cell.M;
                if (out.rows[c].moment > 0.0 && r > 0) {
                    used.push_back(c);
                    resolutions.push_back(r);
                } else {
                    rep.notes.push_back("cell N=" + std::to_string(cell.N) + " M=" + std::to_string(cell.M) +
                                        " has zero error or resolution; excluded");
                }
            }
            std::sort(resolutions.begin(), resolutions.end());
            if (std::unique(resolutions.begin(), resolutions.end()) - resolutions.begin() < 2)
                continue;
            const std::string axis = space ? "space" : "time";
            auto points_for = [&](auto moment_of_cell) {
                std::vector<RatePoint> pts;
                for (std::size_t c : used) {
                    const int r = space ? res.cells[c].N : res.cells[c].M;
                    pts.push_back({std::log2(static_cast<double>(r)), std::log2(moment_of_cell(c))});
                }
                return pts;
            };
            rep.fit = fit_rate(points_for([&](std::size_t c) { return out.rows[c].moment; }), axis);
            if (used.size() < 3)
                rep.notes.push_back("fit over fewer than 3 points");

            CounterStream rng(derived_key(seed, 3), stream++);
            std::vector<double> slopes;
            const std::size_t n = res.errors[used[0]].size();
            for (int r = 0; r < cfg.bootstrap_resamples; ++r) {
                const auto idx = draw_indices(rng, n);
                bool ok = true;
                const auto pts = points_for([&](std::size_t c) {
                    const double v = moment_of(res.errors[c], idx, cfg.p);
                    ok &= v > 0.0;
                    return v;
                });
                if (ok)
                    slopes.push_back(fit_rate(pts, axis).slope);
            }
            if (!slopes.empty()) {
                rep.fit.ci_low = quantile(slopes, (1.0 - ci_level) / 2.0);
                rep.fit.ci_high = quantile(slopes, (1.0 + ci_level) / 2.0);
            }
            out.rates.push_back(std::move(rep));
            fitted = true;
        }
        if (!fitted) {
            RateReport rep;
            rep.metric = label;
            rep.notes.push_back("no series with 2 or more resolutions at M = M_ref or N = N_ref: no rate fit");
            out.rates.push_back(std::move(rep));
        }
    }
    return out;
}

}  // namespace ac2d

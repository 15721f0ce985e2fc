// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [criterion...]     (default: all, 1..9)
//
// Criteria 5 and 6 share one coupled sweep at the example configuration;
// its tables are written to ./acceptance_out.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ac2d/besov.hpp"
#include "ac2d/config.hpp"
#include "ac2d/errors.hpp"
#include "ac2d/experiment.hpp"
#include "ac2d/io.hpp"
#include "ac2d/noise.hpp"
#include "ac2d/scheme.hpp"
#include "ac2d/spectral.hpp"
#include "ac2d/stats.hpp"
#include "ac2d/wick.hpp"
#include "support/oracles.hpp"

using namespace ac2d;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> details;

    void check(bool ok, const std::string& what)
    {
        pass &= ok;
        details.push_back((ok ? "ok   " : "FAIL ") + what);
    }
};

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double max_diff(const SpectralField& a, const SpectralField& b)
{
    const int n = std::max(a.cutoff(), b.cutoff());
    return (project(a, n) - project(b, n)).max_abs();
}

Outcome exact_algebra()
{
    Outcome o;
    std::mt19937_64 rng(101);
    std::normal_distribution<double> g;
    const Polynomial a{0.3, -0.7, 0.4, -1.0};

    double worst_scalar = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double u = g(rng), v = 2.0 * g(rng), R = 0.5 + std::abs(g(rng)), w = u + v;
        const double c2 = w * w - R, c3 = w * w * w - 3.0 * R * w;
        worst_scalar = std::max(worst_scalar, std::abs(oracle::binomial_wick(2, u, v, R) - c2) / std::max(1.0, std::abs(c2)));
        worst_scalar = std::max(worst_scalar, std::abs(oracle::binomial_wick(3, u, v, R) - c3) / std::max(1.0, std::abs(c3)));
    }
    o.check(worst_scalar <= 1e-10, "pointwise binomial vs closed form, rel " + fmt("%.2e", worst_scalar));

    for (int n : {4, 8, 16}) {
        const RenormConstant r = renorm_constant(n);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const SpectralField y = oracle::random_field(n, rng, 1.0), z = oracle::random_field(n, rng, 0.5);
            const int big = 3 * n;
            const auto [z2, z3] = wick_powers_pointwise(z, r, big);
            const WickTriple full{0.0, project(z, big), z2, z3};
            const SpectralField binomial = project(psi(project(y, big), full, a), n);
            const SpectralField closed = psi_fused(y, z, r, a);
            worst = std::max(worst, max_diff(binomial, closed) / std::max(1.0, binomial.max_abs()));
        }
        o.check(worst <= 1e-10, "binomial drift vs closed-form drift, N=" + std::to_string(n) + ", 100 inputs, rel " +
                                    fmt("%.2e", worst));
    }

    double worst_pow = 0.0;
    for (int n : {2, 4, 6, 8})
        for (int k : {2, 3}) {
            const SpectralField f = oracle::random_field(n, rng);
            for (int out : {n, k * n}) {
                const SpectralField slow = oracle::power(f, k, out);
                worst_pow = std::max(worst_pow, max_diff(dealiased_power(f, k, out), slow) / std::max(1.0, slow.max_abs()));
            }
        }
    o.check(worst_pow <= 1e-10, "dealiased powers vs convolution, N<=8, rel " + fmt("%.2e", worst_pow));

    double worst_sg = 0.0;
    for (int n : {4, 16, 32}) {
        const SpectralField f = oracle::random_field(n, rng);
        for (double s : {0.0, 1e-3, 0.05, 0.4})
            for (double t : {1e-5, 0.02, 0.3})
                worst_sg = std::max(worst_sg, max_diff(semigroup(semigroup(f, s), t), semigroup(f, s + t)) /
                                                  std::max(1.0, f.max_abs()));
    }
    o.check(worst_sg <= 1e-12, "semigroup composition, rel " + fmt("%.2e", worst_sg));

    bool exact = true;
    for (int n : {1, 3, 8, 17, 64}) {
        const SpectralField u = oracle::random_field(n, rng);
        SpectralField sum(n);
        for (int j = -1; j <= DyadicPartition::top_block(n); ++j)
            sum += lp_block(u, j);
        exact &= sum == u;
        exact &= lp_block(u, DyadicPartition::top_block(n) + 1).is_zero();
    }
    o.check(exact, "sharp blocks sum to the field bit for bit");
    return o;
}

Outcome renormalization()
{
    Outcome o;
    const double r0 = renorm_constant(0).value;
    o.check(r0 == 0.5, "R^0 = " + fmt("%.17g", r0));
    const double r1 = renorm_constant(1).value;
    const double direct = static_cast<double>(oracle::brute_force_renorm(1));
    const double closed = 0.5 + 2.0 / (1.0 + 4.0 * std::numbers::pi * std::numbers::pi);
    o.check(std::abs(r1 - direct) <= 1e-12 * direct, "R^1 = " + fmt("%.10f", r1) + " vs direct sum " + fmt("%.10f", direct));
    o.check(std::abs(r1 - closed) <= 1e-12 * closed, "R^1 vs 1/2 + 2/(1 + 4 pi^2) = " + fmt("%.10f", closed));
    o.check(std::abs(r1 - 0.549417) <= 1e-5, "R^1 rounds to the quoted 0.549417 within 1e-5 (diff " +
                                                  fmt("%.1e", std::abs(r1 - 0.549417)) + ")");
    for (int n : {2, 16, 64}) {
        const double v = renorm_constant(n).value, d = static_cast<double>(oracle::brute_force_renorm(n));
        o.check(std::abs(v - d) <= 1e-12 * d, "R^" + std::to_string(n) + " vs direct sum");
    }
    const double diff = renorm_constant(1024).value - renorm_constant(512).value;
    const double target = std::numbers::ln2 / (4.0 * std::numbers::pi);
    o.check(std::abs(diff - target) <= 5e-3,
            "R^1024 - R^512 = " + fmt("%.6f", diff) + " vs ln2/(4 pi) = " + fmt("%.6f", target));
    return o;
}

Outcome gaussian_moments()
{
    Outcome o;
    WickStatsConfig cfg;
    for (const StatCheck& c : run_wick_stats(cfg))
        o.check(c.passed(), c.name + ": " + fmt("%.6g", c.estimate) + " target " + fmt("%.6g", c.target) + " z " +
                                fmt("%+.2f", c.z_score()));
    o.check(cfg.samples >= 10000 && cfg.cutoff == 16, std::to_string(cfg.samples) + " samples at N = 16");
    return o;
}

Outcome coupling()
{
    Outcome o;
    for (std::uint32_t s : {0u, 1u, 199u}) {
        const SeedSpec seed{20240601, s};
        const NoisePath fine = NoisePath::generate({32, 512, 512, 1.0}, seed);
        const NoisePath direct = NoisePath::generate({8, 64, 512, 1.0}, seed);
        const NoisePath a = subsample_times(restrict_modes(fine, 8), 64);
        const NoisePath b = restrict_modes(subsample_times(fine, 64), 8);
        const auto same = [&](const NoisePath& p) {
            return p.data().size() == direct.data().size() &&
                   std::memcmp(p.data().data(), direct.data().data(), direct.data().size_bytes()) == 0;
        };
        o.check(same(a) && same(b), "sample " + std::to_string(s) + ": restricted/subsampled (32, 512) == direct (8, 64)");
    }
    return o;
}

std::optional<SweepResult> sweep;
std::optional<Summary> sweep_summary;
std::string sweep_error;
Config example;

void run_combined_sweep()
{
    if (sweep || !sweep_error.empty())
        return;
    example = parse_config_file(AC2D_SOURCE_DIR "/configs/example.json");
    const ExperimentConfig& ex = example.experiment;
    std::vector<Cell> cells = space_cells(ex);
    const auto t = time_cells(ex);
    cells.insert(cells.end(), t.begin(), t.end());
    const auto start = std::chrono::steady_clock::now();
    try {
        sweep = run_sweep(ex, cells, workers_from_env(0), [&](int done) {
            if (done % 10 == 0 || done == ex.samples) {
                const double sec =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
                std::cerr << "  sweep " << done << "/" << ex.samples << " samples, " << fmt("%.0f", sec) << " s\n";
            }
        });
    } catch (const NumericalAbort& e) {
        sweep_error = std::string(e.what()) + " (sample " + std::to_string(e.sample()) + ")";
        return;
    }
    sweep_summary = summarize(ex, *sweep);
    fs::create_directories("acceptance_out");
    write_results_csv("acceptance_out/results.csv", sweep->flatten());
    write_summary_csv("acceptance_out/summary.csv", sweep_summary->rows);
    write_rates_json("acceptance_out/rates.json", ex, *sweep_summary);
    write_plot_data("acceptance_out/plot_data.txt", ex, *sweep_summary);
}

const RateFit* find_fit(const std::string& label, const std::string& axis)
{
    for (const auto& r : sweep_summary->rates)
        if (r.metric == label && r.fit.axis == axis && !r.fit.points.empty())
            return &r.fit;
    return nullptr;
}

Outcome spatial_rate()
{
    Outcome o;
    run_combined_sweep();
    if (!sweep) {
        o.check(false, "sweep aborted: " + sweep_error);
        return o;
    }
    o.check(example.experiment.samples == 200, std::to_string(example.experiment.samples) + " coupled samples, alpha " +
                                                   fmt("%.2f", example.scheme.alpha));
    const RateFit* lin = find_fit("Z_wick_err_n1", "space");
    const RateFit* full = find_fit(to_string(example.experiment.metric), "space");
    if (!lin || !full) {
        o.check(false, "missing spatial fit");
        return o;
    }
    const auto describe = [](const char* name, const RateFit& f) {
        return std::string(name) + " order " + fmt("%.4f", f.slope) + " CI [" + fmt("%.4f", f.ci_low) + ", " +
               fmt("%.4f", f.ci_high) + "]";
    };
    o.check(lin->slope >= 0.15 && lin->slope <= 0.45, describe("drift-free", *lin) + " in [0.15, 0.45]");
    o.check(full->slope >= 0.15 && full->slope <= 0.45, describe("nonlinear", *full) + " in [0.15, 0.45]");
    o.check(lin->ci_low <= full->ci_high && full->ci_low <= lin->ci_high, "bootstrap CIs overlap");
    return o;
}

Outcome temporal_monotonicity()
{
    Outcome o;
    run_combined_sweep();
    if (!sweep) {
        o.check(false, "sweep aborted: " + sweep_error);
        return o;
    }
    o.check(true, "no sample aborted");
    const ExperimentConfig& ex = example.experiment;
    std::vector<SummaryRow> rows;
    for (const auto& r : sweep_summary->rows)
        if (r.metric == to_string(ex.metric) && r.N == ex.N_ref && r.M < ex.M_ref)
            rows.push_back(r);
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.M < b.M; });
    o.check(rows.size() == ex.M_list.size(), std::to_string(rows.size()) + " temporal cells at N = " +
                                                 std::to_string(ex.N_ref));
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        const auto& c = rows[i];
        const auto& f = rows[i + 1];
        const bool decreasing = f.moment <= c.moment;
        const bool overlap = f.moment - 1.96 * f.bootstrap_se <= c.moment + 1.96 * c.bootstrap_se;
        o.check(decreasing || overlap, "M " + std::to_string(c.M) + " -> " + std::to_string(f.M) + ": " +
                                           fmt("%.5f", c.moment) + " -> " + fmt("%.5f", f.moment) +
                                           (decreasing ? "" : " (within CI overlap)"));
    }
    if (const RateFit* t = find_fit(to_string(ex.metric), "time"))
        o.details.push_back("info temporal fitted order " + fmt("%.4f", t->slope));
    return o;
}

Outcome scheme_semantics()
{
    Outcome o;
    {
        SchemeParams p;
        p.N = 16;
        p.M = 32;
        const TrajectoryRecord rec = run(p, NoisePath::generate({16, 32, 32, 1.0}, {11, 0}));
        o.check(rec.y[0].is_zero() && rec.y[1].is_zero() && !rec.y[2].is_zero(), "Y = 0 at t_0 and t_1, Y != 0 at t_2");
    }
    {
        SchemeParams p;
        p.N = 16;
        p.M = 32;
        p.a = {0, 0, 0, 0};
        SpectralField x0(4);
        x0.set_pair(3, 1, {0.25, 0.5});
        x0.at(0, 0) = 0.8;
        p.x0 = InitialCondition::from_field(x0);
        const NoisePath path = NoisePath::generate({16, 32, 64, 1.0}, {12, 4});
        const TrajectoryRecord rec = run(p, path);
        bool exact = true;
        for (int k = 0; k <= p.M; ++k)
            exact &= rec.x[k] == linear_part(path, k, p.x0, p.N);
        o.check(exact, "a = 0: X^{N,M} == Zbar^N at every grid time");
    }
    {
        SchemeParams p;
        p.N = 4;
        p.M = 64;
        p.a = {0.5, -0.3, 0.2, -1.0};
        p.x0 = InitialCondition::from_field(SpectralField::constant(1.7, 0));
        const NoisePath path = NoisePath::zeros({4, 64, 64, 1.0});
        const TrajectoryRecord rec = run(p, path);
        std::vector<double> z(65);
        for (int k = 0; k <= 64; ++k)
            z[k] = 1.7 * std::exp(-path.time(k));
        const auto y = oracle::scalar_zero_mode(p.a.data(), renorm_constant(4).value, z, p.tau(), p.alpha);
        double worst = 0.0;
        for (int k = 0; k <= 64; ++k)
            worst = std::max(worst, std::abs(rec.y[k].at(0, 0).real() - y[k]) / (1.0 + std::abs(y[k])));
        o.check(worst <= 1e-12, "zero mode vs scalar recursion, rel " + fmt("%.2e", worst));
    }
    return o;
}

Outcome besov_evaluator()
{
    Outcome o;
    double worst_const = 0.0;
    for (double al : {0.1, 0.3, 0.5, 0.9})
        worst_const = std::max(worst_const, std::abs(besov_norm(SpectralField::constant(1.0, 4), -al).value /
                                                          std::pow(2.0, al) - 1.0));
    o.check(worst_const <= 1e-14, "||1||_{-alpha} = 2^alpha, rel " + fmt("%.1e", worst_const));
    SpectralField c(3);
    c.set_pair(1, 0, {1.0, 0.0});
    double worst_cos = 0.0;
    for (double s : {-0.5, -0.3, 0.0, 0.31, 1.0})
        worst_cos = std::max(worst_cos, std::abs(besov_norm(c, s).value - 2.0));
    o.check(worst_cos <= 1e-13, "||2 cos(2 pi x1)||_s = 2, abs " + fmt("%.1e", worst_cos));

    std::mt19937_64 rng(808);
    int violations = 0;
    for (int i = 0; i < 100; ++i) {
        const SpectralField u = oracle::random_field(1 + i % 24, rng, 0.5 * (i % 4));
        const double s1 = -0.45 + 0.01 * (i % 11), s2 = s1 + 0.05 + 0.1 * (i % 7);
        violations += besov_norm(u, s1).value > std::pow(2.0, s2 - s1) * besov_norm(u, s2).value * (1.0 + 1e-14);
    }
    o.check(violations == 0, "embedding inequality on 100 random fields, " + std::to_string(violations) + " violations");

    double worst = 0.0;
    bool monotone = true;
    for (int n : {4, 8, 16, 32, 64})
        for (double decay : {0.0, 1.0, 2.0})
            for (int i = 0; i < 4; ++i) {
                const SpectralField u = oracle::random_field(n, rng, decay);
                for (double s : {-0.3, 0.31}) {
                    const double g4 = besov_norm(u, s, {}, 4, false).value, g8 = besov_norm(u, s, {}, 8, false).value;
                    const double r4 = besov_norm(u, s, {}, 4).value, r8 = besov_norm(u, s, {}, 8).value;
                    // shared grid points differ between transform sizes only by rounding
                    const double slack = 1.0 + 1e-13;
                    monotone &= g4 <= g8 * slack && g4 <= r4 && g8 <= r8;
                    worst = std::max(worst, std::abs(r8 - r4) / r8);
                }
            }
    o.check(monotone, "grid sup nondecreasing 4x -> 8x up to 1e-13 rel, polished sup >= grid sup");
    o.check(worst <= 5e-3, "4x vs 8x on 120 random band-limited fields, worst rel " + fmt("%.2e", worst));
    return o;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome determinism()
{
    Outcome o;
    const fs::path root = fs::current_path() / "acceptance_determinism";
    fs::remove_all(root);
    const int samples = 8;
    const auto run_cli = [&](int workers) {
        const fs::path out = root / ("w" + std::to_string(workers));
        const std::string cmd = std::string("\"") + AC2D_CLI + "\" conv-space --config \"" AC2D_SOURCE_DIR
                                "/configs/example.json\" --set experiment.samples=" + std::to_string(samples) +
                                " --workers " + std::to_string(workers) + " --out \"" + out.string() +
                                "\" > /dev/null 2>&1";
        const int rc = std::system(cmd.c_str());
        o.check(rc == 0, "conv-space with " + std::to_string(workers) + " workers exits 0");
        return out;
    };
    const fs::path a = run_cli(8), b = run_cli(1);
    for (const char* name : {"results.csv", "summary.csv"}) {
        const std::string x = slurp(a / name), y = slurp(b / name);
        o.check(!x.empty() && x == y, std::string(name) + " byte-identical (" + std::to_string(x.size()) + " bytes)");
    }
    o.details.push_back("info " + std::to_string(samples) + " samples of the example configuration");
    return o;
}

}  // namespace

int main(int argc, char** argv)
{
    const std::map<int, std::pair<const char*, std::function<Outcome()>>> criteria{
        {1, {"exact algebra", exact_algebra}},
        {2, {"renormalization constant", renormalization}},
        {3, {"Gaussian moment suite", gaussian_moments}},
        {4, {"coupling bit-exactness", coupling}},
        {5, {"spatial rate", spatial_rate}},
        {6, {"temporal monotonicity and stability", temporal_monotonicity}},
        {7, {"scheme semantics", scheme_semantics}},
        {8, {"Besov evaluator", besov_evaluator}},
        {9, {"determinism across worker counts", determinism}},
    };
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i)
        selected.push_back(std::atoi(argv[i]));
    if (selected.empty())
        for (const auto& [k, v] : criteria)
            selected.push_back(k);

    std::vector<std::pair<int, bool>> results;
    for (int k : selected) {
        const auto it = criteria.find(k);
        if (it == criteria.end()) {
            std::cerr << "unknown criterion " << k << "\n";
            return 2;
        }
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = it->second.second();
        } catch (const std::exception& e) {
            out.check(false, std::string("exception: ") + e.what());
        }
        const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        for (const auto& d : out.details)
            std::cout << "    " << d << "\n";
        std::cout << (out.pass ? "PASS" : "FAIL") << " criterion " << k << ": " << it->second.first << " ("
                  << fmt("%.1f", sec) << " s)\n"
                  << std::flush;
        results.emplace_back(k, out.pass);
    }
    const bool all = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.second; });
    std::cout << (all ? "all criteria passed" : "some criteria FAILED") << "\n";
    return all ? 0 : 1;
}

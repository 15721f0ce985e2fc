// ac2d: command-line front end.
//
//   ac2d <command> [--config FILE] [--out DIR] [--set key=value]... [--workers N]
//
// Commands: validate, simulate, norm, conv-space, conv-time, z-wick, wick-stats.
// Exit codes: 0 ok, 2 config error, 3 numerical abort or failed check, 4 I/O error.
// Failures print a JSON error record on stderr.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ac2d/besov.hpp"
#include "ac2d/config.hpp"
#include "ac2d/errors.hpp"
#include "ac2d/experiment.hpp"
#include "ac2d/io.hpp"
#include "ac2d/noise.hpp"
#include "ac2d/scheme.hpp"
#include "ac2d/stats.hpp"

using namespace ac2d;
using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

struct Common {
    std::string config_path;
    std::string out;
    std::vector<std::string> sets;
    int workers = -1;
};

Config load(const Common& c)
{
    std::vector<std::string> sets = c.sets;
    if (!c.out.empty())
        sets.push_back("output_dir=\"" + c.out + "\"");
    if (c.workers >= 0)
        sets.push_back("workers=" + std::to_string(c.workers));
    Config cfg = c.config_path.empty() ? parse_config_text("", sets) : parse_config_file(c.config_path, sets);
    if (c.workers >= 0)
        cfg.workers = c.workers;
    for (const auto& w : cfg.warnings)
        std::cerr << "warning: " << w << "\n";
    return cfg;
}

std::string out_path(const Config& cfg, const std::string& name) { return (fs::path(cfg.output_dir) / name).string(); }

void write_manifest(const Config& cfg, const std::string& command, const std::string& started,
                    const ordered_json& summary)
{
    ordered_json m;
    m["tool"] = "ac2d";
    m["version"] = kToolVersion;
    m["command"] = command;
    m["config_hash"] = fnv1a_hex(cfg.resolved_json);
    m["seed"] = cfg.seed;
    m["workers"] = cfg.workers;
    m["started"] = started;
    m["finished"] = utc_timestamp();
    m["config"] = ordered_json::parse(cfg.resolved_json);
    m["summary"] = summary;
    write_text(out_path(cfg, "manifest.json"), m.dump(2) + "\n");
}

int cmd_validate(const Config& cfg)
{
    std::cout << cfg.resolved_json << "\n";
    std::cout << "config_hash " << fnv1a_hex(cfg.resolved_json) << "\n";
    return 0;
}

int cmd_simulate(const Config& cfg)
{
    const std::string started = utc_timestamp();
    SchemeParams p = cfg.scheme;
    const int base = cfg.simulate.noise_base_steps == 0 ? p.M : cfg.simulate.noise_base_steps;
    const int stride = base / p.M;
    ordered_json files = ordered_json::array();
    for (int s = 0; s < cfg.simulate.samples; ++s) {
        p.seed.sample_index = static_cast<std::uint32_t>(s);
        NoiseStream stream(p.N, base, p.T, p.seed);
        SchemeRunner runner(p, renorm_constant(p.N));
        char dir[32];
        std::snprintf(dir, sizeof dir, "sample_%04d", s);
        for (int k = 0; k <= p.M; ++k) {
            const SpectralField zbar = p.x0.evolved(stream.time(), p.N) + stream.zero_initial_field(p.N);
            if (k % cfg.simulate.dump_every == 0 || k == p.M) {
                char name[32];
                std::snprintf(name, sizeof name, "X_%06d.bin", k);
                const std::string rel = (fs::path(dir) / name).string();
                write_snapshot(out_path(cfg, rel), runner.y() + zbar, stream.time());
                files.push_back(rel);
            }
            if (k == p.M)
                break;
            try {
                runner.advance(zbar);
            } catch (const NumericalAbort& e) {
                throw NumericalAbort(std::string(e.what()) + " at step " + std::to_string(k), s);
            }
            for (int i = 0; i < stride; ++i)
                stream.advance();
        }
    }
    ordered_json summary{{"samples", cfg.simulate.samples}, {"snapshots", files}};
    write_manifest(cfg, "simulate", started, summary);
    std::cout << "wrote " << files.size() << " snapshots to " << cfg.output_dir << "\n";
    return 0;
}

int cmd_norm(const Config& cfg)
{
    if (cfg.norm.input.empty())
        throw ConfigError("norm.input is set", "norm needs an input snapshot (norm.input or --input)");
    const Snapshot snap = read_snapshot(cfg.norm.input);
    SpectralField f;
    if (snap.kind == "spectral")
        f = snap.spectral;
    else
        f = to_spectral(snap.physical, (snap.physical.grid_size - 1) / 2);
    const BesovNormResult r = besov_norm(f, cfg.norm.s, cfg.scheme.partition, cfg.norm.oversample);
    ordered_json j;
    j["input"] = cfg.norm.input;
    j["kind"] = snap.kind;
    j["time"] = snap.time;
    j["cutoff"] = f.cutoff();
    j["s"] = r.s;
    j["oversample"] = cfg.norm.oversample;
    ordered_json blocks = ordered_json::array();
    for (std::size_t i = 0; i < r.block_sup.size(); ++i)
        blocks.push_back({{"j", static_cast<int>(i) - 1}, {"sup", r.block_sup[i]}, {"weighted", r.contributions[i]}});
    j["blocks"] = blocks;
    j["norm"] = r.value;
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_sweep(const Config& cfg, const std::string& command)
{
    const std::string started = utc_timestamp();
    const ExperimentConfig& ex = cfg.experiment;
    std::vector<Cell> cells;
    if (command == "conv-space")
        cells = space_cells(ex);
    else if (command == "conv-time")
        cells = time_cells(ex);
    else
        cells = wick_cells(ex);
    std::cerr << reference_statement(ex) << "\n";
    const SweepResult res = run_sweep(ex, cells, cfg.workers, [&](int done) {
        std::cerr << "\r" << command << ": " << done << "/" << ex.samples << " samples" << std::flush;
    });
    std::cerr << "\n";
    const Summary s = summarize(ex, res);
    write_results_csv(out_path(cfg, "results.csv"), res.flatten());
    write_summary_csv(out_path(cfg, "summary.csv"), s.rows);
    write_rates_json(out_path(cfg, "rates.json"), ex, s);
    write_plot_data(out_path(cfg, "plot_data.txt"), ex, s);

    ordered_json summary;
    summary["cells"] = res.cells.size();
    summary["samples"] = ex.samples;
    ordered_json rates = ordered_json::array();
    for (const auto& r : s.rates) {
        if (r.fit.points.empty())
            continue;
        rates.push_back({{"metric", r.metric}, {"axis", r.fit.axis}, {"slope", r.fit.slope},
                         {"ci", {r.fit.ci_low, r.fit.ci_high}}});
        std::cout << r.metric << " " << r.fit.axis << " order " << format_double(r.fit.slope) << " CI ["
                  << format_double(r.fit.ci_low) << ", " << format_double(r.fit.ci_high) << "]\n";
    }
    summary["rates"] = rates;
    write_manifest(cfg, command, started, summary);
    return 0;
}

int cmd_wick_stats(const Config& cfg)
{
    const std::string started = utc_timestamp();
    const auto checks = run_wick_stats(cfg.wick_stats);
    bool all = true;
    ordered_json arr = ordered_json::array();
    for (const auto& c : checks) {
        all &= c.passed();
        std::cout << (c.passed() ? "PASS " : "FAIL ") << c.name << ": estimate " << format_double(c.estimate)
                  << " target " << format_double(c.target) << " se " << format_double(c.standard_error) << "\n";
        arr.push_back({{"name", c.name}, {"estimate", c.estimate}, {"target", c.target},
                       {"standard_error", c.standard_error}, {"passed", c.passed()}});
    }
    write_text(out_path(cfg, "wick_stats.json"), arr.dump(2) + "\n");
    write_manifest(cfg, "wick-stats", started, {{"checks", checks.size()}, {"all_passed", all}});
    if (!all)
        throw NumericalAbort("one or more Wick moment checks failed");
    return 0;
}

int report(ExitCode code, const std::string& kind, const std::string& message, const ordered_json& extra = {})
{
    ordered_json e{{"error", kind}, {"message", message}, {"exit_code", static_cast<int>(code)}};
    for (const auto& [k, v] : extra.items())
        e[k] = v;
    std::cerr << e.dump() << "\n";
    return static_cast<int>(code);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Tamed exponential Euler / spectral Galerkin solver for the renormalized Allen-Cahn equation on T^2"};
    app.require_subcommand(1, 1);
    Common common;
    std::string norm_input;
    double norm_s = 0.0;
    int dump_every = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config_path, "JSON config file");
        sub->add_option("--out", common.out, "Output directory");
        sub->add_option("--set", common.sets, "Override, e.g. --set experiment.samples=8")->take_all();
        sub->add_option("--workers", common.workers, "Worker threads (0 = default)");
    };
    auto* validate = app.add_subcommand("validate", "Print the resolved configuration");
    auto* simulate = app.add_subcommand("simulate", "Run the scheme and write X snapshots");
    auto* norm = app.add_subcommand("norm", "Besov norm of a snapshot, per block");
    auto* space = app.add_subcommand("conv-space", "Spatial convergence sweep");
    auto* time = app.add_subcommand("conv-time", "Temporal convergence sweep");
    auto* zwick = app.add_subcommand("z-wick", "Wick-power error sweep of the linear part");
    auto* stats = app.add_subcommand("wick-stats", "Statistical Wick moment checks");
    for (auto* s : {validate, simulate, norm, space, time, zwick, stats})
        add_common(s);
    simulate->add_option("--dump-every", dump_every, "Write every k-th grid time");
    norm->add_option("--input", norm_input, "Snapshot file");
    auto* s_opt = norm->add_option("--s", norm_s, "Regularity index");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e);
        app.exit(e);
        return report(ExitCode::config_error, "usage", e.what());
    }

    if (dump_every > 0)
        common.sets.push_back("simulate.dump_every=" + std::to_string(dump_every));
    if (!norm_input.empty())
        common.sets.push_back("norm.input=" + ordered_json(norm_input).dump());
    if (s_opt->count() > 0)
        common.sets.push_back("norm.s=" + format_double(norm_s));

    try {
        const Config cfg = load(common);
        if (*validate)
            return cmd_validate(cfg);
        if (*simulate)
            return cmd_simulate(cfg);
        if (*norm)
            return cmd_norm(cfg);
        if (*space)
            return cmd_sweep(cfg, "conv-space");
        if (*time)
            return cmd_sweep(cfg, "conv-time");
        if (*zwick)
            return cmd_sweep(cfg, "z-wick");
        return cmd_wick_stats(cfg);
    } catch (const ConfigError& e) {
        return report(ExitCode::config_error, "config_error", e.what(), {{"constraint", e.constraint()}});
    } catch (const NumericalAbort& e) {
        ordered_json extra;
        if (e.sample() >= 0)
            extra["sample"] = e.sample();
        return report(ExitCode::numerical_abort, "numerical_abort", e.what(), extra);
    } catch (const IoError& e) {
        return report(ExitCode::io_error, "io_error", e.what());
    } catch (const fs::filesystem_error& e) {
        return report(ExitCode::io_error, "io_error", e.what());
    } catch (const CapacityError& e) {
        return report(ExitCode::config_error, "capacity_error", e.what());
    } catch (const std::exception& e) {
        return report(ExitCode::config_error, "invalid_argument", e.what());
    }
}

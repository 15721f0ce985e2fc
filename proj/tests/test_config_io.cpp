#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "ac2d/config.hpp"
#include "ac2d/errors.hpp"
#include "ac2d/io.hpp"
#include "support/oracles.hpp"

using namespace ac2d;
namespace fs = std::filesystem;

namespace {

std::string constraint_of(const std::string& text, const std::vector<std::string>& sets = {})
{
    try {
        parse_config_text(text, sets);
    } catch (const ConfigError& e) {
        return e.constraint();
    }
    return "";
}

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / "ac2d_tests" / name;
    fs::create_directories(p.parent_path());
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_SUITE("config_io") {

TEST_CASE("defaults")
{
    const Config c = parse_config_text("{}");
    CHECK(c.scheme.alpha == 0.3);
    CHECK(c.scheme.beta == 0.31);
    CHECK(c.scheme.gamma == 0.65);
    CHECK(c.scheme.a == Polynomial{0, 0, 0, -1});
    CHECK(c.experiment.N_ref == 64);
    CHECK(c.experiment.M_ref == 4096);
    CHECK(c.experiment.samples == 200);
    CHECK(c.experiment.resolved_kappa1() == 0.15);
    CHECK(c.warnings.empty());
    CHECK(parse_config_text("").resolved_json == c.resolved_json);
}

TEST_CASE("constraint violations are named")
{
    CHECK(constraint_of(R"({"scheme": {"a": [0, 0, 0, 1]}})") == "a3 < 0");
    CHECK(constraint_of(R"({"experiment": {"M_list": [3]}})") == "M divides M_ref");
    CHECK(constraint_of(R"({"scheme": {"alpha": 0.3, "beta": 0.2}})") == "beta > alpha");
    CHECK(constraint_of(R"({"experiment": {"metric": "L2"}})").find("metric") != std::string::npos);
    CHECK(constraint_of(R"({"scheme": {"N": 1.5}})") == "N is an integer");
}

TEST_CASE("unknown keys are rejected at every level")
{
    CHECK(constraint_of(R"({"schem": {}})") == "known keys only");
    CHECK(constraint_of(R"({"scheme": {"alpah": 0.2}})") == "known keys only");
    CHECK(constraint_of(R"({"experiment": {"samples": 2, "extra": 1}})") == "known keys only");
}

TEST_CASE("parse errors report the byte position")
{
    try {
        parse_config_text("{\"seed\": 3,\n \"workers\": }");
        FAIL("expected a parse error");
    } catch (const ConfigError& e) {
        CHECK(e.constraint() == "well-formed JSON");
        CHECK(std::string(e.what()).find("byte 25") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config_file("/nonexistent/ac2d.json"), IoError);
}

TEST_CASE("overrides and warnings")
{
    const Config c = parse_config_text(R"({"scheme": {"N": 8}})",
                                       {"scheme.N=12", "experiment.samples=3", "scheme.partition=smooth",
                                        "experiment.metric=Y_err_beta", "scheme.alpha=0.34", "scheme.beta=0.4"});
    CHECK(c.scheme.N == 12);
    CHECK(c.experiment.samples == 3);
    CHECK(c.experiment.scheme.partition.kind == DyadicPartition::Kind::smooth);
    CHECK(c.experiment.metric == Metric::Y_err_beta);
    CHECK(c.warnings.size() >= 2);
    CHECK(constraint_of("{}", {"noequals"}) == "override is key=value");
    CHECK(constraint_of("{}", {"scheme.bogus=1"}) == "known keys only");
}

TEST_CASE("worker count from the environment")
{
    setenv("AC2D_WORKERS", "3", 1);
    CHECK(parse_config_text("{}").workers == 3);
    setenv("AC2D_WORKERS", "x", 1);
    CHECK_THROWS_AS(parse_config_text("{}"), ConfigError);
    unsetenv("AC2D_WORKERS");
    CHECK(parse_config_text(R"({"workers": 2})").workers == 2);
}

TEST_CASE("initial conditions from config")
{
    const Config m = parse_config_text(
        R"({"scheme": {"initial": {"kind": "modes", "modes": [{"m": [1, 2], "value": [0.5, -0.25]}]}}})");
    CHECK(m.scheme.x0.field().at(1, 2) == cplx(0.5, -0.25));
    CHECK(m.scheme.x0.field().at(-1, -2) == cplx(0.5, 0.25));
    const Config r = parse_config_text(R"({"scheme": {"initial": {"kind": "rough", "seed": 4}}})");
    CHECK(r.scheme.x0.is_rough());
    CHECK(r.experiment.scheme.x0.field().cutoff() == 64);
    CHECK(constraint_of(R"({"scheme": {"initial": {"kind": "smooth"}}})") == "initial.kind in {zero, modes, rough}");
}

TEST_CASE("config hash")
{
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
    CHECK(fnv1a_hex(parse_config_text("{}").resolved_json) == fnv1a_hex(parse_config_text("{}").resolved_json));
    CHECK(parse_config_text("{}", {"seed=2"}).resolved_json != parse_config_text("{}").resolved_json);
}

TEST_CASE("snapshots round-trip bit for bit")
{
    std::mt19937_64 rng(3);
    const SpectralField f = oracle::random_field(5, rng);
    const fs::path p = scratch("spec.bin");
    write_snapshot(p.string(), f, 0.125);
    const std::string raw = slurp(p);
    const auto nl = raw.find('\n');
    CHECK(raw.substr(0, nl) == R"({"version":1,"kind":"spectral","cutoff_or_grid":5,"time":0.125})");
    CHECK(raw.size() - nl - 1 == 11u * 11u * 16u);
    const Snapshot s = read_snapshot(p.string());
    CHECK(s.kind == "spectral");
    CHECK(s.time == 0.125);
    CHECK(s.spectral == f);

    const PhysicalField ph = to_physical(f, 12);
    const fs::path q = scratch("phys.bin");
    write_snapshot(q.string(), ph, 1.0);
    const Snapshot t = read_snapshot(q.string());
    CHECK(t.kind == "physical");
    CHECK(t.physical.values == ph.values);

    std::ofstream(scratch("bad.bin")) << "{\"version\":1,\"kind\":\"spectral\",\"cutoff_or_grid\":2,\"time\":0}\nxx";
    CHECK_THROWS_AS(read_snapshot(scratch("bad.bin").string()), IoError);
    CHECK_THROWS_AS(read_snapshot("/nonexistent.bin"), IoError);
}

TEST_CASE("tabular artifacts")
{
    const fs::path p = scratch("results.csv");
    write_results_csv(p.string(), {{"X_err_neg_alpha_weighted", 4, 4096, 0, 0.1}, {"Z_wick_err_n1", 8, 4096, 1, 1.0 / 3.0}});
    CHECK(slurp(p) == "metric,N,M,sample,error\nX_err_neg_alpha_weighted,4,4096,0,0.10000000000000001\n"
                      "Z_wick_err_n1,8,4096,1,0.33333333333333331\n");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
    const fs::path q = scratch("summary.csv");
    write_summary_csv(q.string(), {{"Y_err_beta", 64, 8, 0.5, 0.01}});
    CHECK(slurp(q) == "metric,N,M,moment,bootstrap_se\nY_err_beta,64,8,0.5,0.01\n");
    CHECK_THROWS_AS(write_text("/proc/forbidden/x.csv", "x"), IoError);
}

TEST_CASE("shipped example config is valid")
{
    CHECK_NOTHROW(parse_config_file(std::string(AC2D_SOURCE_DIR) + "/configs/example.json"));
}

}

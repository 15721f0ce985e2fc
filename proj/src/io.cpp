#include "ac2d/io.hpp"

#include <bit>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ac2d/errors.hpp"

namespace ac2d {

using ordered_json = nlohmann::ordered_json;

namespace {

void put_le(std::string& out, double v)
{
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    if constexpr (std::endian::native == std::endian::big)
        bits = __builtin_bswap64(bits);
    char buf[8];
    std::memcpy(buf, &bits, 8);
    out.append(buf, 8);
}

double get_le(const char* p)
{
    std::uint64_t bits;
    std::memcpy(&bits, p, 8);
    if constexpr (std::endian::native == std::endian::big)
        bits = __builtin_bswap64(bits);
    return std::bit_cast<double>(bits);
}

std::string header(const char* kind, int n, double time)
{
    ordered_json h;
    h["version"] = kSnapshotVersion;
    h["kind"] = kind;
    h["cutoff_or_grid"] = n;
    h["time"] = time;
    return h.dump() + "\n";
}

void write_binary(const std::string& path, const std::string& data)
{
    const std::filesystem::path p(path);
    std::error_code ec;
    if (p.has_parent_path())
        std::filesystem::create_directories(p.parent_path(), ec);
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out)
        throw IoError("write to '" + path + "' failed");
}

}  // namespace

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& content) { write_binary(path, content); }

void write_snapshot(const std::string& path, const SpectralField& f, double time)
{
    std::string data = header("spectral", f.cutoff(), time);
    for (const cplx& c : f.coeffs()) {
        put_le(data, c.real());
        put_le(data, c.imag());
    }
    write_binary(path, data);
}

void write_snapshot(const std::string& path, const PhysicalField& f, double time)
{
    std::string data = header("physical", f.grid_size, time);
    for (double v : f.values)
        put_le(data, v);
    write_binary(path, data);
}

Snapshot read_snapshot(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot read snapshot '" + path + "'");
    std::string line;
    std::getline(in, line);
    ordered_json h;
    try {
        h = ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw IoError("snapshot '" + path + "': bad header: " + e.what());
    }
    std::ostringstream rest;
    rest << in.rdbuf();
    const std::string body = rest.str();

    Snapshot s;
    try {
        if (h.at("version").get<int>() != kSnapshotVersion)
            throw IoError("snapshot '" + path + "': unsupported version");
        s.kind = h.at("kind").get<std::string>();
        s.time = h.at("time").get<double>();
        const int n = h.at("cutoff_or_grid").get<int>();
        if (n < 0)
            throw IoError("snapshot '" + path + "': negative size");
        if (s.kind == "spectral") {
            s.spectral = SpectralField(n);
            auto c = s.spectral.coeffs();
            if (body.size() != c.size() * 16)
                throw IoError("snapshot '" + path + "': payload size does not match header");
            for (std::size_t i = 0; i < c.size(); ++i)
                c[i] = {get_le(body.data() + 16 * i), get_le(body.data() + 16 * i + 8)};
        } else if (s.kind == "physical") {
            s.physical = PhysicalField(n);
            if (body.size() != s.physical.values.size() * 8)
                throw IoError("snapshot '" + path + "': payload size does not match header");
            for (std::size_t i = 0; i < s.physical.values.size(); ++i)
                s.physical.values[i] = get_le(body.data() + 8 * i);
        } else {
            throw IoError("snapshot '" + path + "': unknown kind '" + s.kind + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw IoError("snapshot '" + path + "': bad header: " + e.what());
    }
    return s;
}

void write_results_csv(const std::string& path, const std::vector<ErrorSample>& rows)
{
    std::string out = "metric,N,M,sample,error\n";
    for (const auto& r : rows)
        out += r.metric + "," + std::to_string(r.N) + "," + std::to_string(r.M) + "," + std::to_string(r.sample) +
               "," + format_double(r.error) + "\n";
    write_text(path, out);
}

void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows)
{
    std::string out = "metric,N,M,moment,bootstrap_se\n";
    for (const auto& r : rows)
        out += r.metric + "," + std::to_string(r.N) + "," + std::to_string(r.M) + "," + format_double(r.moment) +
               "," + format_double(r.bootstrap_se) + "\n";
    write_text(path, out);
}

std::string reference_statement(const ExperimentConfig& cfg)
{
    return "errors are measured against a reference run at N_ref = " + std::to_string(cfg.N_ref) +
           ", M_ref = " + std::to_string(cfg.M_ref) +
           " on the same noise path, standing in for the exact solution; sup over [0, T] is the max over "
           "evaluated grid times (an under-estimate)";
}

void write_rates_json(const std::string& path, const ExperimentConfig& cfg, const Summary& s)
{
    ordered_json j;
    j["reference"] = reference_statement(cfg);
    j["p"] = cfg.p;
    j["samples"] = cfg.samples;
    ordered_json rates = ordered_json::array();
    for (const auto& r : s.rates) {
        ordered_json e;
        e["metric"] = r.metric;
        if (!r.fit.points.empty()) {
            e["axis"] = r.fit.axis;
            e["slope"] = r.fit.slope;
            e["intercept"] = r.fit.intercept;
            e["residual"] = r.fit.residual;
            e["ci"] = {r.fit.ci_low, r.fit.ci_high};
            e["ci_level"] = 0.95;
            ordered_json pts = ordered_json::array();
            for (const auto& p : r.fit.points)
                pts.push_back({p.log2_resolution, p.log2_error});
            e["points"] = pts;
        } else {
            e["slope"] = nullptr;
        }
        e["notes"] = r.notes;
        rates.push_back(e);
    }
    j["rates"] = rates;
    write_text(path, j.dump(2) + "\n");
}

void write_plot_data(const std::string& path, const ExperimentConfig& cfg, const Summary& s)
{
    std::string out = "# " + reference_statement(cfg) + "\n";
    out += "# metric axis log2_resolution log2_error log2_fit\n";
    for (const auto& r : s.rates) {
        if (r.fit.points.empty())
            continue;
        for (const auto& p : r.fit.points)
            out += r.metric + " " + r.fit.axis + " " + format_double(p.log2_resolution) + " " +
                   format_double(p.log2_error) + " " +
                   format_double(r.fit.intercept - r.fit.slope * p.log2_resolution) + "\n";
    }
    write_text(path, out);
}

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace ac2d

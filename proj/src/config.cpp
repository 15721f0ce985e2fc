#include "ac2d/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ac2d/errors.hpp"

namespace ac2d {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& allowed)
{
    if (!obj.is_object())
        throw ConfigError("'" + where + "' is an object", "'" + where + "' must be a JSON object");
    for (const auto& [k, v] : obj.items())
        if (!allowed.count(k))
            throw ConfigError("known keys only", "unknown key '" + (where.empty() ? k : where + "." + k) + "'");
}

template <class T>
void read(const json& obj, const std::string& where, const char* key, T& out)
{
    if (!obj.contains(key))
        return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string(key) + " has the right type",
                          "'" + where + "." + key + "' has the wrong type");
    }
}

void read_int(const json& obj, const std::string& where, const char* key, int& out)
{
    if (!obj.contains(key))
        return;
    const json& v = obj.at(key);
    if (!v.is_number_integer())
        throw ConfigError(std::string(key) + " is an integer", "'" + where + "." + key + "' must be an integer");
    out = v.get<int>();
}

void read_int_list(const json& obj, const std::string& where, const char* key, std::vector<int>& out)
{
    if (!obj.contains(key))
        return;
    const json& v = obj.at(key);
    if (!v.is_array())
        throw ConfigError(std::string(key) + " is a list", "'" + where + "." + key + "' must be a list");
    out.clear();
    for (const auto& e : v) {
        if (!e.is_number_integer())
            throw ConfigError(std::string(key) + " holds integers",
                              "'" + where + "." + key + "' must hold integers");
        out.push_back(e.get<int>());
    }
}

DyadicPartition parse_partition(const std::string& s)
{
    if (s == "sharp")
        return {DyadicPartition::Kind::sharp};
    if (s == "smooth")
        return {DyadicPartition::Kind::smooth};
    throw ConfigError("partition in {sharp, smooth}", "unknown partition '" + s + "'");
}

std::string partition_name(DyadicPartition p) { return p.kind == DyadicPartition::Kind::sharp ? "sharp" : "smooth"; }

void apply_override(json& root, const std::string& item)
{
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("override is key=value", "malformed override '" + item + "'");
    const std::string path = item.substr(0, eq);
    const std::string text = item.substr(eq + 1);
    json value;
    try {
        value = json::parse(text);
    } catch (const json::parse_error&) {
        value = text;
    }
    json* node = &root;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string part = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty())
            throw ConfigError("override is key=value", "malformed override key '" + path + "'");
        if (!node->is_object())
            throw ConfigError("override targets an object member", "override '" + path + "' crosses a scalar");
        if (dot == std::string::npos) {
            (*node)[part] = value;
            return;
        }
        node = &(*node)[part];
        if (node->is_null())
            *node = json::object();
        start = dot + 1;
    }
}

InitialCondition build_initial(const InitialSpec& spec, double alpha, int rough_cutoff)
{
    if (spec.kind == "zero")
        return InitialCondition::zero();
    if (spec.kind == "rough") {
        const double ap = spec.alpha_prime < 0.0 ? alpha - 0.01 : spec.alpha_prime;
        return InitialCondition::rough(ap, rough_cutoff, spec.seed);
    }
    if (spec.kind == "modes") {
        int cutoff = 0;
        for (const auto& m : spec.modes)
            cutoff = std::max(cutoff, static_cast<int>(std::ceil(std::hypot(m[0], m[1]))));
        SpectralField f(cutoff);
        for (const auto& m : spec.modes) {
            const int m1 = static_cast<int>(m[0]), m2 = static_cast<int>(m[1]);
            if (m1 == 0 && m2 == 0 && m[3] != 0.0)
                throw ConfigError("mode 0 is real", "initial mode (0,0) must have zero imaginary part");
            f.set_pair(m1, m2, {m[2], m[3]});
        }
        return InitialCondition::from_field(std::move(f));
    }
    throw ConfigError("initial.kind in {zero, modes, rough}", "unknown initial kind '" + spec.kind + "'");
}

Config build(const json& root)
{
    Config cfg;
    reject_unknown(root, "", {"seed", "workers", "output_dir", "scheme", "experiment", "simulate", "norm",
                              "wick_stats"});
    if (root.contains("seed")) {
        if (!root["seed"].is_number_unsigned() && !(root["seed"].is_number_integer() && root["seed"].get<long long>() >= 0))
            throw ConfigError("seed is a non-negative integer", "'seed' must be a non-negative integer");
        cfg.seed = root["seed"].get<std::uint64_t>();
    }
    read_int(root, "", "workers", cfg.workers);
    read(root, "", "output_dir", cfg.output_dir);

    SchemeParams& sp = cfg.scheme;
    if (root.contains("scheme")) {
        const json& s = root["scheme"];
        reject_unknown(s, "scheme", {"N", "M", "T", "alpha", "beta", "gamma", "a", "partition",
                                     "taming_oversample", "initial"});
        read_int(s, "scheme", "N", sp.N);
        read_int(s, "scheme", "M", sp.M);
        read(s, "scheme", "T", sp.T);
        read(s, "scheme", "alpha", sp.alpha);
        read(s, "scheme", "beta", sp.beta);
        read(s, "scheme", "gamma", sp.gamma);
        if (s.contains("a")) {
            std::vector<double> a;
            read(s, "scheme", "a", a);
            if (a.size() != 4)
                throw ConfigError("a has 4 coefficients", "'scheme.a' must list a0, a1, a2, a3");
            std::copy(a.begin(), a.end(), sp.a.begin());
        }
        if (s.contains("partition")) {
            std::string p;
            read(s, "scheme", "partition", p);
            sp.partition = parse_partition(p);
        }
        read_int(s, "scheme", "taming_oversample", sp.taming_oversample);
        if (s.contains("initial")) {
            const json& in = s["initial"];
            reject_unknown(in, "scheme.initial", {"kind", "modes", "alpha_prime", "seed"});
            read(in, "scheme.initial", "kind", cfg.initial.kind);
            read(in, "scheme.initial", "alpha_prime", cfg.initial.alpha_prime);
            read(in, "scheme.initial", "seed", cfg.initial.seed);
            if (in.contains("modes")) {
                for (const auto& m : in["modes"]) {
                    reject_unknown(m, "scheme.initial.modes[]", {"m", "value"});
                    std::vector<int> idx;
                    std::vector<double> val;
                    read(m, "scheme.initial.modes[]", "m", idx);
                    read(m, "scheme.initial.modes[]", "value", val);
                    if (idx.size() != 2 || val.size() != 2)
                        throw ConfigError("mode entries are {m: [m1, m2], value: [re, im]}",
                                          "malformed entry in 'scheme.initial.modes'");
                    cfg.initial.modes.push_back({double(idx[0]), double(idx[1]), val[0], val[1]});
                }
            }
        }
    }
    sp.seed.master_seed = cfg.seed;
    std::vector<std::string> warnings = sp.validate();

    ExperimentConfig& ex = cfg.experiment;
    if (root.contains("experiment")) {
        const json& e = root["experiment"];
        reject_unknown(e, "experiment", {"N_list", "M_list", "N_ref", "M_ref", "samples", "p", "metric", "kappa",
                                         "kappa1", "wick_order", "eval_M", "bootstrap_resamples",
                                         "norm_oversample"});
        read_int_list(e, "experiment", "N_list", ex.N_list);
        read_int_list(e, "experiment", "M_list", ex.M_list);
        read_int(e, "experiment", "N_ref", ex.N_ref);
        read_int(e, "experiment", "M_ref", ex.M_ref);
        read_int(e, "experiment", "samples", ex.samples);
        read(e, "experiment", "p", ex.p);
        if (e.contains("metric")) {
            std::string m;
            read(e, "experiment", "metric", m);
            ex.metric = metric_from_string(m);
        }
        read(e, "experiment", "kappa", ex.kappa);
        if (e.contains("kappa1") && !e["kappa1"].is_null())
            read(e, "experiment", "kappa1", ex.kappa1);
        read_int(e, "experiment", "wick_order", ex.wick_order);
        read_int(e, "experiment", "eval_M", ex.eval_M);
        read_int(e, "experiment", "bootstrap_resamples", ex.bootstrap_resamples);
        read_int(e, "experiment", "norm_oversample", ex.norm_oversample);
    }

    if (root.contains("simulate")) {
        const json& s = root["simulate"];
        reject_unknown(s, "simulate", {"samples", "dump_every", "noise_base_steps"});
        read_int(s, "simulate", "samples", cfg.simulate.samples);
        read_int(s, "simulate", "dump_every", cfg.simulate.dump_every);
        read_int(s, "simulate", "noise_base_steps", cfg.simulate.noise_base_steps);
    }
    if (cfg.simulate.samples < 1)
        throw ConfigError("simulate.samples >= 1", "simulate needs at least one sample");
    if (cfg.simulate.dump_every < 1)
        throw ConfigError("simulate.dump_every >= 1", "dump_every must be positive");
    if (cfg.simulate.noise_base_steps < 0 ||
        (cfg.simulate.noise_base_steps > 0 && cfg.simulate.noise_base_steps % sp.M != 0))
        throw ConfigError("M divides noise_base_steps", "simulate.noise_base_steps must be a multiple of M");

    if (root.contains("norm")) {
        const json& n = root["norm"];
        reject_unknown(n, "norm", {"input", "s", "oversample"});
        read(n, "norm", "input", cfg.norm.input);
        read(n, "norm", "s", cfg.norm.s);
        read_int(n, "norm", "oversample", cfg.norm.oversample);
    }
    if (cfg.norm.oversample < 2)
        throw ConfigError("norm.oversample >= 2", "norm oversample must be at least 2");

    WickStatsConfig& ws = cfg.wick_stats;
    ws.seed = cfg.seed;
    if (root.contains("wick_stats")) {
        const json& w = root["wick_stats"];
        reject_unknown(w, "wick_stats", {"samples", "cutoff", "base_steps"});
        read_int(w, "wick_stats", "samples", ws.samples);
        read_int(w, "wick_stats", "cutoff", ws.cutoff);
        read_int(w, "wick_stats", "base_steps", ws.base_steps);
    }
    if (ws.samples < 2 || ws.cutoff < 2 || ws.base_steps < 64 || ws.base_steps % 64 != 0)
        throw ConfigError("wick_stats: samples >= 2, cutoff >= 2, base_steps a multiple of 64",
                          "invalid wick_stats section");

    if (cfg.workers < 0)
        throw ConfigError("workers >= 0", "worker count must be non-negative");
    cfg.workers = workers_from_env(cfg.workers);
    ws.workers = cfg.workers;

    // X_0: the rough draw is truncated at the largest cutoff any command uses.
    sp.x0 = build_initial(cfg.initial, sp.alpha, std::max(sp.N, ex.N_ref));
    ex.scheme = sp;
    const auto ew = ex.validate();
    for (const auto& w : ew)
        if (std::find(warnings.begin(), warnings.end(), w) == warnings.end())
            warnings.push_back(w);
    cfg.warnings = warnings;

    ordered_json r;
    r["seed"] = cfg.seed;
    r["workers"] = cfg.workers;
    r["output_dir"] = cfg.output_dir;
    r["scheme"] = {{"N", sp.N},
                   {"M", sp.M},
                   {"T", sp.T},
                   {"alpha", sp.alpha},
                   {"beta", sp.beta},
                   {"gamma", sp.gamma},
                   {"a", sp.a},
                   {"partition", partition_name(sp.partition)},
                   {"taming_oversample", sp.taming_oversample}};
    ordered_json init{{"kind", cfg.initial.kind}};
    if (cfg.initial.kind == "modes") {
        ordered_json modes = ordered_json::array();
        for (const auto& m : cfg.initial.modes)
            modes.push_back({{"m", {int(m[0]), int(m[1])}}, {"value", {m[2], m[3]}}});
        init["modes"] = modes;
    } else if (cfg.initial.kind == "rough") {
        init["alpha_prime"] = cfg.initial.alpha_prime < 0.0 ? sp.alpha - 0.01 : cfg.initial.alpha_prime;
        init["seed"] = cfg.initial.seed;
        init["cutoff"] = std::max(sp.N, ex.N_ref);
    }
    r["scheme"]["initial"] = init;
    r["experiment"] = {{"N_list", ex.N_list},
                       {"M_list", ex.M_list},
                       {"N_ref", ex.N_ref},
                       {"M_ref", ex.M_ref},
                       {"samples", ex.samples},
                       {"p", ex.p},
                       {"metric", to_string(ex.metric)},
                       {"kappa", ex.kappa},
                       {"kappa1", ex.resolved_kappa1()},
                       {"wick_order", ex.wick_order},
                       {"eval_M", ex.eval_M},
                       {"bootstrap_resamples", ex.bootstrap_resamples},
                       {"norm_oversample", ex.norm_oversample}};
    r["simulate"] = {{"samples", cfg.simulate.samples},
                     {"dump_every", cfg.simulate.dump_every},
                     {"noise_base_steps", cfg.simulate.noise_base_steps == 0 ? sp.M : cfg.simulate.noise_base_steps}};
    r["norm"] = {{"input", cfg.norm.input}, {"s", cfg.norm.s}, {"oversample", cfg.norm.oversample}};
    r["wick_stats"] = {{"samples", ws.samples}, {"cutoff", ws.cutoff}, {"base_steps", ws.base_steps}};
    cfg.resolved_json = r.dump(2);
    return cfg;
}

}  // namespace

Config parse_config_text(const std::string& text, const std::vector<std::string>& overrides)
{
    json root;
    try {
        root = text.find_first_not_of(" \t\r\n") == std::string::npos ? json::object() : json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("well-formed JSON", "parse error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    for (const auto& o : overrides)
        apply_override(root, o);
    return build(root);
}

Config parse_config_file(const std::string& path, const std::vector<std::string>& overrides)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), overrides);
}

int workers_from_env(int fallback)
{
    const char* v = std::getenv("AC2D_WORKERS");
    if (!v || !*v)
        return fallback;
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (*end != '\0' || n < 0 || n > 4096)
        throw ConfigError("AC2D_WORKERS is a non-negative integer", std::string("bad AC2D_WORKERS value '") + v + "'");
    return static_cast<int>(n);
}

std::string fnv1a_hex(const std::string& data)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace ac2d

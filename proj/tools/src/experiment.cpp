#include "experiment.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "lnv/arith.hpp"
#include "lnv/error.hpp"
#include "lnv/optimize.hpp"

namespace lnv::cli {

using nlohmann::json;

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "command", "p",     "theta", "alpha",  "c1",    "c2",     "sigma",           "height",
        "step",    "tail_tol", "delta", "fix_alpha", "grid_resolution", "path", "max_m", "samples",
        "k",       "n",     "m1",    "m2",     "M1",    "M2",     "N1",              "N2",
        "output",  "format", "threads", "seed"};
    return keys;
}

template <class T>
json optional_json(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

// A rational may be given as a JSON string or number.
std::optional<std::string> read_rational(const json& j, const std::string& key) {
    const auto& v = j.at(key);
    if (v.is_null()) return std::nullopt;
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number()) return v.dump();
    throw ConfigError(key, "expected a rational as string or number");
}

std::int64_t read_int(const json& j, const std::string& key) {
    const auto& v = j.at(key);
    if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
    return v.get<std::int64_t>();
}

double read_number(const json& j, const std::string& key) {
    const auto& v = j.at(key);
    if (!v.is_number()) throw ConfigError(key, "expected a number");
    return v.get<double>();
}

std::string read_string(const json& j, const std::string& key) {
    const auto& v = j.at(key);
    if (!v.is_string()) throw ConfigError(key, "expected a string");
    return v.get<std::string>();
}

Rational checked_rational(const std::string& key, const std::string& text) {
    try {
        return parse_rational(text);
    } catch (const Error&) {
        throw ConfigError(key, "not a rational number: '" + text + "'");
    }
}

std::vector<std::uint32_t> default_primes(const std::string& command) {
    if (command == "moments") return {1009};
    if (command == "kloosterman") return {61, 101, 199};
    if (command == "bilinear") return {199};
    if (command == "nu") return {10007};
    if (command == "identities") return {199};
    if (command == "afe-check") return {11, 101};
    return {};
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {"moments", "optimize",   "kloosterman", "bilinear",
                                                   "nu",      "identities", "afe-check"};
    return names;
}

json to_json(const ExperimentConfig& c) {
    json j;
    j["command"] = c.command;
    j["p"] = c.p;
    j["theta"] = optional_json(c.theta);
    j["alpha"] = optional_json(c.alpha);
    j["c1"] = optional_json(c.c1);
    j["c2"] = optional_json(c.c2);
    j["sigma"] = c.kernel.sigma;
    j["height"] = c.kernel.height;
    j["step"] = c.kernel.step;
    j["tail_tol"] = c.kernel.tail_tol;
    j["delta"] = c.delta;
    j["fix_alpha"] = optional_json(c.fix_alpha);
    j["grid_resolution"] = c.grid_resolution;
    j["path"] = c.path;
    j["max_m"] = c.max_m;
    j["samples"] = c.samples;
    j["k"] = c.k;
    j["n"] = c.n;
    j["m1"] = c.m1;
    j["m2"] = c.m2;
    j["M1"] = optional_json(c.M1);
    j["M2"] = optional_json(c.M2);
    j["N1"] = optional_json(c.N1);
    j["N2"] = optional_json(c.N2);
    j["output"] = c.output;
    j["format"] = c.format;
    j["threads"] = c.threads;
    j["seed"] = c.seed;
    return j;
}

ExperimentConfig from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("<root>", "configuration must be a JSON object");
    for (const auto& [key, value] : j.items())
        if (!known_keys().count(key)) throw ConfigError(key, "unknown key");

    ExperimentConfig c;
    auto has = [&](const char* key) { return j.contains(key) && !j.at(key).is_null(); };
    if (has("command")) c.command = read_string(j, "command");
    if (has("p")) {
        const auto& v = j.at("p");
        if (v.is_number_integer()) {
            const auto x = v.get<std::int64_t>();
            if (x < 0) throw ConfigError("p", "must be positive");
            c.p = {static_cast<std::uint32_t>(std::min<std::int64_t>(x, UINT32_MAX))};
        } else if (v.is_array()) {
            for (const auto& e : v) {
                if (!e.is_number_integer() || e.get<std::int64_t>() < 0)
                    throw ConfigError("p", "expected positive integers");
                c.p.push_back(static_cast<std::uint32_t>(std::min<std::int64_t>(e.get<std::int64_t>(), UINT32_MAX)));
            }
        } else {
            throw ConfigError("p", "expected an integer or a list of integers");
        }
    }
    for (const char* key : {"theta", "alpha", "c1", "c2", "fix_alpha"}) {
        if (!j.contains(key)) continue;
        const auto v = read_rational(j, key);
        const std::string k = key;
        if (k == "theta") c.theta = v;
        if (k == "alpha") c.alpha = v;
        if (k == "c1") c.c1 = v;
        if (k == "c2") c.c2 = v;
        if (k == "fix_alpha") c.fix_alpha = v;
    }
    if (has("delta")) c.delta = *read_rational(j, "delta");
    if (has("sigma")) c.kernel.sigma = read_number(j, "sigma");
    if (has("height")) c.kernel.height = read_number(j, "height");
    if (has("step")) c.kernel.step = read_number(j, "step");
    if (has("tail_tol")) c.kernel.tail_tol = read_number(j, "tail_tol");
    if (has("grid_resolution")) c.grid_resolution = static_cast<int>(read_int(j, "grid_resolution"));
    if (has("path")) c.path = read_string(j, "path");
    if (has("max_m")) c.max_m = static_cast<int>(read_int(j, "max_m"));
    if (has("samples")) c.samples = static_cast<int>(read_int(j, "samples"));
    if (has("k")) c.k = read_string(j, "k");
    if (has("n")) c.n = read_string(j, "n");
    if (has("m1")) c.m1 = read_string(j, "m1");
    if (has("m2")) c.m2 = read_string(j, "m2");
    if (has("M1")) c.M1 = read_int(j, "M1");
    if (has("M2")) c.M2 = read_int(j, "M2");
    if (has("N1")) c.N1 = read_number(j, "N1");
    if (has("N2")) c.N2 = read_number(j, "N2");
    if (has("output")) c.output = read_string(j, "output");
    if (has("format")) c.format = read_string(j, "format");
    if (has("threads")) c.threads = static_cast<int>(read_int(j, "threads"));
    if (has("seed")) {
        const auto& v = j.at("seed");
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
            throw ConfigError("seed", "expected a nonnegative integer");
        c.seed = v.get<std::uint64_t>();
    }
    return c;
}

Window parse_window(const std::string& key, const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw ConfigError(key, "expected a window lo:hi, got '" + text + "'");
    Window w;
    auto parse = [&](std::string_view s, std::int64_t& out) {
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        if (ec != std::errc() || ptr != s.data() + s.size())
            throw ConfigError(key, "expected integers in lo:hi, got '" + text + "'");
    };
    const std::string_view sv(text);
    parse(sv.substr(0, colon), w.lo);
    parse(sv.substr(colon + 1), w.hi);
    if (w.hi < w.lo) throw ConfigError(key, "empty window '" + text + "'");
    return w;
}

ExperimentConfig resolve(ExperimentConfig c) {
    const auto& names = command_names();
    if (std::find(names.begin(), names.end(), c.command) == names.end())
        throw ConfigError("command", "unknown command '" + c.command + "'");

    if (c.p.empty()) c.p = default_primes(c.command);
    if (c.command != "optimize") {
        for (auto p : c.p) {
            if (p < 5) throw ConfigError("p", "need a prime >= 5, got " + std::to_string(p));
            if (!is_prime(p)) throw ConfigError("p", std::to_string(p) + " is not prime");
            if (p >= (1u << 31)) throw ConfigError("p", "prime too large");
        }
    }
    if (c.command == "moments" || c.command == "bilinear") {
        if (!c.theta) c.theta = c.command == "bilinear" ? "0.45" : "0.2";
        if (!c.alpha) c.alpha = c.command == "bilinear" ? "0.05" : "0.1";
    }
    for (auto [key, value] : {std::pair{"theta", c.theta}, {"alpha", c.alpha}, {"c1", c.c1}, {"c2", c.c2},
                              {"fix_alpha", c.fix_alpha}})
        if (value) checked_rational(key, *value);
    if (c.theta && checked_rational("theta", *c.theta) <= 0) throw ConfigError("theta", "must be > 0");
    if (c.alpha && checked_rational("alpha", *c.alpha) < 0) throw ConfigError("alpha", "must be >= 0");
    if (c.c1.has_value() != c.c2.has_value()) throw ConfigError(c.c1 ? "c2" : "c1", "give both weights or neither");
    if (c.c1 && (checked_rational("c1", *c.c1) < 0 || checked_rational("c2", *c.c2) < 0))
        throw ConfigError("c1", "weights must be nonnegative");
    if (c.c1 && checked_rational("c1", *c.c1) + checked_rational("c2", *c.c2) == 0)
        throw ConfigError("c1", "c1 + c2 must be positive");
    const Rational delta = checked_rational("delta", c.delta);
    if (delta < 0) throw ConfigError("delta", "must be >= 0");
    if (c.command == "optimize" && delta >= Rational(1) / 8) throw ConfigError("delta", "must be < 1/8 for optimize");

    try {
        c.kernel.validate();
    } catch (const Error& e) {
        const std::string what = e.what();
        for (const char* key : {"sigma", "height", "step", "tail_tol"})
            if (what.find(key) != std::string::npos) throw ConfigError(key, what);
        throw ConfigError("sigma", what);
    }
    if (c.grid_resolution < 2 || c.grid_resolution > 100000) throw ConfigError("grid_resolution", "must be in [2, 1e5]");
    if (c.path != "dft" && c.path != "naive" && c.path != "both") throw ConfigError("path", "expected dft, naive or both");
    if (c.max_m < 1 || c.max_m > 64) throw ConfigError("max_m", "must be in [1, 64]");
    if (c.samples < 1) throw ConfigError("samples", "must be >= 1");
    for (auto [key, value] : {std::pair{"k", &c.k}, {"n", &c.n}, {"m1", &c.m1}, {"m2", &c.m2}}) parse_window(key, *value);
    if (parse_window("n", c.n).lo < 1) throw ConfigError("n", "window must be positive");
    if (parse_window("m1", c.m1).lo < 1) throw ConfigError("m1", "window must be positive");
    if (parse_window("m2", c.m2).lo < 1) throw ConfigError("m2", "window must be positive");
    const bool any_spec = c.M1 || c.M2 || c.N1 || c.N2;
    const bool full_spec = c.M1 && c.M2 && c.N1 && c.N2;
    if (any_spec && !full_spec)
        throw ConfigError(!c.M1 ? "M1" : !c.M2 ? "M2" : !c.N1 ? "N1" : "N2", "give all of M1, M2, N1, N2 or none");
    if (c.format != "json" && c.format != "csv") throw ConfigError("format", "expected json or csv");
    if (c.threads < 0) throw ConfigError("threads", "must be >= 0");
    return c;
}

}  // namespace lnv::cli

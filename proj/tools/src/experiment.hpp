#pragma once

// Resolved configuration of one CLI run. Every report record embeds it, and
// it round-trips through JSON unchanged.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lnv/expsums.hpp"
#include "lnv/specfun.hpp"

namespace lnv::cli {

// A configuration problem tied to one key; the CLI exits with status 3.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& message)
        : std::runtime_error("config key '" + key + "': " + message), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

struct ExperimentConfig {
    std::string command;
    std::vector<std::uint32_t> p;
    // Rationals as written ("0.2", "1/5"); weights are derived when absent.
    std::optional<std::string> theta;
    std::optional<std::string> alpha;
    std::optional<std::string> c1;
    std::optional<std::string> c2;
    KernelConfig kernel;
    std::string delta = "0.1";
    std::optional<std::string> fix_alpha;
    int grid_resolution = 10000;
    std::string path = "dft";  // dft | naive | both
    int max_m = 12;
    int samples = 100;
    std::string k = "1:10";
    std::string n = "1:10";
    std::string m1 = "1:10";
    std::string m2 = "1:8";
    std::optional<std::int64_t> M1;
    std::optional<std::int64_t> M2;
    std::optional<double> N1;
    std::optional<double> N2;
    std::string output;  // "-" is stdout; empty means the default location
    std::string format = "json";
    int threads = 0;     // 0: available parallelism
    std::uint64_t seed = 1;
};

const std::vector<std::string>& command_names();

nlohmann::json to_json(const ExperimentConfig& cfg);
// Throws ConfigError naming the first unknown or ill-typed key.
ExperimentConfig from_json(const nlohmann::json& j);

// Fills command-specific defaults (prime list, theta, alpha) and checks every
// value; throws ConfigError naming the key.
ExperimentConfig resolve(ExperimentConfig cfg);

Window parse_window(const std::string& key, const std::string& text);

}  // namespace lnv::cli

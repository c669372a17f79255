#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "experiment.hpp"

namespace lnv::cli {

enum ExitCode : int { exit_ok = 0, exit_check_failed = 2, exit_config_error = 3 };

struct Report {
    std::string command;
    std::vector<nlohmann::json> records;
    bool all_passed = true;
};

// Runs a resolved configuration. Library errors caused by the input surface
// as ConfigError or lnv::Error; a failed numerical check only clears
// all_passed.
Report run_experiment(const ExperimentConfig& cfg);

// Full driver: parses argv, runs, writes the report. Returns the exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lnv::cli

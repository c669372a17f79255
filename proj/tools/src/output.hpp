#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "commands.hpp"

namespace lnv::cli {

// One JSON object per line.
std::string render_jsonl(const Report& report);

// Fixed column order per command; cells missing from a record stay empty.
const std::vector<std::pair<std::string, std::string>>& csv_columns(const std::string& command);
std::string render_csv(const Report& report);

// "-" is stdout; an empty path means $LNV_OUTPUT_DIR/<command>.<ext> when the
// variable is set, stdout otherwise. Returns the path written ("-" for stdout).
std::string write_report(const Report& report, const ExperimentConfig& cfg, std::ostream& out);

}  // namespace lnv::cli

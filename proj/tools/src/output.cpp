#include "output.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace lnv::cli {

using nlohmann::json;

namespace {

using Columns = std::vector<std::pair<std::string, std::string>>;

// column name -> JSON pointer into a record
const std::map<std::string, Columns>& column_table() {
    static const std::map<std::string, Columns> table = {
        {"moments",
         {{"record", "/record"},
          {"p", "/p"},
          {"path", "/path"},
          {"family_size", "/family_size"},
          {"theta", "/params/theta"},
          {"alpha", "/params/alpha"},
          {"c1", "/params/c1"},
          {"c2", "/params/c2"},
          {"long_length", "/params/long_length"},
          {"short_length", "/params/short_length"},
          {"S1_re", "/S1/re"},
          {"S1_im", "/S1/im"},
          {"S1_predicted", "/S1/predicted"},
          {"S1_ratio", "/S1/ratio"},
          {"S2", "/S2/value"},
          {"S2_predicted", "/S2/predicted"},
          {"S2_ratio", "/S2/ratio"},
          {"cross", "/S2_parts/cross/value"},
          {"cross_predicted", "/S2_parts/cross/predicted"},
          {"square_long", "/S2_parts/square_long/value"},
          {"square_long_predicted", "/S2_parts/square_long/predicted"},
          {"square_short", "/S2_parts/square_short/value"},
          {"square_short_predicted", "/S2_parts/square_short/predicted"},
          {"cs_ratio", "/cauchy_schwarz/value"},
          {"proportion_predicted", "/proportion/predicted"},
          {"T1_re", "/T1/re"},
          {"T1_im", "/T1/im"},
          {"T2", "/T2/value"},
          {"T2_predicted", "/T2/predicted"},
          {"nonvanishing_count", "/nonvanishing/count"},
          {"nonvanishing_lower_bound", "/nonvanishing/lower_bound"},
          {"dual_gap_S1", "/dual_path_gap/S1"},
          {"dual_gap_S2", "/dual_path_gap/S2"}}},
        {"optimize",
         {{"record", "/record"},
          {"delta", "/delta"},
          {"fixed_alpha", "/fixed_alpha"},
          {"theta", "/theta"},
          {"alpha", "/alpha"},
          {"c1", "/c1"},
          {"c2", "/c2"},
          {"proportion", "/proportion/value"},
          {"proportion_decimal", "/proportion/decimal"},
          {"combined", "/combined/value"},
          {"grid_resolution", "/grid/resolution"},
          {"grid_theta", "/grid/theta"},
          {"grid_alpha", "/grid/alpha"},
          {"grid_combined", "/grid/combined"},
          {"feasible", "/feasibility/feasible"}}},
        {"kloosterman",
         {{"record", "/record"},
          {"p", "/p"},
          {"weil_pairs", "/weil/pairs"},
          {"weil_max_ratio", "/weil/max_ratio/value"},
          {"symmetry_gap", "/weil/symmetry_gap/value"},
          {"four_product_tuples", "/four_product/tuples"},
          {"four_product_max_ratio", "/four_product/max_ratio/value"},
          {"four_product_bound", "/four_product/max_ratio/bound"},
          {"argmax_m1", "/four_product/argmax/0"},
          {"argmax_m2", "/four_product/argmax/1"},
          {"argmax_m3", "/four_product/argmax/2"},
          {"argmax_m4", "/four_product/argmax/3"},
          {"degenerate_weil_ratio", "/four_product/max_degenerate_weil_ratio/value"},
          {"non_increasing", "/non_increasing"}}},
        {"bilinear",
         {{"record", "/record"},
          {"p", "/p"},
          {"spec", "/spec/index"},
          {"M1", "/spec/M1"},
          {"M2", "/spec/M2"},
          {"N1", "/spec/N1"},
          {"N2", "/spec/N2"},
          {"B_re", "/B/re"},
          {"B_im", "/B/im"},
          {"B_abs", "/B/abs"},
          {"dual_re", "/dual/re"},
          {"dual_im", "/dual/im"},
          {"poisson_gap", "/poisson_gap/value"},
          {"k_zero_abs", "/k_zero/abs"},
          {"pois1", "/pois1/bound"},
          {"pois1_ratio", "/pois1/ratio"},
          {"bbound", "/bbound/bound"},
          {"bbound_ratio", "/bbound/ratio"}}},
        {"nu",
         {{"record", "/record"},
          {"p", "/p"},
          {"k_lo", "/windows/k/lo"},
          {"k_hi", "/windows/k/hi"},
          {"n_lo", "/windows/n/lo"},
          {"n_hi", "/windows/n/hi"},
          {"m1_lo", "/windows/m1/lo"},
          {"m1_hi", "/windows/m1/hi"},
          {"m2_lo", "/windows/m2/lo"},
          {"m2_hi", "/windows/m2/hi"},
          {"sum", "/sum/value"},
          {"sum_squares", "/sum_squares/value"},
          {"divisor_count", "/divisor_count"},
          {"sum_four_thirds", "/sum_four_thirds"},
          {"below_modulus", "/below_modulus"},
          {"holder_lhs", "/lhs/value"},
          {"holder_rhs", "/rhs/value"},
          {"holder_envelope", "/rhs/bound"},
          {"rhs_over_envelope", "/rhs/ratio"}}},
        {"identities",
         {{"record", "/record"},
          {"p", "/p"},
          {"family_size", "/family_size/value"},
          {"gauss_modulus_gap", "/gauss_modulus_gap/value"},
          {"gauss_conjugate_gap", "/gauss_conjugate_gap/value"},
          {"gauss_table_gap", "/gauss_table_gap/value"},
          {"orthogonality_gap", "/orthogonality_gap/value"},
          {"pairs_sampled", "/pairs_sampled"},
          {"pair_average_gap", "/pair_average_gap/value"},
          {"twisted_average_gap", "/twisted_average_gap/value"}}},
        {"afe-check",
         {{"record", "/record"},
          {"p", "/p"},
          {"characters", "/characters"},
          {"compared", "/compared"},
          {"max_relative_gap", "/max_relative_gap/value"},
          {"conjugate_gap", "/conjugate_gap/value"},
          {"min_abs_L", "/min_abs_L"},
          {"max_abs_L", "/max_abs_L"}}},
    };
    return table;
}

std::string cell(const json& v) {
    if (v.is_null()) return "";
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

bool passed(const json& rec) {
    for (const auto& c : rec.at("checks"))
        if (!c.at("passed").get<bool>()) return false;
    return true;
}

}  // namespace

std::string render_jsonl(const Report& report) {
    std::string s;
    for (const auto& r : report.records) s += r.dump() + "\n";
    return s;
}

const std::vector<std::pair<std::string, std::string>>& csv_columns(const std::string& command) {
    return column_table().at(command);
}

std::string render_csv(const Report& report) {
    const auto& cols = csv_columns(report.command);
    std::ostringstream os;
    for (const auto& [name, ptr] : cols) os << name << ",";
    os << "checks_passed,generated_at\n";
    for (const auto& r : report.records) {
        for (const auto& [name, ptr] : cols) {
            const json::json_pointer jp(ptr);
            os << (r.contains(jp) ? cell(r.at(jp)) : "") << ",";
        }
        os << (passed(r) ? "true" : "false") << "," << r.at("generated_at").get<std::string>() << "\n";
    }
    return os.str();
}

std::string write_report(const Report& report, const ExperimentConfig& cfg, std::ostream& out) {
    const std::string text = cfg.format == "csv" ? render_csv(report) : render_jsonl(report);
    std::string path = cfg.output;
    if (path.empty()) {
        const char* dir = std::getenv("LNV_OUTPUT_DIR");
        path = dir && *dir ? (std::filesystem::path(dir) / (cfg.command + (cfg.format == "csv" ? ".csv" : ".jsonl")))
                                 .string()
                           : "-";
    }
    if (path == "-") {
        out << text;
        out.flush();
        return path;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("output", "cannot write '" + path + "'");
    f << text;
    if (!f) throw ConfigError("output", "write failed for '" + path + "'");
    return path;
}

}  // namespace lnv::cli

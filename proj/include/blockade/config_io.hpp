#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "blockade/sweep.hpp"

namespace blockade {

// Flat `key = value` text, `#` starts a comment. Unknown keys and malformed values raise
// ConfigError carrying the line number and key.
SweepConfig parse_config(const std::string& text);
SweepConfig load_config(const std::string& path);
std::string write_config(const SweepConfig& cfg);

inline const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> cols = {"axis_value", "P_L1",   "P_R1",   "P_L2",
                                                  "P_R2",       "g2_L",   "g2_R",   "method",
                                                  "residual",   "g2_L_simplified", "g2_R_simplified", "status"};
    return cols;
}

void write_csv(std::ostream& os, const SweepConfig& cfg, const std::vector<CurvePoint>& rows);
std::vector<CurvePoint> read_csv(std::istream& is);
std::vector<CurvePoint> read_csv_file(const std::string& path);

nlohmann::json extrema_json(const std::vector<Extremum>& ex);
nlohmann::json compare_json(const CompareReport& r);
nlohmann::json params_json(const ModelParams& p);

}  // namespace blockade

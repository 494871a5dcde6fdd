#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "biharm/family.hpp"

namespace biharm {

inline constexpr const char* kArtifactVersion = "1.0.0";

// 17 significant digits; parses back to the same double.
std::string format_double(double x);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

// Comma separated, LF line endings, no quoting. Throws std::runtime_error on I/O failure.
void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);

// Columns t, v, v1, v2, v3, energy over [0, L] (samples + 1 rows).
CsvTable profile_table(const ProblemParams& params, const PeriodicSolution& sol, int samples);

// Columns a, beta_star, period, energy, v_max, status.
CsvTable family_table(const std::vector<FamilyRecord>& rows);
std::vector<FamilyRecord> parse_family_table(const CsvTable& table);

// Keys sorted, two-space indent, trailing newline.
void write_json(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json(const std::string& path);

std::string manifest_path(const std::string& output_path);

}  // namespace biharm

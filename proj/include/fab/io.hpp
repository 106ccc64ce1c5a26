#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "fab/integrators.hpp"

namespace fab {

inline constexpr const char* kVersion = "0.1.0";

/// Shortest decimal representation that parses back to the same double
/// (never more than 17 significant digits).
std::string format_double(double v);

/// Exact inverse of format_double; throws std::invalid_argument on malformed
/// input.
double parse_double(const std::string& s);

/// CSV body for a trajectory: header "t,x1,...,xd", one row per grid point,
/// comma-separated, LF line endings.
std::string trajectory_csv(const Trajectory& traj);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Parses a CSV produced by this library (header row mandatory).
CsvTable parse_csv(const std::string& text);

/// Re-emits a parsed table; emit(parse(s)) == s for CSVs written by this
/// library.
std::string emit_csv(const CsvTable& table);

/// Writes via a temporary file in the same directory followed by a rename.
void write_text_atomic(const std::filesystem::path& path,
                       const std::string& content);

/// Run manifest with the fixed key set {config, version, diagnostics}.
/// diagnostics.timestamp is the only non-deterministic field.
nlohmann::json make_manifest(const Trajectory& traj,
                             const nlohmann::json& config);

}  // namespace fab

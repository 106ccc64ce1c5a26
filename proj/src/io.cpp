#include "fab/io.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fab {

std::string format_double(double v) {
  std::array<char, 32> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (res.ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf.data(), res.ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw std::invalid_argument("parse_double: malformed number '" + s + "'");
  return v;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "t";
  const std::size_t dim = traj.states.empty() ? 0 : traj.states.front().size();
  for (std::size_t i = 1; i <= dim; ++i) out += ",x" + std::to_string(i);
  out += '\n';
  for (std::size_t r = 0; r < traj.times.size(); ++r) {
    out += format_double(traj.times[r]);
    for (const double x : traj.states[r]) {
      out += ',';
      out += format_double(x);
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

}  // namespace

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("parse_csv: missing header row");
  table.header = split_line(line);
  while (std::getline(in, line)) {
    if (line.empty()) throw std::invalid_argument("parse_csv: blank line in body");
    const auto fields = split_line(line);
    if (fields.size() != table.header.size())
      throw std::invalid_argument("parse_csv: ragged row");
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(parse_double(f));
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string emit_csv(const CsvTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) out += ',';
    out += table.header[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

void write_text_atomic(const std::filesystem::path& path,
                       const std::string& content) {
  const auto dir = path.parent_path();
  if (!dir.empty() && !std::filesystem::exists(dir))
    throw std::runtime_error("write_text_atomic: directory does not exist: " + dir.string());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("write_text_atomic: cannot open " + tmp);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
      std::filesystem::remove(tmp);
      throw std::runtime_error("write_text_atomic: write failed for " + tmp);
    }
  }
  std::filesystem::rename(tmp, path);
}

nlohmann::json make_manifest(const Trajectory& traj, const nlohmann::json& config) {
  const auto now = std::chrono::system_clock::now();
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(
                        now.time_since_epoch())
                        .count();
  nlohmann::json diagnostics = {
      {"rows", traj.times.size()},
      {"truncated", traj.meta.truncated},
      {"truncation_step",
       traj.meta.truncated ? nlohmann::json(traj.meta.truncation_step) : nlohmann::json()},
      {"truncation_reason", traj.meta.truncated
                                ? nlohmann::json(traj.meta.truncation_reason)
                                : nlohmann::json()},
      {"max_stability_diag", traj.meta.max_stability_diag},
      {"system_description", traj.meta.system_description},
      {"timestamp_unix", secs},  // only non-deterministic field
  };
  return nlohmann::json{{"config", config},
                        {"version", kVersion},
                        {"diagnostics", diagnostics}};
}

}  // namespace fab

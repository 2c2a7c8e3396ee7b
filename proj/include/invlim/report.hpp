#pragma once

#include "invlim/harness.hpp"

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace invlim {

enum class ReportFormat { CSV, JSON, PlotData };

ReportFormat parse_report_format(const std::string& name);

std::string records_csv_header();
std::string records_csv(const std::vector<ConvergenceRecord>& records);
std::vector<ConvergenceRecord> parse_records_csv(const std::string& text);

nlohmann::ordered_json sweep_config_to_json(const SweepConfig& cfg);
/// Summary plus the echoed configuration under "config".
nlohmann::ordered_json summary_to_json(const SweepSummary& s, const nlohmann::ordered_json& config_echo);
SweepSummary summary_from_json(const nlohmann::json& j);

/// Writes records.csv, summary.json, or the plot data files into `dir`
/// (each file atomically). Returns the paths written.
std::vector<std::filesystem::path> emit_report(const std::vector<ConvergenceRecord>& records,
                                               const SweepSummary& summary,
                                               const nlohmann::ordered_json& config_echo,
                                               ReportFormat format, const std::filesystem::path& dir);

/// Re-emits a report from a sweep directory holding records.csv and summary.json.
std::vector<std::filesystem::path> emit_report_from_dir(const std::filesystem::path& dir, ReportFormat format);

} // namespace invlim

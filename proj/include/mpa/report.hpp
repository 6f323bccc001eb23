#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mpa/metrics.hpp"
#include "mpa/scenario.hpp"

namespace mpa {

/// Column names of the results table.
inline constexpr const char* kReportHeader =
    "subgraph,reference error,lap time,max expanded vertices,computation time,max computation time";

/// Per-step log of one vehicle as CSV text.
std::string vehicle_csv(const RunLog& log, std::size_t vehicle);

/// Results table for the headline (first) vehicle.
std::string report_csv(const MetricsReport& report);

/// Trajectory overlay for one vehicle over the map and all references.
std::string vehicle_svg(const RunLog& log, const Scenario& scenario, std::size_t vehicle);

/// Writes <id>.csv and <id>.svg per vehicle plus report.csv. Returns the
/// written paths.
std::vector<std::filesystem::path> export_report(const MetricsReport& report, const RunLog& log,
                                                 const Scenario& scenario, const std::filesystem::path& out_dir);

/// Reads the per-vehicle CSVs of an exported run back into a log (the start
/// states are not stored and stay zero).
RunLog read_run_log(const std::filesystem::path& dir);

/// Fixed-width text rendering of all vehicles' metrics.
std::string format_metrics(const MetricsReport& report);

}  // namespace mpa

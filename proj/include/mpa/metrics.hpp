#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mpa/simulation.hpp"

namespace mpa {

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;  ///< population standard deviation
};

MeanStd mean_std(std::span<const double> xs);

struct VehicleMetrics {
    std::string id;
    std::string preset;
    MeanStd reference_error_mm;
    std::optional<double> lap_time_s;  ///< empty when the loop was not completed
    std::size_t max_expanded = 0;
    MeanStd computation_ms;
    double max_computation_ms = 0.0;
    int fallback_steps = 0;
};

struct MetricsReport {
    std::vector<VehicleMetrics> vehicles;  ///< log order; the first is the headline vehicle
};

/// Lap time: first step whose accumulated progress exceeds the reference
/// length, times the step duration.
MetricsReport compute_metrics(const RunLog& log);

}  // namespace mpa

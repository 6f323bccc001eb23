#include "mpa/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace mpa {

MeanStd mean_std(std::span<const double> xs) {
    if (xs.empty()) return {};
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / static_cast<double>(xs.size());
    double sq = 0.0;
    for (double x : xs) sq += (x - mean) * (x - mean);
    return {mean, std::sqrt(sq / static_cast<double>(xs.size()))};
}

MetricsReport compute_metrics(const RunLog& log) {
    MetricsReport rep;
    for (const VehicleLog& v : log.vehicles) {
        VehicleMetrics m;
        m.id = v.id;
        m.preset = v.preset;
        std::vector<double> dev_mm;
        std::vector<double> ms;
        for (const StepRecord& r : v.steps) {
            dev_mm.push_back(1000.0 * r.deviation);
            ms.push_back(r.wall_ms);
            m.max_expanded = std::max(m.max_expanded, r.expanded);
            m.max_computation_ms = std::max(m.max_computation_ms, r.wall_ms);
            if (r.fallback) ++m.fallback_steps;
            if (!m.lap_time_s && r.progress > v.reference_length) m.lap_time_s = r.step * log.step_duration;
        }
        m.reference_error_mm = mean_std(dev_mm);
        m.computation_ms = mean_std(ms);
        rep.vehicles.push_back(std::move(m));
    }
    return rep;
}

}  // namespace mpa

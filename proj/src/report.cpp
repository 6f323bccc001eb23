#include "mpa/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "mpa/errors.hpp"
#include "mpa/svg.hpp"

namespace mpa {

namespace {

constexpr const char* kLogHeader =
    "priority,vehicle,preset,step,time_s,trim_from,trim_to,objective,x,y,psi,v,delta,ref_x,ref_y,deviation_m,"
    "progress_m,ref_length_m,expanded,generated,wall_ms,status,fallback";

std::string fmt(const char* f, double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string real(double v) { return fmt("%.10g", v); }

std::string mean_std_cell(const MeanStd& m) { return fmt("%.2f", m.mean) + " (" + fmt("%.2f", m.std) + ")"; }

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string vehicle_csv(const RunLog& log, std::size_t vehicle) {
    const VehicleLog& v = log.vehicles.at(vehicle);
    std::string out = std::string(kLogHeader) + "\n";
    for (const StepRecord& r : v.steps) {
        out += std::to_string(vehicle) + "," + v.id + "," + v.preset + "," + std::to_string(r.step) + "," +
               real(r.step * log.step_duration) + "," + std::to_string(r.trim_from) + "," +
               std::to_string(r.trim_to) + "," + std::string(to_string(r.objective)) + "," + real(r.state.sx) + "," +
               real(r.state.sy) + "," + real(r.state.psi) + "," + real(r.state.v) + "," + real(r.state.delta) + "," +
               real(r.reference_point.x) + "," + real(r.reference_point.y) + "," + real(r.deviation) + "," +
               real(r.progress) + "," + real(v.reference_length) + "," + std::to_string(r.expanded) + "," +
               std::to_string(r.generated) + "," + fmt("%.4f", r.wall_ms) + "," + std::string(to_string(r.status)) +
               "," + (r.fallback ? "1" : "0") + "\n";
    }
    return out;
}

std::string report_csv(const MetricsReport& report) {
    std::string out = std::string(kReportHeader) + "\n";
    if (report.vehicles.empty()) return out;
    const VehicleMetrics& m = report.vehicles.front();
    out += m.preset + "," + mean_std_cell(m.reference_error_mm) + "," +
           (m.lap_time_s ? fmt("%.1f", *m.lap_time_s) : std::string("incomplete")) + "," +
           std::to_string(m.max_expanded) + "," + mean_std_cell(m.computation_ms) + "," +
           fmt("%.2f", m.max_computation_ms) + "\n";
    return out;
}

std::string vehicle_svg(const RunLog& log, const Scenario& scenario, std::size_t vehicle) {
    svg::Document doc(scenario.map_width, scenario.map_height, 200.0);
    doc.rect({0, 0}, {scenario.map_width, scenario.map_height}, "fill:#ffffff;stroke:#999999;stroke-width:1");
    for (std::size_t i = 0; i < scenario.vehicles.size(); ++i) {
        const bool self = i == vehicle;
        doc.polyline(scenario.vehicles[i].reference.points(), true,
                     self ? "stroke:#888888;stroke-width:2;stroke-dasharray:6,4" : "stroke:#dddddd;stroke-width:1.5");
    }
    for (std::size_t i = 0; i < log.vehicles.size(); ++i) {
        if (i == vehicle) continue;
        std::vector<Vec2> pts{{log.vehicles[i].start.sx, log.vehicles[i].start.sy}};
        for (const auto& r : log.vehicles[i].steps) pts.push_back({r.state.sx, r.state.sy});
        doc.polyline(pts, false, "stroke:" + log.vehicles[i].color + ";stroke-opacity:0.25;stroke-width:1.5");
    }
    const VehicleLog& v = log.vehicles.at(vehicle);
    std::vector<Vec2> pts{{v.start.sx, v.start.sy}};
    for (const auto& r : v.steps) pts.push_back({r.state.sx, r.state.sy});
    doc.polyline(pts, false, "stroke:" + v.color + ";stroke-width:2.5");
    doc.circle(pts.front(), log.footprint_radius, "fill:none;stroke:" + v.color + ";stroke-width:2");
    doc.circle(pts.back(), log.footprint_radius, "fill:" + v.color + ";fill-opacity:0.5");
    doc.text({0.05, scenario.map_height - 0.15}, escape(v.id + " (subgraph " + v.preset + ")"),
             "font-family:sans-serif;font-size:16px;fill:#333333");
    return doc.str();
}

std::vector<std::filesystem::path> export_report(const MetricsReport& report, const RunLog& log,
                                                 const Scenario& scenario, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("cannot create " + out_dir.string() + ": " + ec.message());
    std::vector<std::filesystem::path> written;
    for (std::size_t i = 0; i < log.vehicles.size(); ++i) {
        const auto csv = out_dir / (log.vehicles[i].id + ".csv");
        write_file(csv, vehicle_csv(log, i));
        written.push_back(csv);
    }
    const auto table = out_dir / "report.csv";
    write_file(table, report_csv(report));
    written.push_back(table);
    for (std::size_t i = 0; i < log.vehicles.size(); ++i) {
        const auto file = out_dir / (log.vehicles[i].id + ".svg");
        write_file(file, vehicle_svg(log, scenario, i));
        written.push_back(file);
    }
    return written;
}

RunLog read_run_log(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw ParseError("log directory not found: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        if (e.path().extension() == ".csv" && e.path().filename() != "report.csv") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw ParseError("no per-vehicle logs in " + dir.string());

    std::map<int, VehicleLog> by_priority;
    RunLog log;
    for (const auto& path : files) {
        std::ifstream in(path);
        std::string line;
        if (!std::getline(in, line) || line != kLogHeader) {
            throw ParseError(path.filename().string() + ": line 1: unexpected header");
        }
        VehicleLog v;
        int priority = -1;
        int lineno = 1;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            const auto c = split(line);
            const std::string where = path.filename().string() + ": line " + std::to_string(lineno);
            if (c.size() != 23) throw ParseError(where + ": expected 23 columns");
            try {
                priority = std::stoi(c[0]);
                v.id = c[1];
                v.preset = c[2];
                StepRecord r;
                r.step = std::stoi(c[3]);
                const double t = std::stod(c[4]);
                if (r.step > 0) log.step_duration = t / r.step;
                r.trim_from = std::stoi(c[5]);
                r.trim_to = std::stoi(c[6]);
                r.objective = parse_objective(c[7]);
                r.state = {std::stod(c[8]), std::stod(c[9]), std::stod(c[10]), std::stod(c[11]), std::stod(c[12])};
                r.reference_point = {std::stod(c[13]), std::stod(c[14])};
                r.deviation = std::stod(c[15]);
                r.progress = std::stod(c[16]);
                v.reference_length = std::stod(c[17]);
                r.expanded = std::stoull(c[18]);
                r.generated = std::stoull(c[19]);
                r.wall_ms = std::stod(c[20]);
                r.status = c[21] == "ok" ? PlanStatus::Ok
                           : c[21] == "infeasible" ? PlanStatus::Infeasible
                           : c[21] == "cap_exceeded" ? PlanStatus::CapExceeded
                                                     : throw ParseError(where + ": unknown status '" + c[21] + "'");
                r.fallback = c[22] == "1";
                v.steps.push_back(r);
            } catch (const ParseError&) {
                throw;
            } catch (const std::exception& e) {
                throw ParseError(where + ": " + e.what());
            }
        }
        if (priority < 0) {
            priority = static_cast<int>(by_priority.size()) + 1000;
            v.id = path.stem().string();
        }
        if (!by_priority.emplace(priority, std::move(v)).second) {
            throw ParseError(path.filename().string() + ": duplicate priority");
        }
    }
    for (auto& [p, v] : by_priority) log.vehicles.push_back(std::move(v));
    return log;
}

std::string format_metrics(const MetricsReport& report) {
    std::ostringstream os;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-8s %-8s %-20s %-10s %-12s %-20s %-10s %-9s\n", "vehicle", "subgraph",
                  "ref error [mm]", "lap [s]", "max expanded", "comp time [ms]", "max [ms]", "fallbacks");
    os << buf;
    for (const auto& m : report.vehicles) {
        const std::string lap = m.lap_time_s ? fmt("%.1f", *m.lap_time_s) : "incomplete";
        std::snprintf(buf, sizeof buf, "%-8s %-8s %-20s %-10s %-12zu %-20s %-10.2f %-9d\n", m.id.c_str(),
                      m.preset.c_str(), mean_std_cell(m.reference_error_mm).c_str(), lap.c_str(), m.max_expanded,
                      mean_std_cell(m.computation_ms).c_str(), m.max_computation_ms, m.fallback_steps);
        os << buf;
    }
    return os.str();
}

}  // namespace mpa

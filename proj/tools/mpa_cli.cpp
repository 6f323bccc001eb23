// Command-line front end: automaton building, Pareto sweeps, planning and
// closed-loop simulation.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mpa/automaton.hpp"
#include "mpa/errors.hpp"
#include "mpa/metrics.hpp"
#include "mpa/pareto.hpp"
#include "mpa/report.hpp"
#include "mpa/simulation.hpp"
#include "mpa/svg.hpp"

namespace fs = std::filesystem;
using namespace mpa;

namespace {

std::vector<Objective> parse_objectives(const std::string& text) {
    std::vector<Objective> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_objective(item));
    if (out.empty()) throw ConfigError("no objectives given");
    return out;
}

std::set<int> parse_ids(const std::string& text) {
    std::set<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.insert(std::stoi(item));
        } catch (const std::exception&) {
            throw ConfigError("trim id '" + item + "' is not an integer");
        }
    }
    return out;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

std::string g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void print_validation(const ValidationReport& rep) {
    std::size_t bad = 0;
    for (const auto& e : rep.edges) bad += !e.ok;
    std::cout << "edges checked: " << rep.edges.size() << ", failing: " << bad << "\n";
    for (const auto& [id, d] : rep.steps_to_standstill) {
        std::cout << "  " << trim_label(id) << " reaches " << trim_label(kStandstill) << " in " << d << " step(s)\n";
    }
    for (const auto& f : rep.failures) std::cout << "FAIL " << f << "\n";
}

int cmd_build(const std::string& trims_file, const std::string& conn_file, const std::string& objectives,
              const std::string& out, int intervals) {
    const auto trims = load_trims(trims_file);
    const Connectivity conn = conn_file.empty() ? default_connectivity() : load_connectivity(conn_file);
    BuildLog log;
    const VehicleParams params;
    const auto ua = build_universal_automaton(trims, parse_objectives(objectives), conn, params,
                                              default_pair_optimizer(params, intervals), &log);
    for (const auto& o : log.omitted) std::cout << "omitted " << o << "\n";
    const auto rep = validate_automaton(ua);
    print_validation(rep);
    save_automaton(ua, out);
    std::cout << "wrote " << out << ": " << ua.trims.size() << " trims, " << ua.maneuvers.size() << " maneuvers\n";
    return rep.ok() ? 0 : 1;
}

int cmd_subgraph(const std::string& in, const std::string& preset, const std::string& trims,
                 const std::string& objective, const std::string& out) {
    const auto ua = load_automaton(in);
    SubgraphConfig cfg = preset.empty() ? SubgraphConfig{} : subgraph_preset(std::string_view(preset));
    if (!trims.empty()) cfg.enabled_trims = parse_ids(trims);
    if (!objective.empty()) cfg.objective = parse_objective(objective);
    if (cfg.enabled_trims.empty()) {
        for (const auto& t : ua.trims) cfg.enabled_trims.insert(t.trim.id);
    }
    const auto sub = configure_subgraph(ua, cfg);
    const auto rep = validate_automaton(sub);
    print_validation(rep);
    save_automaton(sub, out);
    std::cout << "wrote " << out << ": " << sub.trims.size() << " trims, " << sub.maneuvers.size() << " maneuvers\n";
    return rep.ok() ? 0 : 1;
}

int cmd_validate(const std::string& in) {
    try {
        const auto a = load_automaton(in);
        print_validation(validate_automaton(a));
        return 0;
    } catch (const IntegrityError& e) {
        std::cout << e.what() << "\n";
        return 1;
    }
}

struct ParetoArgs {
    int from = 1;
    int to = 12;
    double to_v = -1;
    double to_delta = 0;
    int weights = 11;
    int intervals = 20;
    std::string out = "pareto_out";
    VehicleParams params;
};

int cmd_pareto(const ParetoArgs& a) {
    const auto table = standard_trim_table();
    auto pick = [&table](int id) {
        if (id < 1 || id > static_cast<int>(table.size())) throw ConfigError("trim id out of range: " + std::to_string(id));
        return table[id - 1];
    };
    const Trim from = pick(a.from);
    const Trim to = a.to_v >= 0 ? Trim{0, a.to_v, a.to_delta, kStepDuration} : pick(a.to);
    validate(a.params);
    const ManeuverProblem prob{from, to, kStepDuration, a.intervals, a.params};
    const auto front = sweep_pareto(prob, uniform_weights(a.weights));

    fs::create_directories(a.out);
    std::string csv = "w,J1,J2,J3\n";
    for (std::size_t i = 0; i < front.size(); ++i) {
        const auto& p = front[i];
        csv += g(p.weight) + "," + g(p.maneuver.costs.j1) + "," + g(p.maneuver.costs.j2) + "," +
               g(p.maneuver.costs.j3) + "\n";
        std::string traj = "t,sx,sy,psi,v,delta,accel,steer_rate\n";
        const double h = p.maneuver.duration / static_cast<double>(p.maneuver.controls.size());
        for (std::size_t k = 0; k < p.maneuver.states.size(); ++k) {
            const State& s = p.maneuver.states[k];
            const Input u = k < p.maneuver.controls.size() ? p.maneuver.controls[k] : p.maneuver.controls.back();
            traj += g(k * h) + "," + g(s.sx) + "," + g(s.sy) + "," + g(s.psi) + "," + g(s.v) + "," + g(s.delta) +
                    "," + g(u.accel) + "," + g(u.steer_rate) + "\n";
        }
        char name[32];
        std::snprintf(name, sizeof name, "point_%02zu.csv", i);
        write_text(fs::path(a.out) / name, traj);
    }
    write_text(fs::path(a.out) / "front.csv", csv);

    // front and trajectory panels
    static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                                    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79"};
    svg::Document fdoc(420, 340, 1.0);
    svg::Series pts{{}, "#d62728", true};
    for (const auto& p : front) pts.points.push_back({p.objectives.j1, p.objectives.j2});
    svg::Series line{pts.points, "#999999", false};
    svg::plot_panel(fdoc, {70, 50}, {320, 250}, {line, pts}, "Pareto front", "J1", "J2");
    write_text(fs::path(a.out) / "front.svg", fdoc.str());

    svg::Document tdoc(900, 640, 1.0);
    std::vector<svg::Series> pos, head, acc, steer;
    for (std::size_t i = 0; i < front.size(); ++i) {
        const auto& m = front[i].maneuver;
        const std::string c = palette[i % 11];
        svg::Series sp{{}, c}, sh{{}, c}, sa{{}, c}, ss{{}, c};
        const double h = m.duration / static_cast<double>(m.controls.size());
        for (std::size_t k = 0; k < m.states.size(); ++k) {
            sp.points.push_back({m.states[k].sx, m.states[k].sy});
            sh.points.push_back({k * h, m.states[k].psi});
        }
        for (std::size_t k = 0; k < m.controls.size(); ++k) {
            // zero-order hold drawn as steps
            sa.points.push_back({k * h, m.controls[k].accel});
            sa.points.push_back({(k + 1) * h, m.controls[k].accel});
            ss.points.push_back({k * h, m.controls[k].steer_rate});
            ss.points.push_back({(k + 1) * h, m.controls[k].steer_rate});
        }
        pos.push_back(sp);
        head.push_back(sh);
        acc.push_back(sa);
        steer.push_back(ss);
    }
    svg::plot_panel(tdoc, {70, 370}, {350, 230}, pos, "position", "sx [m]", "sy [m]");
    svg::plot_panel(tdoc, {520, 370}, {350, 230}, head, "heading", "t [s]", "psi");
    svg::plot_panel(tdoc, {70, 50}, {350, 230}, acc, "acceleration input", "t [s]", "a");
    svg::plot_panel(tdoc, {520, 50}, {350, 230}, steer, "steering rate input", "t [s]", "ddelta");
    write_text(fs::path(a.out) / "trajectories.svg", tdoc.str());

    std::cout << "w,J1,J2,J3\n" << csv.substr(csv.find('\n') + 1);
    std::cout << front.size() << " nondominated point(s) written to " << a.out << "\n";
    return 0;
}

int cmd_plan(const std::string& automaton, const std::string& scenario_file, const std::string& vehicle, int steps,
             const std::string& out) {
    const auto ua = load_automaton(automaton);
    const Scenario sc = load_scenario(scenario_file);
    std::size_t idx = sc.vehicles.size();
    for (std::size_t i = 0; i < sc.vehicles.size(); ++i) {
        if (sc.vehicles[i].id == vehicle) idx = i;
    }
    if (idx == sc.vehicles.size()) throw ConfigError("scenario has no vehicle '" + vehicle + "'");
    if (steps < 1) throw ConfigError("--steps must be at least 1");
    ClosedLoop loop(sc, ua);
    std::vector<Vec2> targets;
    for (int t = 0; t < steps; ++t) {
        targets = loop.targets()[idx];
        loop.step();
    }
    const VehicleOutcome& o = loop.last_outcomes()[idx];
    const Plan& p = o.plan;
    std::cout << "vehicle: " << vehicle << "\nstep: " << steps << "\nstatus: " << to_string(o.status)
              << "\nfallback: " << (o.fallback ? "yes" : "no") << "\ncost: " << g(p.cost)
              << "\nexpanded: " << o.stats.expanded << "\ngenerated: " << o.stats.generated
              << "\nwall_ms: " << g(o.stats.wall_ms) << "\nstart: {x: " << g(p.start_pose.dx)
              << ", y: " << g(p.start_pose.dy) << ", psi: " << g(p.start_pose.dpsi)
              << ", trim: " << trim_label(p.start_trim) << "}\nsteps:\n";
    for (std::size_t k = 0; k < p.steps.size(); ++k) {
        const auto& s = p.steps[k];
        std::cout << "  - {k: " << k + 1 << ", from: " << trim_label(s.from) << ", to: " << trim_label(s.to)
                  << ", objective: " << to_string(s.objective) << ", x: " << g(s.pose.dx) << ", y: " << g(s.pose.dy)
                  << ", psi: " << g(s.pose.dpsi) << ", target: [" << g(targets[k].x) << ", " << g(targets[k].y)
                  << "]}\n";
    }

    svg::Document doc(sc.map_width, sc.map_height, 200.0);
    doc.rect({0, 0}, {sc.map_width, sc.map_height}, "fill:#ffffff;stroke:#999999;stroke-width:1");
    for (const auto& v : sc.vehicles) doc.polyline(v.reference.points(), true, "stroke:#dddddd;stroke-width:1.5");
    const double r = ua.params.footprint_radius;
    for (std::size_t i = 0; i < sc.vehicles.size(); ++i) {
        const Plan& q = loop.last_outcomes()[i].plan;
        const std::string& c = sc.vehicles[i].color;
        std::vector<Vec2> pts{{q.start_pose.dx, q.start_pose.dy}};
        for (const auto& s : q.steps) pts.push_back({s.pose.dx, s.pose.dy});
        doc.polyline(pts, false, "stroke:" + c + ";stroke-width:2" + (i == idx ? "" : ";stroke-opacity:0.4"));
        for (const Disc& d : q.occupancy(r)) {
            doc.circle(d.center, d.radius, "fill:none;stroke:" + c + ";stroke-opacity:" + (i == idx ? "0.8" : "0.3"));
        }
    }
    for (const Vec2& t : targets) doc.circle(t, 0.015, "fill:#000000");
    write_text(out, doc.str());
    std::cout << "overlay: " << out << "\n";
    return 0;
}

int cmd_simulate(const std::string& scenario_file, const std::string& automaton, const std::string& preset_map,
                 int steps, const std::string& out) {
    const auto ua = load_automaton(automaton);
    Scenario sc = load_scenario(scenario_file);
    if (steps >= 0) sc.steps = steps;
    const RunLog log = run_scenario(sc, ua, parse_preset_map(preset_map));
    const auto report = compute_metrics(log);
    export_report(report, log, sc, out);
    const auto audit = audit_safety(log, ua);
    std::cout << format_metrics(report) << "safety audit: " << audit.violations << " violation(s) in " << audit.checks
              << " checks\noutput: " << out << "\n";
    return audit.violations == 0 ? 0 : 1;
}

int cmd_report(const std::string& dir) {
    const RunLog log = read_run_log(dir);
    const auto report = compute_metrics(log);
    std::cout << format_metrics(report) << "\n" << report_csv(report);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Motion-primitive automata for the kinematic single-track model"};
    app.require_subcommand(1);

    std::string trims = "data/standard_trims.json", conn = "data/default_connectivity.json";
    std::string objectives = "J1,J2,J3", ua_out = "automaton.json";
    int intervals = 20;
    auto* build = app.add_subcommand("build-automaton", "Optimize all maneuvers and write the universal automaton");
    build->add_option("--trims", trims, "Trim table (JSON)")->capture_default_str();
    build->add_option("--connectivity", conn, "Trim pairs to connect (JSON)")->capture_default_str();
    build->add_option("--objectives", objectives, "Comma-separated objectives")->capture_default_str();
    build->add_option("--intervals", intervals, "Control intervals per maneuver")->capture_default_str();
    build->add_option("--out", ua_out, "Output automaton file")->capture_default_str();

    std::string sub_in = "automaton.json", preset, sub_trims, sub_obj, sub_out = "subgraph.json";
    auto* sub = app.add_subcommand("subgraph", "Derive a subgraph automaton");
    sub->add_option("--automaton", sub_in, "Input automaton")->capture_default_str();
    sub->add_option("--preset", preset, "Preset A, B, C or D")->check(CLI::IsMember({"A", "B", "C", "D"}));
    sub->add_option("--trims", sub_trims, "Comma-separated trim ids (overrides the preset's)");
    sub->add_option("--objective", sub_obj, "Edge objective (overrides the preset's)");
    sub->add_option("--out", sub_out, "Output automaton file")->capture_default_str();

    std::string val_in = "automaton.json";
    auto* val = app.add_subcommand("validate", "Validate an automaton file");
    val->add_option("--automaton", val_in, "Automaton file")->capture_default_str();

    ParetoArgs pa;
    auto* par = app.add_subcommand("pareto", "Sweep the weighted-sum Pareto front of one maneuver");
    par->add_option("--from", pa.from, "Start trim id")->capture_default_str();
    par->add_option("--to", pa.to, "Target trim id")->capture_default_str();
    par->add_option("--to-v", pa.to_v, "Custom target speed (overrides --to)");
    par->add_option("--to-delta", pa.to_delta, "Custom target steering angle")->capture_default_str();
    par->add_option("--weights", pa.weights, "Number of uniform weights in [0, 1]")->capture_default_str();
    par->add_option("--intervals", pa.intervals, "Control intervals")->capture_default_str();
    par->add_option("--v-max", pa.params.v_max, "Speed bound")->capture_default_str();
    par->add_option("--delta-max", pa.params.delta_max, "Steering bound")->capture_default_str();
    par->add_option("--accel-max", pa.params.accel_max, "Acceleration bound")->capture_default_str();
    par->add_option("--steer-rate-max", pa.params.steer_rate_max, "Steering rate bound")->capture_default_str();
    par->add_option("--out", pa.out, "Output directory")->capture_default_str();

    std::string plan_ua = "automaton.json", scen = "data/three_vehicle_crossing.json", vehicle = "red";
    std::string plan_out = "plan.svg";
    int plan_steps = 1;
    auto* plan = app.add_subcommand("plan", "Plan one vehicle after a number of closed-loop steps");
    plan->add_option("--automaton", plan_ua, "Automaton file")->capture_default_str();
    plan->add_option("--scenario", scen, "Scenario file")->capture_default_str();
    plan->add_option("--vehicle", vehicle, "Vehicle id")->capture_default_str();
    plan->add_option("--steps", plan_steps, "Closed-loop steps to run; the last step's plan is shown")
        ->capture_default_str();
    plan->add_option("--out", plan_out, "SVG overlay")->capture_default_str();

    std::string sim_ua = "automaton.json", sim_scen = "data/three_vehicle_crossing.json", preset_map;
    std::string sim_out = "run";
    int sim_steps = -1;
    auto* sim = app.add_subcommand("simulate", "Closed-loop run with report export");
    sim->add_option("--scenario", sim_scen, "Scenario file")->capture_default_str();
    sim->add_option("--automaton", sim_ua, "Universal automaton file")->capture_default_str();
    sim->add_option("--preset-map", preset_map, "Per-vehicle presets, e.g. red=A,blue=C (default: scenario's)");
    sim->add_option("--steps", sim_steps, "Steps (default: scenario's)");
    sim->add_option("--out", sim_out, "Output directory")->capture_default_str();

    std::string log_dir = "run";
    auto* rep = app.add_subcommand("report", "Recompute metrics from an exported run");
    rep->add_option("--log", log_dir, "Directory written by simulate")->capture_default_str();

    CLI11_PARSE(app, argc, argv);
    try {
        if (*build) return cmd_build(trims, conn, objectives, ua_out, intervals);
        if (*sub) return cmd_subgraph(sub_in, preset, sub_trims, sub_obj, sub_out);
        if (*val) return cmd_validate(val_in);
        if (*par) return cmd_pareto(pa);
        if (*plan) return cmd_plan(plan_ua, scen, vehicle, plan_steps, plan_out);
        if (*sim) return cmd_simulate(sim_scen, sim_ua, preset_map, sim_steps, sim_out);
        if (*rep) return cmd_report(log_dir);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const IntegrityError& e) {
        std::cerr << "integrity error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

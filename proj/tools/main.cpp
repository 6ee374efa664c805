#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "brickplan/community.hpp"
#include "brickplan/connectivity.hpp"
#include "brickplan/errors.hpp"
#include "brickplan/ldraw.hpp"
#include "brickplan/part_table.hpp"
#include "brickplan/planner.hpp"
#include "brickplan/scheduler.hpp"
#include "brickplan/simulator.hpp"
#include "brickplan/wiring.hpp"

using namespace brickplan;
namespace fs = std::filesystem;

namespace {

struct Options {
    std::string input;
    std::string parts;
    std::string out = ".";
    std::vector<std::string> formats{"json", "dot"};
    std::string strategy = "sequential";
    std::string community = "girvan-newman";
    int target_communities = 0;  // 0: stop at the modularity peak
    unsigned seed = 0;
    double resolution = 1.0;
    std::string edge_order = "topological";
    std::string plan_path;
    std::string schedule_path;
    std::vector<int> workers;
    bool strict_order = false;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    std::cout << "wrote " << path.string() << "\n";
}

bool wants(const Options& o, const std::string& format) {
    return std::find(o.formats.begin(), o.formats.end(), format) != o.formats.end();
}

PartTable load_parts(const Options& o) {
    PartTable table = PartTable::builtin();
    if (!o.parts.empty()) table.merge(PartTable::load_file(o.parts));
    return table;
}

ConnectivityGraph load_graph(const Options& o) {
    const ModelBOM bom = load_ldraw_file(o.input, load_parts(o));
    for (const auto& warning : bom.warnings) std::cerr << "warning: " << warning << "\n";
    if (bom.objects.empty()) throw ParseError("model '" + bom.name + "' contains no parts");
    const ConnectivityGraph g = add_ground_nodes(build_graph(bom));
    std::cout << "model '" << g.model << "': " << g.brick_count << " bricks, "
              << g.ground_count() << " ground nodes, " << g.edges.size() << " support edges\n";
    return g;
}

PlannerConfig planner_config(const Options& o) {
    PlannerConfig cfg;
    cfg.strategy = o.strategy == "parallel" ? Strategy::parallel : Strategy::sequential;
    cfg.edge_order = o.edge_order == "id" ? EdgeOrder::by_id : EdgeOrder::topological;
    cfg.community.method = o.community == "leiden" ? CommunityMethod::leiden
                                                   : CommunityMethod::girvan_newman;
    if (o.target_communities > 0) cfg.community.target_communities = o.target_communities;
    cfg.community.seed = o.seed;
    cfg.community.resolution = o.resolution;
    return cfg;
}

// Returns the planned result; exits via StructuralError when the plan does
// not validate against the graph it was built for.
PlanResult plan_model(const ConnectivityGraph& g, const Options& o, const CLI::App* cmd) {
    if (o.strategy == "sequential" && cmd != nullptr &&
        (cmd->count("--community") != 0u || cmd->count("--target-communities") != 0u ||
         cmd->count("--resolution") != 0u)) {
        std::cerr << "warning: sequential strategy ignores community options\n";
    }
    PlanResult result = make_plan(g, planner_config(o));
    for (const auto& warning : result.warnings) std::cerr << "warning: " << warning << "\n";
    if (!result.partition.communities.empty()) {
        std::cout << "communities (" << result.partition.method << "):";
        for (const auto& community : result.partition.communities)
            std::cout << " " << community.size();
        std::cout << "\n";
    }
    int joins = 0;
    int black = 0;
    for (const auto& box : result.plan.boxes()) (box.kind == BoxKind::join ? joins : black) += 1;
    std::cout << "plan: " << total_join_count(result.plan) << " joins";
    if (black > 0) std::cout << " (" << black << " black boxes, " << joins << " at the top level)";
    std::cout << "\n";
    return result;
}

void require_valid(const PlanResult& result) {
    const ValidationReport report = validate_plan(result.plan, result.graph);
    if (!report.ok()) {
        std::cerr << report.to_string();
        throw StructuralError("plan failed validation");
    }
    std::cout << "validation: ok\n";
}

Plan flat_plan(const Plan& plan) { return plan.is_flat() ? plan : flatten(plan); }

Schedule make_schedule(const Plan& flat, const fs::path& out_dir, const std::string& stem,
                       bool export_files) {
    const Expression expr = diagram_to_expression(flat);
    const Schedule schedule = linearize(expr);
    if (!validate_schedule(schedule, flat))
        throw StructuralError("derived schedule is not a linear extension of the plan");
    std::cout << "expression: " << expression_to_sexpr(expr) << "\n";
    std::cout << "schedule: " << schedule.order.size() << " operations\n";
    if (export_files) {
        write_file(out_dir / ("schedule" + stem + ".json"), schedule_to_json(schedule, stem.empty() ? "plan" : stem.substr(1)));
        write_file(out_dir / ("expression" + stem + ".sexpr"), expression_to_sexpr(expr) + "\n");
    }
    return schedule;
}

std::string metrics_csv(const std::vector<std::pair<std::string, SweepRow>>& rows) {
    std::string out = "strategy,workers,steps,occupancy,total_ops\n";
    for (const auto& [strategy, row] : rows) {
        out += strategy;
        out += ',';
        out += std::to_string(row.workers);
        out += ',';
        out += std::to_string(row.steps);
        out += ',';
        out += row.occupancy.to_fixed(2);
        out += ',';
        out += std::to_string(row.total_ops);
        out += '\n';
    }
    return out;
}

void print_sweep_table(const std::vector<SweepRow>& rows) {
    std::cout << "  workers  steps  occupancy\n";
    for (const auto& row : rows) {
        std::ostringstream line;
        line.width(9);
        line << row.workers;
        line.width(7);
        line << row.steps;
        line.width(11);
        line << row.occupancy.to_fixed(2);
        std::cout << line.str() << "\n";
    }
}

void cmd_graph(const Options& o) {
    const ConnectivityGraph g = load_graph(o);
    const fs::path out_dir(o.out);
    if (wants(o, "json")) write_file(out_dir / "graph.json", graph_to_json(g));
    if (wants(o, "dot")) write_file(out_dir / "graph.dot", graph_to_dot(g));
}

void cmd_plan(const Options& o, const CLI::App* cmd) {
    const ConnectivityGraph g = load_graph(o);
    const PlanResult result = plan_model(g, o, cmd);
    const fs::path out_dir(o.out);
    if (wants(o, "json")) write_file(out_dir / "plan.json", plan_to_json(result.plan));
    if (wants(o, "dot")) write_file(out_dir / "plan.dot", plan_to_dot(result.plan));
    require_valid(result);
}

void cmd_schedule(const Options& o) {
    const Plan plan = plan_from_json(read_file(o.plan_path));
    make_schedule(flat_plan(plan), fs::path(o.out), "", true);
}

void cmd_simulate(const Options& o) {
    const Plan flat = flat_plan(plan_from_json(read_file(o.plan_path)));
    Schedule schedule;
    if (!o.schedule_path.empty()) {
        schedule = schedule_from_json(read_file(o.schedule_path));
    } else {
        schedule = linearize(diagram_to_expression(flat));
    }
    const std::vector<int> workers = o.workers.empty() ? std::vector<int>{1} : o.workers;
    const fs::path out_dir(o.out);

    std::vector<SweepRow> rows;
    for (int count : workers) {
        SimConfig cfg;
        cfg.workers = count;
        cfg.strict_order = o.strict_order;
        const SimReport report = simulate(flat, schedule, cfg);
        rows.push_back({count, report.steps, report.total_ops, report.occupancy});
        if (workers.size() == 1) write_file(out_dir / "trace.jsonl", trace_to_jsonl(report.trace));
    }
    print_sweep_table(rows);
    write_file(out_dir / "metrics.csv", sweep_to_csv(rows));
}

void cmd_bench(const Options& o, const CLI::App* cmd) {
    const ConnectivityGraph g = load_graph(o);
    const fs::path out_dir(o.out);
    write_file(out_dir / "graph.json", graph_to_json(g));
    write_file(out_dir / "graph.dot", graph_to_dot(g));

    const std::vector<int> workers = o.workers.empty() ? std::vector<int>{1, 2, 4, 8, 16} : o.workers;
    std::vector<std::pair<std::string, SweepRow>> rows;
    for (const std::string strategy : {"sequential", "parallel"}) {
        std::cout << "-- " << strategy << "\n";
        Options strategy_options = o;
        strategy_options.strategy = strategy;
        const PlanResult result = plan_model(g, strategy_options, strategy == "sequential" ? nullptr : cmd);
        require_valid(result);
        write_file(out_dir / ("plan_" + strategy + ".json"), plan_to_json(result.plan));
        write_file(out_dir / ("plan_" + strategy + ".dot"), plan_to_dot(result.plan));
        const Plan flat = flat_plan(result.plan);
        const Schedule schedule = make_schedule(flat, out_dir, "_" + strategy, true);
        const auto sweep_rows = sweep(flat, schedule, workers, o.strict_order);
        print_sweep_table(sweep_rows);
        for (const auto& row : sweep_rows) rows.emplace_back(strategy, row);
    }
    write_file(out_dir / "metrics.csv", metrics_csv(rows));
}

int describe(const Error& e, int code) {
    std::cerr << "error: " << e.what() << "\n";
    return code;
}

int guarded(const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const ConfigError& e) {
        return describe(e, 2);
    } catch (const ParseError& e) {
        return describe(e, 3);
    } catch (const UnknownPartError& e) {
        return describe(e, 4);
    } catch (const PlanningError& e) {
        return describe(e, 5);
    } catch (const OrientationError& e) {
        return describe(e, 5);
    } catch (const StructuralError& e) {
        return describe(e, 5);
    } catch (const IoError& e) {
        return describe(e, 6);
    } catch (const Error& e) {
        return describe(e, 1);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Assembly planning for LDraw brick models"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from a TOML file");

    Options o;

    const auto add_input = [&](CLI::App* cmd) {
        cmd->add_option("--input,-i", o.input, "LDraw model file")->required();
        cmd->add_option("--parts", o.parts, "extra part definitions (JSON), merged over the built-ins");
    };
    const auto add_out = [&](CLI::App* cmd) {
        cmd->add_option("--out,-o", o.out, "output directory")->capture_default_str();
    };
    const auto add_planning = [&](CLI::App* cmd) {
        cmd->add_option("--strategy", o.strategy, "planning strategy")
            ->check(CLI::IsMember({"sequential", "parallel"}))
            ->capture_default_str();
        cmd->add_option("--community", o.community, "community detection method")
            ->check(CLI::IsMember({"girvan-newman", "leiden"}))
            ->capture_default_str();
        cmd->add_option("--target-communities", o.target_communities,
                        "stop Girvan-Newman at this many communities (0: modularity peak)")
            ->check(CLI::NonNegativeNumber);
        cmd->add_option("--seed", o.seed, "seed for seeded community methods")
            ->capture_default_str();
        cmd->add_option("--resolution", o.resolution, "modularity resolution")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--edge-order", o.edge_order, "support edge scan order")
            ->check(CLI::IsMember({"topological", "id"}))
            ->capture_default_str();
    };

    CLI::App* graph = app.add_subcommand("graph", "build the support graph of a model");
    add_input(graph);
    add_out(graph);
    graph->add_option("--format", o.formats, "export formats")
        ->check(CLI::IsMember({"json", "dot"}))
        ->delimiter(',')
        ->capture_default_str();

    CLI::App* plan = app.add_subcommand("plan", "derive an assembly plan");
    add_input(plan);
    add_out(plan);
    add_planning(plan);
    plan->add_option("--format", o.formats, "export formats")
        ->check(CLI::IsMember({"json", "dot"}))
        ->delimiter(',')
        ->capture_default_str();

    CLI::App* schedule = app.add_subcommand("schedule", "linearize a plan into a schedule");
    schedule->add_option("--plan", o.plan_path, "plan JSON file")->required();
    add_out(schedule);

    CLI::App* simulate = app.add_subcommand("simulate", "run a schedule with a worker pool");
    simulate->add_option("--plan", o.plan_path, "plan JSON file")->required();
    simulate->add_option("--schedule", o.schedule_path,
                         "schedule JSON file (defaults to the plan's own linearization)");
    simulate->add_option("--workers,-w", o.workers, "worker counts to simulate")
        ->delimiter(',');
    simulate->add_flag("--strict-order", o.strict_order,
                       "dispatch strictly in schedule order (no skip-ahead)");
    add_out(simulate);

    CLI::App* bench = app.add_subcommand("bench", "sweep both strategies over worker counts");
    add_input(bench);
    add_out(bench);
    add_planning(bench);
    bench->add_option("--workers,-w", o.workers, "worker counts to sweep")->delimiter(',');
    bench->add_flag("--strict-order", o.strict_order,
                    "dispatch strictly in schedule order (no skip-ahead)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (graph->parsed()) return guarded([&] { cmd_graph(o); });
    if (plan->parsed()) return guarded([&] { cmd_plan(o, plan); });
    if (schedule->parsed()) return guarded([&] { cmd_schedule(o); });
    if (simulate->parsed()) return guarded([&] { cmd_simulate(o); });
    if (bench->parsed()) return guarded([&] { cmd_bench(o, bench); });
    return 2;
}

// Micro benchmarks for the pipeline stages, run over the bundled fixture
// models so numbers are comparable across machines and revisions.

#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>
#include <string>

#include "brickplan/community.hpp"
#include "brickplan/connectivity.hpp"
#include "brickplan/ldraw.hpp"
#include "brickplan/part_table.hpp"
#include "brickplan/planner.hpp"
#include "brickplan/scheduler.hpp"
#include "brickplan/simulator.hpp"

using namespace brickplan;

namespace {

const PartTable& parts() {
    static const PartTable table = PartTable::builtin();
    return table;
}

std::string fixture_text(const std::string& name) {
    std::ifstream in(std::string(BRICKPLAN_DATA_DIR) + "/" + name);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

const std::string& house_text() {
    static const std::string text = fixture_text("house.ldr");
    return text;
}

const ConnectivityGraph& house_graph() {
    static const ConnectivityGraph g =
        add_ground_nodes(build_graph(parse_ldraw(house_text(), parts(), "house")));
    return g;
}

const ConnectivityGraph& columns_graph() {
    static const ConnectivityGraph g = add_ground_nodes(
        build_graph(parse_ldraw(fixture_text("columns.ldr"), parts(), "columns")));
    return g;
}

PlannerConfig parallel_config(CommunityMethod method, int targets) {
    PlannerConfig cfg;
    cfg.strategy = Strategy::parallel;
    cfg.community.method = method;
    if (method == CommunityMethod::girvan_newman) cfg.community.target_communities = targets;
    cfg.community.seed = 11;
    return cfg;
}

const Plan& house_flat_parallel_plan() {
    static const Plan flat =
        flatten(make_plan(house_graph(), parallel_config(CommunityMethod::leiden, 0)).plan);
    return flat;
}

void bm_parse_model(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(parse_ldraw(house_text(), parts(), "house"));
    }
}
BENCHMARK(bm_parse_model)->Unit(benchmark::kMicrosecond);

void bm_build_graph(benchmark::State& state) {
    const ModelBOM bom = parse_ldraw(house_text(), parts(), "house");
    for (auto _ : state) {
        benchmark::DoNotOptimize(add_ground_nodes(build_graph(bom)));
    }
}
BENCHMARK(bm_build_graph)->Unit(benchmark::kMicrosecond);

void bm_sequential_plan(benchmark::State& state) {
    const ConnectivityGraph& g = house_graph();
    for (auto _ : state) {
        benchmark::DoNotOptimize(sequential_plan(g));
    }
}
BENCHMARK(bm_sequential_plan)->Unit(benchmark::kMicrosecond);

void bm_girvan_newman_plan(benchmark::State& state) {
    const ConnectivityGraph& g = columns_graph();
    const PlannerConfig cfg = parallel_config(CommunityMethod::girvan_newman, 5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(make_plan(g, cfg));
    }
}
BENCHMARK(bm_girvan_newman_plan)->Unit(benchmark::kMillisecond);

void bm_leiden_plan(benchmark::State& state) {
    const ConnectivityGraph& g = house_graph();
    const PlannerConfig cfg = parallel_config(CommunityMethod::leiden, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(make_plan(g, cfg));
    }
}
BENCHMARK(bm_leiden_plan)->Unit(benchmark::kMicrosecond);

void bm_flatten_plan(benchmark::State& state) {
    const PlanResult result =
        make_plan(house_graph(), parallel_config(CommunityMethod::leiden, 0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(flatten(result.plan));
    }
}
BENCHMARK(bm_flatten_plan)->Unit(benchmark::kMicrosecond);

void bm_schedule(benchmark::State& state) {
    const Plan& flat = house_flat_parallel_plan();
    for (auto _ : state) {
        benchmark::DoNotOptimize(linearize(diagram_to_expression(flat)));
    }
}
BENCHMARK(bm_schedule)->Unit(benchmark::kMicrosecond);

void bm_simulate(benchmark::State& state) {
    const Plan& flat = house_flat_parallel_plan();
    const Schedule order = linearize(diagram_to_expression(flat));
    SimConfig cfg;
    cfg.workers = static_cast<int>(state.range(0));
    cfg.keep_trace = false;
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate(flat, order, cfg));
    }
}
BENCHMARK(bm_simulate)->Arg(1)->Arg(4)->Arg(16)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();

#pragma once

#include <string>
#include <vector>

#include "brickplan/rational.hpp"
#include "brickplan/scheduler.hpp"
#include "brickplan/wiring.hpp"

namespace brickplan {

struct SimConfig {
    int workers = 1;
    // Dispatch stops at the first not-yet-ready operation instead of
    // skipping ahead in schedule order.
    bool strict_order = false;
    bool keep_trace = true;
};

// One executed operation. Areas number the physical workspaces: 0 is the
// ground, fresh sub-assemblies open new areas, and a merge keeps the
// smallest area of its operands.
struct TraceEvent {
    int step = 0;
    int worker = 0;  // 1-based lane within the step
    int box = 0;
    std::vector<int> consumed;  // wire ids
    int produced = -1;          // wire id
    int area = 0;
};

struct SimReport {
    int steps = 0;
    int total_ops = 0;
    Rational occupancy;  // total_ops / (steps * workers), exact
    std::vector<TraceEvent> trace;
};

// Unit-time execution of a flat plan under a fixed schedule: each step, up
// to `workers` operations whose inputs are ready run in schedule order; an
// output becomes usable the following step.
SimReport simulate(const Plan& plan, const Schedule& schedule, const SimConfig& cfg);

struct SweepRow {
    int workers = 0;
    int steps = 0;
    int total_ops = 0;
    Rational occupancy;
};

std::vector<SweepRow> sweep(const Plan& plan, const Schedule& schedule,
                            const std::vector<int>& worker_counts, bool strict_order = false);

// Header "workers,steps,occupancy,total_ops"; occupancy to two decimals.
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

// One compact JSON object per line.
std::string trace_to_jsonl(const std::vector<TraceEvent>& trace);

}  // namespace brickplan

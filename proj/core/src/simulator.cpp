#include "brickplan/simulator.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "brickplan/errors.hpp"

namespace brickplan {

namespace {

// Ground wires sit in area 0; the first event touching only unplaced
// sub-assemblies opens the next fresh area; merges keep the smallest.
void assign_areas(const Plan& plan, std::vector<TraceEvent>& trace) {
    std::set<int> grounds(plan.ground_nodes().begin(), plan.ground_nodes().end());
    std::map<int, int> wire_area;
    for (int wire_id : plan.input_wires()) {
        const auto& members = plan.wire(wire_id).members.members();
        bool grounded = std::any_of(members.begin(), members.end(),
                                    [&](int id) { return grounds.contains(id); });
        if (grounded) wire_area[wire_id] = 0;
    }
    int next_area = 1;  // 0 is reserved for the ground
    for (auto& event : trace) {
        int area = -1;
        for (int wire_id : event.consumed) {
            auto it = wire_area.find(wire_id);
            if (it != wire_area.end()) area = area < 0 ? it->second : std::min(area, it->second);
        }
        if (area < 0) area = next_area++;
        event.area = area;
        if (event.produced >= 0) wire_area[event.produced] = area;
    }
}

}  // namespace

SimReport simulate(const Plan& plan, const Schedule& schedule, const SimConfig& cfg) {
    if (cfg.workers < 1) throw ConfigError("workers must be at least 1");
    if (!plan.is_flat()) throw StructuralError("simulation requires a flattened plan");
    if (!validate_schedule(schedule, plan))
        throw StructuralError("schedule is not a linear extension of the plan");

    // ready_at[wire] = first step the wire can be consumed.
    std::map<int, int> ready_at;
    for (int wire_id : plan.input_wires()) ready_at[wire_id] = 1;

    std::map<int, const Box*> box_by_id;
    for (const auto& box : plan.boxes()) box_by_id[box.id] = &box;

    const std::size_t total = schedule.order.size();
    std::vector<char> done(total, 0);
    std::size_t completed = 0;

    SimReport report;
    report.total_ops = static_cast<int>(total);

    int step = 0;
    while (completed < total) {
        ++step;
        int lane = 0;
        for (std::size_t i = 0; i < total && lane < cfg.workers; ++i) {
            if (done[i]) continue;
            const Box& box = *box_by_id.at(schedule.order[i]);
            bool ready = true;
            for (int wire_id : box.inputs) {
                auto it = ready_at.find(wire_id);
                if (it == ready_at.end() || it->second > step) {
                    ready = false;
                    break;
                }
            }
            if (!ready) {
                if (cfg.strict_order) break;
                continue;
            }
            done[i] = 1;
            ++completed;
            ++lane;
            if (box.output >= 0) ready_at[box.output] = step + 1;
            report.trace.push_back({step, lane, box.id, box.inputs, box.output, 0});
        }
        if (lane == 0) throw StructuralError("simulation stalled; schedule made no progress");
    }

    report.steps = step;
    report.occupancy = Rational(report.total_ops, static_cast<long long>(report.steps) * cfg.workers);
    assign_areas(plan, report.trace);
    if (!cfg.keep_trace) report.trace.clear();
    return report;
}

std::vector<SweepRow> sweep(const Plan& plan, const Schedule& schedule,
                            const std::vector<int>& worker_counts, bool strict_order) {
    std::vector<SweepRow> rows;
    for (int workers : worker_counts) {
        SimConfig cfg;
        cfg.workers = workers;
        cfg.strict_order = strict_order;
        cfg.keep_trace = false;
        SimReport report = simulate(plan, schedule, cfg);
        rows.push_back({workers, report.steps, report.total_ops, report.occupancy});
    }
    return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::string out = "workers,steps,occupancy,total_ops\n";
    for (const auto& row : rows) {
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

std::string trace_to_jsonl(const std::vector<TraceEvent>& trace) {
    std::string out;
    for (const auto& event : trace) {
        nlohmann::ordered_json doc;
        doc["step"] = event.step;
        doc["worker"] = event.worker;
        doc["box"] = event.box;
        doc["consumed"] = event.consumed;
        doc["produced"] = event.produced;
        doc["area"] = event.area;
        out += doc.dump();
        out += '\n';
    }
    return out;
}

}  // namespace brickplan

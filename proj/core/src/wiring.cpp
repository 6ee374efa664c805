#include "brickplan/wiring.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "brickplan/errors.hpp"

namespace brickplan {

SubAssembly::SubAssembly(std::vector<int> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

SubAssembly SubAssembly::singleton(int id) {
    return SubAssembly(std::vector<int>{id});
}

bool SubAssembly::contains(int id) const {
    return std::binary_search(members_.begin(), members_.end(), id);
}

int SubAssembly::min_member() const {
    if (members_.empty()) throw Error("empty sub-assembly has no members");
    return members_.front();
}

bool SubAssembly::disjoint_with(const SubAssembly& other) const {
    auto a = members_.begin();
    auto b = other.members_.begin();
    while (a != members_.end() && b != other.members_.end()) {
        if (*a == *b) return false;
        if (*a < *b)
            ++a;
        else
            ++b;
    }
    return true;
}

SubAssembly SubAssembly::union_with(const SubAssembly& other) const {
    std::vector<int> merged;
    merged.reserve(members_.size() + other.members_.size());
    std::set_union(members_.begin(), members_.end(), other.members_.begin(),
                   other.members_.end(), std::back_inserter(merged));
    SubAssembly result;
    result.members_ = std::move(merged);
    return result;
}

std::vector<int> Plan::unconsumed_wires() const {
    std::vector<int> out;
    for (const Wire& w : wires_)
        if (w.consumer == -1) out.push_back(w.id);
    return out;
}

const Wire& Plan::wire(int id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= wires_.size())
        throw Error("unknown wire " + std::to_string(id));
    return wires_[static_cast<std::size_t>(id)];
}

const Box* Plan::find_box(int id) const {
    for (const Box& b : boxes_)
        if (b.id == id) return &b;
    return nullptr;
}

bool Plan::is_flat() const {
    return std::all_of(boxes_.begin(), boxes_.end(),
                       [](const Box& b) { return b.kind == BoxKind::join; });
}

std::vector<std::pair<int, int>> Plan::box_dependencies() const {
    std::vector<std::pair<int, int>> deps;
    for (const Wire& w : wires_)
        if (w.producer != -1 && w.consumer != -1) deps.emplace_back(w.producer, w.consumer);
    std::sort(deps.begin(), deps.end());
    deps.erase(std::unique(deps.begin(), deps.end()), deps.end());
    return deps;
}

PlanBuilder::PlanBuilder(int next_box_id) : next_box_id_(next_box_id) {}

const Wire& PlanBuilder::claim_wire(int wire_id, int consumer_box) {
    if (wire_id < 0 || static_cast<std::size_t>(wire_id) >= plan_.wires_.size())
        throw StructuralError("box " + std::to_string(consumer_box) + " consumes unknown wire " +
                              std::to_string(wire_id));
    Wire& w = plan_.wires_[static_cast<std::size_t>(wire_id)];
    if (w.consumer != -1)
        throw StructuralError("wire " + std::to_string(wire_id) + " is already consumed by box " +
                              std::to_string(w.consumer));
    w.consumer = consumer_box;
    return w;
}

int PlanBuilder::add_output_wire(SubAssembly members, int producer_box) {
    const int id = static_cast<int>(plan_.wires_.size());
    plan_.wires_.push_back({id, std::move(members), producer_box, -1});
    return id;
}

int PlanBuilder::add_input(SubAssembly members) {
    const int id = add_output_wire(std::move(members), -1);
    plan_.input_wires_.push_back(id);
    return id;
}

int PlanBuilder::add_join(int box_id, int left_wire, int right_wire,
                          std::vector<Edge> justified_by) {
    if (!used_box_ids_.insert(box_id).second)
        throw StructuralError("duplicate box id " + std::to_string(box_id));
    if (left_wire == right_wire)
        throw StructuralError("box " + std::to_string(box_id) + " consumes a wire twice");
    const Wire& left = claim_wire(left_wire, box_id);
    const Wire& right = claim_wire(right_wire, box_id);
    // Canonical input order: the side holding the smallest member first.
    int first = left_wire;
    int second = right_wire;
    if (!right.members.empty() &&
        (left.members.empty() || right.members.min_member() < left.members.min_member()))
        std::swap(first, second);
    std::sort(justified_by.begin(), justified_by.end());
    Box box;
    box.id = box_id;
    box.kind = BoxKind::join;
    box.inputs = {first, second};
    box.justified_by = std::move(justified_by);
    box.output = add_output_wire(left.members.union_with(right.members), box_id);
    plan_.boxes_.push_back(std::move(box));
    next_box_id_ = std::max(next_box_id_, box_id + 1);
    return plan_.boxes_.back().output;
}

int PlanBuilder::add_join(int left_wire, int right_wire, std::vector<Edge> justified_by) {
    return add_join(next_box_id_, left_wire, right_wire, std::move(justified_by));
}

int PlanBuilder::add_black_box(int box_id, std::string label, Plan inner,
                               std::vector<int> input_wires) {
    if (!used_box_ids_.insert(box_id).second)
        throw StructuralError("duplicate box id " + std::to_string(box_id));
    if (input_wires.empty())
        throw StructuralError("box " + std::to_string(box_id) + " needs at least one input");
    SubAssembly all;
    std::set<int> seen;
    for (const int w : input_wires) {
        if (!seen.insert(w).second)
            throw StructuralError("box " + std::to_string(box_id) + " consumes a wire twice");
        all = all.union_with(claim_wire(w, box_id).members);
    }
    Box box;
    box.id = box_id;
    box.kind = BoxKind::black;
    box.inputs = std::move(input_wires);
    box.label = std::move(label);
    box.inner = std::make_shared<const Plan>(std::move(inner));
    box.output = add_output_wire(std::move(all), box_id);
    plan_.boxes_.push_back(std::move(box));
    next_box_id_ = std::max(next_box_id_, box_id + 1);
    return plan_.boxes_.back().output;
}

int PlanBuilder::add_black_box(std::string label, Plan inner, std::vector<int> input_wires) {
    return add_black_box(next_box_id_, std::move(label), std::move(inner),
                         std::move(input_wires));
}

void PlanBuilder::set_ground_nodes(std::vector<int> grounds) {
    std::sort(grounds.begin(), grounds.end());
    grounds.erase(std::unique(grounds.begin(), grounds.end()), grounds.end());
    plan_.ground_nodes_ = std::move(grounds);
}

int PlanBuilder::box_output(int box_id) const {
    for (const Box& b : plan_.boxes_)
        if (b.id == box_id) return b.output;
    throw StructuralError("unknown box " + std::to_string(box_id));
}

const SubAssembly& PlanBuilder::wire_members(int wire_id) const {
    if (wire_id < 0 || static_cast<std::size_t>(wire_id) >= plan_.wires_.size())
        throw StructuralError("unknown wire " + std::to_string(wire_id));
    return plan_.wires_[static_cast<std::size_t>(wire_id)].members;
}

Plan PlanBuilder::build() {
    if (built_) throw StructuralError("builder already consumed");
    built_ = true;
    const std::vector<int> open = plan_.unconsumed_wires();
    plan_.output_wire_ = open.size() == 1 ? open.front() : -1;
    return std::move(plan_);
}

namespace {

void flatten_into(const Plan& plan, PlanBuilder& builder, std::map<int, int>& wire_map) {
    for (const Box& box : plan.boxes()) {
        if (box.kind == BoxKind::join) {
            const int out = builder.add_join(box.id, wire_map.at(box.inputs[0]),
                                             wire_map.at(box.inputs[1]), box.justified_by);
            wire_map[box.output] = out;
            continue;
        }
        const Plan& inner = *box.inner;
        if (inner.input_wires().size() != box.inputs.size())
            throw StructuralError("box " + std::to_string(box.id) + " has " +
                                  std::to_string(box.inputs.size()) + " inputs but its inner plan expects " +
                                  std::to_string(inner.input_wires().size()));
        // Match inner inputs to outer wires by carried sub-assembly.
        std::map<SubAssembly, std::deque<int>> outer_available;
        for (const int w : box.inputs)
            outer_available[plan.wire(w).members].push_back(wire_map.at(w));
        std::map<int, int> inner_map;
        for (const int iw : inner.input_wires()) {
            auto it = outer_available.find(inner.wire(iw).members);
            if (it == outer_available.end() || it->second.empty())
                throw StructuralError("box " + std::to_string(box.id) +
                                      ": inner plan input does not match any box input");
            inner_map[iw] = it->second.front();
            it->second.pop_front();
        }
        if (inner.output_wire() == -1)
            throw StructuralError("box " + std::to_string(box.id) +
                                  ": inner plan has no unique output");
        if (inner.wire(inner.output_wire()).members != plan.wire(box.output).members)
            throw StructuralError("box " + std::to_string(box.id) +
                                  ": inner plan output does not match the box output");
        flatten_into(inner, builder, inner_map);
        wire_map[box.output] = inner_map.at(inner.output_wire());
    }
}

}  // namespace

Plan flatten(const Plan& plan) {
    PlanBuilder builder;
    std::map<int, int> wire_map;
    for (const int w : plan.input_wires()) wire_map[w] = builder.add_input(plan.wire(w).members);
    flatten_into(plan, builder, wire_map);
    builder.set_ground_nodes(plan.ground_nodes());
    return builder.build();
}

std::size_t total_join_count(const Plan& plan) {
    std::size_t count = 0;
    for (const Box& box : plan.boxes()) {
        if (box.kind == BoxKind::join)
            ++count;
        else
            count += total_join_count(*box.inner);
    }
    return count;
}

std::string ValidationReport::to_string() const {
    std::ostringstream out;
    for (const Violation& v : violations) {
        if (v.box_id != -1) out << "box " << v.box_id << ": ";
        out << v.message << "\n";
    }
    return out.str();
}

ValidationReport validate_plan(const Plan& plan, const ConnectivityGraph& g) {
    using Code = Violation::Code;
    ValidationReport report;
    Plan flat;
    try {
        flat = flatten(plan);
    } catch (const StructuralError& e) {
        report.violations.push_back({Code::structure, -1, e.what()});
        return report;
    }

    std::multiset<std::vector<int>> got_inputs;
    for (const int w : flat.input_wires()) got_inputs.insert(flat.wire(w).members.members());
    std::multiset<std::vector<int>> want_inputs;
    for (const int id : g.node_ids()) want_inputs.insert({id});
    if (got_inputs != want_inputs)
        report.violations.push_back(
            {Code::inputs_mismatch, -1,
             "plan inputs are not exactly the singletons of the graph nodes"});

    if (flat.output_wire() == -1) {
        report.violations.push_back({Code::output_mismatch, -1, "plan has no unique output"});
    } else if (flat.wire(flat.output_wire()).members.members() != g.node_ids()) {
        report.violations.push_back(
            {Code::output_mismatch, -1, "plan output is not the full node set"});
    }

    const std::set<std::pair<int, int>> edges = [&] {
        std::set<std::pair<int, int>> s;
        for (const Edge& e : g.edges) s.emplace(e.from, e.to);
        return s;
    }();

    for (const Box& box : flat.boxes()) {
        const SubAssembly& left = flat.wire(box.inputs[0]).members;
        const SubAssembly& right = flat.wire(box.inputs[1]).members;
        if (!left.disjoint_with(right))
            report.violations.push_back(
                {Code::join_overlap, box.id, "join inputs share members"});
        if (left.union_with(right) != flat.wire(box.output).members)
            report.violations.push_back(
                {Code::join_bad_union, box.id, "join output is not the union of its inputs"});

        const auto straddles = [&](const Edge& e) {
            return (left.contains(e.from) && right.contains(e.to)) ||
                   (right.contains(e.from) && left.contains(e.to));
        };
        if (!std::any_of(g.edges.begin(), g.edges.end(), straddles))
            report.violations.push_back(
                {Code::join_no_edge, box.id,
                 "no support edge connects the two sides of the join"});
        if (box.justified_by.empty()) {
            report.violations.push_back(
                {Code::join_bad_justification, box.id, "join records no justifying edge"});
        } else {
            for (const Edge& e : box.justified_by) {
                if (!edges.count({e.from, e.to}))
                    report.violations.push_back({Code::join_bad_justification, box.id,
                                                 "justifying edge " + std::to_string(e.from) +
                                                     "->" + std::to_string(e.to) +
                                                     " is not in the graph"});
                else if (!straddles(e))
                    report.violations.push_back({Code::join_bad_justification, box.id,
                                                 "justifying edge " + std::to_string(e.from) +
                                                     "->" + std::to_string(e.to) +
                                                     " does not straddle the join"});
            }
        }
    }

    // Construction order is a topological order, so a cycle here means the
    // plan object was corrupted rather than built.
    std::map<int, int> degree;
    std::map<int, std::vector<int>> succ;
    for (const Box& b : flat.boxes()) degree[b.id] = 0;
    for (const auto& [from, to] : flat.box_dependencies()) {
        ++degree[to];
        succ[from].push_back(to);
    }
    std::vector<int> ready;
    for (const auto& [id, deg] : degree)
        if (deg == 0) ready.push_back(id);
    std::size_t seen = 0;
    while (!ready.empty()) {
        const int id = ready.back();
        ready.pop_back();
        ++seen;
        for (const int next : succ[id])
            if (--degree[next] == 0) ready.push_back(next);
    }
    if (seen != flat.boxes().size())
        report.violations.push_back({Code::cycle, -1, "box dependencies contain a cycle"});

    return report;
}

namespace {

nlohmann::ordered_json members_json(const SubAssembly& s) {
    return nlohmann::ordered_json(s.members());
}

nlohmann::ordered_json plan_json(const Plan& plan) {
    nlohmann::ordered_json doc;
    doc["boxes"] = nlohmann::ordered_json::array();
    for (const Box& box : plan.boxes()) {
        nlohmann::ordered_json b;
        b["id"] = box.id;
        b["kind"] = box.kind == BoxKind::join ? "join" : "black";
        b["inputs"] = nlohmann::ordered_json::array();
        for (const int w : box.inputs) b["inputs"].push_back(members_json(plan.wire(w).members));
        b["output"] = members_json(plan.wire(box.output).members);
        if (box.kind == BoxKind::join) {
            b["justified_by"] = nlohmann::ordered_json::array();
            for (const Edge& e : box.justified_by)
                b["justified_by"].push_back({{"from", e.from}, {"to", e.to}});
        } else {
            b["label"] = box.label;
            b["inner"] = plan_json(*box.inner);
        }
        doc["boxes"].push_back(std::move(b));
    }
    doc["plan_inputs"] = nlohmann::ordered_json::array();
    for (const int w : plan.input_wires())
        doc["plan_inputs"].push_back(members_json(plan.wire(w).members));
    if (plan.output_wire() == -1)
        doc["plan_output"] = nullptr;
    else
        doc["plan_output"] = members_json(plan.wire(plan.output_wire()).members);
    doc["ground_nodes"] = plan.ground_nodes();
    return doc;
}

std::vector<int> int_list(const nlohmann::json& j) {
    std::vector<int> out;
    for (const auto& v : j) out.push_back(v.get<int>());
    return out;
}

Plan plan_from_doc(const nlohmann::json& doc) {
    PlanBuilder builder;
    std::map<std::vector<int>, std::deque<int>> available;
    for (const auto& members : doc.at("plan_inputs")) {
        SubAssembly s(int_list(members));
        const int w = builder.add_input(s);
        available[s.members()].push_back(w);
    }
    const auto take_wire = [&available](const std::vector<int>& members, int box_id) {
        SubAssembly s{std::vector<int>(members)};
        auto it = available.find(s.members());
        if (it == available.end() || it->second.empty())
            throw StructuralError("box " + std::to_string(box_id) +
                                  " consumes a sub-assembly no wire carries");
        const int w = it->second.front();
        it->second.pop_front();
        return w;
    };
    for (const auto& b : doc.at("boxes")) {
        const int id = b.at("id").get<int>();
        const std::string kind = b.at("kind").get<std::string>();
        const auto& inputs = b.at("inputs");
        int out_wire = -1;
        if (kind == "join") {
            if (inputs.size() != 2)
                throw StructuralError("box " + std::to_string(id) + ": joins take two inputs");
            std::vector<Edge> justified;
            for (const auto& e : b.value("justified_by", nlohmann::json::array()))
                justified.push_back({e.at("from").get<int>(), e.at("to").get<int>()});
            const int left = take_wire(int_list(inputs[0]), id);
            const int right = take_wire(int_list(inputs[1]), id);
            out_wire = builder.add_join(id, left, right, std::move(justified));
        } else if (kind == "black") {
            std::vector<int> wires;
            for (const auto& members : inputs) wires.push_back(take_wire(int_list(members), id));
            Plan inner = plan_from_doc(b.at("inner"));
            out_wire = builder.add_black_box(id, b.value("label", ""), std::move(inner),
                                             std::move(wires));
        } else {
            throw StructuralError("box " + std::to_string(id) + ": unknown kind '" + kind + "'");
        }
        // The builder recomputes the output as the input union; the file
        // must agree or it does not describe this plan.
        const std::vector<int> declared = int_list(b.at("output"));
        if (builder.wire_members(out_wire).members() != declared)
            throw StructuralError("box " + std::to_string(id) +
                                  ": declared output does not match its inputs");
        available[declared].push_back(out_wire);
    }
    std::vector<int> grounds;
    for (const auto& v : doc.value("ground_nodes", nlohmann::json::array()))
        grounds.push_back(v.get<int>());
    builder.set_ground_nodes(std::move(grounds));
    Plan plan = builder.build();
    const auto& declared_output = doc.at("plan_output");
    if (declared_output.is_null()) {
        if (plan.output_wire() != -1)
            throw StructuralError("plan_output is null but the plan has a unique output");
    } else {
        if (plan.output_wire() == -1 ||
            plan.wire(plan.output_wire()).members.members() != int_list(declared_output))
            throw StructuralError("plan_output does not match the dangling wire");
    }
    return plan;
}

std::string wire_label(const SubAssembly& s) {
    if (s.size() <= 4) {
        std::ostringstream out;
        out << "{";
        for (std::size_t i = 0; i < s.members().size(); ++i) {
            if (i) out << ",";
            out << s.members()[i];
        }
        out << "}";
        return out.str();
    }
    return std::to_string(s.size()) + " parts";
}

}  // namespace

std::string plan_to_json(const Plan& plan) {
    return plan_json(plan).dump(2) + "\n";
}

Plan plan_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("plan: ") + e.what());
    }
    try {
        return plan_from_doc(doc);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("plan: ") + e.what());
    }
}

std::string plan_to_dot(const Plan& plan) {
    std::ostringstream out;
    out << "digraph plan {\n  rankdir=LR;\n  node [shape=box];\n";
    for (const int w : plan.input_wires())
        out << "  i" << w << " [shape=plaintext, label=\"" << wire_label(plan.wire(w).members)
            << "\"];\n";
    for (const Box& box : plan.boxes()) {
        if (box.kind == BoxKind::join)
            out << "  b" << box.id << " [label=\"join " << box.id << "\"];\n";
        else
            out << "  b" << box.id << " [shape=box3d, label=\"" << box.label << "\\n"
                << plan.wire(box.output).members.size() << " parts\"];\n";
    }
    if (plan.output_wire() != -1) out << "  out [shape=doublecircle, label=\"done\"];\n";
    for (const Wire& w : plan.wires()) {
        if (w.producer == -1 && w.consumer == -1) continue;
        const std::string src = w.producer == -1 ? "i" + std::to_string(w.id)
                                                 : "b" + std::to_string(w.producer);
        std::string dst;
        if (w.consumer != -1)
            dst = "b" + std::to_string(w.consumer);
        else if (w.id == plan.output_wire())
            dst = "out";
        else
            continue;
        out << "  " << src << " -> " << dst << " [label=\"" << wire_label(w.members) << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace brickplan

#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "brickplan/connectivity.hpp"

namespace brickplan {

// Sorted set of node ids, the payload carried on every wire of a plan.
class SubAssembly {
public:
    SubAssembly() = default;
    explicit SubAssembly(std::vector<int> members);
    static SubAssembly singleton(int id);

    const std::vector<int>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }
    bool contains(int id) const;
    int min_member() const;  // throws on empty
    bool disjoint_with(const SubAssembly& other) const;
    SubAssembly union_with(const SubAssembly& other) const;

    friend bool operator==(const SubAssembly&, const SubAssembly&) = default;
    friend auto operator<=>(const SubAssembly&, const SubAssembly&) = default;

private:
    std::vector<int> members_;
};

class Plan;

enum class BoxKind { join, black };

// A plan operation. Joins take exactly two wires and record the support
// edges that justify gluing them; black boxes wrap an inner plan.
struct Box {
    int id = 0;
    BoxKind kind = BoxKind::join;
    std::vector<int> inputs;  // wire ids
    int output = -1;          // wire id
    std::vector<Edge> justified_by;
    std::string label;
    std::shared_ptr<const Plan> inner;
};

// A wire carries a sub-assembly from its producer to at most one consumer.
// producer -1 means the wire is a plan input; consumer -1 means nothing
// consumes it.
struct Wire {
    int id = -1;
    SubAssembly members;
    int producer = -1;
    int consumer = -1;
};

// A string-diagram assembly plan. Boxes are stored in construction order,
// which is always a topological order of the box dependency DAG; wire ids
// are dense indices into wires().
class Plan {
public:
    const std::vector<Box>& boxes() const { return boxes_; }
    const std::vector<Wire>& wires() const { return wires_; }
    const std::vector<int>& input_wires() const { return input_wires_; }
    const std::vector<int>& ground_nodes() const { return ground_nodes_; }

    // The unique unconsumed wire, or -1 when there is none or several.
    int output_wire() const { return output_wire_; }
    std::vector<int> unconsumed_wires() const;

    const Wire& wire(int id) const;
    const Box* find_box(int id) const;
    bool is_flat() const;

    // Dependency edges between top-level boxes: producer id -> consumer id.
    std::vector<std::pair<int, int>> box_dependencies() const;

private:
    friend class PlanBuilder;
    std::vector<Box> boxes_;
    std::vector<Wire> wires_;
    std::vector<int> input_wires_;
    std::vector<int> ground_nodes_;
    int output_wire_ = -1;
};

// Builds plans wire by wire. Structural rules enforced here: inputs must
// exist and be unconsumed, box ids must be fresh. Semantic rules
// (disjointness, justification) are the validator's job so that broken
// plans can still be represented and reported on.
class PlanBuilder {
public:
    explicit PlanBuilder(int next_box_id = 1);

    int add_input(SubAssembly members);  // returns the new wire id

    // Joins order their two inputs by smallest member. Returns the output
    // wire id.
    int add_join(int box_id, int left_wire, int right_wire, std::vector<Edge> justified_by);
    int add_join(int left_wire, int right_wire, std::vector<Edge> justified_by);
    int add_black_box(int box_id, std::string label, Plan inner, std::vector<int> input_wires);
    int add_black_box(std::string label, Plan inner, std::vector<int> input_wires);

    void set_ground_nodes(std::vector<int> grounds);
    int next_box_id() const { return next_box_id_; }
    int box_output(int box_id) const;
    const SubAssembly& wire_members(int wire_id) const;

    Plan build();

private:
    Plan plan_;
    std::set<int> used_box_ids_;
    int next_box_id_ = 1;
    bool built_ = false;

    const Wire& claim_wire(int wire_id, int consumer_box);
    int add_output_wire(SubAssembly members, int producer_box);
};

// Splices every black box inline, preserving join ids. Throws
// StructuralError when an inner plan's boundary does not match its box.
Plan flatten(const Plan& plan);

// Joins at every nesting depth.
std::size_t total_join_count(const Plan& plan);

struct Violation {
    enum class Code {
        structure,            // could not even flatten
        inputs_mismatch,      // plan inputs are not the singletons of the graph
        output_mismatch,      // plan output is not the whole node set
        join_overlap,         // join inputs share members
        join_bad_union,       // join output is not the union of its inputs
        join_no_edge,         // no support edge between the two sides
        join_bad_justification,  // recorded edge missing from the graph or not straddling
        cycle,                // box dependencies are cyclic
    };
    Code code;
    int box_id = -1;  // -1 for plan-level violations
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

// Checks that the plan assembles exactly the given graph: singleton
// inputs, full output, and every join glued across at least one support
// edge. Violations are reported, not thrown.
ValidationReport validate_plan(const Plan& plan, const ConnectivityGraph& g);

std::string plan_to_json(const Plan& plan);
Plan plan_from_json(const std::string& text);
std::string plan_to_dot(const Plan& plan);

}  // namespace brickplan

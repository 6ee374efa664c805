#pragma once

#include <string>
#include <vector>

#include "brickplan/community.hpp"
#include "brickplan/connectivity.hpp"
#include "brickplan/wiring.hpp"

namespace brickplan {

enum class Strategy { sequential, parallel };

// Order in which support edges drive the union scan. Topological order
// (position of the source, then of the target) is the default; raw id
// order is available for comparison.
enum class EdgeOrder { topological, by_id };

struct PlannerConfig {
    Strategy strategy = Strategy::sequential;
    EdgeOrder edge_order = EdgeOrder::topological;
    CommunityConfig community;  // parallel strategy only
};

struct PlanResult {
    Plan plan;
    // The graph the plan assembles. For the parallel strategy this is the
    // input graph augmented with the fresh ground nodes that anchor each
    // community, so validation and simulation run against it.
    ConnectivityGraph graph;
    Partition partition;  // empty for the sequential strategy
    std::vector<std::string> warnings;
};

// One join per support edge that still merges two sub-assemblies, scanning
// edges in the configured order. Produces exactly |V|-1 joins. The graph
// must be grounded, acyclic and one connected assembly.
Plan sequential_plan(const ConnectivityGraph& g, EdgeOrder order = EdgeOrder::topological);

// Plans every community as its own black-boxed sequential sub-plan over
// freshly grounded sub-assemblies, then joins the boxes with a union scan
// over the quotient graph.
PlanResult parallel_plan(const ConnectivityGraph& g, const Partition& partition,
                         EdgeOrder order = EdgeOrder::topological);

// Dispatch on cfg.strategy; the parallel branch runs community detection
// first.
PlanResult make_plan(const ConnectivityGraph& g, const PlannerConfig& cfg);

}  // namespace brickplan

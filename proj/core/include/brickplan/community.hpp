#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "brickplan/connectivity.hpp"

namespace brickplan {

// Undirected simple graph over the brick nodes of a support graph; the
// arena where communities are detected. Ground nodes are attached to their
// brick's community afterwards.
struct BrickGraph {
    std::vector<int> nodes;   // sorted ids
    std::vector<Edge> edges;  // from < to, sorted, unique

    static BrickGraph from_connectivity(const ConnectivityGraph& g);
    std::vector<std::vector<int>> components() const;
};

// Shortest-path edge betweenness; each unordered node pair contributes 1
// split across its shortest paths.
std::map<Edge, double> edge_betweenness(const BrickGraph& g);

// Newman modularity of a partition, with `resolution` scaling the expected
// degree term.
double modularity(const BrickGraph& g, const std::vector<std::vector<int>>& communities,
                  double resolution = 1.0);

struct DendrogramStep {
    Edge removed;  // from < to
    double betweenness;
    int components_after;
    double modularity_after;
    std::vector<std::vector<int>> partition_after;
};

// Removes the highest-betweenness edge (ties: smallest (from, to)) until
// none remain, recording the partition after every removal. Modularity is
// always measured on the original graph.
std::vector<DendrogramStep> girvan_newman_dendrogram(const BrickGraph& g);

// Three-phase community refinement (local moving, refinement, aggregation)
// optimizing modularity. Deterministic for a fixed seed: node visit orders
// come from the seeded generator, all tie-breaks are by smallest index.
std::vector<std::vector<int>> leiden_communities(const BrickGraph& g, unsigned seed,
                                                 double resolution = 1.0);

enum class CommunityMethod { girvan_newman, leiden };

struct CommunityConfig {
    CommunityMethod method = CommunityMethod::girvan_newman;
    // Girvan-Newman stops at this many communities instead of the
    // modularity peak. Must lie in [2, brick count].
    std::optional<int> target_communities;
    unsigned seed = 0;
    double resolution = 1.0;
};

struct Partition {
    std::vector<std::vector<int>> communities;  // sorted members, ordered by min member
    std::string method;
    unsigned seed = 0;
};

// Runs the configured method on the brick graph of g and attaches every
// ground node to the community of the brick it supports.
Partition detect_communities(const ConnectivityGraph& g, const CommunityConfig& cfg);

}  // namespace brickplan

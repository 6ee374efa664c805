#pragma once

#include <map>
#include <string>
#include <vector>

#include "brickplan/ldraw.hpp"

namespace brickplan {

enum class NodeKind { brick, ground };

struct GraphNode {
    int id = 0;
    NodeKind kind = NodeKind::brick;

    friend bool operator==(const GraphNode&, const GraphNode&) = default;
};

// Directed support edge: `from` carries `to`.
struct Edge {
    int from = 0;
    int to = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Support graph of a model. Brick ids are 1..brick_count in file order;
// ground node ids continue above brick_count. Nodes are sorted by id and
// edges by (from, to).
struct ConnectivityGraph {
    std::string model;
    int brick_count = 0;
    std::vector<GraphNode> nodes;
    std::vector<Edge> edges;

    const GraphNode* find_node(int id) const;
    bool is_ground(int id) const;
    int ground_count() const;
    int max_node_id() const;
    std::vector<int> node_ids() const;

    friend bool operator==(const ConnectivityGraph&, const ConnectivityGraph&) = default;
};

// True when b rests on a: b's bottom face is exactly a's top face and their
// oriented footprints overlap with positive area (touching edges do not
// count). Exact rational comparison, no tolerance.
bool vertical_contact(const LegoObject& a, const LegoObject& b);

// All pairwise support relations of the model. Throws PlanningError when
// the model has no bricks.
ConnectivityGraph build_graph(const ModelBOM& bom);

// Adds one ground node per brick with no supporter, in ascending brick id
// order, with ids continuing after the current maximum. The input must not
// already contain ground nodes.
ConnectivityGraph add_ground_nodes(const ConnectivityGraph& g);

std::map<int, int> in_degrees(const ConnectivityGraph& g);
std::map<int, std::vector<int>> undirected_adjacency(const ConnectivityGraph& g);

// Undirected components as sorted id lists, ordered by smallest member.
std::vector<std::vector<int>> connected_components(const ConnectivityGraph& g);
bool is_connected(const ConnectivityGraph& g);

// Kahn's algorithm, always taking the smallest available node id. Throws
// PlanningError on cycles.
std::vector<int> topological_order(const ConnectivityGraph& g);

std::string graph_to_json(const ConnectivityGraph& g);
ConnectivityGraph graph_from_json(const std::string& text);
std::string graph_to_dot(const ConnectivityGraph& g);

}  // namespace brickplan

#include "brickplan/connectivity.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "brickplan/errors.hpp"
#include "brickplan/union_find.hpp"

namespace brickplan {

const GraphNode* ConnectivityGraph::find_node(int id) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), id,
                               [](const GraphNode& n, int v) { return n.id < v; });
    if (it == nodes.end() || it->id != id) return nullptr;
    return &*it;
}

bool ConnectivityGraph::is_ground(int id) const {
    const GraphNode* n = find_node(id);
    return n && n->kind == NodeKind::ground;
}

int ConnectivityGraph::ground_count() const {
    int count = 0;
    for (const GraphNode& n : nodes)
        if (n.kind == NodeKind::ground) ++count;
    return count;
}

int ConnectivityGraph::max_node_id() const {
    return nodes.empty() ? 0 : nodes.back().id;
}

std::vector<int> ConnectivityGraph::node_ids() const {
    std::vector<int> ids;
    ids.reserve(nodes.size());
    for (const GraphNode& n : nodes) ids.push_back(n.id);
    return ids;
}

bool vertical_contact(const LegoObject& a, const LegoObject& b) {
    if (top_y(a) != bottom_y(b)) return false;
    const Footprint fa = oriented_footprint(a);
    const Footprint fb = oriented_footprint(b);
    // Strict overlap, doubled to stay integral: |ax-bx|*2 < extent_a+extent_b.
    if (!(abs(a.pos[0] - b.pos[0]) * Rational(2) < Rational(fa.along_x + fb.along_x)))
        return false;
    return abs(a.pos[2] - b.pos[2]) * Rational(2) < Rational(fa.along_z + fb.along_z);
}

ConnectivityGraph build_graph(const ModelBOM& bom) {
    if (bom.objects.empty()) throw PlanningError("model has no bricks");
    ConnectivityGraph g;
    g.model = bom.name;
    g.brick_count = static_cast<int>(bom.objects.size());
    for (const LegoObject& obj : bom.objects) g.nodes.push_back({obj.id, NodeKind::brick});
    for (const LegoObject& a : bom.objects) {
        for (const LegoObject& b : bom.objects) {
            if (a.id == b.id) continue;
            if (vertical_contact(a, b)) g.edges.push_back({a.id, b.id});
        }
    }
    std::sort(g.edges.begin(), g.edges.end());
    return g;
}

ConnectivityGraph add_ground_nodes(const ConnectivityGraph& g) {
    for (const GraphNode& n : g.nodes)
        if (n.kind == NodeKind::ground)
            throw StructuralError("graph already contains ground nodes");
    ConnectivityGraph out = g;
    const std::map<int, int> degree = in_degrees(g);
    int next_id = g.max_node_id();
    for (const GraphNode& n : g.nodes) {
        if (degree.at(n.id) > 0) continue;
        const int ground = ++next_id;
        out.nodes.push_back({ground, NodeKind::ground});
        out.edges.push_back({ground, n.id});
    }
    std::sort(out.edges.begin(), out.edges.end());
    return out;
}

std::map<int, int> in_degrees(const ConnectivityGraph& g) {
    std::map<int, int> degree;
    for (const GraphNode& n : g.nodes) degree[n.id] = 0;
    for (const Edge& e : g.edges) ++degree[e.to];
    return degree;
}

std::map<int, std::vector<int>> undirected_adjacency(const ConnectivityGraph& g) {
    std::map<int, std::vector<int>> adj;
    for (const GraphNode& n : g.nodes) adj[n.id];
    for (const Edge& e : g.edges) {
        adj[e.from].push_back(e.to);
        adj[e.to].push_back(e.from);
    }
    for (auto& [id, neighbours] : adj) std::sort(neighbours.begin(), neighbours.end());
    return adj;
}

std::vector<std::vector<int>> connected_components(const ConnectivityGraph& g) {
    std::map<int, std::size_t> index;
    for (const GraphNode& n : g.nodes) index.emplace(n.id, index.size());
    UnionFind uf(g.nodes.size());
    for (const Edge& e : g.edges) uf.unite(index.at(e.from), index.at(e.to));
    std::map<std::size_t, std::vector<int>> by_root;
    for (const GraphNode& n : g.nodes) by_root[uf.find(index.at(n.id))].push_back(n.id);
    std::vector<std::vector<int>> components;
    components.reserve(by_root.size());
    for (auto& [root, members] : by_root) components.push_back(std::move(members));
    std::sort(components.begin(), components.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return components;
}

bool is_connected(const ConnectivityGraph& g) {
    return connected_components(g).size() == 1;
}

std::vector<int> topological_order(const ConnectivityGraph& g) {
    std::map<int, int> degree = in_degrees(g);
    std::map<int, std::vector<int>> successors;
    for (const Edge& e : g.edges) successors[e.from].push_back(e.to);
    std::priority_queue<int, std::vector<int>, std::greater<>> ready;
    for (const auto& [id, deg] : degree)
        if (deg == 0) ready.push(id);
    std::vector<int> order;
    order.reserve(g.nodes.size());
    while (!ready.empty()) {
        const int id = ready.top();
        ready.pop();
        order.push_back(id);
        for (const int next : successors[id])
            if (--degree[next] == 0) ready.push(next);
    }
    if (order.size() != g.nodes.size()) throw PlanningError("support graph has a cycle");
    return order;
}

std::string graph_to_json(const ConnectivityGraph& g) {
    nlohmann::ordered_json doc;
    doc["model"] = g.model;
    doc["brick_count"] = g.brick_count;
    doc["nodes"] = nlohmann::ordered_json::array();
    for (const GraphNode& n : g.nodes)
        doc["nodes"].push_back(
            {{"id", n.id}, {"kind", n.kind == NodeKind::ground ? "ground" : "brick"}});
    doc["edges"] = nlohmann::ordered_json::array();
    for (const Edge& e : g.edges) doc["edges"].push_back({{"from", e.from}, {"to", e.to}});
    return doc.dump(2) + "\n";
}

ConnectivityGraph graph_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("graph: ") + e.what());
    }
    ConnectivityGraph g;
    try {
        g.model = doc.value("model", "");
        g.brick_count = doc.at("brick_count").get<int>();
        for (const auto& item : doc.at("nodes")) {
            const std::string kind = item.at("kind").get<std::string>();
            if (kind != "brick" && kind != "ground")
                throw ParseError("graph: unknown node kind '" + kind + "'");
            g.nodes.push_back(
                {item.at("id").get<int>(), kind == "ground" ? NodeKind::ground : NodeKind::brick});
        }
        for (const auto& item : doc.at("edges"))
            g.edges.push_back({item.at("from").get<int>(), item.at("to").get<int>()});
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("graph: ") + e.what());
    }
    std::sort(g.nodes.begin(), g.nodes.end(),
              [](const GraphNode& a, const GraphNode& b) { return a.id < b.id; });
    std::sort(g.edges.begin(), g.edges.end());
    std::set<int> ids;
    int bricks = 0;
    for (const GraphNode& n : g.nodes) {
        if (n.id <= 0 || !ids.insert(n.id).second)
            throw ParseError("graph: node ids must be positive and unique");
        if ((n.kind == NodeKind::ground) != (n.id > g.brick_count))
            throw ParseError("graph: ground nodes must have ids above brick_count");
        if (n.kind == NodeKind::brick) ++bricks;
    }
    if (bricks != g.brick_count)
        throw ParseError("graph: brick_count does not match the node list");
    for (const Edge& e : g.edges)
        if (!ids.count(e.from) || !ids.count(e.to))
            throw ParseError("graph: edge references unknown node");
    return g;
}

std::string graph_to_dot(const ConnectivityGraph& g) {
    std::ostringstream out;
    out << "digraph connectivity {\n";
    out << "  rankdir=BT;\n";
    for (const GraphNode& n : g.nodes) {
        if (n.kind == NodeKind::ground)
            out << "  n" << n.id << " [shape=box, style=filled, fillcolor=lightgray, label=\"G"
                << n.id << "\"];\n";
        else
            out << "  n" << n.id << " [shape=circle, label=\"" << n.id << "\"];\n";
    }
    for (const Edge& e : g.edges) out << "  n" << e.from << " -> n" << e.to << ";\n";
    out << "}\n";
    return out.str();
}

}  // namespace brickplan

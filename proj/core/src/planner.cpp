#include "brickplan/planner.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

#include "brickplan/errors.hpp"
#include "brickplan/union_find.hpp"

namespace brickplan {

namespace {

void require_buildable(const ConnectivityGraph& g) {
    const std::map<int, int> degree = in_degrees(g);
    bool any_ground = false;
    for (const GraphNode& n : g.nodes) {
        if (n.kind == NodeKind::ground) {
            any_ground = true;
            continue;
        }
        if (degree.at(n.id) == 0)
            throw PlanningError("graph is not grounded: brick " + std::to_string(n.id) +
                                " has no support");
    }
    if (!any_ground) throw PlanningError("graph is not grounded: no ground nodes");
    if (!is_connected(g)) throw PlanningError("model is not a single connected assembly");
    topological_order(g);  // throws on cycles
}

std::vector<Edge> scan_order(const ConnectivityGraph& g, EdgeOrder order) {
    std::vector<Edge> edges = g.edges;
    if (order == EdgeOrder::topological) {
        std::map<int, int> position;
        int index = 0;
        for (const int id : topological_order(g)) position[id] = index++;
        std::sort(edges.begin(), edges.end(), [&](const Edge& a, const Edge& b) {
            return std::pair(position.at(a.from), position.at(a.to)) <
                   std::pair(position.at(b.from), position.at(b.to));
        });
    }  // by_id: already sorted by (from, to)
    return edges;
}

std::vector<int> ground_ids(const ConnectivityGraph& g) {
    std::vector<int> out;
    for (const GraphNode& n : g.nodes)
        if (n.kind == NodeKind::ground) out.push_back(n.id);
    return out;
}

// The union scan shared by both strategies, writing into an existing
// builder. `wire_of` maps node id to the wire currently carrying it.
void union_scan(PlanBuilder& builder, const ConnectivityGraph& g, const std::vector<Edge>& edges,
                std::map<int, int>& wire_of) {
    std::map<int, std::size_t> index;
    for (const GraphNode& n : g.nodes) index.emplace(n.id, index.size());
    UnionFind uf(g.nodes.size());
    std::map<std::size_t, int> component_wire;
    for (const GraphNode& n : g.nodes) component_wire[uf.find(index.at(n.id))] = wire_of.at(n.id);
    for (const Edge& e : edges) {
        const std::size_t a = uf.find(index.at(e.from));
        const std::size_t b = uf.find(index.at(e.to));
        if (a == b) continue;
        const int wa = component_wire.at(a);
        const int wb = component_wire.at(b);
        const int out = builder.add_join(wa, wb, {e});
        uf.unite(a, b);
        component_wire[uf.find(a)] = out;
    }
}

Plan sequential_plan_into(PlanBuilder& builder, const ConnectivityGraph& g, EdgeOrder order) {
    std::map<int, int> wire_of;
    for (const GraphNode& n : g.nodes) wire_of[n.id] = builder.add_input(SubAssembly::singleton(n.id));
    union_scan(builder, g, scan_order(g, order), wire_of);
    builder.set_ground_nodes(ground_ids(g));
    return builder.build();
}

ConnectivityGraph induced_subgraph(const ConnectivityGraph& g, const std::vector<int>& members,
                                   const std::string& name) {
    const std::set<int> in(members.begin(), members.end());
    ConnectivityGraph sub;
    sub.model = name;
    for (const GraphNode& n : g.nodes) {
        if (!in.count(n.id)) continue;
        sub.nodes.push_back(n);
        if (n.kind == NodeKind::brick) ++sub.brick_count;
    }
    for (const Edge& e : g.edges)
        if (in.count(e.from) && in.count(e.to)) sub.edges.push_back(e);
    return sub;
}

}  // namespace

Plan sequential_plan(const ConnectivityGraph& g, EdgeOrder order) {
    require_buildable(g);
    PlanBuilder builder;
    return sequential_plan_into(builder, g, order);
}

PlanResult parallel_plan(const ConnectivityGraph& g, const Partition& partition,
                         EdgeOrder order) {
    require_buildable(g);

    // The partition must cover the node set exactly.
    std::set<int> covered;
    for (const auto& community : partition.communities)
        for (const int id : community)
            if (!covered.insert(id).second)
                throw ConfigError("partition repeats node " + std::to_string(id));
    std::set<int> all;
    for (const int id : g.node_ids()) all.insert(id);
    if (covered != all) throw ConfigError("partition does not cover the node set exactly");

    PlanResult result;
    result.partition = partition;

    // Communities can come back disconnected in the support graph; each
    // connected piece becomes its own buildable unit.
    std::vector<std::vector<int>> units;
    for (std::size_t c = 0; c < partition.communities.size(); ++c) {
        const ConnectivityGraph sub = induced_subgraph(g, partition.communities[c], "");
        std::vector<std::vector<int>> pieces = connected_components(sub);
        if (pieces.size() > 1)
            result.warnings.push_back("community " + std::to_string(c) + " splits into " +
                                      std::to_string(pieces.size()) + " connected pieces");
        for (auto& piece : pieces) units.push_back(std::move(piece));
    }
    std::sort(units.begin(), units.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });

    // Re-ground every unit: bricks with no supporter inside their unit get
    // a fresh ground node, appended to the graph the plan builds.
    ConnectivityGraph aug = g;
    int next_id = g.max_node_id();
    for (auto& unit : units) {
        const std::set<int> in(unit.begin(), unit.end());
        for (const int id : std::vector<int>(unit.begin(), unit.end())) {
            const GraphNode* node = aug.find_node(id);
            if (node->kind != NodeKind::brick) continue;
            bool supported = false;
            for (const Edge& e : g.edges)
                if (e.to == id && in.count(e.from)) {
                    supported = true;
                    break;
                }
            if (supported) continue;
            const int ground = ++next_id;
            aug.nodes.push_back({ground, NodeKind::ground});
            aug.edges.push_back({ground, id});
            unit.push_back(ground);
        }
        std::sort(unit.begin(), unit.end());
    }
    std::sort(aug.edges.begin(), aug.edges.end());

    // Inner sequential plans, then one black box per unit, then the union
    // scan over the quotient graph. A shared counter keeps box ids unique
    // across every level.
    std::vector<Plan> inner_plans;
    int next_box = 1;
    for (std::size_t u = 0; u < units.size(); ++u) {
        const ConnectivityGraph sub =
            induced_subgraph(aug, units[u], g.model + "/unit" + std::to_string(u));
        PlanBuilder inner(next_box);
        inner_plans.push_back(sequential_plan_into(inner, sub, order));
        next_box = inner.next_box_id();
    }

    PlanBuilder builder(next_box);
    std::map<int, int> wire_of;
    for (const GraphNode& n : aug.nodes)
        wire_of[n.id] = builder.add_input(SubAssembly::singleton(n.id));

    std::map<int, std::size_t> unit_of;
    for (std::size_t u = 0; u < units.size(); ++u)
        for (const int id : units[u]) unit_of[id] = u;

    std::vector<int> unit_wire(units.size(), -1);
    for (std::size_t u = 0; u < units.size(); ++u) {
        std::vector<int> inputs;
        inputs.reserve(units[u].size());
        for (const int id : units[u]) inputs.push_back(wire_of.at(id));
        unit_wire[u] = builder.add_black_box("C" + std::to_string(u),
                                             std::move(inner_plans[u]), std::move(inputs));
    }

    // Quotient scan: edges between units, ordered by a cycle-tolerant
    // topological pass over the quotient graph.
    std::map<std::pair<std::size_t, std::size_t>, std::vector<Edge>> quotient;
    for (const Edge& e : aug.edges) {
        const std::size_t a = unit_of.at(e.from);
        const std::size_t b = unit_of.at(e.to);
        if (a != b) quotient[{a, b}].push_back(e);
    }
    std::vector<std::size_t> qorder;
    {
        std::map<std::size_t, int> degree;
        std::map<std::size_t, std::vector<std::size_t>> succ;
        for (std::size_t u = 0; u < units.size(); ++u) degree[u] = 0;
        for (const auto& [pair, edges] : quotient) {
            ++degree[pair.second];
            succ[pair.first].push_back(pair.second);
        }
        std::set<std::size_t> remaining;
        for (std::size_t u = 0; u < units.size(); ++u) remaining.insert(u);
        std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
        for (const auto& [u, deg] : degree)
            if (deg == 0) ready.push(u);
        while (!remaining.empty()) {
            std::size_t u;
            if (!ready.empty()) {
                u = ready.top();
                ready.pop();
                if (!remaining.count(u)) continue;
            } else {
                u = *remaining.begin();  // support cycle between units: break it
            }
            remaining.erase(u);
            qorder.push_back(u);
            for (const std::size_t next : succ[u])
                if (--degree[next] == 0 && remaining.count(next)) ready.push(next);
        }
    }
    std::map<std::size_t, int> qposition;
    for (std::size_t i = 0; i < qorder.size(); ++i) qposition[qorder[i]] = static_cast<int>(i);
    std::vector<std::pair<std::size_t, std::size_t>> qedges;
    for (const auto& [pair, edges] : quotient) qedges.push_back(pair);
    std::sort(qedges.begin(), qedges.end(), [&](const auto& a, const auto& b) {
        return std::pair(qposition.at(a.first), qposition.at(a.second)) <
               std::pair(qposition.at(b.first), qposition.at(b.second));
    });

    UnionFind uf(units.size());
    std::map<std::size_t, int> component_wire;
    for (std::size_t u = 0; u < units.size(); ++u) component_wire[u] = unit_wire[u];
    for (const auto& [qa, qb] : qedges) {
        const std::size_t a = uf.find(qa);
        const std::size_t b = uf.find(qb);
        if (a == b) continue;
        const int out = builder.add_join(component_wire.at(a), component_wire.at(b),
                                         quotient.at({qa, qb}));
        uf.unite(a, b);
        component_wire[uf.find(a)] = out;
    }

    builder.set_ground_nodes(ground_ids(aug));
    result.plan = builder.build();
    result.graph = std::move(aug);
    return result;
}

PlanResult make_plan(const ConnectivityGraph& g, const PlannerConfig& cfg) {
    if (cfg.strategy == Strategy::sequential) {
        PlanResult result;
        result.plan = sequential_plan(g, cfg.edge_order);
        result.graph = g;
        return result;
    }
    std::vector<std::string> warnings;
    if (cfg.community.method == CommunityMethod::leiden && cfg.community.target_communities)
        warnings.push_back("leiden ignores the community target; using its own partition");
    const Partition partition = detect_communities(g, cfg.community);
    PlanResult result = parallel_plan(g, partition, cfg.edge_order);
    result.warnings.insert(result.warnings.begin(), warnings.begin(), warnings.end());
    return result;
}

}  // namespace brickplan

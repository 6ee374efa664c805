#include "brickplan/community.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <numeric>
#include <queue>
#include <random>
#include <set>

#include "brickplan/errors.hpp"
#include "brickplan/union_find.hpp"

namespace brickplan {

namespace {

std::vector<std::vector<int>> components_of(const std::vector<int>& nodes,
                                            const std::vector<Edge>& edges) {
    std::map<int, std::size_t> index;
    for (const int id : nodes) index.emplace(id, index.size());
    UnionFind uf(nodes.size());
    for (const Edge& e : edges) uf.unite(index.at(e.from), index.at(e.to));
    std::map<std::size_t, std::vector<int>> by_root;
    for (const int id : nodes) by_root[uf.find(index.at(id))].push_back(id);
    std::vector<std::vector<int>> out;
    for (auto& [root, members] : by_root) out.push_back(std::move(members));
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

}  // namespace

BrickGraph BrickGraph::from_connectivity(const ConnectivityGraph& g) {
    BrickGraph bg;
    for (const GraphNode& n : g.nodes)
        if (n.kind == NodeKind::brick) bg.nodes.push_back(n.id);
    std::set<Edge> edges;
    for (const Edge& e : g.edges) {
        if (g.is_ground(e.from) || g.is_ground(e.to)) continue;
        edges.insert({std::min(e.from, e.to), std::max(e.from, e.to)});
    }
    bg.edges.assign(edges.begin(), edges.end());
    return bg;
}

std::vector<std::vector<int>> BrickGraph::components() const {
    return components_of(nodes, edges);
}

std::map<Edge, double> edge_betweenness(const BrickGraph& g) {
    const std::size_t n = g.nodes.size();
    std::map<int, std::size_t> index;
    for (const int id : g.nodes) index.emplace(id, index.size());
    std::vector<std::vector<std::size_t>> adj(n);
    for (const Edge& e : g.edges) {
        adj[index.at(e.from)].push_back(index.at(e.to));
        adj[index.at(e.to)].push_back(index.at(e.from));
    }
    std::map<Edge, double> bt;
    for (const Edge& e : g.edges) bt[e] = 0.0;

    for (std::size_t s = 0; s < n; ++s) {
        std::vector<int> dist(n, -1);
        std::vector<double> sigma(n, 0.0);
        std::vector<std::vector<std::size_t>> pred(n);
        std::vector<std::size_t> order;
        dist[s] = 0;
        sigma[s] = 1.0;
        std::deque<std::size_t> queue{s};
        while (!queue.empty()) {
            const std::size_t v = queue.front();
            queue.pop_front();
            order.push_back(v);
            for (const std::size_t w : adj[v]) {
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if (dist[w] == dist[v] + 1) {
                    sigma[w] += sigma[v];
                    pred[w].push_back(v);
                }
            }
        }
        std::vector<double> delta(n, 0.0);
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const std::size_t w = *it;
            for (const std::size_t v : pred[w]) {
                const double c = sigma[v] / sigma[w] * (1.0 + delta[w]);
                const int a = g.nodes[std::min(v, w)];
                const int b = g.nodes[std::max(v, w)];
                bt[{std::min(a, b), std::max(a, b)}] += c;
                delta[v] += c;
            }
        }
    }
    for (auto& [e, value] : bt) value /= 2.0;  // both endpoints acted as source
    return bt;
}

double modularity(const BrickGraph& g, const std::vector<std::vector<int>>& communities,
                  double resolution) {
    if (g.edges.empty()) return 0.0;
    std::map<int, int> comm;
    for (std::size_t c = 0; c < communities.size(); ++c)
        for (const int id : communities[c]) comm[id] = static_cast<int>(c);
    std::map<int, int> degree;
    for (const int id : g.nodes) degree[id] = 0;
    std::vector<double> internal(communities.size(), 0.0);
    for (const Edge& e : g.edges) {
        ++degree[e.from];
        ++degree[e.to];
        if (comm.at(e.from) == comm.at(e.to)) internal[static_cast<std::size_t>(comm.at(e.from))] += 1.0;
    }
    std::vector<double> total(communities.size(), 0.0);
    for (const int id : g.nodes) total[static_cast<std::size_t>(comm.at(id))] += degree.at(id);
    const double m = static_cast<double>(g.edges.size());
    double q = 0.0;
    for (std::size_t c = 0; c < communities.size(); ++c) {
        const double frac = total[c] / (2.0 * m);
        q += internal[c] / m - resolution * frac * frac;
    }
    return q;
}

std::vector<DendrogramStep> girvan_newman_dendrogram(const BrickGraph& g) {
    std::vector<DendrogramStep> steps;
    BrickGraph working = g;
    while (!working.edges.empty()) {
        const std::map<Edge, double> bt = edge_betweenness(working);
        Edge best = working.edges.front();
        double best_value = -1.0;
        for (const Edge& e : working.edges) {
            const double value = bt.at(e);
            if (value > best_value) {  // edges are sorted, ties keep the smallest (from, to)
                best_value = value;
                best = e;
            }
        }
        working.edges.erase(std::find(working.edges.begin(), working.edges.end(), best));
        DendrogramStep step;
        step.removed = best;
        step.betweenness = best_value;
        step.partition_after = working.components();
        step.components_after = static_cast<int>(step.partition_after.size());
        step.modularity_after = modularity(g, step.partition_after);
        steps.push_back(std::move(step));
    }
    return steps;
}

namespace {

// Weighted aggregate graph for the refinement loop. Nodes are 0..n-1.
struct WeightedGraph {
    std::vector<std::vector<std::pair<std::size_t, double>>> adj;  // no self loops here
    std::vector<double> self_loop;
    std::vector<double> strength;  // incident weight + twice the self loop
    double two_m = 0.0;            // total degree

    std::size_t size() const { return adj.size(); }
};

WeightedGraph initial_graph(const BrickGraph& g, const std::map<int, std::size_t>& index) {
    WeightedGraph wg;
    wg.adj.resize(g.nodes.size());
    wg.self_loop.assign(g.nodes.size(), 0.0);
    wg.strength.assign(g.nodes.size(), 0.0);
    for (const Edge& e : g.edges) {
        const std::size_t a = index.at(e.from);
        const std::size_t b = index.at(e.to);
        wg.adj[a].emplace_back(b, 1.0);
        wg.adj[b].emplace_back(a, 1.0);
        wg.strength[a] += 1.0;
        wg.strength[b] += 1.0;
        wg.two_m += 2.0;
    }
    return wg;
}

std::vector<std::size_t> shuffled_indices(std::size_t n, std::mt19937& rng) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = rng() % i;
        std::swap(order[i - 1], order[j]);
    }
    return order;
}

// Queue-based local moving. Returns true when any node changed community.
bool local_move(const WeightedGraph& wg, std::vector<int>& comm, std::mt19937& rng,
                double resolution) {
    std::map<int, double> total;
    for (std::size_t v = 0; v < wg.size(); ++v) total[comm[v]] += wg.strength[v];
    std::deque<std::size_t> queue;
    std::vector<char> queued(wg.size(), 1);
    for (const std::size_t v : shuffled_indices(wg.size(), rng)) queue.push_back(v);
    int next_label = 0;
    for (const int c : comm) next_label = std::max(next_label, c + 1);
    bool any = false;
    while (!queue.empty()) {
        const std::size_t v = queue.front();
        queue.pop_front();
        queued[v] = 0;
        const int old = comm[v];
        total[old] -= wg.strength[v];
        std::map<int, double> k_to;
        for (const auto& [w, weight] : wg.adj[v]) k_to[comm[w]] += weight;
        const auto gain = [&](int c) {
            const double k = k_to.count(c) ? k_to.at(c) : 0.0;
            return k - resolution * wg.strength[v] * total[c] / wg.two_m;
        };
        // Move only on strict improvement over staying; candidate labels are
        // visited in ascending order, so the smallest label wins ties.
        const double stay = gain(old);
        int best = old;
        double best_rel = 0.0;
        for (const auto& [c, k] : k_to) {
            if (c == old) continue;
            const double rel = gain(c) - stay;
            if (rel > best_rel + 1e-12) {
                best = c;
                best_rel = rel;
            }
        }
        if (-stay > best_rel + 1e-12) best = next_label++;  // isolate v
        total[best] += wg.strength[v];
        if (best != old) {
            comm[v] = best;
            any = true;
            for (const auto& [w, weight] : wg.adj[v]) {
                if (!queued[w] && comm[w] != best) {
                    queue.push_back(w);
                    queued[w] = 1;
                }
            }
        }
    }
    return any;
}

// Splits every community into well-connected sub-communities: nodes start
// as singletons and greedily merge within their community by best
// modularity gain.
std::vector<int> refine(const WeightedGraph& wg, const std::vector<int>& comm,
                        std::mt19937& rng, double resolution) {
    std::vector<int> refined(wg.size());
    std::iota(refined.begin(), refined.end(), 0);
    std::vector<double> total(wg.size());
    std::vector<int> cluster_size(wg.size(), 1);
    for (std::size_t v = 0; v < wg.size(); ++v) total[v] = wg.strength[v];
    for (const std::size_t v : shuffled_indices(wg.size(), rng)) {
        if (cluster_size[static_cast<std::size_t>(refined[v])] != 1) continue;  // only lone nodes move
        std::map<int, double> k_to;
        for (const auto& [w, weight] : wg.adj[v])
            if (comm[w] == comm[v]) k_to[refined[w]] += weight;
        const int own = refined[v];
        int best = own;
        double best_gain = 0.0;
        for (const auto& [c, k] : k_to) {
            if (c == own) continue;
            const double value =
                k - resolution * wg.strength[v] * total[static_cast<std::size_t>(c)] / wg.two_m;
            if (value > best_gain + 1e-12) {
                best = c;
                best_gain = value;
            }
        }
        if (best != own) {
            total[static_cast<std::size_t>(best)] += wg.strength[v];
            total[static_cast<std::size_t>(own)] -= wg.strength[v];
            --cluster_size[static_cast<std::size_t>(own)];
            ++cluster_size[static_cast<std::size_t>(best)];
            refined[v] = best;
        }
    }
    return refined;
}

std::vector<int> dense_labels(const std::vector<int>& labels) {
    std::map<int, int> remap;
    std::vector<int> out(labels.size());
    for (std::size_t v = 0; v < labels.size(); ++v) {
        auto [it, inserted] = remap.emplace(labels[v], static_cast<int>(remap.size()));
        out[v] = it->second;
    }
    return out;
}

}  // namespace

std::vector<std::vector<int>> leiden_communities(const BrickGraph& g, unsigned seed,
                                                 double resolution) {
    if (g.nodes.empty()) return {};
    std::map<int, std::size_t> index;
    for (const int id : g.nodes) index.emplace(id, index.size());
    WeightedGraph wg = initial_graph(g, index);
    if (wg.two_m == 0.0) {
        // No edges: every node is its own community.
        std::vector<std::vector<int>> out;
        for (const int id : g.nodes) out.push_back({id});
        return out;
    }
    std::mt19937 rng(seed);
    std::vector<std::vector<int>> members(g.nodes.size());  // aggregate node -> original ids
    for (std::size_t v = 0; v < g.nodes.size(); ++v) members[v] = {g.nodes[v]};
    std::vector<int> comm(wg.size());
    std::iota(comm.begin(), comm.end(), 0);

    for (int round = 0; round < 64; ++round) {
        local_move(wg, comm, rng, resolution);
        comm = dense_labels(comm);
        const int k = 1 + *std::max_element(comm.begin(), comm.end());
        if (static_cast<std::size_t>(k) == wg.size()) break;  // all singletons: stable

        std::vector<int> refined = dense_labels(refine(wg, comm, rng, resolution));
        const int rk = 1 + *std::max_element(refined.begin(), refined.end());
        if (static_cast<std::size_t>(rk) == wg.size()) {
            // Refinement kept everything apart; aggregating on communities
            // directly would lose the guarantee, so stop here.
            break;
        }

        // Aggregate on the refined partition.
        WeightedGraph next;
        next.adj.assign(static_cast<std::size_t>(rk), {});
        next.self_loop.assign(static_cast<std::size_t>(rk), 0.0);
        next.strength.assign(static_cast<std::size_t>(rk), 0.0);
        next.two_m = wg.two_m;
        std::map<std::pair<int, int>, double> cross;
        for (std::size_t v = 0; v < wg.size(); ++v) {
            next.self_loop[static_cast<std::size_t>(refined[v])] += wg.self_loop[v];
            for (const auto& [w, weight] : wg.adj[v]) {
                if (w < v) continue;  // each undirected pair once
                if (refined[v] == refined[w])
                    next.self_loop[static_cast<std::size_t>(refined[v])] += weight;
                else
                    cross[{std::min(refined[v], refined[w]), std::max(refined[v], refined[w])}] +=
                        weight;
            }
        }
        for (const auto& [pair, weight] : cross) {
            next.adj[static_cast<std::size_t>(pair.first)].emplace_back(pair.second, weight);
            next.adj[static_cast<std::size_t>(pair.second)].emplace_back(pair.first, weight);
        }
        for (std::size_t v = 0; v < next.size(); ++v) {
            next.strength[v] = 2.0 * next.self_loop[v];
            for (const auto& [w, weight] : next.adj[v]) next.strength[v] += weight;
        }

        std::vector<std::vector<int>> next_members(static_cast<std::size_t>(rk));
        std::vector<int> next_comm(static_cast<std::size_t>(rk), -1);
        for (std::size_t v = 0; v < wg.size(); ++v) {
            auto& bucket = next_members[static_cast<std::size_t>(refined[v])];
            bucket.insert(bucket.end(), members[v].begin(), members[v].end());
            next_comm[static_cast<std::size_t>(refined[v])] = comm[v];
        }
        wg = std::move(next);
        members = std::move(next_members);
        comm = dense_labels(next_comm);
    }

    std::map<int, std::vector<int>> grouped;
    for (std::size_t v = 0; v < wg.size(); ++v) {
        auto& bucket = grouped[comm[v]];
        bucket.insert(bucket.end(), members[v].begin(), members[v].end());
    }
    std::vector<std::vector<int>> out;
    for (auto& [label, ids] : grouped) {
        std::sort(ids.begin(), ids.end());
        out.push_back(std::move(ids));
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

Partition detect_communities(const ConnectivityGraph& g, const CommunityConfig& cfg) {
    const BrickGraph bg = BrickGraph::from_connectivity(g);
    if (cfg.target_communities) {
        const int target = *cfg.target_communities;
        if (target < 2) throw ConfigError("target communities must be at least 2");
        if (target > static_cast<int>(bg.nodes.size()))
            throw ConfigError("target communities exceeds the brick count");
    }

    std::vector<std::vector<int>> communities;
    if (cfg.method == CommunityMethod::girvan_newman) {
        const std::vector<DendrogramStep> steps = girvan_newman_dendrogram(bg);
        if (cfg.target_communities) {
            const int target = *cfg.target_communities;
            bool found = false;
            if (static_cast<int>(bg.components().size()) == target) {
                communities = bg.components();
                found = true;
            }
            for (const DendrogramStep& step : steps) {
                if (found) break;
                if (step.components_after == target) {
                    communities = step.partition_after;
                    found = true;
                }
            }
            if (!found)
                throw ConfigError("girvan-newman cannot reach " + std::to_string(target) +
                                  " communities");
        } else {
            communities = bg.components();
            double best = modularity(bg, communities, cfg.resolution);
            for (const DendrogramStep& step : steps) {
                const double q = modularity(bg, step.partition_after, cfg.resolution);
                if (q > best) {
                    best = q;
                    communities = step.partition_after;
                }
            }
        }
    } else {
        communities = leiden_communities(bg, cfg.seed, cfg.resolution);
    }

    // Attach each ground to the community of the brick it supports.
    std::map<int, std::size_t> community_of;
    for (std::size_t c = 0; c < communities.size(); ++c)
        for (const int id : communities[c]) community_of[id] = c;
    for (const Edge& e : g.edges) {
        if (!g.is_ground(e.from)) continue;
        communities[community_of.at(e.to)].push_back(e.from);
    }
    for (auto& c : communities) std::sort(c.begin(), c.end());
    std::sort(communities.begin(), communities.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });

    Partition p;
    p.communities = std::move(communities);
    p.method = cfg.method == CommunityMethod::girvan_newman ? "girvan-newman" : "leiden";
    p.seed = cfg.seed;
    return p;
}

}  // namespace brickplan

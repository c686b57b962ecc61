#include "gblab/graph.hpp"

#include <deque>
#include <set>
#include <utility>

namespace gblab {

void IndexSet::normalize() {
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

void IndexSet::insert(Index i) {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), i);
    if (it == ids_.end() || *it != i) ids_.insert(it, i);
}

Index WeightedGraph::find_edge(VertexId x, VertexId y) const {
    for (const HalfEdge& h : incident(x))
        if (h.to == y) return h.edge;
    return -1;
}

WeightedGraph build_graph(std::vector<double> vertex_weights,
                          const std::vector<EdgeSpec>& edges,
                          VertexSet frontier,
                          std::vector<std::int64_t> labels) {
    const Index n = static_cast<Index>(vertex_weights.size());
    if (n == 0) throw BadParameter("graph needs at least one vertex");

    for (Index x = 0; x < n; ++x)
        if (!(vertex_weights[static_cast<std::size_t>(x)] > 0.0))
            throw NonPositiveWeight("vertex weight c(" + std::to_string(x) + ") must be positive");

    WeightedGraph g;
    g.c_ = std::move(vertex_weights);
    g.incident_.resize(static_cast<std::size_t>(n));

    std::set<std::pair<VertexId, VertexId>> seen;
    for (const EdgeSpec& e : edges) {
        if (e.tail < 0 || e.tail >= n || e.head < 0 || e.head >= n)
            throw UnknownVertex("edge endpoint out of range");
        if (e.tail == e.head)
            throw LoopEdge("loop at vertex " + std::to_string(e.tail));
        if (!(e.r > 0.0))
            throw NonPositiveWeight("edge weight r(" + std::to_string(e.tail) + "," +
                                    std::to_string(e.head) + ") must be positive");
        auto key = std::minmax(e.tail, e.head);
        if (!seen.insert(key).second)
            throw DuplicateEdge("duplicate edge {" + std::to_string(key.first) + "," +
                                std::to_string(key.second) + "}");
        const Index idx = static_cast<Index>(g.edges_.size());
        g.edges_.push_back({e.tail, e.head, true});
        g.r_.push_back(e.r);
        g.incident_[static_cast<std::size_t>(e.tail)].push_back({idx, true, e.head});
        g.incident_[static_cast<std::size_t>(e.head)].push_back({idx, false, e.tail});
    }

    // connectivity
    std::vector<char> reached(static_cast<std::size_t>(n), 0);
    std::deque<VertexId> queue{0};
    reached[0] = 1;
    Index count = 1;
    while (!queue.empty()) {
        VertexId x = queue.front();
        queue.pop_front();
        for (const HalfEdge& h : g.incident_[static_cast<std::size_t>(x)]) {
            if (!reached[static_cast<std::size_t>(h.to)]) {
                reached[static_cast<std::size_t>(h.to)] = 1;
                ++count;
                queue.push_back(h.to);
            }
        }
    }
    if (count != n) throw Disconnected("graph is not connected");

    for (Index f : frontier) g.check_vertex(f);
    g.frontier_ = std::move(frontier);

    if (labels.empty()) {
        labels.resize(static_cast<std::size_t>(n));
        for (Index x = 0; x < n; ++x) labels[static_cast<std::size_t>(x)] = x;
    } else if (static_cast<Index>(labels.size()) != n) {
        throw BadParameter("label list size does not match vertex count");
    }
    g.labels_ = std::move(labels);
    return g;
}

Index degree(const WeightedGraph& g, VertexId x) { return g.degree(x); }

VertexSet vertex_boundary(const WeightedGraph& g, const VertexSet& K) {
    for (Index x : K) g.check_vertex(x);
    std::vector<Index> out;
    for (Index x : K)
        for (const HalfEdge& h : g.incident(x))
            if (!K.contains(h.to)) out.push_back(h.to);
    return VertexSet(std::move(out));
}

EdgeSet edge_boundary(const WeightedGraph& g, const VertexSet& K) {
    for (Index x : K) g.check_vertex(x);
    std::vector<Index> out;
    for (Index e = 0; e < g.edge_count(); ++e) {
        const auto& oe = g.edge(e);
        if (K.contains(oe.tail) != K.contains(oe.head)) out.push_back(e);
    }
    return EdgeSet(std::move(out));
}

EdgeSet subgraph_edges(const WeightedGraph& g, const VertexSet& K) {
    std::vector<Index> out;
    for (Index e = 0; e < g.edge_count(); ++e) {
        const auto& oe = g.edge(e);
        if (K.contains(oe.tail) && K.contains(oe.head)) out.push_back(e);
    }
    return EdgeSet(std::move(out));
}

GraphSubset combinatorial_neighborhood(const WeightedGraph& g, const VertexSet& K) {
    VertexSet verts = K;
    for (Index x : vertex_boundary(g, K)) verts.insert(x);
    EdgeSet edges = subgraph_edges(g, K);
    for (Index e : edge_boundary(g, K)) edges.insert(e);
    return {std::move(verts), std::move(edges)};
}

std::vector<Index> bfs_distances(const WeightedGraph& g, const VertexSet& sources) {
    std::vector<Index> dist(static_cast<std::size_t>(g.vertex_count()), -1);
    std::deque<VertexId> queue;
    for (Index s : sources) {
        g.check_vertex(s);
        dist[static_cast<std::size_t>(s)] = 0;
        queue.push_back(s);
    }
    while (!queue.empty()) {
        VertexId x = queue.front();
        queue.pop_front();
        for (const HalfEdge& h : g.incident(x)) {
            if (dist[static_cast<std::size_t>(h.to)] < 0) {
                dist[static_cast<std::size_t>(h.to)] = dist[static_cast<std::size_t>(x)] + 1;
                queue.push_back(h.to);
            }
        }
    }
    return dist;
}

VertexSet ball(const WeightedGraph& g, VertexId o, Index n) {
    g.check_vertex(o);
    if (n < 0) throw BadParameter("ball radius must be nonnegative");
    auto dist = bfs_distances(g, VertexSet{o});
    std::vector<Index> out;
    for (Index x = 0; x < g.vertex_count(); ++x)
        if (dist[static_cast<std::size_t>(x)] >= 0 && dist[static_cast<std::size_t>(x)] <= n)
            out.push_back(x);
    return VertexSet(std::move(out));
}

std::vector<VertexSet> exhaustion(const WeightedGraph& g, VertexId o, Index n_max) {
    g.check_vertex(o);
    if (n_max < 0) throw BadParameter("exhaustion radius must be nonnegative");
    std::vector<VertexSet> out;
    out.reserve(static_cast<std::size_t>(n_max) + 1);
    for (Index n = 0; n <= n_max; ++n) out.push_back(ball(g, o, n));
    return out;
}

std::vector<OrientedEdge> shortest_path(const WeightedGraph& g, VertexId x, VertexId y) {
    g.check_vertex(x);
    g.check_vertex(y);
    std::vector<OrientedEdge> path;
    if (x == y) return path;

    auto dist = bfs_distances(g, VertexSet{y});
    VertexId cur = x;
    while (cur != y) {
        // step to the neighbor one hop closer to y, lowest index first
        VertexId best = -1;
        Index best_edge = -1;
        bool best_forward = true;
        for (const HalfEdge& h : g.incident(cur)) {
            if (dist[static_cast<std::size_t>(h.to)] == dist[static_cast<std::size_t>(cur)] - 1) {
                if (best < 0 || h.to < best) {
                    best = h.to;
                    best_edge = h.edge;
                    best_forward = h.forward;
                }
            }
        }
        const auto& oe = g.edge(best_edge);
        path.push_back(best_forward ? oe : oe.reversed());
        cur = best;
    }
    return path;
}

}  // namespace gblab

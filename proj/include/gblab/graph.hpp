#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gblab {

using Index = std::int64_t;
using VertexId = Index;

// ---------------------------------------------------------------------------
// Error taxonomy. Every validation failure throws a typed error so callers
// (and the CLI) can distinguish bad input from solver trouble.
// ---------------------------------------------------------------------------
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonPositiveWeight : Error { using Error::Error; };
struct LoopEdge : Error { using Error::Error; };
struct DuplicateEdge : Error { using Error::Error; };
struct Disconnected : Error { using Error::Error; };
struct UnknownVertex : Error { using Error::Error; };
struct GraphMismatch : Error { using Error::Error; };
struct EmptyAdmissibleSet : Error { using Error::Error; };
struct SolverBreakdown : Error { using Error::Error; };
struct FrontierContamination : Error { using Error::Error; };
struct InsufficientDepth : Error { using Error::Error; };
struct BadParameter : Error { using Error::Error; };
struct CoreTooSmall : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

/// Sorted, duplicate-free set of dense indices (vertices or canonical edges).
class IndexSet {
public:
    IndexSet() = default;
    IndexSet(std::initializer_list<Index> ids) : ids_(ids) { normalize(); }
    explicit IndexSet(std::vector<Index> ids) : ids_(std::move(ids)) { normalize(); }

    bool contains(Index i) const { return std::binary_search(ids_.begin(), ids_.end(), i); }
    Index size() const { return static_cast<Index>(ids_.size()); }
    bool empty() const { return ids_.empty(); }
    void insert(Index i);

    auto begin() const { return ids_.begin(); }
    auto end() const { return ids_.end(); }
    const std::vector<Index>& values() const { return ids_; }

    friend bool operator==(const IndexSet&, const IndexSet&) = default;

private:
    void normalize();
    std::vector<Index> ids_;
};

using VertexSet = IndexSet;
using EdgeSet = IndexSet;

/// A finite subset of a graph given as a couple (vertex part, edge part).
struct GraphSubset {
    VertexSet vertices;
    EdgeSet edges;
};

/// An edge together with an orientation. `canonical` is true when (tail, head)
/// is the stored orientation of the underlying edge.
struct OrientedEdge {
    VertexId tail = -1;  // e-
    VertexId head = -1;  // e+
    bool canonical = true;

    OrientedEdge reversed() const { return {head, tail, !canonical}; }
    friend bool operator==(const OrientedEdge&, const OrientedEdge&) = default;
};

/// Oriented edge emanating from a fixed vertex: `forward` is true when the
/// canonical orientation of `edge` has its tail at the owner.
struct HalfEdge {
    Index edge = -1;
    bool forward = true;
    VertexId to = -1;
};

struct EdgeSpec {
    VertexId tail = -1;
    VertexId head = -1;
    double r = 1.0;
};

// ---------------------------------------------------------------------------
// WeightedGraph: immutable after construction. Vertex weights c > 0, edge
// weights r > 0 stored once per unoriented pair, so r(-e) = r(e) cannot be
// violated. Infinite graphs enter only as finite truncations; `frontier`
// marks the vertices whose neighborhoods are incomplete.
// ---------------------------------------------------------------------------
class WeightedGraph {
public:
    WeightedGraph() = default;

    Index vertex_count() const { return static_cast<Index>(c_.size()); }
    Index edge_count() const { return static_cast<Index>(edges_.size()); }

    double vertex_weight(VertexId x) const { check_vertex(x); return c_[static_cast<std::size_t>(x)]; }
    double edge_weight(Index e) const { return r_[static_cast<std::size_t>(e)]; }
    const OrientedEdge& edge(Index e) const { return edges_[static_cast<std::size_t>(e)]; }
    const std::vector<HalfEdge>& incident(VertexId x) const {
        check_vertex(x);
        return incident_[static_cast<std::size_t>(x)];
    }
    Index degree(VertexId x) const { return static_cast<Index>(incident(x).size()); }

    const VertexSet& frontier() const { return frontier_; }
    bool is_frontier(VertexId x) const { return frontier_.contains(x); }
    bool edge_touches_frontier(Index e) const {
        const auto& oe = edge(e);
        return is_frontier(oe.tail) || is_frontier(oe.head);
    }

    /// User-facing label of a dense vertex index (identity unless a file
    /// supplied its own ids).
    std::int64_t label(VertexId x) const { check_vertex(x); return labels_[static_cast<std::size_t>(x)]; }
    const std::vector<std::int64_t>& labels() const { return labels_; }

    /// Canonical edge index joining x and y, or -1.
    Index find_edge(VertexId x, VertexId y) const;

    void check_vertex(VertexId x) const {
        if (x < 0 || x >= vertex_count())
            throw UnknownVertex("unknown vertex " + std::to_string(x));
    }

    friend WeightedGraph build_graph(std::vector<double> vertex_weights,
                                     const std::vector<EdgeSpec>& edges,
                                     VertexSet frontier,
                                     std::vector<std::int64_t> labels);

private:
    std::vector<double> c_;
    std::vector<OrientedEdge> edges_;
    std::vector<double> r_;
    std::vector<std::vector<HalfEdge>> incident_;
    VertexSet frontier_;
    std::vector<std::int64_t> labels_;
};

/// Validates weights, loops, duplicates and connectivity, fixes the canonical
/// orientation of each edge as given, and builds adjacency for both
/// orientations.
WeightedGraph build_graph(std::vector<double> vertex_weights,
                          const std::vector<EdgeSpec>& edges,
                          VertexSet frontier = {},
                          std::vector<std::int64_t> labels = {});

Index degree(const WeightedGraph& g, VertexId x);

/// { x not in K : some neighbor of x lies in K }
VertexSet vertex_boundary(const WeightedGraph& g, const VertexSet& K);

/// Canonical edges with exactly one endpoint in K.
EdgeSet edge_boundary(const WeightedGraph& g, const VertexSet& K);

/// Canonical edges with both endpoints in K.
EdgeSet subgraph_edges(const WeightedGraph& g, const VertexSet& K);

/// Smallest neighborhood of the subgraph on K: vertices K and its vertex
/// boundary, edges of K plus its edge boundary. The returned edge set is
/// closed: every edge has both endpoints in the returned vertex set.
GraphSubset combinatorial_neighborhood(const WeightedGraph& g, const VertexSet& K);

/// Combinatorial ball of radius n around o (breadth-first).
VertexSet ball(const WeightedGraph& g, VertexId o, Index n);

/// Increasing sequence ball(o, 0), ..., ball(o, n_max).
std::vector<VertexSet> exhaustion(const WeightedGraph& g, VertexId o, Index n_max);

/// Hop-minimal path from x to y as consecutive oriented edges; ties broken
/// toward the lowest next-vertex index. Empty when x == y.
std::vector<OrientedEdge> shortest_path(const WeightedGraph& g, VertexId x, VertexId y);

/// BFS hop distances from a source set; -1 where unreachable. An empty source
/// set yields all -1.
std::vector<Index> bfs_distances(const WeightedGraph& g, const VertexSet& sources);

}  // namespace gblab

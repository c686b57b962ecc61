#include "gblab/families.hpp"

#include <deque>

namespace gblab {

WeightedGraph path_graph(Index n) {
    if (n < 2) throw BadParameter("path_graph needs n >= 2");
    std::vector<EdgeSpec> edges;
    for (Index i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
    return build_graph(std::vector<double>(static_cast<std::size_t>(n), 1.0),
                       edges, VertexSet{0, n - 1});
}

WeightedGraph grid(Index d, Index side) {
    if (d < 1 || d > 3) throw BadParameter("grid dimension must be 1, 2 or 3");
    if (side < 2) throw BadParameter("grid side must be >= 2");
    const Index ny = d >= 2 ? side : 1;
    const Index nz = d >= 3 ? side : 1;
    const Index n = side * ny * nz;
    auto id = [&](Index x, Index y, Index z) { return x + side * y + side * side * z; };

    std::vector<EdgeSpec> edges;
    std::vector<Index> frontier;
    for (Index z = 0; z < nz; ++z)
        for (Index y = 0; y < ny; ++y)
            for (Index x = 0; x < side; ++x) {
                if (x + 1 < side) edges.push_back({id(x, y, z), id(x + 1, y, z), 1.0});
                if (d >= 2 && y + 1 < side) edges.push_back({id(x, y, z), id(x, y + 1, z), 1.0});
                if (d >= 3 && z + 1 < side) edges.push_back({id(x, y, z), id(x, y, z + 1), 1.0});
                const bool shell = x == 0 || x == side - 1 ||
                                   (d >= 2 && (y == 0 || y == side - 1)) ||
                                   (d >= 3 && (z == 0 || z == side - 1));
                if (shell) frontier.push_back(id(x, y, z));
            }
    return build_graph(std::vector<double>(static_cast<std::size_t>(n), 1.0),
                       edges, VertexSet(std::move(frontier)));
}

WeightedGraph dary_tree(Index branching, Index depth) {
    if (branching < 2) throw BadParameter("tree branching must be >= 2");
    if (depth < 1) throw BadParameter("tree depth must be >= 1");

    std::vector<EdgeSpec> edges;
    std::vector<Index> frontier;
    Index next = 1;
    std::deque<std::pair<Index, Index>> queue;  // (vertex, generation)
    queue.emplace_back(0, 0);
    while (!queue.empty()) {
        auto [v, gen] = queue.front();
        queue.pop_front();
        if (gen == depth) {
            frontier.push_back(v);
            continue;
        }
        const Index children = gen == 0 ? branching + 1 : branching;
        for (Index k = 0; k < children; ++k) {
            const Index child = next++;
            edges.push_back({v, child, 1.0});
            queue.emplace_back(child, gen + 1);
        }
    }
    return build_graph(std::vector<double>(static_cast<std::size_t>(next), 1.0),
                       edges, VertexSet(std::move(frontier)));
}

WeightedGraph star_like(const WeightedGraph& core, Index ray_count, Index ray_length) {
    if (ray_count < 1) throw BadParameter("star_like needs at least one ray");
    if (ray_length < 2) throw BadParameter("star_like needs ray_length >= 2");
    if (core.vertex_count() < 1) throw CoreTooSmall("star_like core has no vertices");

    const Index nc = core.vertex_count();
    std::vector<double> c(static_cast<std::size_t>(nc + ray_count * ray_length), 1.0);
    for (Index x = 0; x < nc; ++x) c[static_cast<std::size_t>(x)] = core.vertex_weight(x);

    std::vector<EdgeSpec> edges;
    for (Index e = 0; e < core.edge_count(); ++e) {
        const auto& oe = core.edge(e);
        edges.push_back({oe.tail, oe.head, core.edge_weight(e)});
    }
    std::vector<Index> frontier;
    for (Index a = 0; a < ray_count; ++a) {
        const Index base = nc + a * ray_length;
        edges.push_back({a % nc, base, 1.0});
        for (Index j = 0; j + 1 < ray_length; ++j) edges.push_back({base + j, base + j + 1, 1.0});
        frontier.push_back(base + ray_length - 1);
    }
    WeightedGraph g = build_graph(std::move(c), edges, VertexSet(std::move(frontier)));

    // removing the core must leave exactly ray_count path components
    Index path_components = 0;
    for (Index a = 0; a < ray_count; ++a) {
        const Index base = nc + a * ray_length;
        bool is_path = true;
        for (Index j = 0; j < ray_length; ++j) {
            Index deg_off_core = 0;
            for (const HalfEdge& h : g.incident(base + j))
                if (h.to >= nc) ++deg_off_core;
            if (deg_off_core > 2) is_path = false;
        }
        if (is_path) ++path_components;
    }
    if (path_components != ray_count)
        throw BadParameter("star_like rays do not form disjoint paths");
    return g;
}

WeightedGraph electrical_weights(const WeightedGraph& g) {
    std::vector<double> c(static_cast<std::size_t>(g.vertex_count()), 0.0);
    for (Index x = 0; x < g.vertex_count(); ++x) {
        double s = 0.0;
        for (const HalfEdge& h : g.incident(x)) s += 1.0 / g.edge_weight(h.edge);
        c[static_cast<std::size_t>(x)] = s;
    }
    std::vector<EdgeSpec> edges;
    for (Index e = 0; e < g.edge_count(); ++e) {
        const auto& oe = g.edge(e);
        edges.push_back({oe.tail, oe.head, g.edge_weight(e)});
    }
    return build_graph(std::move(c), edges, g.frontier(), g.labels());
}

std::pair<WeightedGraph, VertexId> make_family(const FamilySpec& spec) {
    WeightedGraph g;
    VertexId origin = 0;
    if (spec.family == "path") {
        const Index side = 2 * spec.radius + 1;
        g = path_graph(side);
        origin = spec.radius;
    } else if (spec.family == "grid2" || spec.family == "grid3") {
        const Index d = spec.family == "grid2" ? 2 : 3;
        const Index side = 2 * spec.radius + 1;
        g = grid(d, side);
        origin = spec.radius * (1 + side + (d == 3 ? side * side : 0));
    } else if (spec.family == "triadic") {
        g = dary_tree(2, spec.radius);
    } else if (spec.family == "tree") {
        g = dary_tree(spec.branching, spec.radius);
    } else if (spec.family == "star_like" || spec.family == "star-like") {
        WeightedGraph core = build_graph({1.0}, {});
        g = star_like(core, spec.rays, spec.radius);
    } else {
        throw BadParameter("unknown family '" + spec.family + "'");
    }
    if (spec.weight_scheme == "electrical") {
        g = electrical_weights(g);
    } else if (spec.weight_scheme != "simple" && spec.weight_scheme != "explicit") {
        // "explicit" keeps whatever weights the construction carries
        throw BadParameter("unknown weight scheme '" + spec.weight_scheme + "'");
    }
    return {std::move(g), origin};
}

}  // namespace gblab

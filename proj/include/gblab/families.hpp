#pragma once

#include <string>
#include <utility>

#include "gblab/graph.hpp"

namespace gblab {

/// Z truncation: n vertices on a line, unit weights, frontier at both ends.
WeightedGraph path_graph(Index n);

/// Unit-weight lattice box of dimension d in {1, 2, 3} with side vertices per
/// axis; frontier is the full outer shell. Vertex index is x + side*y + side^2*z.
WeightedGraph grid(Index d, Index side);

/// Rooted tree truncation where the designated origin (vertex 0) carries
/// branching+1 subtrees, so every interior vertex has degree branching+1.
/// branching = 2 gives the degree-3 tree. Frontier = deepest generation.
WeightedGraph dary_tree(Index branching, Index depth);

/// Finite core with ray_count disjoint rays of ray_length vertices glued on
/// (round-robin over core vertices). Removing the core leaves exactly
/// ray_count path components; frontier = ray tips.
WeightedGraph star_like(const WeightedGraph& core, Index ray_count, Index ray_length);

/// Keeps the edge resistances and recomputes every vertex weight as the sum
/// of incident conductances 1/r.
WeightedGraph electrical_weights(const WeightedGraph& g);

/// Generator configuration as it appears in CLI configs.
struct FamilySpec {
    std::string family = "triadic";  // path | grid2 | grid3 | triadic | tree | star_like | custom
    Index radius = 4;                // truncation radius / depth / ray length
    Index branching = 2;             // tree only
    Index rays = 3;                  // star_like only
    std::string weight_scheme = "simple";  // simple | electrical | explicit
    std::string graph_file;          // custom only; loaded by the CLI layer
};

/// Instantiates a generator family at its radius and returns the graph with
/// its designated origin. "custom" is not buildable here and throws.
std::pair<WeightedGraph, VertexId> make_family(const FamilySpec& spec);

}  // namespace gblab

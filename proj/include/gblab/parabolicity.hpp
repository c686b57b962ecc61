#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "gblab/cochain.hpp"
#include "gblab/graph.hpp"
#include "gblab/spectral.hpp"

namespace gblab {

/// Path-sum constant of the pointwise control |f(x)| <= C (|f(x0)| + |df|):
/// S = sqrt(sum over the shortest path of 1/r), C = max(S, 1).
struct PointwiseBound {
    double path_sum_sqrt = 0.0;  // S
    double constant = 1.0;       // C
};
PointwiseBound pointwise_bound_constant(const WeightedGraph& g, VertexId x, VertexId x0);

/// Graph norm anchored at the combinatorial neighborhood of K:
/// sqrt(|sigma|^2 over the neighborhood + |D sigma|^2 over the whole graph).
/// Vanishes only at sigma = 0; different anchor choices give equivalent norms.
class WNorm {
public:
    WNorm(const WeightedGraph& g, const VertexSet& k)
        : graph_(&g), neighborhood_(combinatorial_neighborhood(g, k)) {}

    const GraphSubset& neighborhood() const { return neighborhood_; }
    double operator()(const Section& s) const;

private:
    const WeightedGraph* graph_;
    GraphSubset neighborhood_;
};

double w_norm(const Section& s, const VertexSet& K);

struct ProbeDiagnostics {
    bool exact_kernel = false;      // combinatorial zero mode meets U
    bool used_pseudo_inverse = false;
    double constraint_residual = 0.0;
    double raw_value = 0.0;         // value before the exact-zero snap
    std::string norm_convention = "full";
};

/// One probe outcome: the best constant of C |sigma|_U <= |D sigma| over
/// sections supported off K within the truncation.
struct ProbeReport {
    std::string family;
    Index radius = 0;       // truncation radius the graph was generated at
    Index depth_margin = 0; // usable depth beyond U before the frontier buffer
    std::string k_desc;
    std::string u_desc;
    double constant = 0.0;  // C(U, K) >= 0
    Index kernel_dim = 0;   // > 0 only when an exact zero mode certifies C = 0
    Section witness;
    ProbeDiagnostics diag;
    double slope = 0.0;     // fitted log2 decay across a radius sweep
    std::string verdict;    // "", "PASS" or "FAIL"
    double wall_ms = 0.0;
    std::shared_ptr<const WeightedGraph> graph_keepalive;  // owner of the witness's graph, when probed on a temporary
};

/// Cycle-space kernel of delta over 1-cochains supported off the edges of K
/// and away from the frontier. The basis consists of fundamental cycle flows
/// with values +-1/r, which delta annihilates identically; the dimension is
/// cross-checked against the numerical rank at small scale.
struct KernelBasis {
    Index dimension = 0;
    std::vector<Cochain1> basis;
    EdgeSet admissible_edges;
};
KernelBasis delta_kernel_outside(const WeightedGraph& g, const VertexSet& K);

/// Computes C(U, K) on the truncation: exact kernel certification first, then
/// the constrained Rayleigh minimum. U must avoid K and its edges; U and K
/// must keep buffer_radius hops away from the frontier.
ProbeReport nonparabolicity_constant(const WeightedGraph& g, const VertexSet& K,
                                     const GraphSubset& u, Index buffer_radius,
                                     NormConvention convention = NormConvention::FullGraph);

enum class UPlacement { BoundaryVertexEdge, BoundaryEdge, BoundaryVertex };

struct DecayRules {
    Index k_radius = 0;
    UPlacement u_rule = UPlacement::BoundaryVertexEdge;
    double pass_threshold = 1e-3;
    double fail_slope = -0.1;
    Index buffer_radius = -1;  // -1: half the truncation radius
    NormConvention convention = NormConvention::FullGraph;
};

/// Sweeps a family over increasing truncation radii with K and U fixed by the
/// placement rules, fits the log2 decay of the constants, and attaches a
/// PASS/FAIL verdict: FAIL on an exact kernel, on decay steeper than
/// fail_slope, or on constants below pass_threshold. Reports come back in
/// radius order regardless of thread count.
std::vector<ProbeReport> probe_decay(
    const std::function<std::pair<WeightedGraph, VertexId>(Index)>& family,
    const std::string& family_name, const std::vector<Index>& radii,
    const DecayRules& rules, Index threads = 1);

struct WitnessDiagnostics {
    double delta_norm_sq = 0.0;  // |delta phi|^2, evaluated directly
    double u_norm_sq = 0.0;      // |phi|^2 on the two base edges
    double ratio = 0.0;          // sqrt(delta_norm_sq / u_norm_sq)
    Index generations = 0;
};

/// Outward flow pair below x_n: +1 and -1 on two outward edges, each split
/// evenly across children for M generations and truncated there. delta
/// vanishes at every interior vertex; the only leak is at the generation-M
/// heads. On the degree-3 tree the values are +-2^-m.
std::pair<Cochain1, WitnessDiagnostics> triadic_witness(const WeightedGraph& g, VertexId x_n,
                                                        Index generations, VertexId origin = 0);

/// Equilibrium capacity of the ball: min |df|^2 over f with f(o) = 1 and
/// f = 0 at distance >= N, by a positive definite sparse solve.
double classical_capacity(const WeightedGraph& g, VertexId o, Index N);

}  // namespace gblab

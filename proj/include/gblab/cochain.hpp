#pragma once

#include <Eigen/Core>

#include "gblab/graph.hpp"

namespace gblab {

/// Real function on vertices (0-cochain), dense over the truncation.
struct Cochain0 {
    const WeightedGraph* graph = nullptr;
    Eigen::VectorXd values;

    static Cochain0 zero(const WeightedGraph& g) {
        return {&g, Eigen::VectorXd::Zero(g.vertex_count())};
    }
    double operator[](VertexId x) const { return values(x); }
    double& operator[](VertexId x) { return values(x); }
};

/// Skew-symmetric function on oriented edges (1-cochain). One value is stored
/// per canonical edge; evaluation against the reversed orientation negates,
/// so phi(-e) = -phi(e) holds by construction.
struct Cochain1 {
    const WeightedGraph* graph = nullptr;
    Eigen::VectorXd values;  // indexed by canonical edge

    static Cochain1 zero(const WeightedGraph& g) {
        return {&g, Eigen::VectorXd::Zero(g.edge_count())};
    }
    double value(Index edge, bool forward) const {
        return forward ? values(edge) : -values(edge);
    }
    double value(const HalfEdge& h) const { return value(h.edge, h.forward); }
};

/// Orientation-symmetric edge function (e.g. a mean value); value(-e) = value(e).
struct SymmetricEdgeFn {
    const WeightedGraph* graph = nullptr;
    Eigen::VectorXd values;

    double value(Index edge) const { return values(edge); }
};

/// Element of l2(V) + l2(E), the domain and range of the Gauss-Bonnet operator.
struct Section {
    Cochain0 f;
    Cochain1 phi;

    static Section zero(const WeightedGraph& g) {
        return {Cochain0::zero(g), Cochain1::zero(g)};
    }
};

/// Indicator cutoff of the complement of K with its derived edge tables:
/// dchi vanishes on edges of K and away from the edge boundary, is +-1 on the
/// edge boundary; chibar takes values 0 / 1/2 / 1.
struct Cutoff {
    Cochain0 chi;
    Cochain1 dchi;
    SymmetricEdgeFn chibar;
    VertexSet k;
};

VertexSet support(const Cochain0& f);
EdgeSet support(const Cochain1& phi);

double inner0(const Cochain0& f, const Cochain0& g);
double norm0(const Cochain0& f);

/// <phi, psi> = (1/2) sum over both orientations of r phi psi, accumulated as
/// the plain sum over canonical edges.
double inner1(const Cochain1& phi, const Cochain1& psi);
double norm1(const Cochain1& phi);

double norm_section(const Section& s);

/// Seminorm of a section restricted to a finite couple U = (vertices, edges).
double norm_on(const Section& s, const GraphSubset& u);

/// fbar(e) = (f(e+) + f(e-)) / 2.
SymmetricEdgeFn mean_value(const Cochain0& f);

Cutoff cutoff(const WeightedGraph& g, const VertexSet& K);

/// chi.(f, phi) = (chi f, chibar phi).
Section multiply(const Cutoff& cut, const Section& s);

/// (1 - chi).(f, phi) = ((1 - chi) f, (1 - chibar) phi).
Section multiply_complement(const Cutoff& cut, const Section& s);

namespace detail {
inline void require_same_graph(const void* a, const void* b) {
    if (a != b) throw GraphMismatch("operands live on different graphs");
}
}  // namespace detail

}  // namespace gblab

#include "gblab/cochain.hpp"

#include <cmath>

namespace gblab {

VertexSet support(const Cochain0& f) {
    std::vector<Index> out;
    for (Index x = 0; x < f.values.size(); ++x)
        if (f.values(x) != 0.0) out.push_back(x);
    return VertexSet(std::move(out));
}

EdgeSet support(const Cochain1& phi) {
    std::vector<Index> out;
    for (Index e = 0; e < phi.values.size(); ++e)
        if (phi.values(e) != 0.0) out.push_back(e);
    return EdgeSet(std::move(out));
}

double inner0(const Cochain0& f, const Cochain0& g) {
    detail::require_same_graph(f.graph, g.graph);
    const WeightedGraph& gr = *f.graph;
    double s = 0.0;
    for (Index x = 0; x < gr.vertex_count(); ++x)
        s += gr.vertex_weight(x) * f.values(x) * g.values(x);
    return s;
}

double norm0(const Cochain0& f) { return std::sqrt(inner0(f, f)); }

double inner1(const Cochain1& phi, const Cochain1& psi) {
    detail::require_same_graph(phi.graph, psi.graph);
    const WeightedGraph& gr = *phi.graph;
    double s = 0.0;
    for (Index e = 0; e < gr.edge_count(); ++e)
        s += gr.edge_weight(e) * phi.values(e) * psi.values(e);
    return s;
}

double norm1(const Cochain1& phi) { return std::sqrt(inner1(phi, phi)); }

double norm_section(const Section& s) {
    detail::require_same_graph(s.f.graph, s.phi.graph);
    return std::sqrt(inner0(s.f, s.f) + inner1(s.phi, s.phi));
}

double norm_on(const Section& s, const GraphSubset& u) {
    detail::require_same_graph(s.f.graph, s.phi.graph);
    const WeightedGraph& g = *s.f.graph;
    double sv = 0.0;
    for (Index x : u.vertices) {
        g.check_vertex(x);
        sv += g.vertex_weight(x) * s.f.values(x) * s.f.values(x);
    }
    double se = 0.0;
    for (Index e : u.edges)
        se += g.edge_weight(e) * s.phi.values(e) * s.phi.values(e);
    return std::sqrt(sv + se);
}

SymmetricEdgeFn mean_value(const Cochain0& f) {
    const WeightedGraph& g = *f.graph;
    SymmetricEdgeFn out{&g, Eigen::VectorXd(g.edge_count())};
    for (Index e = 0; e < g.edge_count(); ++e) {
        const auto& oe = g.edge(e);
        out.values(e) = 0.5 * (f.values(oe.head) + f.values(oe.tail));
    }
    return out;
}

Cutoff cutoff(const WeightedGraph& g, const VertexSet& K) {
    Cutoff cut;
    cut.k = K;
    cut.chi = Cochain0::zero(g);
    for (Index x = 0; x < g.vertex_count(); ++x)
        cut.chi.values(x) = K.contains(x) ? 0.0 : 1.0;
    cut.dchi = Cochain1::zero(g);
    for (Index e = 0; e < g.edge_count(); ++e) {
        const auto& oe = g.edge(e);
        cut.dchi.values(e) = cut.chi.values(oe.head) - cut.chi.values(oe.tail);
    }
    cut.chibar = mean_value(cut.chi);
    return cut;
}

Section multiply(const Cutoff& cut, const Section& s) {
    detail::require_same_graph(cut.chi.graph, s.f.graph);
    detail::require_same_graph(cut.chi.graph, s.phi.graph);
    Section out = s;
    out.f.values = cut.chi.values.cwiseProduct(s.f.values);
    out.phi.values = cut.chibar.values.cwiseProduct(s.phi.values);
    return out;
}

Section multiply_complement(const Cutoff& cut, const Section& s) {
    detail::require_same_graph(cut.chi.graph, s.f.graph);
    detail::require_same_graph(cut.chi.graph, s.phi.graph);
    Section out = s;
    out.f.values = (1.0 - cut.chi.values.array()).matrix().cwiseProduct(s.f.values);
    out.phi.values = (1.0 - cut.chibar.values.array()).matrix().cwiseProduct(s.phi.values);
    return out;
}

}  // namespace gblab

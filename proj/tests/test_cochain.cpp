#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gblab/cochain.hpp"
#include "gblab/families.hpp"
#include "oracles.hpp"

using namespace gblab;

namespace {

WeightedGraph p3(double c1 = 1.0) { return build_graph({1, c1, 1}, {{0, 1, 1.0}, {1, 2, 1.0}}); }

}  // namespace

TEST_CASE("inner0 and norm0") {
    WeightedGraph g = p3();
    Cochain0 f = Cochain0::zero(g);
    f[1] = 1.0;
    CHECK(inner0(f, f) == 1.0);

    WeightedGraph h = p3(4.0);
    Cochain0 e = Cochain0::zero(h);
    e[1] = 1.0;
    CHECK(norm0(e) == 2.0);

    CHECK_THROWS_AS(inner0(f, Cochain0::zero(h)), GraphMismatch);
}

TEST_CASE("inner0 matches a term-by-term oracle") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 30; ++t) {
        WeightedGraph g = oracle::random_graph(rng, 30, 20);
        Cochain0 f = oracle::random_cochain0(rng, g, false);
        Cochain0 h = oracle::random_cochain0(rng, g, false);
        double naive = 0.0;
        for (Index x = 0; x < g.vertex_count(); ++x)
            naive += g.vertex_weight(x) * f.values(x) * h.values(x);
        CHECK(std::abs(inner0(f, h) - naive) < 1e-14 * (1.0 + std::abs(naive)));
    }
}

TEST_CASE("inner1: canonical sum equals the half-weighted sum over both orientations") {
    WeightedGraph g = build_graph({1, 1}, {{0, 1, 1.0}});
    Cochain1 phi = Cochain1::zero(g);
    phi.values(0) = 1.0;
    CHECK(inner1(phi, phi) == 1.0);

    WeightedGraph h = build_graph({1, 1}, {{0, 1, 9.0}});
    Cochain1 psi = Cochain1::zero(h);
    psi.values(0) = 1.0;
    CHECK(norm1(psi) == 3.0);

    std::mt19937_64 rng(12);
    for (int t = 0; t < 30; ++t) {
        WeightedGraph q = oracle::random_graph(rng, 25, 25);
        Cochain1 a = oracle::random_cochain1(rng, q, false);
        Cochain1 b = oracle::random_cochain1(rng, q, false);
        // oracle: (1/2) sum over both orientations
        double both = 0.0;
        for (Index e = 0; e < q.edge_count(); ++e) {
            both += q.edge_weight(e) * a.value(e, true) * b.value(e, true);
            both += q.edge_weight(e) * a.value(e, false) * b.value(e, false);
        }
        both *= 0.5;
        CHECK(std::abs(inner1(a, b) - both) < 1e-14 * (1.0 + std::abs(both)));
    }
}

TEST_CASE("skew symmetry holds exactly by construction") {
    std::mt19937_64 rng(13);
    WeightedGraph g = oracle::random_graph(rng, 20, 15);
    Cochain1 phi = oracle::random_cochain1(rng, g, false);
    for (Index e = 0; e < g.edge_count(); ++e)
        CHECK(phi.value(e, false) == -phi.value(e, true));
}

TEST_CASE("section norms and restricted seminorms") {
    WeightedGraph g = p3();
    Section zero = Section::zero(g);
    CHECK(norm_section(zero) == 0.0);

    std::mt19937_64 rng(14);
    for (int t = 0; t < 25; ++t) {
        WeightedGraph q = oracle::random_graph(rng, 20, 12);
        Section s{oracle::random_cochain0(rng, q, false), oracle::random_cochain1(rng, q, false)};

        // full-graph restriction equals the section norm exactly
        std::vector<Index> av, ae;
        for (Index x = 0; x < q.vertex_count(); ++x) av.push_back(x);
        for (Index e = 0; e < q.edge_count(); ++e) ae.push_back(e);
        CHECK(norm_on(s, {VertexSet(av), EdgeSet(ae)}) == norm_section(s));

        // random couple against a masked-sum oracle
        std::uniform_int_distribution<int> coin(0, 1);
        std::vector<Index> uv, ue;
        for (Index x = 0; x < q.vertex_count(); ++x)
            if (coin(rng)) uv.push_back(x);
        for (Index e = 0; e < q.edge_count(); ++e)
            if (coin(rng)) ue.push_back(e);
        double masked = 0.0;
        for (Index x : uv) masked += q.vertex_weight(x) * s.f.values(x) * s.f.values(x);
        for (Index e : ue) masked += q.edge_weight(e) * s.phi.values(e) * s.phi.values(e);
        CHECK(std::abs(norm_on(s, {VertexSet(uv), EdgeSet(ue)}) - std::sqrt(masked)) < 1e-14);
    }
}

TEST_CASE("mean value") {
    WeightedGraph g = p3();
    Cochain0 ones{&g, Eigen::VectorXd::Ones(3)};
    SymmetricEdgeFn m = mean_value(ones);
    CHECK(m.values(0) == 1.0);
    CHECK(m.values(1) == 1.0);

    Cochain0 f = Cochain0::zero(g);
    f[1] = 1.0;
    SymmetricEdgeFn mid = mean_value(f);
    CHECK(mid.values(0) == 0.5);
    CHECK(mid.values(1) == 0.5);
}

TEST_CASE("cutoff tables on P5") {
    WeightedGraph g = path_graph(5);
    Cutoff cut = cutoff(g, {0, 1});
    // dchi vanishes off the edge boundary; on (1,2) the tail is in K, so +1
    CHECK(cut.dchi.values(0) == 0.0);
    CHECK(cut.dchi.values(1) == 1.0);
    CHECK(cut.dchi.values(2) == 0.0);
    CHECK(cut.dchi.values(3) == 0.0);
    CHECK(cut.chibar.values(0) == 0.0);
    CHECK(cut.chibar.values(1) == 0.5);
    CHECK(cut.chibar.values(2) == 1.0);

    Cutoff none = cutoff(g, {});
    CHECK(none.chi.values.minCoeff() == 1.0);
    CHECK(none.dchi.values.cwiseAbs().maxCoeff() == 0.0);
    CHECK(none.chibar.values.minCoeff() == 1.0);
}

TEST_CASE("cutoff tables match the per-edge case analysis on random graphs") {
    std::mt19937_64 rng(15);
    for (int t = 0; t < 200; ++t) {
        WeightedGraph g = oracle::random_graph(rng, 16, 10);
        std::uniform_int_distribution<int> coin(0, 2);
        std::vector<Index> kv;
        for (Index x = 0; x < g.vertex_count(); ++x)
            if (coin(rng) == 0) kv.push_back(x);
        const VertexSet K(kv);
        Cutoff cut = cutoff(g, K);
        const EdgeSet ek = subgraph_edges(g, K);
        const EdgeSet bd = edge_boundary(g, K);
        for (Index e = 0; e < g.edge_count(); ++e) {
            if (ek.contains(e)) {
                CHECK(cut.dchi.values(e) == 0.0);
                CHECK(cut.chibar.values(e) == 0.0);
            } else if (bd.contains(e)) {
                CHECK(std::abs(cut.dchi.values(e)) == 1.0);
                CHECK(cut.chibar.values(e) == 0.5);
            } else {
                CHECK(cut.dchi.values(e) == 0.0);
                CHECK(cut.chibar.values(e) == 1.0);
            }
        }
        // supp(dchi) is exactly the edge boundary
        CHECK(support(cut.dchi) == bd);
    }
}

TEST_CASE("cutoff multiplication") {
    std::mt19937_64 rng(16);
    WeightedGraph g = oracle::random_graph(rng, 18, 14);

    // chi == 1 acts as the identity
    Cutoff none = cutoff(g, {});
    Section s{oracle::random_cochain0(rng, g, false), oracle::random_cochain1(rng, g, false)};
    Section id = multiply(none, s);
    CHECK((id.f.values - s.f.values).cwiseAbs().maxCoeff() == 0.0);
    CHECK((id.phi.values - s.phi.values).cwiseAbs().maxCoeff() == 0.0);

    // a section supported in K dies except for half-scaled boundary edges
    const VertexSet K = ball(g, 0, 1);
    Cutoff cut = cutoff(g, K);
    const EdgeSet ek = subgraph_edges(g, K);
    const EdgeSet bd = edge_boundary(g, K);
    Section inK = Section::zero(g);
    for (Index x : K) inK.f.values(x) = 1.0;
    for (Index e : ek) inK.phi.values(e) = 2.0;
    for (Index e : bd) inK.phi.values(e) = 2.0;
    Section cutoffed = multiply(cut, inK);
    CHECK(cutoffed.f.values.cwiseAbs().maxCoeff() == 0.0);
    for (Index e = 0; e < g.edge_count(); ++e) {
        if (bd.contains(e)) CHECK(cutoffed.phi.values(e) == 1.0);
        else CHECK(cutoffed.phi.values(e) == 0.0);
    }

    // partition of unity, exactly
    for (int t = 0; t < 50; ++t) {
        Section r{oracle::random_cochain0(rng, g, false), oracle::random_cochain1(rng, g, false)};
        Section a = multiply(cut, r);
        Section b = multiply_complement(cut, r);
        CHECK((a.f.values + b.f.values - r.f.values).cwiseAbs().maxCoeff() == 0.0);
        CHECK((a.phi.values + b.phi.values - r.phi.values).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("support tracking is consistent with nonzero entries") {
    WeightedGraph g = path_graph(6);
    Cochain0 f = Cochain0::zero(g);
    f[2] = 3.0;
    f[4] = -1.0;
    CHECK(support(f) == VertexSet{2, 4});
}

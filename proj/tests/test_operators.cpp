#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gblab/families.hpp"
#include "gblab/operators.hpp"
#include "gblab/spectral.hpp"
#include "oracles.hpp"

using namespace gblab;

namespace {

WeightedGraph p3() { return build_graph({1, 1, 1}, {{0, 1, 1.0}, {1, 2, 1.0}}); }

}  // namespace

TEST_CASE("difference operator") {
    WeightedGraph g = p3();
    Cochain0 ones{&g, Eigen::VectorXd::Ones(3)};
    CHECK(d(ones).values.cwiseAbs().maxCoeff() == 0.0);  // constants are the kernel

    Cochain0 f = Cochain0::zero(g);
    f[1] = 1.0;
    Cochain1 df = d(f);
    CHECK(df.values(0) == 1.0);
    CHECK(df.values(1) == -1.0);

    std::mt19937_64 rng(21);
    WeightedGraph q = oracle::random_graph(rng, 20, 15);
    Cochain1 dr = d(oracle::random_cochain0(rng, q, false));
    for (Index e = 0; e < q.edge_count(); ++e)
        CHECK(dr.value(e, false) == -dr.value(e, true));
}

TEST_CASE("coboundary on P3: hand evaluation of the characterizing sum") {
    WeightedGraph g = p3();
    Cochain1 phi{&g, Eigen::VectorXd::Ones(2)};
    Cochain0 dphi = delta(phi);
    CHECK(dphi.values(0) == -1.0);
    CHECK(dphi.values(1) == 0.0);
    CHECK(dphi.values(2) == 1.0);
}

TEST_CASE("coboundary kills cycle flows and scales inversely with c") {
    WeightedGraph g = grid(2, 3);
    // unit flow around the first unit square
    Index e01 = g.find_edge(0, 1), e14 = g.find_edge(1, 4), e34 = g.find_edge(3, 4),
          e03 = g.find_edge(0, 3);
    Cochain1 flow = Cochain1::zero(g);
    flow.values(e01) = 1.0;                               // 0 -> 1
    flow.values(e14) = 1.0;                               // 1 -> 4
    flow.values(e34) = g.edge(e34).tail == 4 ? 1.0 : -1.0;  // 4 -> 3
    flow.values(e03) = g.edge(e03).tail == 3 ? 1.0 : -1.0;  // 3 -> 0
    CHECK(delta(flow).values.cwiseAbs().maxCoeff() == 0.0);

    // doubling c halves delta pointwise
    std::mt19937_64 rng(22);
    WeightedGraph a = oracle::random_graph(rng, 15, 10);
    std::vector<double> c2;
    for (Index x = 0; x < a.vertex_count(); ++x) c2.push_back(2.0 * a.vertex_weight(x));
    std::vector<EdgeSpec> es;
    for (Index e = 0; e < a.edge_count(); ++e)
        es.push_back({a.edge(e).tail, a.edge(e).head, a.edge_weight(e)});
    WeightedGraph b = build_graph(std::move(c2), es);
    Cochain1 phi_a = oracle::random_cochain1(rng, a, false);
    Cochain1 phi_b{&b, phi_a.values};
    CHECK((delta(phi_b).values - 0.5 * delta(phi_a).values).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("gauss-bonnet assembles (delta phi, d f) and is symmetric") {
    WeightedGraph g = p3();
    Cochain0 f = Cochain0::zero(g);
    f[1] = 1.0;
    Cochain1 phi{&g, Eigen::VectorXd::Ones(2)};

    Section df_only = gauss_bonnet({f, Cochain1::zero(g)});
    CHECK(df_only.f.values.cwiseAbs().maxCoeff() == 0.0);
    CHECK((df_only.phi.values - d(f).values).cwiseAbs().maxCoeff() == 0.0);

    Section dphi_only = gauss_bonnet({Cochain0::zero(g), phi});
    CHECK((dphi_only.f.values - delta(phi).values).cwiseAbs().maxCoeff() == 0.0);
    CHECK(dphi_only.phi.values.cwiseAbs().maxCoeff() == 0.0);

    // <D sigma, tau> == <sigma, D tau> on random pairs
    std::mt19937_64 rng(23);
    for (int t = 0; t < 100; ++t) {
        WeightedGraph q = oracle::random_graph(rng, 18, 12);
        Section s{oracle::random_cochain0(rng, q), oracle::random_cochain1(rng, q)};
        Section u{oracle::random_cochain0(rng, q), oracle::random_cochain1(rng, q)};
        Section ds = gauss_bonnet(s);
        Section du = gauss_bonnet(u);
        const double lhs = inner0(ds.f, u.f) + inner1(ds.phi, u.phi);
        const double rhs = inner0(s.f, du.f) + inner1(s.phi, du.phi);
        CHECK(std::abs(lhs - rhs) < 1e-12);
    }
}

TEST_CASE("adjointness") {
    WeightedGraph g = p3();
    CHECK(check_adjointness(Cochain0::zero(g), Cochain1{&g, Eigen::VectorXd::Ones(2)}) == 0.0);

    Cochain0 f = Cochain0::zero(g);
    f[1] = 1.0;
    Cochain1 phi{&g, Eigen::VectorXd::Ones(2)};
    CHECK(check_adjointness(f, phi) == 0.0);  // <df,phi> = 1 - 1 = 0 = <f,delta phi>

    std::mt19937_64 rng(24);
    for (int t = 0; t < 100; ++t) {
        WeightedGraph q = oracle::random_graph(rng, 40, 30);
        const Cochain0 fr = oracle::random_cochain0(rng, q);
        const Cochain1 pr = oracle::random_cochain1(rng, q);
        CHECK(check_adjointness(fr, pr) < 1e-12 * (1.0 + norm0(fr) * norm1(pr)));
    }
}

TEST_CASE("derivation identity for d") {
    WeightedGraph g = p3();
    std::mt19937_64 rng(25);
    Cochain0 f = oracle::random_cochain0(rng, g, false);
    Cochain0 ones{&g, Eigen::VectorXd::Ones(3)};
    CHECK(derivation_d(f, ones) < 1e-15);  // g == 1 reduces to d(f) = d(f)
    CHECK(derivation_d(f, f) < 1e-15);     // d(f^2) expands exactly

    for (int t = 0; t < 100; ++t) {
        WeightedGraph q = oracle::random_graph(rng, 25, 20);
        CHECK(derivation_d(oracle::random_cochain0(rng, q), oracle::random_cochain0(rng, q)) < 1e-12);
    }
}

TEST_CASE("derivation identity for delta") {
    WeightedGraph g = p3();
    Cochain0 f = Cochain0::zero(g);
    f[1] = 1.0;
    Cochain1 phi{&g, Eigen::VectorXd::Ones(2)};
    CHECK(derivation_delta(f, phi) < 1e-15);  // hand-checkable on P3

    std::mt19937_64 rng(26);
    Cochain0 cf{&g, Eigen::VectorXd::Constant(3, 2.5)};
    CHECK(derivation_delta(cf, phi) < 1e-15);  // constant f: delta(f phi) = f delta phi

    for (int t = 0; t < 100; ++t) {
        WeightedGraph q = oracle::random_graph(rng, 25, 20);
        CHECK(derivation_delta(oracle::random_cochain0(rng, q), oracle::random_cochain1(rng, q)) < 1e-12);
    }
}

TEST_CASE("commutators with the cutoff") {
    std::mt19937_64 rng(27);
    WeightedGraph g = oracle::random_graph(rng, 24, 18);

    // empty K: chi == 1 and both brackets vanish
    Cutoff none = cutoff(g, {});
    Cochain0 f = oracle::random_cochain0(rng, g, false);
    Cochain1 phi = oracle::random_cochain1(rng, g, false);
    CHECK(commutator_chi_d(none, f).values.cwiseAbs().maxCoeff() == 0.0);
    CHECK(commutator_chi_delta(none, phi).values.cwiseAbs().maxCoeff() == 0.0);

    for (int t = 0; t < 100; ++t) {
        WeightedGraph q = oracle::random_graph(rng, 20, 16);
        const VertexSet K = ball(q, static_cast<VertexId>(t % q.vertex_count()), 1);
        Cutoff cut = cutoff(q, K);
        Cochain0 fr = oracle::random_cochain0(rng, q, false);
        Cochain1 pr = oracle::random_cochain1(rng, q, false);

        // closed forms against the direct definitions chi.(d f) - d(chi.f) and
        // chi.(delta phi) - delta(chi.phi)
        Cochain1 direct_d{&q, cut.chibar.values.cwiseProduct(d(fr).values) -
                                  d(Cochain0{&q, cut.chi.values.cwiseProduct(fr.values)}).values};
        CHECK((direct_d.values - commutator_chi_d(cut, fr).values).cwiseAbs().maxCoeff() < 1e-13);

        Cochain0 direct_delta{&q, cut.chi.values.cwiseProduct(delta(pr).values) -
                                      delta(Cochain1{&q, cut.chibar.values.cwiseProduct(pr.values)}).values};
        CHECK((direct_delta.values - commutator_chi_delta(cut, pr).values).cwiseAbs().maxCoeff() < 1e-13);

        // supports: [chi,d] inside the edge boundary, [chi,delta] inside K and
        // its vertex boundary
        const EdgeSet bd = edge_boundary(q, K);
        for (Index e : support(commutator_chi_d(cut, fr))) CHECK(bd.contains(e));
        VertexSet closure = K;
        for (Index x : vertex_boundary(q, K)) closure.insert(x);
        for (Index x : support(commutator_chi_delta(cut, pr))) CHECK(closure.contains(x));
    }
}

TEST_CASE("delta compose d is positive semidefinite") {
    std::mt19937_64 rng(28);
    for (int t = 0; t < 50; ++t) {
        WeightedGraph q = oracle::random_graph(rng, 22, 18);
        Cochain0 f = oracle::random_cochain0(rng, q);
        Cochain1 df = d(f);
        const double quad = inner0(delta(df), f);
        const double energy = inner1(df, df);
        CHECK(std::abs(quad - energy) < 1e-12);
        CHECK(quad > -1e-12);
    }
}

TEST_CASE("df = 0 with zero frontier values forces f = 0 on a connected graph") {
    WeightedGraph g = path_graph(7);
    // the incidence restricted to non-frontier columns has no kernel
    OperatorMatrices m = OperatorMatrices::build(g);
    std::vector<Eigen::Triplet<double>> trips;
    Index cols = 0;
    std::vector<Index> col(static_cast<std::size_t>(g.vertex_count()), -1);
    for (Index x = 0; x < g.vertex_count(); ++x)
        if (!g.is_frontier(x)) col[static_cast<std::size_t>(x)] = cols++;
    for (int k = 0; k < m.incidence.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(m.incidence, k); it; ++it)
            if (col[static_cast<std::size_t>(it.col())] >= 0)
                trips.emplace_back(it.row(), static_cast<int>(col[static_cast<std::size_t>(it.col())]),
                                   it.value());
    Eigen::SparseMatrix<double> restricted(m.incidence.rows(), cols);
    restricted.setFromTriplets(trips.begin(), trips.end());
    auto sv = smallest_singular_value(restricted);
    CHECK(sv.converged);
    CHECK(sv.value > 0.1);
}

TEST_CASE("matrix route matches the summation route") {
    std::mt19937_64 rng(29);
    for (int t = 0; t < 50; ++t) {
        WeightedGraph q = oracle::random_graph(rng, 30, 25);
        OperatorMatrices m = OperatorMatrices::build(q);
        Cochain0 f = oracle::random_cochain0(rng, q, false);
        Cochain1 phi = oracle::random_cochain1(rng, q, false);
        CHECK((m.d(f.values) - d(f).values).cwiseAbs().maxCoeff() == 0.0);
        CHECK((m.delta(phi.values) - delta(phi).values).cwiseAbs().maxCoeff() < 1e-13);
    }
}

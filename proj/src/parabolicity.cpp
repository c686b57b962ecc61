#include "gblab/parabolicity.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <chrono>
#include <cmath>
#include <deque>
#include <future>
#include <limits>

#include "gblab/operators.hpp"

namespace gblab {

PointwiseBound pointwise_bound_constant(const WeightedGraph& g, VertexId x, VertexId x0) {
    g.check_vertex(x);
    g.check_vertex(x0);
    double s = 0.0;
    for (const OrientedEdge& oe : shortest_path(g, x, x0)) {
        const Index e = g.find_edge(oe.tail, oe.head);
        s += 1.0 / g.edge_weight(e);
    }
    PointwiseBound out;
    out.path_sum_sqrt = std::sqrt(s);
    out.constant = std::max(out.path_sum_sqrt, 1.0);
    return out;
}

double WNorm::operator()(const Section& s) const {
    detail::require_same_graph(s.f.graph, s.phi.graph);
    detail::require_same_graph(s.f.graph, graph_);
    const double local = norm_on(s, neighborhood_);
    const double image = norm_section(gauss_bonnet(s));
    return std::sqrt(local * local + image * image);
}

double w_norm(const Section& s, const VertexSet& K) {
    detail::require_same_graph(s.f.graph, s.phi.graph);
    return WNorm(*s.f.graph, K)(s);
}

namespace {

struct Forest {
    std::vector<Index> parent_vertex;  // -1 at roots / untouched vertices
    std::vector<Index> parent_edge;
    std::vector<Index> depth;
};

Forest spanning_forest(const WeightedGraph& g, const EdgeSet& edges) {
    const Index n = g.vertex_count();
    Forest f{std::vector<Index>(static_cast<std::size_t>(n), -1),
             std::vector<Index>(static_cast<std::size_t>(n), -1),
             std::vector<Index>(static_cast<std::size_t>(n), -1)};
    for (Index root = 0; root < n; ++root) {
        if (f.depth[static_cast<std::size_t>(root)] >= 0) continue;
        bool touched = false;
        for (const HalfEdge& h : g.incident(root))
            if (edges.contains(h.edge)) touched = true;
        if (!touched) continue;
        f.depth[static_cast<std::size_t>(root)] = 0;
        std::deque<VertexId> queue{root};
        while (!queue.empty()) {
            VertexId v = queue.front();
            queue.pop_front();
            for (const HalfEdge& h : g.incident(v)) {
                if (!edges.contains(h.edge)) continue;
                if (f.depth[static_cast<std::size_t>(h.to)] >= 0) continue;
                f.depth[static_cast<std::size_t>(h.to)] = f.depth[static_cast<std::size_t>(v)] + 1;
                f.parent_vertex[static_cast<std::size_t>(h.to)] = v;
                f.parent_edge[static_cast<std::size_t>(h.to)] = h.edge;
                queue.push_back(h.to);
            }
        }
    }
    return f;
}

// adds +-t/r along the tree path from `from` up to `to` (an ancestor chain walk)
void add_tree_path(const WeightedGraph& g, const Forest& f, Cochain1& phi,
                   VertexId from, VertexId to, double t) {
    VertexId a = from, b = to;
    // climb to equal depth, then in lockstep to the meeting point
    auto step = [&](VertexId v, double sgn) {
        const Index e = f.parent_edge[static_cast<std::size_t>(v)];
        const auto& oe = g.edge(e);
        // flow v -> parent(v) scaled by sgn
        const double dir = oe.tail == v ? 1.0 : -1.0;
        phi.values(e) += sgn * dir * t / g.edge_weight(e);
        return f.parent_vertex[static_cast<std::size_t>(v)];
    };
    while (f.depth[static_cast<std::size_t>(a)] > f.depth[static_cast<std::size_t>(b)]) a = step(a, 1.0);
    while (f.depth[static_cast<std::size_t>(b)] > f.depth[static_cast<std::size_t>(a)]) b = step(b, -1.0);
    while (a != b) {
        a = step(a, 1.0);
        b = step(b, -1.0);
    }
}

}  // namespace

KernelBasis delta_kernel_outside(const WeightedGraph& g, const VertexSet& K) {
    for (Index x : K) g.check_vertex(x);
    const EdgeSet ek = subgraph_edges(g, K);
    std::vector<Index> adm;
    for (Index e = 0; e < g.edge_count(); ++e)
        if (!ek.contains(e) && !g.edge_touches_frontier(e)) adm.push_back(e);

    KernelBasis out;
    out.admissible_edges = EdgeSet(adm);
    const Forest forest = spanning_forest(g, out.admissible_edges);

    for (Index e : adm) {
        const auto& oe = g.edge(e);
        if (forest.parent_edge[static_cast<std::size_t>(oe.tail)] == e ||
            forest.parent_edge[static_cast<std::size_t>(oe.head)] == e)
            continue;  // tree edge
        // fundamental cycle: flow tail -> head across e, back through the tree
        Cochain1 phi = Cochain1::zero(g);
        phi.values(e) = 1.0 / g.edge_weight(e);
        add_tree_path(g, forest, phi, oe.head, oe.tail, 1.0);
        out.basis.push_back(std::move(phi));
    }
    out.dimension = static_cast<Index>(out.basis.size());

    // cross-check against the numerical rank at small scale
    const Index na = static_cast<Index>(adm.size());
    if (na > 0 && na + g.vertex_count() <= 500) {
        Eigen::MatrixXd dmat = Eigen::MatrixXd::Zero(g.vertex_count(), na);
        for (Index j = 0; j < na; ++j) {
            const auto& oe = g.edge(adm[static_cast<std::size_t>(j)]);
            const double r = g.edge_weight(adm[static_cast<std::size_t>(j)]);
            dmat(oe.head, j) += r;
            dmat(oe.tail, j) -= r;
        }
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(dmat);
        cod.setThreshold(1e-10);
        const Index numeric = na - cod.rank();
        if (numeric != out.dimension)
            throw SolverBreakdown("cycle-space dimension mismatch: combinatorial " +
                                  std::to_string(out.dimension) + " vs numeric " +
                                  std::to_string(numeric));
    }
    return out;
}

namespace {

void check_buffer(const WeightedGraph& g, const VertexSet& K, const GraphSubset& u,
                  Index buffer_radius) {
    if (g.frontier().empty()) return;
    const auto dist = bfs_distances(g, g.frontier());
    const Index need = std::max<Index>(buffer_radius, 1);
    auto check = [&](VertexId x, const char* what) {
        if (dist[static_cast<std::size_t>(x)] < need)
            throw FrontierContamination(std::string(what) +
                                        " is within the frontier buffer (vertex " +
                                        std::to_string(x) + ")");
    };
    for (Index x : K) check(x, "K");
    for (Index x : u.vertices) check(x, "U");
    for (Index e : u.edges) {
        const auto& oe = g.edge(e);
        check(oe.tail, "U");
        check(oe.head, "U");
    }
}

Index frontier_margin(const WeightedGraph& g, const GraphSubset& u) {
    if (g.frontier().empty()) return 0;
    const auto dist = bfs_distances(g, g.frontier());
    Index m = -1;
    auto take = [&](VertexId x) {
        if (m < 0 || dist[static_cast<std::size_t>(x)] < m) m = dist[static_cast<std::size_t>(x)];
    };
    for (Index x : u.vertices) take(x);
    for (Index e : u.edges) {
        take(g.edge(e).tail);
        take(g.edge(e).head);
    }
    return m < 1 ? 0 : m - 1;
}

}  // namespace

ProbeReport nonparabolicity_constant(const WeightedGraph& g, const VertexSet& K,
                                     const GraphSubset& u, Index buffer_radius,
                                     NormConvention convention) {
    const auto t0 = std::chrono::steady_clock::now();
    for (Index x : K) g.check_vertex(x);
    if (u.vertices.empty() && u.edges.empty()) throw BadParameter("U is empty");
    const EdgeSet ek = subgraph_edges(g, K);
    for (Index x : u.vertices)
        if (K.contains(x)) throw BadParameter("U meets K at vertex " + std::to_string(x));
    for (Index e : u.edges) {
        if (e < 0 || e >= g.edge_count()) throw BadParameter("edge index out of range in U");
        if (ek.contains(e)) throw BadParameter("U meets the edges of K");
    }
    check_buffer(g, K, u, buffer_radius);

    ProbeReport report;
    report.k_desc = std::to_string(K.size()) + " vertices";
    report.u_desc = std::to_string(u.vertices.size()) + "v+" + std::to_string(u.edges.size()) + "e";
    report.depth_margin = frontier_margin(g, u);
    report.diag.norm_convention = to_string(convention);

    const KernelBasis kernel = delta_kernel_outside(g, K);
    const Cochain1* hit = nullptr;
    for (const Cochain1& phi : kernel.basis) {
        for (Index e : u.edges)
            if (phi.values(e) != 0.0) { hit = &phi; break; }
        if (hit) break;
    }

    if (hit) {
        report.constant = 0.0;
        report.kernel_dim = kernel.dimension;
        report.witness = Section{Cochain0::zero(g), *hit};
        report.diag.exact_kernel = true;
        report.diag.raw_value = 0.0;
    } else {
        const AdmissibleSet adm = admissible_set(g, K, convention);
        const QuadraticForm form = assemble_D_gram(g, adm);
        const ConstraintMask mask = constraint_mask(g, u);
        const RayleighResult rr = min_rayleigh_constrained(form, mask);
        report.constant = std::sqrt(rr.value);
        report.kernel_dim = 0;
        report.diag.raw_value = rr.value;
        report.diag.used_pseudo_inverse = rr.used_pseudo_inverse;
        report.diag.constraint_residual = rr.constraint_residual;
        report.witness = Section::zero(g);
        const Index nv = g.vertex_count();
        for (Index j = 0; j < static_cast<Index>(form.coords.size()); ++j) {
            const Index c = form.coords[static_cast<std::size_t>(j)];
            if (c < nv) report.witness.f.values(c) = rr.witness(j);
            else report.witness.phi.values(c - nv) = rr.witness(j);
        }
    }
    report.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0).count();
    return report;
}

namespace {

GraphSubset place_u(const WeightedGraph& g, const VertexSet& K, UPlacement rule) {
    const GraphSubset kt = combinatorial_neighborhood(g, K);
    const VertexSet bd = vertex_boundary(g, kt.vertices);
    if (bd.empty()) throw BadParameter("K has no exterior to place U in");
    const VertexId xu = *bd.begin();
    const EdgeSet bde = edge_boundary(g, kt.vertices);
    Index eu = -1;
    for (Index e : bde) {
        const auto& oe = g.edge(e);
        if (oe.tail == xu || oe.head == xu) { eu = e; break; }
    }
    if (eu < 0) eu = *bde.begin();
    switch (rule) {
        case UPlacement::BoundaryVertex: return {VertexSet{xu}, {}};
        case UPlacement::BoundaryEdge: return {{}, EdgeSet{eu}};
        default: return {VertexSet{xu}, EdgeSet{eu}};
    }
}

}  // namespace

std::vector<ProbeReport> probe_decay(
    const std::function<std::pair<WeightedGraph, VertexId>(Index)>& family,
    const std::string& family_name, const std::vector<Index>& radii,
    const DecayRules& rules, Index threads) {
    if (radii.empty()) throw BadParameter("radii list is empty");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (radii[i] <= radii[i - 1]) throw BadParameter("radii must be strictly increasing");
    if (threads < 1) threads = 1;

    auto run_one = [&](Index radius) {
        auto [graph, origin] = family(radius);
        auto gp = std::make_shared<const WeightedGraph>(std::move(graph));
        const VertexSet K = ball(*gp, origin, rules.k_radius);
        const GraphSubset u = place_u(*gp, K, rules.u_rule);
        const Index buffer = rules.buffer_radius >= 0 ? rules.buffer_radius
                                                      : std::max<Index>(1, radius / 2);
        ProbeReport r = nonparabolicity_constant(*gp, K, u, buffer, rules.convention);
        r.family = family_name;
        r.radius = radius;
        r.graph_keepalive = gp;
        return r;
    };

    std::vector<ProbeReport> reports(radii.size());
    for (std::size_t start = 0; start < radii.size(); start += static_cast<std::size_t>(threads)) {
        const std::size_t stop = std::min(radii.size(), start + static_cast<std::size_t>(threads));
        std::vector<std::future<ProbeReport>> batch;
        for (std::size_t i = start; i < stop; ++i)
            batch.push_back(std::async(std::launch::async, run_one, radii[i]));
        for (std::size_t i = start; i < stop; ++i) reports[i] = batch[i - start].get();
    }

    // least-squares slope of log2 C against radius, over the positive constants
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    Index npos = 0;
    bool exact_zero = false;
    for (const ProbeReport& r : reports) {
        if (r.constant > 0.0) {
            const double x = static_cast<double>(r.radius);
            const double y = std::log2(r.constant);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
            ++npos;
        } else {
            exact_zero = true;
        }
    }
    double slope = 0.0;
    if (npos >= 2) {
        const double denom = npos * sxx - sx * sx;
        if (denom != 0.0) slope = (npos * sxy - sx * sy) / denom;
    }
    if (exact_zero) slope = std::numeric_limits<double>::quiet_NaN();

    std::string verdict = "PASS";
    if (exact_zero || slope < rules.fail_slope ||
        reports.back().constant < rules.pass_threshold)
        verdict = "FAIL";
    for (ProbeReport& r : reports) {
        r.slope = slope;
        r.verdict = verdict;
    }
    return reports;
}

std::pair<Cochain1, WitnessDiagnostics> triadic_witness(const WeightedGraph& g, VertexId x_n,
                                                        Index generations, VertexId origin) {
    g.check_vertex(x_n);
    g.check_vertex(origin);
    if (generations < 1) throw BadParameter("witness needs at least one generation");
    const auto dist = bfs_distances(g, VertexSet{origin});
    const Index base = dist[static_cast<std::size_t>(x_n)];

    auto outward = [&](VertexId v) {
        std::vector<HalfEdge> out;
        for (const HalfEdge& h : g.incident(v))
            if (dist[static_cast<std::size_t>(h.to)] == dist[static_cast<std::size_t>(v)] + 1)
                out.push_back(h);
        return out;
    };

    const auto roots = outward(x_n);
    if (roots.size() < 2)
        throw InsufficientDepth("witness vertex needs two outward edges inside the truncation");

    Cochain1 phi = Cochain1::zero(g);
    const Index needed_depth = base + generations + 2;
    auto deny = [&](VertexId v) {
        throw InsufficientDepth("outward subtree too shallow below vertex " +
                                std::to_string(v) + "; the truncation must reach depth " +
                                std::to_string(needed_depth) + " from the origin");
    };

    // (vertex, incoming value, generation of the incoming edge)
    std::deque<std::tuple<VertexId, double, Index>> queue;
    for (Index side = 0; side < 2; ++side) {
        const HalfEdge& h = roots[static_cast<std::size_t>(side)];
        const double sign = side == 0 ? 1.0 : -1.0;
        phi.values(h.edge) = h.forward ? sign : -sign;  // oriented outward
        queue.emplace_back(h.to, sign, 0);
    }
    while (!queue.empty()) {
        auto [v, w, gen] = queue.front();
        queue.pop_front();
        if (gen == generations) {
            if (g.is_frontier(v)) deny(v);  // the leak at this head must be trusted
            continue;
        }
        const auto children = outward(v);
        if (children.empty() || g.is_frontier(v)) deny(v);
        const double split = w / static_cast<double>(children.size());
        for (const HalfEdge& h : children) {
            if (phi.values(h.edge) != 0.0)
                throw BadParameter("outward subtree of the witness vertex is not a tree");
            phi.values(h.edge) = h.forward ? split : -split;
            queue.emplace_back(h.to, split, gen + 1);
        }
    }

    WitnessDiagnostics diag;
    diag.generations = generations;
    const Cochain0 dphi = delta(phi);
    diag.delta_norm_sq = inner0(dphi, dphi);
    const Index e0 = roots[0].edge, b0 = roots[1].edge;
    diag.u_norm_sq = g.edge_weight(e0) * phi.values(e0) * phi.values(e0) +
                     g.edge_weight(b0) * phi.values(b0) * phi.values(b0);
    diag.ratio = std::sqrt(diag.delta_norm_sq / diag.u_norm_sq);
    return {std::move(phi), diag};
}

double classical_capacity(const WeightedGraph& g, VertexId o, Index N) {
    g.check_vertex(o);
    if (N < 1) throw BadParameter("capacity radius must be >= 1");
    const auto dist = bfs_distances(g, VertexSet{o});

    bool ring = false;
    for (Index x = 0; x < g.vertex_count(); ++x) {
        const Index dx = dist[static_cast<std::size_t>(x)];
        if (dx == N) ring = true;
        if (dx >= 0 && dx < N && g.is_frontier(x))
            throw FrontierContamination("capacity ball reaches the frontier at vertex " +
                                        std::to_string(x));
    }
    if (!ring) throw BadParameter("truncation has no vertices at the clamp radius");

    // unknowns: interior of the ball minus o; f(o) = 1, f = 0 at distance >= N
    std::vector<Index> col(static_cast<std::size_t>(g.vertex_count()), -1);
    std::vector<Index> unknowns;
    for (Index x = 0; x < g.vertex_count(); ++x)
        if (x != o && dist[static_cast<std::size_t>(x)] < N && dist[static_cast<std::size_t>(x)] >= 0) {
            col[static_cast<std::size_t>(x)] = static_cast<Index>(unknowns.size());
            unknowns.push_back(x);
        }

    Eigen::VectorXd f = Eigen::VectorXd::Zero(g.vertex_count());
    f(o) = 1.0;
    if (!unknowns.empty()) {
        const Index m = static_cast<Index>(unknowns.size());
        std::vector<Eigen::Triplet<double>> trips;
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
        for (Index j = 0; j < m; ++j) {
            const VertexId x = unknowns[static_cast<std::size_t>(j)];
            double diag = 0.0;
            for (const HalfEdge& h : g.incident(x)) {
                const double r = g.edge_weight(h.edge);
                diag += r;
                const Index cj = col[static_cast<std::size_t>(h.to)];
                if (cj >= 0)
                    trips.emplace_back(static_cast<int>(j), static_cast<int>(cj), -r);
                else if (h.to == o)
                    rhs(j) += r;
            }
            trips.emplace_back(static_cast<int>(j), static_cast<int>(j), diag);
        }
        Eigen::SparseMatrix<double> lap(m, m);
        lap.setFromTriplets(trips.begin(), trips.end());
        Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(lap);
        if (llt.info() != Eigen::Success)
            throw SolverBreakdown("capacity system is not positive definite");
        const Eigen::VectorXd sol = llt.solve(rhs);
        for (Index j = 0; j < m; ++j) f(unknowns[static_cast<std::size_t>(j)]) = sol(j);
    }

    double energy = 0.0;
    for (Index e = 0; e < g.edge_count(); ++e) {
        const auto& oe = g.edge(e);
        const double df = f(oe.head) - f(oe.tail);
        energy += g.edge_weight(e) * df * df;
    }
    return energy;
}

}  // namespace gblab

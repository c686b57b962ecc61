#include "gblab/spectral.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <numeric>
#include <random>
#include <unordered_map>

namespace gblab {

namespace {

constexpr Index kDenseThreshold = 500;
constexpr double kRankTolFactor = 1e-10;  // rank cutoff relative to |A|

double inf_norm(const Eigen::SparseMatrix<double>& a) {
    double m = 0.0;
    for (int k = 0; k < a.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it)
            m = std::max(m, std::abs(it.value()));
    return m;
}

struct UnionFind {
    std::vector<Index> parent;
    explicit UnionFind(Index n) : parent(static_cast<std::size_t>(n)) {
        std::iota(parent.begin(), parent.end(), Index{0});
    }
    Index find(Index x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }
    void unite(Index a, Index b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
};

}  // namespace

Eigen::VectorXd section_metric(const WeightedGraph& g) {
    Eigen::VectorXd m(section_dim(g));
    for (Index x = 0; x < g.vertex_count(); ++x) m(x) = g.vertex_weight(x);
    for (Index e = 0; e < g.edge_count(); ++e) m(g.vertex_count() + e) = g.edge_weight(e);
    return m;
}

AdmissibleSet admissible_set(const WeightedGraph& g, const VertexSet& K,
                             NormConvention convention) {
    for (Index x : K) g.check_vertex(x);
    EdgeSet ek = subgraph_edges(g, K);

    AdmissibleSet out;
    for (Index x = 0; x < g.vertex_count(); ++x) {
        const bool frontier = g.is_frontier(x);
        if (!frontier && !K.contains(x)) out.columns.push_back(vertex_coord(g, x));
        if (!frontier && (convention == NormConvention::FullGraph || !K.contains(x)))
            out.rows.push_back(vertex_coord(g, x));
    }
    for (Index e = 0; e < g.edge_count(); ++e) {
        const bool frontier = g.edge_touches_frontier(e);
        if (!frontier && !ek.contains(e)) out.columns.push_back(edge_coord(g, e));
        if (!frontier && (convention == NormConvention::FullGraph || !ek.contains(e)))
            out.rows.push_back(edge_coord(g, e));
    }
    return out;
}

QuadraticForm assemble_D_gram(const WeightedGraph& g, const AdmissibleSet& admissible) {
    if (admissible.columns.empty())
        throw EmptyAdmissibleSet("no admissible coordinates to assemble over");

    const Index nv = g.vertex_count();
    const Index m = static_cast<Index>(admissible.columns.size());
    std::vector<Index> col_of(static_cast<std::size_t>(section_dim(g)), -1);
    for (Index j = 0; j < m; ++j)
        col_of[static_cast<std::size_t>(admissible.columns[static_cast<std::size_t>(j)])] = j;

    std::vector<Eigen::Triplet<double>> trips;
    Index row = 0;
    for (Index rc : admissible.rows) {
        if (rc < nv) {
            // delta row at vertex rc, weighted by sqrt(c)
            const VertexId x = rc;
            const double scale = std::sqrt(g.vertex_weight(x)) / g.vertex_weight(x);
            bool any = false;
            for (const HalfEdge& h : g.incident(x)) {
                const Index col = col_of[static_cast<std::size_t>(edge_coord(g, h.edge))];
                if (col < 0) continue;
                const double sign = h.forward ? -1.0 : 1.0;  // orientation with head at x
                trips.emplace_back(static_cast<int>(row), static_cast<int>(col),
                                   scale * sign * g.edge_weight(h.edge));
                any = true;
            }
            if (any) ++row;
        } else {
            // d row at canonical edge rc - nv, weighted by sqrt(r)
            const Index e = rc - nv;
            const auto& oe = g.edge(e);
            const double scale = std::sqrt(g.edge_weight(e));
            const Index ch = col_of[static_cast<std::size_t>(vertex_coord(g, oe.head))];
            const Index ct = col_of[static_cast<std::size_t>(vertex_coord(g, oe.tail))];
            bool any = false;
            if (ch >= 0) { trips.emplace_back(static_cast<int>(row), static_cast<int>(ch), scale); any = true; }
            if (ct >= 0) { trips.emplace_back(static_cast<int>(row), static_cast<int>(ct), -scale); any = true; }
            if (any) ++row;
        }
    }

    QuadraticForm form;
    form.rows_op.resize(row, m);
    form.rows_op.setFromTriplets(trips.begin(), trips.end());
    form.matrix = Eigen::SparseMatrix<double>(form.rows_op.transpose() * form.rows_op);
    form.coords = admissible.columns;
    const Eigen::VectorXd metric = section_metric(g);
    form.metric.resize(m);
    for (Index j = 0; j < m; ++j)
        form.metric(j) = metric(admissible.columns[static_cast<std::size_t>(j)]);
    return form;
}

ConstraintMask constraint_mask(const WeightedGraph& g, const GraphSubset& u) {
    ConstraintMask mask;
    std::vector<std::pair<Index, double>> entries;
    for (Index x : u.vertices) {
        g.check_vertex(x);
        entries.emplace_back(vertex_coord(g, x), g.vertex_weight(x));
    }
    for (Index e : u.edges) {
        if (e < 0 || e >= g.edge_count()) throw BadParameter("edge index out of range in U");
        entries.emplace_back(edge_coord(g, e), g.edge_weight(e));
    }
    std::sort(entries.begin(), entries.end());
    mask.coords.reserve(entries.size());
    mask.weights.resize(static_cast<Index>(entries.size()));
    Index j = 0;
    for (const auto& [c, w] : entries) {
        mask.coords.push_back(c);
        mask.weights(j++) = w;
    }
    return mask;
}

RayleighResult min_rayleigh_constrained(const QuadraticForm& form, const ConstraintMask& u) {
    const Index m = form.matrix.cols();
    if (u.coords.empty()) throw BadParameter("constraint set U is empty");
    if (u.weights.size() != static_cast<Index>(u.coords.size()))
        throw BadParameter("constraint weights and coordinates disagree in length");
    for (Index j = 0; j < u.weights.size(); ++j)
        if (!(u.weights(j) > 0.0)) throw BadParameter("constraint weights must be positive");

    // locate U inside the form's columns
    std::unordered_map<Index, Index> local_of;
    local_of.reserve(static_cast<std::size_t>(m));
    for (Index j = 0; j < m; ++j) local_of.emplace(form.coords[static_cast<std::size_t>(j)], j);

    const Index nu = static_cast<Index>(u.coords.size());
    std::vector<Index> u_local(static_cast<std::size_t>(nu));
    for (Index j = 0; j < nu; ++j) {
        auto it = local_of.find(u.coords[static_cast<std::size_t>(j)]);
        if (it == local_of.end())
            throw BadParameter("constraint coordinate is not admissible");
        u_local[static_cast<std::size_t>(j)] = it->second;
    }

    // partition: part[j] >= 0 gives the U position, otherwise -(v position)-1
    std::vector<Index> part(static_cast<std::size_t>(m));
    {
        std::vector<char> in_u(static_cast<std::size_t>(m), 0);
        for (Index j : u_local) in_u[static_cast<std::size_t>(j)] = 1;
        Index vpos = 0;
        for (Index j = 0; j < m; ++j)
            if (!in_u[static_cast<std::size_t>(j)]) part[static_cast<std::size_t>(j)] = -(++vpos);
        for (Index j = 0; j < nu; ++j) part[static_cast<std::size_t>(u_local[static_cast<std::size_t>(j)])] = j;
    }
    const Index nvfree = m - nu;

    Eigen::MatrixXd a_uu = Eigen::MatrixXd::Zero(nu, nu);
    Eigen::MatrixXd a_vu = Eigen::MatrixXd::Zero(nvfree, nu);  // dense: nu is small
    std::vector<Eigen::Triplet<double>> vv_trips;
    for (int k = 0; k < form.matrix.outerSize(); ++k) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(form.matrix, k); it; ++it) {
            const Index pr = part[static_cast<std::size_t>(it.row())];
            const Index pc = part[static_cast<std::size_t>(it.col())];
            if (pr >= 0 && pc >= 0) a_uu(pr, pc) += it.value();
            else if (pr < 0 && pc >= 0) a_vu(-pr - 1, pc) += it.value();
            else if (pr < 0 && pc < 0)
                vv_trips.emplace_back(static_cast<int>(-pr - 1), static_cast<int>(-pc - 1), it.value());
        }
    }

    RayleighResult res;
    const double anorm = inf_norm(form.matrix);
    const double rank_tol = kRankTolFactor * std::max(anorm, 1e-300);
    Eigen::MatrixXd x_elim = Eigen::MatrixXd::Zero(nvfree, nu);  // A_vv^+ A_vu
    Eigen::MatrixXd schur = a_uu;

    if (nvfree > 0) {
        Eigen::SparseMatrix<double> a_vv(nvfree, nvfree);
        a_vv.setFromTriplets(vv_trips.begin(), vv_trips.end());

        // split into connected components of the sparsity graph; the vertex and
        // edge blocks of a D-gram never couple, and trees split further
        UnionFind uf(nvfree);
        for (int k = 0; k < a_vv.outerSize(); ++k)
            for (Eigen::SparseMatrix<double>::InnerIterator it(a_vv, k); it; ++it)
                if (it.row() != it.col()) uf.unite(it.row(), it.col());
        std::unordered_map<Index, std::vector<Index>> comps;
        for (Index j = 0; j < nvfree; ++j) comps[uf.find(j)].push_back(j);
        std::vector<std::vector<Index>> components;
        components.reserve(comps.size());
        {
            std::vector<Index> roots;
            for (auto& kv : comps) roots.push_back(kv.first);
            std::sort(roots.begin(), roots.end());
            for (Index r : roots) components.push_back(std::move(comps[r]));
        }

        for (const auto& comp : components) {
            const Index cn = static_cast<Index>(comp.size());
            std::vector<Index> pos(static_cast<std::size_t>(nvfree), -1);
            for (Index j = 0; j < cn; ++j) pos[static_cast<std::size_t>(comp[static_cast<std::size_t>(j)])] = j;

            Eigen::MatrixXd rhs(cn, nu);
            for (Index j = 0; j < cn; ++j) rhs.row(j) = a_vu.row(comp[static_cast<std::size_t>(j)]);
            if (rhs.cwiseAbs().maxCoeff() == 0.0) continue;  // component never couples to U

            std::vector<Eigen::Triplet<double>> ct;
            for (Index j = 0; j < cn; ++j)
                for (Eigen::SparseMatrix<double>::InnerIterator it(a_vv, static_cast<int>(comp[static_cast<std::size_t>(j)])); it; ++it) {
                    const Index pr = pos[static_cast<std::size_t>(it.row())];
                    if (pr >= 0) ct.emplace_back(static_cast<int>(pr), static_cast<int>(j), it.value());
                }
            Eigen::SparseMatrix<double> a_cc(cn, cn);
            a_cc.setFromTriplets(ct.begin(), ct.end());

            Eigen::MatrixXd xc;
            bool ok = false;
            {
                Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(a_cc);
                if (ldlt.info() == Eigen::Success) {
                    xc = ldlt.solve(rhs);
                    const double resid = (a_cc * xc - rhs).cwiseAbs().maxCoeff();
                    const double xnorm = xc.cwiseAbs().maxCoeff();
                    ok = std::isfinite(resid) &&
                         resid <= 1e-9 * std::max(1.0, anorm) * std::max(1.0, xnorm);
                }
            }
            if (!ok) {
                // spectral pseudo-inverse; zero directions certify flat modes
                const Eigen::MatrixXd a_cc_dense(a_cc);
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a_cc_dense);
                if (es.info() != Eigen::Success)
                    throw SolverBreakdown("eigendecomposition failed while eliminating off-U block");
                res.used_pseudo_inverse = true;
                Eigen::VectorXd inv = es.eigenvalues();
                for (Index j = 0; j < cn; ++j) {
                    if (inv(j) > rank_tol) {
                        inv(j) = 1.0 / inv(j);
                    } else {
                        inv(j) = 0.0;
                        ++res.rank_deficiency;
                    }
                }
                xc = es.eigenvectors() * inv.asDiagonal() * (es.eigenvectors().transpose() * rhs);
            }
            for (Index j = 0; j < cn; ++j) x_elim.row(comp[static_cast<std::size_t>(j)]) = xc.row(j);
        }
        schur -= a_vu.transpose() * x_elim;
    }

    schur = 0.5 * (schur + schur.transpose()).eval();

    // reduced pencil against the U-seminorm
    const Eigen::VectorXd w_inv_sqrt = u.weights.cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd t = w_inv_sqrt.asDiagonal() * schur * w_inv_sqrt.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    if (es.info() != Eigen::Success)
        throw SolverBreakdown("reduced pencil eigensolve failed");
    const double lambda = es.eigenvalues()(0);
    Eigen::VectorXd w = es.eigenvectors().col(0);
    // deterministic sign: largest component positive
    Index imax = 0;
    w.cwiseAbs().maxCoeff(&imax);
    if (w(imax) < 0.0) w = -w;

    res.value = std::max(lambda, 0.0);
    Eigen::VectorXd sigma_u = w_inv_sqrt.cwiseProduct(w);
    res.witness = Eigen::VectorXd::Zero(m);
    for (Index j = 0; j < nu; ++j) res.witness(u_local[static_cast<std::size_t>(j)]) = sigma_u(j);
    if (nvfree > 0) {
        Eigen::VectorXd sigma_v = -x_elim * sigma_u;
        for (Index j = 0; j < m; ++j)
            if (part[static_cast<std::size_t>(j)] < 0)
                res.witness(j) = sigma_v(-part[static_cast<std::size_t>(j)] - 1);
    }
    res.achieved = res.witness.dot(form.matrix * res.witness);
    double con = 0.0;
    for (Index j = 0; j < nu; ++j) con += u.weights(j) * sigma_u(j) * sigma_u(j);
    res.constraint_residual = std::abs(con - 1.0);
    return res;
}

SingularValueResult smallest_singular_value(const Eigen::SparseMatrix<double>& b,
                                            SvdMethod method) {
    if (b.rows() == 0 || b.cols() == 0 || b.nonZeros() == 0)
        throw BadParameter("smallest_singular_value needs a nonzero matrix");

    SingularValueResult res;
    const Index total = b.rows() + b.cols();
    const bool dense = method == SvdMethod::Dense ||
                       (method == SvdMethod::Auto && total <= kDenseThreshold);

    if (dense) {
        Eigen::MatrixXd bd(b);
        Eigen::MatrixXd g = bd.transpose() * bd;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
        if (es.info() != Eigen::Success) throw SolverBreakdown("dense eigensolve failed");
        const double lam = std::max(es.eigenvalues()(0), 0.0);
        res.value = std::sqrt(lam);
        res.bracket_low = res.bracket_high = res.value;
        res.converged = true;
        return res;
    }

    // shift-free inverse iteration on the normal equations; a small block
    // keeps clustered smallest eigenvalues from stalling the convergence
    Eigen::SparseMatrix<double> g = Eigen::SparseMatrix<double>(b.transpose() * b);
    const double gnorm = inf_norm(g);
    double shift = 0.0;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(g);
    if (ldlt.info() != Eigen::Success) {
        shift = 1e-12 * std::max(gnorm, 1.0);
        Eigen::SparseMatrix<double> id(g.rows(), g.cols());
        id.setIdentity();
        ldlt.compute(g + shift * id);
    }

    const Index n = g.cols();
    const Index block = std::min<Index>(4, n);
    std::mt19937_64 rng(0x9e3779b97f4a7c15ull);  // deterministic start
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Eigen::MatrixXd x(n, block);
    for (Index j = 0; j < n; ++j)
        for (Index k = 0; k < block; ++k) x(j, k) = unif(rng);
    x = Eigen::HouseholderQR<Eigen::MatrixXd>(x).householderQ() * Eigen::MatrixXd::Identity(n, block);

    double lambda = 0.0;
    double resid = gnorm;
    const double tol = 1e-10 * std::max(gnorm, 1.0);
    const Index max_iter = 500;
    if (ldlt.info() != Eigen::Success) {
        res.converged = false;
        res.value = 0.0;
        res.bracket_low = 0.0;
        res.bracket_high = std::sqrt(gnorm);
        return res;
    }
    Index it = 0;
    Eigen::VectorXd ritz_vec = x.col(0);
    for (; it < max_iter; ++it) {
        Eigen::MatrixXd y = ldlt.solve(x);
        if (!y.allFinite()) break;
        x = Eigen::HouseholderQR<Eigen::MatrixXd>(y).householderQ() *
            Eigen::MatrixXd::Identity(n, block);
        // Rayleigh-Ritz on the block, track the smallest Ritz pair
        const Eigen::MatrixXd gx = g * x;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(x.transpose() * gx);
        lambda = small.eigenvalues()(0);
        ritz_vec = x * small.eigenvectors().col(0);
        resid = (g * ritz_vec - lambda * ritz_vec).norm();
        if (resid <= tol) break;
    }
    res.iterations = it + 1;
    res.converged = resid <= tol;
    const double lam = std::max(lambda - shift, 0.0);
    res.value = std::sqrt(lam);
    res.bracket_low = std::sqrt(std::max(lam - resid, 0.0));
    res.bracket_high = std::sqrt(lam + resid);
    return res;
}

}  // namespace gblab

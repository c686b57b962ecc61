#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <string>
#include <vector>

#include "gblab/cochain.hpp"
#include "gblab/graph.hpp"

namespace gblab {

// Section coordinates: [0, nv) are vertices, [nv, nv + ne) canonical edges.
inline Index section_dim(const WeightedGraph& g) { return g.vertex_count() + g.edge_count(); }
inline Index vertex_coord(const WeightedGraph&, VertexId x) { return x; }
inline Index edge_coord(const WeightedGraph& g, Index e) { return g.vertex_count() + e; }

/// Diagonal l2(G) metric over section coordinates: c then r.
Eigen::VectorXd section_metric(const WeightedGraph& g);

/// Which rows the norm of D sigma is accumulated over.
///  - FullGraph: every trusted (non-frontier) coordinate, the l2(G) form used
///    by the closed-range criterion and the star-like estimates.
///  - PuncturedGraph: additionally drops the vertex rows of K and the edge
///    rows interior to K, the reading that removes the subgraph's own
///    coordinates from the norm.
enum class NormConvention { FullGraph, PuncturedGraph };

inline const char* to_string(NormConvention c) {
    return c == NormConvention::FullGraph ? "full" : "punctured";
}

/// Column coordinates a probe section may be supported on, plus the row
/// coordinates the D-norm is measured over. Columns exclude K, the edges of
/// K, frontier vertices and frontier-incident edges; rows exclude the
/// frontier layer (where a truncation would fabricate values) and, under
/// PuncturedGraph, the K coordinates as well.
struct AdmissibleSet {
    std::vector<Index> columns;
    std::vector<Index> rows;
};

AdmissibleSet admissible_set(const WeightedGraph& g, const VertexSet& K,
                             NormConvention convention = NormConvention::FullGraph);

/// Gram form of the restricted Gauss-Bonnet operator: matrix = B^T B with
/// B = sqrt(row weight) * D over (rows x columns), so sigma^T A sigma equals
/// the squared D-norm of any section supported on the columns.
struct QuadraticForm {
    Eigen::SparseMatrix<double> matrix;   // |columns| x |columns|, symmetric PSD
    Eigen::VectorXd metric;               // l2 weight of each column coordinate
    std::vector<Index> coords;            // global section coordinate per column
    Eigen::SparseMatrix<double> rows_op;  // the scaled operator B itself
};

QuadraticForm assemble_D_gram(const WeightedGraph& g, const AdmissibleSet& admissible);

/// Constraint seminorm: positive diagonal weights on a finite coordinate set.
struct ConstraintMask {
    std::vector<Index> coords;  // global section coordinates
    Eigen::VectorXd weights;
};

ConstraintMask constraint_mask(const WeightedGraph& g, const GraphSubset& u);

struct RayleighResult {
    double value = 0.0;            // min of sigma^T A sigma over the U-sphere
    Eigen::VectorXd witness;       // over the form's columns, attains value
    double achieved = 0.0;         // witness^T A witness
    double constraint_residual = 0.0;
    bool used_pseudo_inverse = false;
    Index rank_deficiency = 0;     // zero directions met while eliminating off-U coordinates
};

/// Minimizes sigma^T A sigma subject to the U-seminorm of sigma being one.
/// Off-U coordinates are eliminated by a Schur complement (componentwise
/// sparse LDLT, spectral pseudo-inverse when a block is numerically rank
/// deficient beyond 1e-10 * |A|), then the reduced pencil against the
/// U-seminorm is solved densely. Deterministic; failures throw
/// SolverBreakdown rather than returning a silent zero.
RayleighResult min_rayleigh_constrained(const QuadraticForm& form, const ConstraintMask& u);

enum class SvdMethod { Auto, Dense, Iterative };

struct SingularValueResult {
    double value = 0.0;
    bool converged = true;
    Index iterations = 0;
    double bracket_low = 0.0;
    double bracket_high = 0.0;
};

/// sigma_min(B) = sqrt of the smallest eigenvalue of B^T B. Dense solve up to
/// 500 total dimension, otherwise inverse iteration on the normal equations
/// with a deterministic seeded start vector; non-convergence is reported with
/// the best bracket, never thrown.
SingularValueResult smallest_singular_value(const Eigen::SparseMatrix<double>& b,
                                            SvdMethod method = SvdMethod::Auto);

}  // namespace gblab

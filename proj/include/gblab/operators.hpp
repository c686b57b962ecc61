#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "gblab/cochain.hpp"
#include "gblab/graph.hpp"

namespace gblab {

/// df(e) = f(e+) - f(e-).
Cochain1 d(const Cochain0& f);

/// Coboundary, the formal adjoint of d under the weighted inner products:
/// delta phi (x) = (1/c(x)) sum over edges with head x of r(e) phi(e).
/// This is the summation route; OperatorMatrices carries the sparse route.
Cochain0 delta(const Cochain1& phi);

/// D(f, phi) = (delta phi, df). Symmetric on l2(V) + l2(E).
Section gauss_bonnet(const Section& s);

/// | <df, phi>_E - <f, delta phi>_V |. Zero in exact arithmetic.
double check_adjointness(const Cochain0& f, const Cochain1& phi);

/// Max edgewise residual of d(fg)(e) - [f(e+) dg(e) + g(e-) df(e)].
double derivation_d(const Cochain0& f, const Cochain0& g);

/// Max vertexwise residual of
/// delta(fbar phi)(x) - [f(x) delta phi(x) - (1/2c(x)) sum_{e+ = x} r(e) df(e) phi(e)].
double derivation_delta(const Cochain0& f, const Cochain1& phi);

/// [chi, d] f (e) = -1/2 dchi(e) df(e) - f(e-) dchi(e). Supported on the edge
/// boundary of K.
Cochain1 commutator_chi_d(const Cutoff& cut, const Cochain0& f);

/// [chi, delta] phi (x) = (1/2c(x)) sum_{e+ = x} r(e) dchi(e) phi(e), the
/// weighted form produced by the delta derivation identity. Supported on K
/// and its vertex boundary.
Cochain0 commutator_chi_delta(const Cutoff& cut, const Cochain1& phi);

/// Sparse assembly of the calculus: d f = incidence * f and
/// delta phi = C^-1 incidence^T R phi.
struct OperatorMatrices {
    Eigen::SparseMatrix<double> incidence;  // rows = canonical edges, +1 at head, -1 at tail
    Eigen::VectorXd vertex_weights;         // diagonal of C
    Eigen::VectorXd edge_weights;           // diagonal of R

    static OperatorMatrices build(const WeightedGraph& g);

    Eigen::VectorXd d(const Eigen::VectorXd& f) const { return incidence * f; }
    Eigen::VectorXd delta(const Eigen::VectorXd& phi) const {
        return (incidence.transpose() * edge_weights.cwiseProduct(phi)).cwiseQuotient(vertex_weights);
    }
};

}  // namespace gblab

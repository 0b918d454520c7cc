#pragma once

#include <Eigen/Dense>

#include "varfield/multilinear.hpp"
#include "varfield/rng.hpp"

namespace varfield {

/// Binding regime of a contact quadruple. The two regimes satisfy
/// different closure relations and must not be mixed.
enum class Binding {
  trace,     // f + phi = tr(p q)
  compound,  // f + phi = delta_k (the degree-k invariant integrand)
};

/// Contact quadruple (f, phi, q, p). Both q and p are stored n x nu with
/// the base index as the row: q(i,a) = dx^a/dt^i and p(i,a) = df/dq(i,a).
/// The n x n product written "pq" in index form is then P Q^T.
struct Quadruple {
  double f = 0.0;
  double phi = 0.0;
  MatrixXd q;
  MatrixXd p;
  Binding regime = Binding::trace;
  int k = 0;  // compound degree; meaningful in the compound regime only

  int n() const { return int(q.rows()); }
  int nu() const { return int(q.cols()); }
};

double trace_pairing(const MatrixXd& p, const MatrixXd& q);

/// Residual of the regime's binding relation.
double binding_residual(const Quadruple& u);

struct TransformResult {
  Quadruple quadruple;
  double gamma = 1.0;        // scalar multiplier actually applied by the map
  MatrixXd A;                // auxiliary matrix of the transform
  double delta_tilde = 0.0;  // invariant integrand at the source quadruple
  double H = 0.0;            // canonical (dual) function value
  MatrixXd q_star;           // transformed velocities, n x nu layout
  double conditioning = 0.0; // |det A|
  // Determinant-normalized scalar f^{k-2}/det A and the H it would induce.
  // The degree-k map itself uses the unit normalization (see zk_transform);
  // both scalars are reported.
  double det_scale = 0.0;
  double h_scaled = 0.0;
};

/// Classical swap (f,phi,q,p) -> (phi,f,p,q); trace regime.
Quadruple legendre_swap(const Quadruple& u);

/// A = f I - pq for the trace regime.
MatrixXd caratheodory_A(const Quadruple& u);

/// Determinant-type tangential transform on trace-regime quadruples:
/// gamma = f^{n-2}/det A, f* = gamma f, phi* = gamma phi,
/// p* = gamma A^T q, q* = A^{-1} p. Involutive; preserves the binding.
TransformResult caratheodory_transform(const Quadruple& u);

struct QuadrupleDirection {
  double df = 0.0;
  MatrixXd dq;
  MatrixXd dp;
};

/// Tangential cancellation f (df* - tr(p* dq*)) + f* (df - tr(p dq)) along
/// a curve of trace-regime quadruples through u in the given direction,
/// with the starred differentials obtained by finite differences of the
/// transform. Near zero for valid transforms.
double tangentiality_residual(const Quadruple& u, const QuadrupleDirection& du,
                              double step = 1e-5);

/// Degree-k invariant integrand
/// delta_k = tr Lambda^k( f I + (n/k) pq ) / (C(n,k) f^{k-1}).
double zk_delta(const Quadruple& u, int k);

struct ZkAuxiliary {
  MatrixXd A_inv;    // normalized cofactor-sum matrix; q*^T rows come from p^T A^{-1}
  MatrixXd A;        // its inverse
  double det_scale;  // f^{k-2}/det A
};

/// Auxiliary matrix of the degree-k transform, assembled from signed
/// cofactors of the principal K-blocks of f I + (n/k) pq.
ZkAuxiliary zk_auxiliary(const Quadruple& u, int k);

/// Degree-k tangential transform on compound-regime quadruples:
/// q* = A^{-T} p  (the gradient of delta_k in q), p* = A q, f* = f,
/// phi* = phi. Involutive and binding-preserving with unit multiplier;
/// the determinant-normalized scalar f^{k-2}/det A is reported alongside.
TransformResult zk_transform(const Quadruple& u, int k);

/// Random quadruple with the binding enforced: entries of q, p uniform in
/// [-1,1], f in [0.5,2], phi set from the regime relation. Draws are
/// rejected until the transform's conditioning threshold is met.
Quadruple sample_quadruple(Rng& rng, int n, int nu, Binding regime, int k = 0);

}  // namespace varfield

#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "varfield/excess.hpp"
#include "varfield/forms.hpp"
#include "varfield/multilinear.hpp"

namespace varfield {

/// Scalar function of (t, x).
using TXScalar = std::function<double(const VectorXd&, const VectorXd&)>;
/// Matrix-valued function of (t, x).
using TXMatrix = std::function<MatrixXd(const VectorXd&, const VectorXd&)>;

/// The n action functions S^i(t, x), optionally with analytic Jacobians.
struct ActionFunctions {
  int n = 0;
  int nu = 0;
  std::vector<TXScalar> S;
  // When present, fills Mt(i,j) = dS^i/dt^j and Mx(i,a) = dS^i/dx^a exactly.
  std::function<void(const VectorXd&, const VectorXd&, MatrixXd&, MatrixXd&)> jacobians;
};

/// Partial Jacobians of the action functions; analytic when supplied,
/// otherwise by central differences.
void action_jacobians(const ActionFunctions& S, const VectorXd& t, const VectorXd& x,
                      MatrixXd& Mt, MatrixXd& Mx);

/// Canonical field data: H and the normalized/unnormalized momenta maps.
/// Both Q and q_star use the n x nu layout, Q(i,a) = Q_a^i.
struct CanonicalField {
  int n = 0;
  int nu = 0;
  int k = 0;
  TXScalar H;
  TXMatrix Q;
  TXMatrix q_star;
};

/// Degree-k invariant integrand in terms of action functions: the sum of
/// principal k x k minors of the full-derivative matrix
/// C = dS/dt + dS/dx * xdot.
double invariant_form_value(const ActionFunctions& S, const VectorXd& t, const VectorXd& x,
                            const MatrixXd& xdot, int k);

/// Sum over K containing J of the K-block minors of Mt with the J columns
/// replaced by the Xi columns of Mx (positions kept). The building block of
/// the action-function identities.
double action_minor_sum(const MatrixXd& Mt, const MatrixXd& Mx, const MultiIndex& J,
                        const MultiIndex& Xi, int k);

/// Column expansion of the invariant integrand: every block determinant is
/// expanded over replaced column sets and regrouped into mixed minor sums
/// against the jet minors. Equals invariant_form_value on the same data.
double invariant_form_expansion(const ActionFunctions& S, const VectorXd& t, const VectorXd& x,
                                const MatrixXd& xdot, int k);

/// Block-determinant form of the calibrated integrand (the same sum that
/// the excess subtracts), evaluated on velocity data q.
double poincare_cartan_blocks(const Lagrangian& L, const SlopeField& g, const VectorXd& t,
                              const VectorXd& x, const MatrixXd& q, int k);

/// Its expansion into momentum and deviation minors:
/// f + tr(p w) + sum_{s>=2} f^{1-s} (n/k)^{s-1} C(n-s,k-s)/C(n-1,k-1)
///   * |p_{J,Xi}| |w_{J,Xi}|   with w = q - g.
double poincare_cartan_expansion(const Lagrangian& L, const SlopeField& g, const VectorXd& t,
                                 const VectorXd& x, const MatrixXd& q, int k);

/// Normalized canonical coordinates Q = n q* / (k H), same n x nu layout.
MatrixXd canonical_coords(const MatrixXd& q_star, double H, int k, int n);

/// The degree-n invariant form on the (t, x) chart assembled from H and Q:
/// H sum_K (-1)^{r(K)} (prod_{i in K} (dt^i + Q_a^i dx^a)) dt^{I\K}.
/// Chart coordinates are packed t first, then x.
FormValue omega_value(double H, const MatrixXd& Q, int n, int nu, int k);

FormField omega_field(const CanonicalField& CF);

/// Coefficient of dx^Xi ^ dt^{I\J} (chart-sorted basis) in the exterior
/// derivative of the invariant form; |Xi| = |J| + 1. Vanishes for all
/// (J, Xi) at a point exactly when the form is closed there.
double closedness_residual(const CanonicalField& CF, const VectorXd& t, const VectorXd& x,
                           const MultiIndex& J, const MultiIndex& Xi);

/// First-derivative operator L_mu = d/dx^mu - Q_mu^m d/dt^m applied to a
/// scalar field, at (t, x).
double L_operator(const CanonicalField& CF, const TXScalar& F, const VectorXd& t,
                  const VectorXd& x, int mu);

/// Divergence form of the closedness condition for |J| = 0:
/// L_mu(H) - H * sum_m dQ_mu^m/dt^m.
double closedness_residual_div(const CanonicalField& CF, const VectorXd& t, const VectorXd& x,
                               int mu);

/// Potential form for |J| = 1: L_lam (q*)_mu^l - L_mu (q*)_lam^l.
double momentum_potential_residual(const CanonicalField& CF, const VectorXd& t,
                                   const VectorXd& x, int l, int lam, int mu);

/// Product form of the same condition: L_lam(Q_mu^l H) - L_mu(Q_lam^l H).
double product_potential_residual(const CanonicalField& CF, const VectorXd& t,
                                  const VectorXd& x, int l, int lam, int mu);

/// Hamiltonian as a function of (t, x, q*) with q* in the n x nu layout.
struct HamiltonianData {
  int n = 0;
  int nu = 0;
  std::function<double(const VectorXd& t, const VectorXd& x, const MatrixXd& qs)> eval;

  VectorXd grad_x(const VectorXd& t, const VectorXd& x, const MatrixXd& qs) const;
  MatrixXd grad_qs(const VectorXd& t, const VectorXd& x, const MatrixXd& qs) const;
};

/// A candidate solution: x(t) and q*(t) over the n-dimensional base.
struct Trajectory {
  std::function<VectorXd(const VectorXd&)> x;
  std::function<MatrixXd(const VectorXd&)> q_star;
};

struct CanonicalSystemResidual {
  VectorXd momentum_eq;  // (n/k) sum_m d q*(m,mu)/dt^m - dH/dx^mu
  MatrixXd velocity_eq;  // dx^mu/dt^m + dH/dq*(m,mu)
};

CanonicalSystemResidual canonical_system_residual(const HamiltonianData& Hd,
                                                  const Trajectory& traj,
                                                  const VectorXd& t, int k);

/// Builds the canonical field of a family of action functions: H is the
/// principal-minor sum of dS/dt and q* the normalized single-replacement
/// minor sums.
CanonicalField canonical_from_actions(const ActionFunctions& S, int k);

/// Residual of the degree-s identity between the replacement minor sums of
/// the action gradients and the q* minors of the field:
///   T_s(J,Xi) = C(n-s,k-s) C(n,k)^{s-1} H^{1-s} det(q*_{J,Xi}).
double action_plucker_identity(const ActionFunctions& S, const CanonicalField& CF,
                               const VectorXd& t, const VectorXd& x,
                               const MultiIndex& J, const MultiIndex& Xi, int k);

}  // namespace varfield

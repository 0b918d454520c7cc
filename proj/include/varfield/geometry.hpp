#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "varfield/canonical.hpp"
#include "varfield/excess.hpp"

namespace varfield {

/// Candidate solution surface x(t) with its jet. If no jet is supplied it
/// is recovered by central differences.
struct SurfaceField {
  std::function<VectorXd(const VectorXd&)> x;
  std::function<MatrixXd(const VectorXd&)> jet;  // optional, n x nu

  MatrixXd jet_at(const VectorXd& t, int nu) const;
};

/// Boundary displacement fields T^i(t,x), X^a(t,x).
struct BoundaryFieldPair {
  std::function<VectorXd(const VectorXd&, const VectorXd&)> T;
  std::function<VectorXd(const VectorXd&, const VectorXd&)> X;
};

/// Per-base-direction residual of the moving-boundary optimality condition
/// p_hat X + (f_hat I - p_hat jet^T) T.
VectorXd transversality_residual(const Lagrangian& L, const SurfaceField& surface,
                                 const BoundaryFieldPair& pair, const VectorXd& t);

/// Second-derivative blocks of a Hamiltonian along a reference solution,
/// with the q*-pair index (m, rho) flattened as m * nu + rho.
struct HamiltonianBlocks {
  MatrixXd hxx;  // nu x nu
  MatrixXd hxq;  // nu x (n nu)
  MatrixXd hqq;  // (n nu) x (n nu)
};

using BlocksProvider = std::function<HamiltonianBlocks(const VectorXd& t)>;

/// Finite-difference blocks of H along a reference trajectory.
BlocksProvider blocks_from_hamiltonian(const HamiltonianData& Hd, const Trajectory& ref);

/// State of the linearized flow: V and the per-direction matrices U^m.
struct VariationalState {
  MatrixXd V;                // nu x nu
  std::vector<MatrixXd> U;   // n matrices, nu x nu each
};

using StateField = std::function<VariationalState(const VectorXd& t)>;

struct VariationalResidual {
  std::vector<MatrixXd> first;  // per m: dV/dt^m + H_{q*x}^{(m)} V + sum H_{q*q*} U
  MatrixXd second;              // sum_m dU^m/dt^m - H_{xx} V - sum H_{xq*}^{(m)} U^m
};

VariationalResidual variational_residual(const BlocksProvider& blocks, const StateField& state,
                                         const VectorXd& t, int n, int nu);

using WField = std::function<std::vector<MatrixXd>(const VectorXd& t)>;  // n matrices nu x nu

/// Left minus right of the matrix Riccati equation
/// sum_m dW^m/dt^m = H_xx + H_xq W + W H_qx + W H_qq W.
MatrixXd riccati_residual(const BlocksProvider& blocks, const WField& W, const VectorXd& t,
                          int n, int nu);

/// W built from second derivatives of the action functions along a surface;
/// for k = 1 this is the x-Hessian of the action vector.
std::vector<MatrixXd> w_from_actions(const ActionFunctions& S, const SurfaceField& surface,
                                     const VectorXd& t, int k);

/// Connection matrices y_i(t), one nu x nu matrix per base direction.
using ConnectionField = std::function<std::vector<MatrixXd>(const VectorXd& t)>;

/// Covariant derivative of a section along direction v:
/// sum_i v_i (dx/dt^i - y_i x).
VectorXd covariant_derivative(const ConnectionField& y,
                              const std::function<VectorXd(const VectorXd&)>& section,
                              const VectorXd& v, const VectorXd& t);

/// Curvature component R_ij = dy_i/dt^j - dy_j/dt^i - [y_i, y_j].
MatrixXd curvature(const ConnectionField& y, const VectorXd& t, int i, int j);

/// Classic fixed-step fourth-order integrator.
VectorXd rk4_integrate(const std::function<VectorXd(double, const VectorXd&)>& f,
                       VectorXd y0, double t0, double t1, int steps);

}  // namespace varfield

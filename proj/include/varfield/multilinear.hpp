#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>

#include "varfield/combi.hpp"

namespace varfield {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Dense 4-tensor with row-major index layout. Small sizes only.
class Tensor4 {
 public:
  Tensor4() : d_{0, 0, 0, 0} {}
  Tensor4(int d0, int d1, int d2, int d3)
      : d_{d0, d1, d2, d3}, v_(size_t(d0) * d1 * d2 * d3, 0.0) {}

  double& operator()(int i, int j, int k, int l) { return v_[idx(i, j, k, l)]; }
  double operator()(int i, int j, int k, int l) const { return v_[idx(i, j, k, l)]; }

  int dim(int a) const { return d_[a]; }
  std::vector<double>& data() { return v_; }
  const std::vector<double>& data() const { return v_; }

  double max_abs() const {
    double m = 0.0;
    for (double x : v_) m = std::max(m, std::abs(x));
    return m;
  }

  Tensor4& operator+=(const Tensor4& o) {
    for (size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
  }
  Tensor4& operator-=(const Tensor4& o) {
    for (size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
    return *this;
  }
  Tensor4& operator*=(double s) {
    for (double& x : v_) x *= s;
    return *this;
  }

 private:
  size_t idx(int i, int j, int k, int l) const {
    return ((size_t(i) * d_[1] + j) * d_[2] + k) * d_[3] + l;
  }
  int d_[4];
  std::vector<double> v_;
};

/// Exterior k-power: the C(rows,k) x C(cols,k) matrix of all k x k minors,
/// row and column blocks in lexicographic multi-index order.
MatrixXd exterior_power(const MatrixXd& M, int k);

/// Sum of all principal k x k minors of a square matrix.
/// Equals the elementary symmetric polynomial e_k of the eigenvalues; the
/// characteristic-polynomial coefficient of det(C - lambda I) before
/// lambda^{n-k} carries an extra factor (-1)^{n-k} relative to this value.
double principal_minor_sum(const MatrixXd& C, int k);

/// Gradient of principal_minor_sum(.,k): G(l,m) = d e_k(C) / d C(l,m).
/// Closed form: G = (sum_{j=0}^{k-1} (-1)^j e_{k-1-j}(C) C^j)^T.
MatrixXd minor_sum_gradient(const MatrixXd& C, int k);

/// Signed cofactor of the entry (rows[0], cols[0]) or, for order-2 index
/// sets, of the 2x2 minor in the given rows and columns.
double adjugate_entry(const MatrixXd& C, const MultiIndex& rows, const MultiIndex& cols);

/// Concatenation of all l x l minors of q for l = 1..min(rows,cols),
/// lexicographic within each grade. Length C(rows+cols, rows) - 1.
VectorXd plucker_embed(const MatrixXd& q);

/// det(diag(phi) + a b^T) via the rank-one update expansion
/// prod_i phi_i + sum_j b_j phi_1..phi_{j-1} a_j phi_{j+1}..phi_n.
double det_rank1_update(const VectorXd& phi, const VectorXd& a, const VectorXd& b);

struct FdOptions {
  double step_scale = 1.0;  // multiplies the default eps-derived step
};

/// Central-difference gradient of a scalar function of a matrix, in the
/// same index layout as the argument. Step h = eps^{1/3} max(1,|entry|).
MatrixXd fd_gradient(const std::function<double(const MatrixXd&)>& f,
                     const MatrixXd& M, const FdOptions& opt = {});

/// Central-difference Hessian, layout (rows, cols, rows, cols).
/// Step h = eps^{1/4} max(1,|entry|).
Tensor4 fd_hessian(const std::function<double(const MatrixXd&)>& f,
                   const MatrixXd& M, const FdOptions& opt = {});

/// Central-difference derivative of a scalar function of a vector argument.
VectorXd fd_gradient_vec(const std::function<double(const VectorXd&)>& f,
                         const VectorXd& v, const FdOptions& opt = {});

double fd_partial(const std::function<double(const VectorXd&)>& f,
                  const VectorXd& v, int coord, const FdOptions& opt = {});

}  // namespace varfield

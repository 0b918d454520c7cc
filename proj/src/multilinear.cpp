#include "varfield/multilinear.hpp"

#include <cmath>
#include <limits>

namespace varfield {

namespace {

double submatrix_det(const MatrixXd& M, const MultiIndex& rows, const MultiIndex& cols) {
  const int k = int(rows.size());
  if (k == 0) return 1.0;
  if (k == 1) return M(rows[0], cols[0]);
  MatrixXd S(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) S(i, j) = M(rows[i], cols[j]);
  if (k == 2) return S(0, 0) * S(1, 1) - S(0, 1) * S(1, 0);
  return S.determinant();
}

}  // namespace

MatrixXd exterior_power(const MatrixXd& M, int k) {
  const int r = int(M.rows()), c = int(M.cols());
  if (k < 1 || k > std::min(r, c)) throw std::invalid_argument("exterior_power: order out of range");
  const auto rows = combinations(r, k);
  const auto cols = combinations(c, k);
  MatrixXd out(rows.size(), cols.size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols.size(); ++j) out(i, j) = submatrix_det(M, rows[i], cols[j]);
  return out;
}

double principal_minor_sum(const MatrixXd& C, int k) {
  const int n = int(C.rows());
  if (C.cols() != n) throw std::invalid_argument("principal_minor_sum: matrix must be square");
  if (k < 1 || k > n) throw std::invalid_argument("principal_minor_sum: order out of range");
  double s = 0.0;
  for (const auto& K : combinations(n, k)) s += submatrix_det(C, K, K);
  return s;
}

MatrixXd minor_sum_gradient(const MatrixXd& C, int k) {
  const int n = int(C.rows());
  std::vector<double> e(k);  // e[j] = e_j(C), j = 0..k-1
  e[0] = 1.0;
  for (int j = 1; j < k; ++j) e[j] = principal_minor_sum(C, j);
  MatrixXd P = MatrixXd::Zero(n, n);
  MatrixXd Cj = MatrixXd::Identity(n, n);
  for (int j = 0; j < k; ++j) {
    P += ((j % 2 == 0) ? 1.0 : -1.0) * e[k - 1 - j] * Cj;
    if (j + 1 < k) Cj = Cj * C;
  }
  return P.transpose();
}

double adjugate_entry(const MatrixXd& C, const MultiIndex& rows, const MultiIndex& cols) {
  const int n = int(C.rows());
  if (C.cols() != n) throw std::invalid_argument("adjugate_entry: matrix must be square");
  if (rows.size() != cols.size() || rows.empty() || rows.size() > 2)
    throw std::invalid_argument("adjugate_entry: index sets must have order 1 or 2");
  check_multi_index(rows, n);
  check_multi_index(cols, n);
  long s = 0;
  for (int v : rows) s += v;
  for (int v : cols) s += v;
  const double sign = (s % 2 == 0) ? 1.0 : -1.0;
  return sign * submatrix_det(C, complement(rows, n), complement(cols, n));
}

VectorXd plucker_embed(const MatrixXd& q) {
  const int r = int(q.rows()), c = int(q.cols());
  long len = 0;
  const int lmax = std::min(r, c);
  for (int l = 1; l <= lmax; ++l) len += binom_l(r, l) * binom_l(c, l);
  VectorXd out(len);
  long pos = 0;
  for (int l = 1; l <= lmax; ++l)
    for (const auto& R : combinations(r, l))
      for (const auto& C : combinations(c, l)) out(pos++) = submatrix_det(q, R, C);
  return out;
}

double det_rank1_update(const VectorXd& phi, const VectorXd& a, const VectorXd& b) {
  const int n = int(phi.size());
  if (a.size() != n || b.size() != n) throw std::invalid_argument("det_rank1_update: size mismatch");
  double prod = 1.0;
  for (int i = 0; i < n; ++i) prod *= phi(i);
  double acc = prod;
  for (int j = 0; j < n; ++j) {
    double term = b(j) * a(j);
    for (int i = 0; i < n; ++i)
      if (i != j) term *= phi(i);
    acc += term;
  }
  return acc;
}

namespace {
const double kEps = std::numeric_limits<double>::epsilon();

double step1(double x, double scale) { return std::cbrt(kEps) * std::max(1.0, std::abs(x)) * scale; }
double step2(double x, double scale) { return std::pow(kEps, 0.25) * std::max(1.0, std::abs(x)) * scale; }

void check_finite(double v) {
  if (!std::isfinite(v)) throw std::runtime_error("finite-difference stencil produced a non-finite value");
}
}  // namespace

MatrixXd fd_gradient(const std::function<double(const MatrixXd&)>& f,
                     const MatrixXd& M, const FdOptions& opt) {
  MatrixXd g(M.rows(), M.cols());
  MatrixXd W = M;
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j) {
      const double h = step1(M(i, j), opt.step_scale);
      W(i, j) = M(i, j) + h;
      const double fp = f(W);
      W(i, j) = M(i, j) - h;
      const double fm = f(W);
      W(i, j) = M(i, j);
      check_finite(fp);
      check_finite(fm);
      g(i, j) = (fp - fm) / (2.0 * h);
    }
  return g;
}

Tensor4 fd_hessian(const std::function<double(const MatrixXd&)>& f,
                   const MatrixXd& M, const FdOptions& opt) {
  const int r = int(M.rows()), c = int(M.cols());
  Tensor4 H(r, c, r, c);
  MatrixXd W = M;
  const double f0 = f(M);
  check_finite(f0);
  for (int i = 0; i < r; ++i)
    for (int a = 0; a < c; ++a) {
      const double hi = step2(M(i, a), opt.step_scale);
      for (int j = 0; j < r; ++j)
        for (int b = 0; b < c; ++b) {
          if (j * c + b < i * c + a) {
            H(i, a, j, b) = H(j, b, i, a);
            continue;
          }
          if (i == j && a == b) {
            W(i, a) = M(i, a) + hi;
            const double fp = f(W);
            W(i, a) = M(i, a) - hi;
            const double fm = f(W);
            W(i, a) = M(i, a);
            check_finite(fp);
            check_finite(fm);
            H(i, a, i, a) = (fp - 2.0 * f0 + fm) / (hi * hi);
            continue;
          }
          const double hj = step2(M(j, b), opt.step_scale);
          double v[4];
          const double si[4] = {1, 1, -1, -1}, sj[4] = {1, -1, 1, -1};
          for (int t = 0; t < 4; ++t) {
            W(i, a) = M(i, a) + si[t] * hi;
            W(j, b) = M(j, b) + sj[t] * hj;
            v[t] = f(W);
            check_finite(v[t]);
            W(i, a) = M(i, a);
            W(j, b) = M(j, b);
          }
          H(i, a, j, b) = (v[0] - v[1] - v[2] + v[3]) / (4.0 * hi * hj);
        }
    }
  return H;
}

VectorXd fd_gradient_vec(const std::function<double(const VectorXd&)>& f,
                         const VectorXd& v, const FdOptions& opt) {
  VectorXd g(v.size());
  for (int i = 0; i < v.size(); ++i) g(i) = fd_partial(f, v, i, opt);
  return g;
}

double fd_partial(const std::function<double(const VectorXd&)>& f,
                  const VectorXd& v, int coord, const FdOptions& opt) {
  VectorXd w = v;
  const double h = step1(v(coord), opt.step_scale);
  w(coord) = v(coord) + h;
  const double fp = f(w);
  w(coord) = v(coord) - h;
  const double fm = f(w);
  check_finite(fp);
  check_finite(fm);
  return (fp - fm) / (2.0 * h);
}

}  // namespace varfield

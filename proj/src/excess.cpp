#include "varfield/excess.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace varfield {

namespace {
constexpr double kSingularTol = 1e-10;

Eigen::SelfAdjointEigenSolver<MatrixXd> symmetric_eigen(const Tensor4& H, int n, int nu) {
  MatrixXd S(n * nu, n * nu);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < nu; ++a)
      for (int j = 0; j < n; ++j)
        for (int b = 0; b < nu; ++b) S(i * nu + a, j * nu + b) = H(i, a, j, b);
  S = 0.5 * (S + S.transpose()).eval();
  return Eigen::SelfAdjointEigenSolver<MatrixXd>(S);
}
}  // namespace

MatrixXd Lagrangian::gradient(const VectorXd& t, const VectorXd& x, const MatrixXd& q) const {
  if (grad_q) return grad_q(t, x, q);
  return fd_gradient([&](const MatrixXd& m) { return eval(t, x, m); }, q);
}

Tensor4 Lagrangian::hessian(const VectorXd& t, const VectorXd& x, const MatrixXd& q) const {
  if (hess_q) return hess_q(t, x, q);
  return fd_hessian([&](const MatrixXd& m) { return eval(t, x, m); }, q);
}

double excess_value(const Lagrangian& L, const SlopeField& g, const VectorXd& t,
                    const VectorXd& x, const MatrixXd& q, int k) {
  const int n = L.n;
  if (k < 1 || k > n) throw std::invalid_argument("excess_value: degree out of range");
  const MatrixXd gv = g.eval(t, x);
  const double fh = L.eval(t, x, gv);
  if (k > 1 && std::abs(fh) < kSingularTol)
    throw std::runtime_error("excess_value: field value of the integrand vanishes");
  const MatrixXd ph = L.gradient(t, x, gv);
  const MatrixXd w = q - gv;
  const MatrixXd B =
      fh * MatrixXd::Identity(n, n) + (double(n) / k) * (ph * w.transpose());
  return L.eval(t, x, q) - principal_minor_sum(B, k) / (binom(n, k) * std::pow(fh, k - 1));
}

StationarityReport excess_stationarity(const Lagrangian& L, const SlopeField& g,
                                       const VectorXd& t, const VectorXd& x, int k) {
  const int n = L.n, nu = L.nu;
  const MatrixXd gv = g.eval(t, x);
  StationarityReport rep;
  rep.gradient = fd_gradient(
      [&](const MatrixXd& m) { return excess_value(L, g, t, x, m, k); }, gv);

  // Cofactor route: p_hat minus the block-adjunct sum applied to (n/k) p_hat,
  // evaluated at q = g where every block is f_hat * I.
  const double fh = L.eval(t, x, gv);
  const MatrixXd ph = L.gradient(t, x, gv);
  const MatrixXd w = MatrixXd::Zero(n, nu);
  const MatrixXd B =
      fh * MatrixXd::Identity(n, n) + (double(n) / k) * (ph * w.transpose());
  const double scale = 1.0 / (binom(n, k) * std::pow(fh, k - 1));
  double worst = 0.0;
  for (int l = 0; l < n; ++l)
    for (int lam = 0; lam < nu; ++lam) {
      double acc = 0.0;
      for (const auto& K : combinations(n, k)) {
        if (!contains(K, l)) continue;
        MatrixXd BK(k, k);
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j) BK(i, j) = B(K[i], K[j]);
        const int lpos = int(std::find(K.begin(), K.end(), l) - K.begin());
        for (int ipos = 0; ipos < k; ++ipos)
          acc += adjugate_entry(BK, {ipos}, {lpos}) * (double(n) / k) * ph(K[ipos], lam);
      }
      worst = std::max(worst, std::abs(ph(l, lam) - scale * acc));
    }
  rep.residual = worst;
  return rep;
}

Tensor4 corrected_hessian(const Lagrangian& L, const SlopeField& g, const VectorXd& t,
                          const VectorXd& x, int k) {
  const int n = L.n, nu = L.nu;
  if (k >= 2 && n < 2) throw std::invalid_argument("corrected_hessian: degree above one needs n >= 2");
  const MatrixXd gv = g.eval(t, x);
  const double fh = L.eval(t, x, gv);
  if (std::abs(fh) < kSingularTol && k > 1)
    throw std::runtime_error("corrected_hessian: field value of the integrand vanishes");
  Tensor4 H = L.hessian(t, x, gv);
  if (k == 1) return H;
  const MatrixXd ph = L.gradient(t, x, gv);
  const double coef = double(n) * (k - 1) / (double(k) * (n - 1) * fh);
  for (int l = 0; l < n; ++l)
    for (int lam = 0; lam < nu; ++lam)
      for (int m = 0; m < n; ++m)
        for (int mu = 0; mu < nu; ++mu)
          H(l, lam, m, mu) -= coef * (ph(l, lam) * ph(m, mu) - ph(l, mu) * ph(m, lam));
  return H;
}

GeodesicVerdict geodesic_field_check(const Lagrangian& L, const SlopeField& g,
                                     const std::vector<std::pair<VectorXd, VectorXd>>& samples,
                                     int k, GeodesicMode mode, Rng& rng,
                                     int starts, double radius) {
  GeodesicVerdict v;
  constexpr double kTol = -1e-8;
  for (const auto& [t, x] : samples) {
    if (mode == GeodesicMode::local) {
      const Tensor4 H = corrected_hessian(L, g, t, x, k);
      const auto es = symmetric_eigen(H, L.n, L.nu);
      const double lo = es.eigenvalues().minCoeff();
      if (lo < v.worst) v.worst = lo;
      if (lo < kTol) {
        v.geodesic = false;
        const VectorXd dir = es.eigenvectors().col(0);
        MatrixXd w(L.n, L.nu);
        for (int i = 0; i < L.n; ++i)
          for (int a = 0; a < L.nu; ++a) w(i, a) = dir(i * L.nu + a);
        v.witness = g.eval(t, x) + w;
        v.witness_t = t;
        v.witness_x = x;
        return v;
      }
      continue;
    }
    // Global mode: multistart descent with backtracking line search.
    const MatrixXd gv = g.eval(t, x);
    auto E = [&](const MatrixXd& q) { return excess_value(L, g, t, x, q, k); };
    for (int s = 0; s < starts; ++s) {
      MatrixXd q = gv + rng.matrix(L.n, L.nu, -radius, radius);
      double val = E(q);
      for (int it = 0; it < 200; ++it) {
        if (val < kTol) break;
        const MatrixXd grad = fd_gradient(E, q);
        const double gn = grad.norm();
        if (gn < 1e-10) break;
        double alpha = 1.0;
        bool moved = false;
        for (int ls = 0; ls < 30; ++ls) {
          const MatrixXd cand = q - alpha * grad;
          if ((cand - gv).norm() <= radius) {
            const double cv = E(cand);
            if (cv < val - 1e-4 * alpha * gn * gn) {
              q = cand;
              val = cv;
              moved = true;
              break;
            }
          }
          alpha *= 0.5;
        }
        if (!moved) break;
      }
      if (val < v.worst) v.worst = val;
      if (val < kTol) {
        v.geodesic = false;
        v.witness = q;
        v.witness_t = t;
        v.witness_x = x;
        return v;
      }
    }
  }
  return v;
}

}  // namespace varfield

#include "varfield/conditions.hpp"

#include <cmath>
#include <stdexcept>

namespace varfield {

double QuadFormTensor::pair_swap_defect() const {
  double worst = 0.0;
  for (int al = 0; al < nu; ++al)
    for (int be = 0; be < nu; ++be)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          worst = std::max(worst, std::abs(a(al, be, i, j) - a(be, al, j, i)));
  return worst;
}

double SkewTensor::antisymmetry_defect() const {
  double worst = 0.0;
  for (int al = 0; al < nu; ++al)
    for (int be = 0; be < nu; ++be)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          worst = std::max(worst, std::abs(r(al, be, i, j) + r(be, al, i, j)));
          worst = std::max(worst, std::abs(r(al, be, i, j) + r(al, be, j, i)));
        }
  return worst;
}

double biquadratic_eval(const QuadFormTensor& a, const VectorXd& xi, const VectorXd& eta) {
  if (xi.size() != a.nu || eta.size() != a.n)
    throw std::invalid_argument("biquadratic_eval: dimension mismatch");
  double acc = 0.0;
  for (int al = 0; al < a.nu; ++al)
    for (int be = 0; be < a.nu; ++be)
      for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j)
          acc += a.a(al, be, i, j) * xi(al) * xi(be) * eta(i) * eta(j);
  return acc;
}

double quadratic_eval(const QuadFormTensor& a, const MatrixXd& q) {
  double acc = 0.0;
  for (int al = 0; al < a.nu; ++al)
    for (int be = 0; be < a.nu; ++be)
      for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j) acc += a.a(al, be, i, j) * q(i, al) * q(j, be);
  return acc;
}

QuadFormTensor quadform_from_hessian(const Tensor4& hess, int n, int nu) {
  QuadFormTensor out;
  out.n = n;
  out.nu = nu;
  out.a = Tensor4(nu, nu, n, n);
  for (int i = 0; i < n; ++i)
    for (int al = 0; al < nu; ++al)
      for (int j = 0; j < n; ++j)
        for (int be = 0; be < nu; ++be) out.a(al, be, i, j) = hess(i, al, j, be);
  return out;
}

namespace {

MatrixXd contract_eta(const QuadFormTensor& a, const VectorXd& eta) {
  MatrixXd G = MatrixXd::Zero(a.nu, a.nu);
  for (int al = 0; al < a.nu; ++al)
    for (int be = 0; be < a.nu; ++be)
      for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j) G(al, be) += a.a(al, be, i, j) * eta(i) * eta(j);
  return 0.5 * (G + G.transpose()).eval();
}

MatrixXd contract_xi(const QuadFormTensor& a, const VectorXd& xi) {
  MatrixXd G = MatrixXd::Zero(a.n, a.n);
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j)
      for (int al = 0; al < a.nu; ++al)
        for (int be = 0; be < a.nu; ++be) G(i, j) += a.a(al, be, i, j) * xi(al) * xi(be);
  return 0.5 * (G + G.transpose()).eval();
}

}  // namespace

Rank1Report hadamard_legendre_check(const QuadFormTensor& a, Rng& rng,
                                    int restarts, int max_iters) {
  Rank1Report best;
  best.min_value = std::numeric_limits<double>::infinity();
  for (int s = 0; s < restarts; ++s) {
    VectorXd xi = rng.unit_vector(a.nu);
    VectorXd eta = rng.unit_vector(a.n);
    double value = biquadratic_eval(a, xi, eta);
    for (int it = 0; it < max_iters; ++it) {
      Eigen::SelfAdjointEigenSolver<MatrixXd> ex(contract_eta(a, eta));
      xi = ex.eigenvectors().col(0);
      Eigen::SelfAdjointEigenSolver<MatrixXd> ee(contract_xi(a, xi));
      eta = ee.eigenvectors().col(0);
      const double next = biquadratic_eval(a, xi, eta);
      if (std::abs(next - value) < 1e-14 * std::max(1.0, std::abs(value))) {
        value = next;
        break;
      }
      value = next;
    }
    if (value < best.min_value) {
      best.min_value = value;
      best.xi = xi;
      best.eta = eta;
    }
  }
  best.epsilon = best.min_value;
  constexpr double kTol = 1e-8;
  best.verdict = best.min_value < -kTol  ? Rank1Verdict::fails
                 : best.min_value > kTol ? Rank1Verdict::strict
                                         : Rank1Verdict::marginal;
  return best;
}

double rank1_grid_min(const QuadFormTensor& a, int resolution) {
  if (a.nu == 2 && a.n == 2) {
    // Angle grid over the product of circles, refined around the best cell.
    auto on_circle = [](double th) {
      VectorXd v(2);
      v << std::cos(th), std::sin(th);
      return v;
    };
    double c1 = M_PI / 2.0, c2 = M_PI / 2.0, w = M_PI / 2.0;
    double lo = std::numeric_limits<double>::infinity();
    for (int level = 0; level < 6; ++level) {
      double b1 = c1, b2 = c2;
      for (int i = 0; i <= resolution; ++i)
        for (int j = 0; j <= resolution; ++j) {
          const double t1 = c1 - w + 2.0 * w * i / resolution;
          const double t2 = c2 - w + 2.0 * w * j / resolution;
          const double v = biquadratic_eval(a, on_circle(t1), on_circle(t2));
          if (v < lo) {
            lo = v;
            b1 = t1;
            b2 = t2;
          }
        }
      c1 = b1;
      c2 = b2;
      w = 2.0 * w / resolution;
    }
    return lo;
  }
  // Quasi-random sphere covering for the remaining shapes.
  auto sphere_points = [&](int d) {
    std::vector<VectorXd> pts;
    if (d == 1) {
      pts.push_back(VectorXd::Constant(1, 1.0));
      return pts;
    }
    const int m = resolution * resolution * 4;
    for (int i = 0; i < m; ++i) {
      VectorXd v(d);
      double x = 0.5 + i;
      for (int c = 0; c < d; ++c) {
        x = std::fmod(x * 0.6180339887498949 + 0.382, 1.0);
        v(c) = std::cos(M_PI * x);
      }
      const double nn = v.norm();
      if (nn > 1e-12) pts.push_back(v / nn);
    }
    return pts;
  };
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& xi : sphere_points(a.nu))
    for (const auto& eta : sphere_points(a.n)) lo = std::min(lo, biquadratic_eval(a, xi, eta));
  return lo;
}

double quadratic_min_full(const QuadFormTensor& a) {
  const int n = a.n, nu = a.nu;
  MatrixXd S = MatrixXd::Zero(n * nu, n * nu);
  for (int i = 0; i < n; ++i)
    for (int al = 0; al < nu; ++al)
      for (int j = 0; j < n; ++j)
        for (int be = 0; be < nu; ++be) S(i * nu + al, j * nu + be) = a.a(al, be, i, j);
  S = 0.5 * (S + S.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(S);
  return es.eigenvalues().minCoeff();
}

QuadFormTensor skew_addition(const QuadFormTensor& a, const SkewTensor& r) {
  if (r.antisymmetry_defect() > 1e-12)
    throw std::invalid_argument("skew_addition: tensor is not antisymmetric in both index pairs");
  QuadFormTensor out = a;
  // r(q_i^a q_j^b - q_i^b q_j^a) contributes 2 r to the symmetric coefficients.
  for (int al = 0; al < a.nu; ++al)
    for (int be = 0; be < a.nu; ++be)
      for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j) out.a(al, be, i, j) += 2.0 * r.r(al, be, i, j);
  return out;
}

}  // namespace varfield

#include "varfield/transforms.hpp"

#include <cmath>
#include <stdexcept>

namespace varfield {

namespace {

void require_regime(const Quadruple& u, Binding expected, const char* op) {
  if (u.regime != expected)
    throw std::invalid_argument(std::string(op) + ": quadruple carries the wrong binding regime");
}

constexpr double kSingularTol = 1e-8;

}  // namespace

double trace_pairing(const MatrixXd& p, const MatrixXd& q) {
  return (p.array() * q.array()).sum();
}

double binding_residual(const Quadruple& u) {
  if (u.regime == Binding::trace) return u.f + u.phi - trace_pairing(u.p, u.q);
  return u.f + u.phi - zk_delta(u, u.k);
}

Quadruple legendre_swap(const Quadruple& u) {
  require_regime(u, Binding::trace, "legendre_swap");
  Quadruple v;
  v.f = u.phi;
  v.phi = u.f;
  v.q = u.p;
  v.p = u.q;
  v.regime = Binding::trace;
  return v;
}

MatrixXd caratheodory_A(const Quadruple& u) {
  const int n = u.n();
  return u.f * MatrixXd::Identity(n, n) - u.p * u.q.transpose();
}

TransformResult caratheodory_transform(const Quadruple& u) {
  require_regime(u, Binding::trace, "caratheodory_transform");
  const int n = u.n();
  const MatrixXd A = caratheodory_A(u);
  const double detA = A.determinant();
  if (std::abs(detA) < kSingularTol * std::pow(std::max(std::abs(u.f), 1.0), n) ||
      std::abs(u.f) < kSingularTol)
    throw std::runtime_error("caratheodory_transform: singular transform, |det A| = " +
                             std::to_string(std::abs(detA)));
  const double gamma = std::pow(u.f, n - 2) / detA;
  const MatrixXd Ainv = A.inverse();

  TransformResult r;
  r.quadruple.f = gamma * u.f;
  r.quadruple.phi = gamma * u.phi;
  r.quadruple.p = gamma * A.transpose() * u.q;
  r.quadruple.q = Ainv * u.p;
  r.quadruple.regime = Binding::trace;
  r.gamma = gamma;
  r.A = A;
  r.delta_tilde = trace_pairing(u.p, u.q);
  r.H = r.quadruple.f;  // value of the dual function at q*
  r.q_star = r.quadruple.q;
  r.conditioning = std::abs(detA);
  r.det_scale = gamma;
  r.h_scaled = r.H;
  return r;
}

double tangentiality_residual(const Quadruple& u, const QuadrupleDirection& du, double step) {
  require_regime(u, Binding::trace, "tangentiality_residual");
  auto at = [&](double s) {
    Quadruple v = u;
    v.f = u.f + s * du.df;
    v.q = u.q + s * du.dq;
    v.p = u.p + s * du.dp;
    v.phi = trace_pairing(v.p, v.q) - v.f;  // stay on the binding manifold
    return caratheodory_transform(v);
  };
  const TransformResult mid = at(0.0), plus = at(step), minus = at(-step);
  const double dfs = (plus.quadruple.f - minus.quadruple.f) / (2.0 * step);
  const MatrixXd dqs = (plus.quadruple.q - minus.quadruple.q) / (2.0 * step);
  const double lhs = u.f * (dfs - trace_pairing(mid.quadruple.p, dqs)) +
                     mid.quadruple.f * (du.df - trace_pairing(u.p, du.dq));
  return lhs;
}

double zk_delta(const Quadruple& u, int k) {
  const int n = u.n();
  if (k < 1 || k > n) throw std::invalid_argument("zk_delta: degree out of range");
  if (k > 1 && std::abs(u.f) < kSingularTol)
    throw std::runtime_error("zk_delta: vanishing base value with degree above one");
  const MatrixXd B =
      u.f * MatrixXd::Identity(n, n) + (double(n) / k) * (u.p * u.q.transpose());
  return principal_minor_sum(B, k) / (binom(n, k) * std::pow(u.f, k - 1));
}

ZkAuxiliary zk_auxiliary(const Quadruple& u, int k) {
  const int n = u.n();
  if (k < 1 || k > n) throw std::invalid_argument("zk_auxiliary: degree out of range");
  if (k > 1 && std::abs(u.f) < kSingularTol)
    throw std::runtime_error("zk_auxiliary: vanishing base value with degree above one");
  const MatrixXd B =
      u.f * MatrixXd::Identity(n, n) + (double(n) / k) * (u.p * u.q.transpose());
  const double c = (double(n) / k) / (binom(n, k) * std::pow(u.f, k - 1));
  // Entry (l,m) of A^{-1} is c * sum over K containing {l,m} of the signed
  // cofactor of the (l,m) element of the K-block; the sum collapses to the
  // gradient of the principal-minor sum.
  ZkAuxiliary aux;
  aux.A_inv = c * minor_sum_gradient(B, k);
  const double det_inv = aux.A_inv.determinant();
  if (std::abs(det_inv) < kSingularTol)
    throw std::runtime_error("zk_auxiliary: singular auxiliary matrix");
  aux.A = aux.A_inv.inverse();
  aux.det_scale = std::pow(u.f, k - 2) * det_inv;
  return aux;
}

TransformResult zk_transform(const Quadruple& u, int k) {
  require_regime(u, Binding::compound, "zk_transform");
  if (std::abs(u.f) < kSingularTol)
    throw std::runtime_error("zk_transform: vanishing base value");
  const ZkAuxiliary aux = zk_auxiliary(u, k);
  const double dt = zk_delta(u, k);

  TransformResult r;
  r.quadruple.f = u.f;
  r.quadruple.phi = u.phi;
  r.quadruple.q = aux.A_inv.transpose() * u.p;  // rows are the gradient of delta_k
  r.quadruple.p = aux.A * u.q;
  r.quadruple.regime = Binding::compound;
  r.quadruple.k = k;
  r.gamma = 1.0;
  r.A = aux.A;
  r.delta_tilde = dt;
  r.H = dt - u.f;
  r.q_star = r.quadruple.q;
  r.conditioning = std::abs(aux.A.determinant());
  r.det_scale = aux.det_scale;
  r.h_scaled = aux.det_scale * (dt - u.f);
  return r;
}

Quadruple sample_quadruple(Rng& rng, int n, int nu, Binding regime, int k) {
  for (int attempt = 0; attempt < 256; ++attempt) {
    Quadruple u;
    u.q = rng.matrix(n, nu, -1.0, 1.0);
    u.p = rng.matrix(n, nu, -1.0, 1.0);
    u.f = rng.uniform(0.5, 2.0);
    u.regime = regime;
    u.k = k;
    if (regime == Binding::trace) {
      u.phi = trace_pairing(u.p, u.q) - u.f;
      if (std::abs(caratheodory_A(u).determinant()) > 0.1) return u;
    } else {
      u.phi = zk_delta(u, k) - u.f;
      try {
        const ZkAuxiliary aux = zk_auxiliary(u, k);
        if (std::abs(aux.A_inv.determinant()) > 0.1) return u;
      } catch (const std::runtime_error&) {
      }
    }
  }
  throw std::runtime_error("sample_quadruple: conditioning rejection did not terminate");
}

}  // namespace varfield

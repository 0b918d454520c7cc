#include "varfield/geometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace varfield {

namespace {
const double kEps = std::numeric_limits<double>::epsilon();
double fd_step(double x) { return std::cbrt(kEps) * std::max(1.0, std::abs(x)); }
double fd_step2(double x) { return std::pow(kEps, 0.25) * std::max(1.0, std::abs(x)); }
}  // namespace

MatrixXd SurfaceField::jet_at(const VectorXd& t, int nu) const {
  if (jet) return jet(t);
  const int n = int(t.size());
  MatrixXd J(n, nu);
  for (int m = 0; m < n; ++m) {
    VectorXd tp = t, tm = t;
    const double h = fd_step(t(m));
    tp(m) += h;
    tm(m) -= h;
    J.row(m) = ((x(tp) - x(tm)) / (2.0 * h)).transpose();
  }
  return J;
}

VectorXd transversality_residual(const Lagrangian& L, const SurfaceField& surface,
                                 const BoundaryFieldPair& pair, const VectorXd& t) {
  const int n = L.n;
  const VectorXd xv = surface.x(t);
  const MatrixXd jet = surface.jet_at(t, L.nu);
  const double fh = L.eval(t, xv, jet);
  const MatrixXd ph = L.gradient(t, xv, jet);
  const VectorXd T = pair.T(t, xv);
  const VectorXd X = pair.X(t, xv);
  VectorXd res(n);
  for (int i = 0; i < n; ++i) {
    double acc = ph.row(i).dot(X);
    for (int j = 0; j < n; ++j)
      acc += (fh * (i == j ? 1.0 : 0.0) - ph.row(i).dot(jet.row(j))) * T(j);
    res(i) = acc;
  }
  return res;
}

BlocksProvider blocks_from_hamiltonian(const HamiltonianData& Hd, const Trajectory& ref) {
  const HamiltonianData H = Hd;
  const Trajectory tr = ref;
  return [H, tr](const VectorXd& t) {
    const int n = H.n, nu = H.nu;
    const VectorXd x0 = tr.x(t);
    const MatrixXd q0 = tr.q_star(t);
    HamiltonianBlocks b;
    b.hxx.resize(nu, nu);
    b.hxq.resize(nu, n * nu);
    b.hqq.resize(n * nu, n * nu);
    auto f = [&](const VectorXd& x, const MatrixXd& q) { return H.eval(t, x, q); };
    for (int a = 0; a < nu; ++a)
      for (int c = 0; c < nu; ++c) {
        const double ha = fd_step2(x0(a)), hc = fd_step2(x0(c));
        if (a == c) {
          VectorXd xp = x0, xm = x0;
          xp(a) += ha;
          xm(a) -= ha;
          b.hxx(a, a) = (f(xp, q0) - 2.0 * f(x0, q0) + f(xm, q0)) / (ha * ha);
        } else {
          VectorXd xpp = x0, xpm = x0, xmp = x0, xmm = x0;
          xpp(a) += ha; xpp(c) += hc;
          xpm(a) += ha; xpm(c) -= hc;
          xmp(a) -= ha; xmp(c) += hc;
          xmm(a) -= ha; xmm(c) -= hc;
          b.hxx(a, c) = (f(xpp, q0) - f(xpm, q0) - f(xmp, q0) + f(xmm, q0)) / (4.0 * ha * hc);
        }
      }
    for (int a = 0; a < nu; ++a)
      for (int m = 0; m < n; ++m)
        for (int r = 0; r < nu; ++r) {
          const double ha = fd_step2(x0(a)), hq = fd_step2(q0(m, r));
          VectorXd xp = x0, xm = x0;
          xp(a) += ha;
          xm(a) -= ha;
          MatrixXd qp = q0, qm = q0;
          qp(m, r) += hq;
          qm(m, r) -= hq;
          b.hxq(a, m * nu + r) =
              (f(xp, qp) - f(xp, qm) - f(xm, qp) + f(xm, qm)) / (4.0 * ha * hq);
        }
    for (int m = 0; m < n; ++m)
      for (int r = 0; r < nu; ++r)
        for (int m2 = 0; m2 < n; ++m2)
          for (int r2 = 0; r2 < nu; ++r2) {
            const int idx1 = m * nu + r, idx2 = m2 * nu + r2;
            if (idx2 < idx1) {
              b.hqq(idx1, idx2) = b.hqq(idx2, idx1);
              continue;
            }
            const double h1 = fd_step2(q0(m, r)), h2 = fd_step2(q0(m2, r2));
            if (idx1 == idx2) {
              MatrixXd qp = q0, qm = q0;
              qp(m, r) += h1;
              qm(m, r) -= h1;
              b.hqq(idx1, idx1) = (f(x0, qp) - 2.0 * f(x0, q0) + f(x0, qm)) / (h1 * h1);
            } else {
              MatrixXd qpp = q0, qpm = q0, qmp = q0, qmm = q0;
              qpp(m, r) += h1; qpp(m2, r2) += h2;
              qpm(m, r) += h1; qpm(m2, r2) -= h2;
              qmp(m, r) -= h1; qmp(m2, r2) += h2;
              qmm(m, r) -= h1; qmm(m2, r2) -= h2;
              b.hqq(idx1, idx2) =
                  (f(x0, qpp) - f(x0, qpm) - f(x0, qmp) + f(x0, qmm)) / (4.0 * h1 * h2);
            }
          }
    return b;
  };
}

namespace {

MatrixXd hxq_block(const HamiltonianBlocks& b, int m, int nu) {
  return b.hxq.middleCols(m * nu, nu);  // nu x nu, rows x^a, cols q*(m,.)
}

MatrixXd hqq_block(const HamiltonianBlocks& b, int m, int m2, int nu) {
  return b.hqq.block(m * nu, m2 * nu, nu, nu);
}

}  // namespace

VariationalResidual variational_residual(const BlocksProvider& blocks, const StateField& state,
                                         const VectorXd& t, int n, int nu) {
  const HamiltonianBlocks b = blocks(t);
  const VariationalState s0 = state(t);
  VariationalResidual res;
  res.first.resize(n);
  MatrixXd sumdU = MatrixXd::Zero(nu, nu);
  std::vector<MatrixXd> dV(n);
  for (int m = 0; m < n; ++m) {
    VectorXd tp = t, tm = t;
    const double h = fd_step(t(m));
    tp(m) += h;
    tm(m) -= h;
    const VariationalState sp = state(tp), sm = state(tm);
    dV[m] = (sp.V - sm.V) / (2.0 * h);
    sumdU += (sp.U[m] - sm.U[m]) / (2.0 * h);
  }
  for (int m = 0; m < n; ++m) {
    // q*-row of the blocks acts on x-columns: H_{q*x}^{(m)} = (H_{xq}^{(m)})^T
    MatrixXd rhs = -hxq_block(b, m, nu).transpose() * s0.V;
    for (int m2 = 0; m2 < n; ++m2) rhs -= hqq_block(b, m, m2, nu) * s0.U[m2];
    res.first[m] = dV[m] - rhs;
  }
  MatrixXd rhs2 = b.hxx * s0.V;
  for (int m = 0; m < n; ++m) rhs2 += hxq_block(b, m, nu) * s0.U[m];
  res.second = sumdU - rhs2;
  return res;
}

MatrixXd riccati_residual(const BlocksProvider& blocks, const WField& W, const VectorXd& t,
                          int n, int nu) {
  const HamiltonianBlocks b = blocks(t);
  const std::vector<MatrixXd> W0 = W(t);
  MatrixXd lhs = MatrixXd::Zero(nu, nu);
  for (int m = 0; m < n; ++m) {
    VectorXd tp = t, tm = t;
    const double h = fd_step(t(m));
    tp(m) += h;
    tm(m) -= h;
    lhs += (W(tp)[m] - W(tm)[m]) / (2.0 * h);
  }
  MatrixXd rhs = b.hxx;
  for (int m = 0; m < n; ++m) {
    rhs += hxq_block(b, m, nu) * W0[m];
    rhs += W0[m] * hxq_block(b, m, nu).transpose();
    for (int m2 = 0; m2 < n; ++m2) rhs += W0[m] * hqq_block(b, m, m2, nu) * W0[m2];
  }
  return lhs - rhs;
}

std::vector<MatrixXd> w_from_actions(const ActionFunctions& S, const SurfaceField& surface,
                                     const VectorXd& t, int k) {
  const int n = S.n, nu = S.nu;
  const MatrixXd jet = surface.jet_at(t, nu);
  // inner(m, s) at (t, x): cofactor-sum contraction of the full-derivative
  // matrix with the x-gradients; reduces to dS^m/dx^s for k = 1.
  auto inner = [&](const VectorXd& x) {
    MatrixXd Mt, Mx;
    action_jacobians(S, t, x, Mt, Mx);
    const MatrixXd C = Mt + Mx * jet.transpose();
    return MatrixXd(minor_sum_gradient(C, k).transpose() * Mx);
  };
  const VectorXd x0 = surface.x(t);
  std::vector<MatrixXd> W(n, MatrixXd::Zero(nu, nu));
  for (int rho = 0; rho < nu; ++rho) {
    VectorXd xp = x0, xm = x0;
    const double h = fd_step2(x0(rho));
    xp(rho) += h;
    xm(rho) -= h;
    const MatrixXd d = (inner(xp) - inner(xm)) / (2.0 * h);
    for (int m = 0; m < n; ++m)
      for (int sg = 0; sg < nu; ++sg) W[m](rho, sg) = d(m, sg);
  }
  return W;
}

VectorXd covariant_derivative(const ConnectionField& y,
                              const std::function<VectorXd(const VectorXd&)>& section,
                              const VectorXd& v, const VectorXd& t) {
  const int n = int(t.size());
  const std::vector<MatrixXd> y0 = y(t);
  const VectorXd x0 = section(t);
  VectorXd out = VectorXd::Zero(x0.size());
  for (int i = 0; i < n; ++i) {
    if (v(i) == 0.0) continue;
    VectorXd tp = t, tm = t;
    const double h = fd_step(t(i));
    tp(i) += h;
    tm(i) -= h;
    const VectorXd dx = (section(tp) - section(tm)) / (2.0 * h);
    out += v(i) * (dx - y0[i] * x0);
  }
  return out;
}

MatrixXd curvature(const ConnectionField& y, const VectorXd& t, int i, int j) {
  VectorXd tpj = t, tmj = t, tpi = t, tmi = t;
  const double hj = fd_step(t(j)), hi = fd_step(t(i));
  tpj(j) += hj;
  tmj(j) -= hj;
  tpi(i) += hi;
  tmi(i) -= hi;
  const MatrixXd dyi_dtj = (y(tpj)[i] - y(tmj)[i]) / (2.0 * hj);
  const MatrixXd dyj_dti = (y(tpi)[j] - y(tmi)[j]) / (2.0 * hi);
  const std::vector<MatrixXd> y0 = y(t);
  return dyi_dtj - dyj_dti - (y0[i] * y0[j] - y0[j] * y0[i]);
}

VectorXd rk4_integrate(const std::function<VectorXd(double, const VectorXd&)>& f,
                       VectorXd y0, double t0, double t1, int steps) {
  const double h = (t1 - t0) / steps;
  VectorXd y = std::move(y0);
  double t = t0;
  for (int s = 0; s < steps; ++s) {
    const VectorXd k1 = f(t, y);
    const VectorXd k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
    const VectorXd k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
    const VectorXd k4 = f(t + h, y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
  }
  return y;
}

}  // namespace varfield

#include "varfield/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace varfield {

namespace {

const double kEps = std::numeric_limits<double>::epsilon();

double fd_step(double x) { return std::cbrt(kEps) * std::max(1.0, std::abs(x)); }

double partial_t(const TXScalar& F, const VectorXd& t, const VectorXd& x, int m) {
  VectorXd tp = t, tm = t;
  const double h = fd_step(t(m));
  tp(m) += h;
  tm(m) -= h;
  return (F(tp, x) - F(tm, x)) / (2.0 * h);
}

double partial_x(const TXScalar& F, const VectorXd& t, const VectorXd& x, int a) {
  VectorXd xp = x, xm = x;
  const double h = fd_step(x(a));
  xp(a) += h;
  xm(a) -= h;
  return (F(t, xp) - F(t, xm)) / (2.0 * h);
}

MatrixXd partial_t_mat(const TXMatrix& F, const VectorXd& t, const VectorXd& x, int m) {
  VectorXd tp = t, tm = t;
  const double h = fd_step(t(m));
  tp(m) += h;
  tm(m) -= h;
  return (F(tp, x) - F(tm, x)) / (2.0 * h);
}

}  // namespace

void action_jacobians(const ActionFunctions& S, const VectorXd& t, const VectorXd& x,
                      MatrixXd& Mt, MatrixXd& Mx) {
  const int n = S.n, nu = S.nu;
  Mt.resize(n, n);
  Mx.resize(n, nu);
  if (S.jacobians) {
    S.jacobians(t, x, Mt, Mx);
    return;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) Mt(i, j) = partial_t(S.S[i], t, x, j);
    for (int a = 0; a < nu; ++a) Mx(i, a) = partial_x(S.S[i], t, x, a);
  }
}

double invariant_form_value(const ActionFunctions& S, const VectorXd& t, const VectorXd& x,
                            const MatrixXd& xdot, int k) {
  MatrixXd Mt, Mx;
  action_jacobians(S, t, x, Mt, Mx);
  const MatrixXd C = Mt + Mx * xdot.transpose();
  return principal_minor_sum(C, k);
}

double action_minor_sum(const MatrixXd& Mt, const MatrixXd& Mx, const MultiIndex& J,
                        const MultiIndex& Xi, int k) {
  const int n = int(Mt.rows());
  if (J.size() != Xi.size()) throw std::invalid_argument("action_minor_sum: index order mismatch");
  double tot = 0.0;
  for (const auto& K : combinations(n, k)) {
    if (!contains_all(K, J)) continue;
    MatrixXd A(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) A(i, j) = Mt(K[i], K[j]);
    for (size_t s = 0; s < J.size(); ++s) {
      const int col = int(std::find(K.begin(), K.end(), J[s]) - K.begin());
      for (int i = 0; i < k; ++i) A(i, col) = Mx(K[i], Xi[s]);
    }
    tot += (k == 1) ? A(0, 0) : A.determinant();
  }
  return tot;
}

double invariant_form_expansion(const ActionFunctions& S, const VectorXd& t, const VectorXd& x,
                                const MatrixXd& xdot, int k) {
  const int n = S.n, nu = S.nu;
  MatrixXd Mt, Mx;
  action_jacobians(S, t, x, Mt, Mx);
  double acc = action_minor_sum(Mt, Mx, {}, {}, k);
  for (int s = 1; s <= std::min(k, nu); ++s)
    for (const auto& J : combinations(n, s))
      for (const auto& Xi : combinations(nu, s)) {
        MatrixXd sub(s, s);
        for (int i = 0; i < s; ++i)
          for (int j = 0; j < s; ++j) sub(i, j) = xdot(J[i], Xi[j]);
        acc += action_minor_sum(Mt, Mx, J, Xi, k) *
               ((s == 1) ? sub(0, 0) : sub.determinant());
      }
  return acc;
}

double poincare_cartan_blocks(const Lagrangian& L, const SlopeField& g, const VectorXd& t,
                              const VectorXd& x, const MatrixXd& q, int k) {
  const int n = L.n;
  const MatrixXd gv = g.eval(t, x);
  const double fh = L.eval(t, x, gv);
  if (k > 1 && std::abs(fh) < 1e-12)
    throw std::runtime_error("poincare_cartan_blocks: vanishing field value");
  const MatrixXd ph = L.gradient(t, x, gv);
  const MatrixXd B = fh * MatrixXd::Identity(n, n) +
                     (double(n) / k) * (ph * (q - gv).transpose());
  return principal_minor_sum(B, k) / (binom(n, k) * std::pow(fh, k - 1));
}

double poincare_cartan_expansion(const Lagrangian& L, const SlopeField& g, const VectorXd& t,
                                 const VectorXd& x, const MatrixXd& q, int k) {
  const int n = L.n, nu = L.nu;
  const MatrixXd gv = g.eval(t, x);
  const double fh = L.eval(t, x, gv);
  const MatrixXd ph = L.gradient(t, x, gv);
  const MatrixXd w = q - gv;
  double val = fh + (ph.array() * w.array()).sum();
  for (int s = 2; s <= std::min(k, nu); ++s) {
    const double coef = std::pow(fh, 1 - s) * std::pow(double(n) / k, s - 1) *
                        binom(n - s, k - s) / binom(n - 1, k - 1);
    for (const auto& J : combinations(n, s))
      for (const auto& Xi : combinations(nu, s)) {
        MatrixXd P(s, s), W(s, s);
        for (int i = 0; i < s; ++i)
          for (int j = 0; j < s; ++j) {
            P(i, j) = ph(J[i], Xi[j]);
            W(i, j) = w(J[i], Xi[j]);
          }
        val += coef * P.determinant() * W.determinant();
      }
  }
  return val;
}

MatrixXd canonical_coords(const MatrixXd& q_star, double H, int k, int n) {
  if (std::abs(H) < 1e-12) throw std::runtime_error("canonical_coords: vanishing H");
  return (double(n) / (k * H)) * q_star;
}

FormValue omega_value(double H, const MatrixXd& Q, int n, int nu, int k) {
  if (std::abs(H) < 1e-12) throw std::runtime_error("omega_value: vanishing H");
  const int dim = n + nu;
  FormValue omega(dim, n);
  for (const auto& K : combinations(n, k)) {
    FormValue term(dim, 0);
    term.coeffs()(0) = double(block_sign(K));
    for (int i : K) {
      FormValue w = FormValue::basis(dim, i);
      for (int a = 0; a < nu; ++a) w.coeffs()(n + a) = Q(i, a);
      term = wedge(term, w);
    }
    for (int i : complement(K, n)) term = wedge(term, FormValue::basis(dim, i));
    omega += term;
  }
  omega *= H;
  return omega;
}

FormField omega_field(const CanonicalField& CF) {
  FormField f;
  f.dim = CF.n + CF.nu;
  f.grade = CF.n;
  const CanonicalField cf = CF;
  f.eval = [cf](const VectorXd& p) {
    const VectorXd t = p.head(cf.n), x = p.tail(cf.nu);
    return omega_value(cf.H(t, x), cf.Q(t, x), cf.n, cf.nu, cf.k);
  };
  return f;
}

double closedness_residual(const CanonicalField& CF, const VectorXd& t, const VectorXd& x,
                           const MultiIndex& J, const MultiIndex& Xi) {
  if (Xi.size() != J.size() + 1)
    throw std::invalid_argument("closedness_residual: |Xi| must be |J| + 1");
  const int n = CF.n, nu = CF.nu;
  check_multi_index(J, n);
  check_multi_index(Xi, nu);
  // Chart-sorted target basis: t-block I\J followed by the x-block Xi.
  MultiIndex B = complement(J, n);
  for (int a : Xi) B.push_back(n + a);

  auto coeff_at = [&](const VectorXd& tp, const VectorXd& xp, const MultiIndex& idx) {
    const FormValue om = omega_value(CF.H(tp, xp), CF.Q(tp, xp), n, nu, CF.k);
    return om[idx];
  };
  double acc = 0.0;
  for (size_t pos = 0; pos < B.size(); ++pos) {
    MultiIndex rest;
    for (size_t j = 0; j < B.size(); ++j)
      if (j != pos) rest.push_back(B[j]);
    const int c = B[pos];
    double d;
    if (c < n) {
      VectorXd tp = t, tm = t;
      const double h = fd_step(t(c));
      tp(c) += h;
      tm(c) -= h;
      d = (coeff_at(tp, x, rest) - coeff_at(tm, x, rest)) / (2.0 * h);
    } else {
      VectorXd xp = x, xm = x;
      const double h = fd_step(x(c - n));
      xp(c - n) += h;
      xm(c - n) -= h;
      d = (coeff_at(t, xp, rest) - coeff_at(t, xm, rest)) / (2.0 * h);
    }
    acc += ((pos % 2 == 0) ? 1.0 : -1.0) * d;
  }
  return acc;
}

double L_operator(const CanonicalField& CF, const TXScalar& F, const VectorXd& t,
                  const VectorXd& x, int mu) {
  const MatrixXd Q = CF.Q(t, x);
  double acc = partial_x(F, t, x, mu);
  for (int m = 0; m < CF.n; ++m) acc -= Q(m, mu) * partial_t(F, t, x, m);
  return acc;
}

double closedness_residual_div(const CanonicalField& CF, const VectorXd& t, const VectorXd& x,
                               int mu) {
  const double H = CF.H(t, x);
  double div = 0.0;
  for (int m = 0; m < CF.n; ++m) div += partial_t_mat(CF.Q, t, x, m)(m, mu);
  return L_operator(CF, CF.H, t, x, mu) - H * div;
}

double momentum_potential_residual(const CanonicalField& CF, const VectorXd& t,
                                   const VectorXd& x, int l, int lam, int mu) {
  TXScalar qs_mu = [&](const VectorXd& tt, const VectorXd& xx) { return CF.q_star(tt, xx)(l, mu); };
  TXScalar qs_lam = [&](const VectorXd& tt, const VectorXd& xx) { return CF.q_star(tt, xx)(l, lam); };
  return L_operator(CF, qs_mu, t, x, lam) - L_operator(CF, qs_lam, t, x, mu);
}

double product_potential_residual(const CanonicalField& CF, const VectorXd& t,
                                  const VectorXd& x, int l, int lam, int mu) {
  TXScalar qh_mu = [&](const VectorXd& tt, const VectorXd& xx) {
    return CF.Q(tt, xx)(l, mu) * CF.H(tt, xx);
  };
  TXScalar qh_lam = [&](const VectorXd& tt, const VectorXd& xx) {
    return CF.Q(tt, xx)(l, lam) * CF.H(tt, xx);
  };
  return L_operator(CF, qh_mu, t, x, lam) - L_operator(CF, qh_lam, t, x, mu);
}

VectorXd HamiltonianData::grad_x(const VectorXd& t, const VectorXd& x, const MatrixXd& qs) const {
  VectorXd g(nu);
  for (int a = 0; a < nu; ++a) {
    VectorXd xp = x, xm = x;
    const double h = fd_step(x(a));
    xp(a) += h;
    xm(a) -= h;
    g(a) = (eval(t, xp, qs) - eval(t, xm, qs)) / (2.0 * h);
  }
  return g;
}

MatrixXd HamiltonianData::grad_qs(const VectorXd& t, const VectorXd& x, const MatrixXd& qs) const {
  return fd_gradient([&](const MatrixXd& m) { return eval(t, x, m); }, qs);
}

CanonicalSystemResidual canonical_system_residual(const HamiltonianData& Hd,
                                                  const Trajectory& traj,
                                                  const VectorXd& t, int k) {
  const int n = Hd.n, nu = Hd.nu;
  const VectorXd x0 = traj.x(t);
  const MatrixXd qs0 = traj.q_star(t);
  const VectorXd hx = Hd.grad_x(t, x0, qs0);
  const MatrixXd hq = Hd.grad_qs(t, x0, qs0);

  CanonicalSystemResidual r;
  r.momentum_eq = VectorXd::Zero(nu);
  r.velocity_eq = MatrixXd::Zero(n, nu);
  for (int m = 0; m < n; ++m) {
    VectorXd tp = t, tm = t;
    const double h = fd_step(t(m));
    tp(m) += h;
    tm(m) -= h;
    const MatrixXd dqs = (traj.q_star(tp) - traj.q_star(tm)) / (2.0 * h);
    const VectorXd dx = (traj.x(tp) - traj.x(tm)) / (2.0 * h);
    for (int mu = 0; mu < nu; ++mu) {
      r.momentum_eq(mu) += (double(n) / k) * dqs(m, mu);
      r.velocity_eq(m, mu) = dx(mu) + hq(m, mu);
    }
  }
  r.momentum_eq -= hx;
  return r;
}

CanonicalField canonical_from_actions(const ActionFunctions& S, int k) {
  CanonicalField cf;
  cf.n = S.n;
  cf.nu = S.nu;
  cf.k = k;
  const ActionFunctions acts = S;
  const int n = S.n;
  cf.H = [acts, k](const VectorXd& t, const VectorXd& x) {
    MatrixXd Mt, Mx;
    action_jacobians(acts, t, x, Mt, Mx);
    return principal_minor_sum(Mt, k);
  };
  cf.q_star = [acts, k, n](const VectorXd& t, const VectorXd& x) {
    MatrixXd Mt, Mx;
    action_jacobians(acts, t, x, Mt, Mx);
    return MatrixXd((minor_sum_gradient(Mt, k).transpose() * Mx) / binom(n - 1, k - 1));
  };
  const TXScalar Hf = cf.H;
  const TXMatrix qsf = cf.q_star;
  // Product-structure normalization: the multiplier of each factor group is
  // H / C(n,k), so Q = q* / (H / C(n,k)).
  const double scale = binom(n, k);
  cf.Q = [Hf, qsf, scale](const VectorXd& t, const VectorXd& x) {
    const double H = Hf(t, x);
    if (std::abs(H) < 1e-12) throw std::runtime_error("canonical_from_actions: vanishing H");
    return MatrixXd(scale / H * qsf(t, x));
  };
  return cf;
}

double action_plucker_identity(const ActionFunctions& S, const CanonicalField& CF,
                               const VectorXd& t, const VectorXd& x,
                               const MultiIndex& J, const MultiIndex& Xi, int k) {
  if (J.size() != Xi.size()) throw std::invalid_argument("action_plucker_identity: order mismatch");
  const int n = S.n;
  const int s = int(J.size());
  MatrixXd Mt, Mx;
  action_jacobians(S, t, x, Mt, Mx);
  const double lhs = action_minor_sum(Mt, Mx, J, Xi, k);
  const double H = CF.H(t, x);
  double rhs;
  if (s == 0) {
    rhs = H;
  } else {
    const MatrixXd qs = CF.q_star(t, x);
    MatrixXd sub(s, s);
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j) sub(i, j) = qs(J[i], Xi[j]);
    rhs = binom(n - s, k - s) * std::pow(binom(n, k), s - 1) * std::pow(H, 1 - s) *
          ((s == 1) ? sub(0, 0) : sub.determinant());
  }
  return lhs - rhs;
}

}  // namespace varfield

#include "varfield/suites.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <future>
#include <limits>

#include "varfield/geometry.hpp"
#include "varfield/hopf.hpp"
#include "varfield/transforms.hpp"

namespace varfield {

namespace {

struct Check {
  std::string name;
  std::string law;
  double tol;
  std::function<double(Rng&, CheckRecord&)> run;  // returns max residual
};

using CheckList = std::vector<Check>;

Quadruple sample_bound(Rng& rng, int n, int nu, Binding regime, int k) {
  return sample_quadruple(rng, n, nu, regime, k);
}

double quad_distance(const Quadruple& a, const Quadruple& b) {
  double d = std::max(std::abs(a.f - b.f), std::abs(a.phi - b.phi));
  d = std::max(d, (a.q - b.q).cwiseAbs().maxCoeff());
  d = std::max(d, (a.p - b.p).cwiseAbs().maxCoeff());
  return d;
}

// ---------------------------------------------------------------- transforms

void add_transform_checks(CheckList& out, const ProblemSpec& p) {
  const int n = std::max(p.n, 2), nu = p.nu, k = std::min(p.k, n);

  out.push_back({"transforms.trace_involution", "determinant_transform.double_application",
                 1e-8, [n, nu](Rng& rng, CheckRecord&) {
                   double worst = 0.0;
                   for (int i = 0; i < 200; ++i) {
                     const Quadruple u = sample_bound(rng, n, nu, Binding::trace, 0);
                     const TransformResult r1 = caratheodory_transform(u);
                     const TransformResult r2 = caratheodory_transform(r1.quadruple);
                     worst = std::max(worst, quad_distance(u, r2.quadruple));
                   }
                   return worst;
                 }});

  out.push_back({"transforms.trace_pairing", "determinant_transform.product_identity",
                 1e-9, [n, nu](Rng& rng, CheckRecord&) {
                   double worst = 0.0;
                   for (int i = 0; i < 200; ++i) {
                     const Quadruple u = sample_bound(rng, n, nu, Binding::trace, 0);
                     const TransformResult r = caratheodory_transform(u);
                     const MatrixXd M = MatrixXd::Identity(n, n) +
                                        r.quadruple.q * u.q.transpose();
                     const double lhs = M.determinant();
                     const double rhs = u.f * r.quadruple.f;
                     worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
                   }
                   return worst;
                 }});

  out.push_back({"transforms.trace_tangential", "determinant_transform.contact_cancellation",
                 1e-5, [n, nu](Rng& rng, CheckRecord&) {
                   double worst = 0.0;
                   for (int i = 0; i < 20; ++i) {
                     const Quadruple u = sample_bound(rng, n, nu, Binding::trace, 0);
                     QuadrupleDirection d;
                     d.df = rng.uniform(-1, 1);
                     d.dq = rng.matrix(n, nu, -1, 1);
                     d.dp = rng.matrix(n, nu, -1, 1);
                     const double res = tangentiality_residual(u, d);
                     const double scale = std::max(1.0, std::abs(u.f) + std::abs(d.df));
                     worst = std::max(worst, std::abs(res) / scale);
                   }
                   return worst;
                 }});

  out.push_back({"transforms.swap_involution", "plain_swap.double_application", 1e-14,
                 [n, nu](Rng& rng, CheckRecord&) {
                   double worst = 0.0;
                   for (int i = 0; i < 50; ++i) {
                     const Quadruple u = sample_bound(rng, n, nu, Binding::trace, 0);
                     const Quadruple v = legendre_swap(legendre_swap(u));
                     worst = std::max(worst, quad_distance(u, v));
                     worst = std::max(worst, std::abs(binding_residual(legendre_swap(u))));
                   }
                   return worst;
                 }});

  out.push_back({"transforms.compound_involution", "compound_transform.double_application",
                 1e-8, [n, nu, k](Rng& rng, CheckRecord&) {
                   double worst = 0.0;
                   for (int i = 0; i < 200; ++i) {
                     const Quadruple u = sample_bound(rng, n, nu, Binding::compound, k);
                     const TransformResult r1 = zk_transform(u, k);
                     const TransformResult r2 = zk_transform(r1.quadruple, k);
                     worst = std::max(worst, quad_distance(u, r2.quadruple));
                   }
                   return worst;
                 }});

  out.push_back({"transforms.compound_scale", "compound_transform.integrand_scaling", 1e-9,
                 [n, nu, k](Rng& rng, CheckRecord&) {
                   double worst = 0.0;
                   for (int i = 0; i < 200; ++i) {
                     const Quadruple u = sample_bound(rng, n, nu, Binding::compound, k);
                     const TransformResult r = zk_transform(u, k);
                     const double ds = zk_delta(r.quadruple, k);
                     worst = std::max(worst, std::abs(ds - r.gamma * r.delta_tilde));
                     worst = std::max(worst, std::abs(binding_residual(r.quadruple)));
                   }
                   return worst;
                 }});

  out.push_back({"transforms.compound_gradient", "compound_transform.support_gradient", 1e-5,
                 [n, nu, k](Rng& rng, CheckRecord&) {
                   double worst = 0.0;
                   for (int i = 0; i < 40; ++i) {
                     Quadruple u = sample_bound(rng, n, nu, Binding::compound, k);
                     const TransformResult r = zk_transform(u, k);
                     const MatrixXd fd = fd_gradient(
                         [&](const MatrixXd& q) {
                           Quadruple v = u;
                           v.q = q;
                           return zk_delta(v, k);
                         },
                         u.q);
                     worst = std::max(worst, (fd - r.q_star).cwiseAbs().maxCoeff());
                   }
                   return worst;
                 }});

  out.push_back({"transforms.compound_duality", "compound_transform.auxiliary_pairing", 1e-9,
                 [n, nu, k](Rng& rng, CheckRecord&) {
                   double worst = 0.0;
                   for (int i = 0; i < 100; ++i) {
                     const Quadruple u = sample_bound(rng, n, nu, Binding::compound, k);
                     const TransformResult r = zk_transform(u, k);
                     const ZkAuxiliary as = zk_auxiliary(r.quadruple, k);
                     worst = std::max(
                         worst, (as.A - r.gamma * r.A.transpose()).cwiseAbs().maxCoeff());
                     // Transposed auxiliary matrix: the determinant scale of
                     // the image equals that of the source.
                     worst = std::max(worst,
                                      std::abs(as.det_scale - r.det_scale) /
                                          std::max(1.0, std::abs(r.det_scale)));
                     const double tr0 = trace_pairing(u.p, u.q) / u.f;
                     const double tr1 = trace_pairing(r.quadruple.p, r.quadruple.q) /
                                        r.quadruple.f;
                     worst = std::max(worst, std::abs(tr1 - tr0));
                   }
                   return worst;
                 }});
}

// -------------------------------------------------------------------- excess

void add_excess_checks(CheckList& out, const ProblemSpec& p) {
  if (!p.lagrangian || !p.slope) return;
  const Lagrangian L = *p.lagrangian;
  const SlopeField g = *p.slope;
  const int k = p.k;
  const auto pts = p.sample_points();

  out.push_back({"excess.zero_at_field", "excess.calibration_zero", 1e-10,
                 [L, g, k, pts](Rng&, CheckRecord&) {
                   double worst = 0.0;
                   for (const auto& [t, x] : pts)
                     worst = std::max(worst,
                                      std::abs(excess_value(L, g, t, x, g.eval(t, x), k)));
                   return worst;
                 }});

  out.push_back({"excess.gradient_at_field", "excess.calibration_stationary", 1e-5,
                 [L, g, k, pts](Rng&, CheckRecord&) {
                   double worst = 0.0;
                   for (const auto& [t, x] : pts) {
                     const auto rep = excess_stationarity(L, g, t, x, k);
                     worst = std::max(worst, rep.gradient.cwiseAbs().maxCoeff());
                   }
                   return worst;
                 }});

  out.push_back({"excess.stationarity_residual", "excess.cofactor_stationarity", 1e-8,
                 [L, g, k, pts](Rng&, CheckRecord&) {
                   double worst = 0.0;
                   for (const auto& [t, x] : pts)
                     worst = std::max(worst, excess_stationarity(L, g, t, x, k).residual);
                   return worst;
                 }});

  out.push_back({"excess.hessian_match", "excess.skew_corrected_hessian", 1e-4,
                 [L, g, k, pts](Rng&, CheckRecord&) {
                   double worst = 0.0;
                   for (size_t i = 0; i < pts.size(); i += std::max<size_t>(1, pts.size() / 4)) {
                     const auto& [t, x] = pts[i];
                     const Tensor4 Hc = corrected_hessian(L, g, t, x, k);
                     const MatrixXd gv = g.eval(t, x);
                     const Tensor4 Hfd = fd_hessian(
                         [&](const MatrixXd& q) { return excess_value(L, g, t, x, q, k); }, gv);
                     Tensor4 diff = Hc;
                     diff -= Hfd;
                     worst = std::max(worst, diff.max_abs());
                   }
                   return worst;
                 }});

  out.push_back({"excess.base_degree_correction", "excess.first_degree_identity", 1e-14,
                 [L, g, pts](Rng&, CheckRecord&) {
                   // Degree one carries no skew correction at all.
                   const auto& [t, x] = pts.front();
                   Tensor4 diff = corrected_hessian(L, g, t, x, 1);
                   diff -= L.hessian(t, x, g.eval(t, x));
                   return diff.max_abs();
                 }});

  if (k >= 2) {
    out.push_back({"excess.rank1_annihilation", "excess.skew_null_on_rank_one", 1e-12,
                   [L, g, k, pts](Rng& rng, CheckRecord&) {
                     const auto& [t, x] = pts.front();
                     const MatrixXd gv = g.eval(t, x);
                     const MatrixXd ph = L.gradient(t, x, gv);
                     const double fh = L.eval(t, x, gv);
                     const double coef =
                         double(L.n) * (k - 1) / (double(k) * (L.n - 1) * fh);
                     double worst = 0.0;
                     for (int s = 0; s < 100; ++s) {
                       const VectorXd xi = rng.vector(L.nu, -1, 1);
                       const VectorXd eta = rng.vector(L.n, -1, 1);
                       const MatrixXd w = eta * xi.transpose();
                       double acc = 0.0;
                       for (int l = 0; l < L.n; ++l)
                         for (int lam = 0; lam < L.nu; ++lam)
                           for (int m = 0; m < L.n; ++m)
                             for (int mu = 0; mu < L.nu; ++mu)
                               acc += coef *
                                      (ph(l, lam) * ph(m, mu) - ph(l, mu) * ph(m, lam)) *
                                      w(l, lam) * w(m, mu);
                       worst = std::max(worst, std::abs(acc));
                     }
                     return worst;
                   }});
  }

  const bool expect_geodesic = p.geodesic_expected;
  out.push_back({"excess.geodesic_local", "excess.second_order_minimum", 0.5,
                 [L, g, k, pts, expect_geodesic](Rng& rng, CheckRecord& rec) {
                   std::vector<std::pair<VectorXd, VectorXd>> sub(
                       pts.begin(), pts.begin() + std::min<size_t>(pts.size(), 8));
                   const GeodesicVerdict v =
                       geodesic_field_check(L, g, sub, k, GeodesicMode::local, rng);
                   rec.witness["min_eigenvalue"] = v.worst;
                   return (v.geodesic == expect_geodesic) ? 0.0 : 1.0;
                 }});

  out.push_back({"excess.geodesic_global", "excess.pointwise_minimum", 0.5,
                 [L, g, k, pts, expect_geodesic](Rng& rng, CheckRecord& rec) {
                   std::vector<std::pair<VectorXd, VectorXd>> sub(
                       pts.begin(), pts.begin() + std::min<size_t>(pts.size(), 4));
                   const GeodesicVerdict v =
                       geodesic_field_check(L, g, sub, k, GeodesicMode::global, rng);
                   rec.note = v.geodesic ? "slope field is geodesic on the sampled box"
                                         : "minimum below calibration found";
                   if (v.witness) {
                     rec.witness["worst_excess"] = v.worst;
                   }
                   return (v.geodesic == expect_geodesic) ? 0.0 : 1.0;
                 }});
}

// ---------------------------------------------------------------- conditions

void add_condition_checks(CheckList& out, const ProblemSpec& p) {
  if (!p.quadform) return;
  const QuadFormTensor a = *p.quadform;

  out.push_back({"conditions.rank1_minimum", "second_variation.rank_one_floor", 1e-6,
                 [a](Rng& rng, CheckRecord& rec) {
                   const Rank1Report r = hadamard_legendre_check(a, rng);
                   rec.witness["epsilon"] = r.epsilon;
                   return std::abs(r.min_value);
                 }});

  out.push_back({"conditions.full_minimum", "second_variation.full_space_gap", 1e-12,
                 [a](Rng&, CheckRecord& rec) {
                   const double lo = quadratic_min_full(a);
                   rec.witness["full_min"] = lo;
                   return std::max(0.0, lo + 0.5);  // expected at or below -1/2
                 }});

  out.push_back({"conditions.rank1_vs_grid", "second_variation.grid_cross_check", 1e-4,
                 [a](Rng& rng, CheckRecord&) {
                   const Rank1Report r = hadamard_legendre_check(a, rng);
                   return std::abs(r.min_value - rank1_grid_min(a));
                 }});

  out.push_back({"conditions.cone_inclusion", "second_variation.cone_inclusion", 1e-10,
                 [a](Rng& rng, CheckRecord&) {
                   // The rank-one cone sits inside the full space, so its
                   // minimum can only be larger.
                   const Rank1Report r = hadamard_legendre_check(a, rng);
                   return std::max(0.0, quadratic_min_full(a) - r.min_value);
                 }});

  out.push_back({"conditions.skew_rank1_drift", "skew_addition.rank_one_invariance", 1e-12,
                 [a](Rng& rng, CheckRecord&) {
                   SkewTensor r;
                   r.n = a.n;
                   r.nu = a.nu;
                   r.r = Tensor4(a.nu, a.nu, a.n, a.n);
                   r.r(0, 1, 0, 1) = 0.5;
                   r.r(1, 0, 0, 1) = -0.5;
                   r.r(0, 1, 1, 0) = -0.5;
                   r.r(1, 0, 1, 0) = 0.5;
                   const QuadFormTensor ap = skew_addition(a, r);
                   double worst = 0.0;
                   for (int s = 0; s < 10000; ++s) {
                     const VectorXd xi = rng.unit_vector(a.nu);
                     const VectorXd eta = rng.unit_vector(a.n);
                     worst = std::max(worst, std::abs(biquadratic_eval(ap, xi, eta) -
                                                      biquadratic_eval(a, xi, eta)));
                   }
                   return worst;
                 }});

  out.push_back({"conditions.skew_shifts_full", "skew_addition.full_space_shift", 1e-12,
                 [a](Rng&, CheckRecord& rec) {
                   SkewTensor r;
                   r.n = a.n;
                   r.nu = a.nu;
                   r.r = Tensor4(a.nu, a.nu, a.n, a.n);
                   r.r(0, 1, 0, 1) = 0.5;
                   r.r(1, 0, 0, 1) = -0.5;
                   r.r(0, 1, 1, 0) = -0.5;
                   r.r(1, 0, 1, 0) = 0.5;
                   const double before = quadratic_min_full(a);
                   const double after = quadratic_min_full(skew_addition(a, r));
                   rec.witness["full_min_before"] = before;
                   rec.witness["full_min_after"] = after;
                   return std::max(0.0, 0.1 - std::abs(after - before));
                 }});
}

// ------------------------------------------------------------------ canonical

void add_canonical_checks(CheckList& out, const ProblemSpec& p) {
  if (p.actions) {
    const ActionFunctions S = *p.actions;
    const int k = p.k, n = p.n, nu = p.nu;
    const auto pts = p.sample_points();
    const CanonicalField CF = canonical_from_actions(S, k);

    out.push_back({"canonical.closedness", "invariant_form.closedness", 1e-5,
                   [CF, n, nu, pts](Rng&, CheckRecord&) {
                     double worst = 0.0;
                     for (size_t i = 0; i < pts.size(); i += std::max<size_t>(1, pts.size() / 8)) {
                       const auto& [t, x] = pts[i];
                       for (int s = 0; s + 1 <= std::min(n + 1, nu); ++s)
                         for (const auto& J : combinations(n, s))
                           for (const auto& Xi : combinations(nu, s + 1))
                             worst = std::max(
                                 worst, std::abs(closedness_residual(CF, t, x, J, Xi)));
                     }
                     return worst;
                   }});

    out.push_back({"canonical.closedness_perturbed", "invariant_form.perturbation_detection",
                   0.1, [CF, n, nu, pts](Rng&, CheckRecord& rec) {
                     CanonicalField bad = CF;
                     const TXMatrix q0 = CF.Q;
                     // The added term is not closed against any background.
                     bad.Q = [q0](const VectorXd& t, const VectorXd& x) {
                       MatrixXd Q = q0(t, x);
                       Q(0, 0) += 0.1 * (x(1) * x(1) + x(1));
                       return Q;
                     };
                     int below = 0, total = 0;
                     for (const auto& [t, x] : pts) {
                       double worst_pt = 0.0;
                       for (int s = 0; s + 1 <= std::min(n + 1, nu); ++s)
                         for (const auto& J : combinations(n, s))
                           for (const auto& Xi : combinations(nu, s + 1))
                             worst_pt = std::max(
                                 worst_pt, std::abs(closedness_residual(bad, t, x, J, Xi)));
                       ++total;
                       if (worst_pt <= 1e-3) ++below;
                     }
                     rec.witness["fraction_detected"] = 1.0 - double(below) / total;
                     return double(below) / total;  // at most 10% may stay quiet
                   }});

    out.push_back({"canonical.exterior_cross_check", "invariant_form.two_route_derivative",
                   1e-4, [CF, n, nu, pts](Rng&, CheckRecord&) {
                     const FormField om = omega_field(CF);
                     double worst = 0.0;
                     for (size_t i = 0; i < pts.size(); i += std::max<size_t>(1, pts.size() / 4)) {
                       const auto& [t, x] = pts[i];
                       VectorXd chart(n + nu);
                       chart << t, x;
                       const FormValue d = ext_derivative(om, chart);
                       // Every coefficient of the generic route must agree with
                       // the targeted assembly.
                       for (int s = 0; s + 1 <= std::min(n + 1, nu); ++s)
                         for (const auto& J : combinations(n, s))
                           for (const auto& Xi : combinations(nu, s + 1)) {
                             MultiIndex B = complement(J, n);
                             for (int a : Xi) B.push_back(n + a);
                             std::sort(B.begin(), B.end());
                             const double direct = closedness_residual(CF, t, x, J, Xi);
                             worst = std::max(worst, std::abs(direct - d[B]));
                           }
                     }
                     return worst;
                   }});

    out.push_back({"canonical.potential_forms", "closedness.product_vs_momentum_form", 1e-6,
                   [CF, n, nu, pts](Rng&, CheckRecord&) {
                     double worst = 0.0;
                     const double ratio = binom(n, CF.k);  // Q H = C(n,k) q*
                     for (size_t i = 0; i < pts.size(); i += std::max<size_t>(1, pts.size() / 4)) {
                       const auto& [t, x] = pts[i];
                       for (int l = 0; l < n; ++l)
                         for (int lam = 0; lam < nu; ++lam)
                           for (int mu = lam + 1; mu < nu; ++mu) {
                             const double prod =
                                 product_potential_residual(CF, t, x, l, lam, mu);
                             const double mom =
                                 momentum_potential_residual(CF, t, x, l, lam, mu);
                             worst = std::max(worst, std::abs(prod - mom / ratio));
                           }
                     }
                     return worst;
                   }});

    out.push_back({"canonical.action_identities", "action_functions.minor_sum_identities",
                   1e-8, [S, CF, k, n, nu, pts](Rng&, CheckRecord&) {
                     double worst = 0.0;
                     const auto& [t, x] = pts[pts.size() / 2];
                     for (int s = 0; s <= std::min({k, nu, 2}); ++s)
                       for (const auto& J : combinations(n, s))
                         for (const auto& Xi : combinations(nu, s))
                           worst = std::max(worst, std::abs(action_plucker_identity(
                                                       S, CF, t, x, J, Xi, k)));
                     return worst;
                   }});

    out.push_back({"canonical.form_column_expansion", "invariant_form.two_route_value", 1e-10,
                   [S, k, n, nu, pts](Rng& rng, CheckRecord&) {
                     double worst = 0.0;
                     for (int trial = 0; trial < 8; ++trial) {
                       const auto& [t, x] = pts[trial % pts.size()];
                       const MatrixXd xdot = rng.matrix(n, nu, -1, 1);
                       worst = std::max(worst,
                                        std::abs(invariant_form_expansion(S, t, x, xdot, k) -
                                                 invariant_form_value(S, t, x, xdot, k)));
                     }
                     return worst;
                   }});

    out.push_back({"canonical.restricted_form_value", "invariant_form.action_expansion", 1e-8,
                   [S, CF, k, n, nu, pts](Rng& rng, CheckRecord&) {
                     // The invariant form restricted to dx = q dt reproduces
                     // the minor-sum integrand of the actions.
                     double worst = 0.0;
                     for (int trial = 0; trial < 8; ++trial) {
                       const auto& [t, x] = pts[trial % pts.size()];
                       const MatrixXd xdot = rng.matrix(n, nu, -1, 1);
                       const double lhs = invariant_form_value(S, t, x, xdot, k);
                       const double Hom = CF.H(t, x) / binom(n, k);
                       const MatrixXd Q = CF.Q(t, x);
                       const double rhs = principal_minor_sum(
                           MatrixXd::Identity(n, n) + Q * xdot.transpose(), k);
                       worst = std::max(worst, std::abs(lhs - Hom * rhs));
                     }
                     return worst;
                   }});
  }

  if (p.hamiltonian) {
    const HamiltonianData Hd = *p.hamiltonian;
    const int k = p.k;
    out.push_back({"canonical.system_residual", "canonical_system.closed_form_solution",
                   1e-5, [Hd, k](Rng&, CheckRecord&) {
                     // x = (cos t, sin t), q* = (sin t, -cos t) solves
                     // dx/dt = -dH/dq*, dq*/dt = dH/dx for H = (|q*|^2+|x|^2)/2.
                     Trajectory tr;
                     tr.x = [](const VectorXd& t) {
                       VectorXd x(2);
                       x << std::cos(t(0)), std::sin(t(0));
                       return x;
                     };
                     tr.q_star = [](const VectorXd& t) {
                       MatrixXd q(1, 2);
                       q << std::sin(t(0)), -std::cos(t(0));
                       return q;
                     };
                     double worst = 0.0;
                     for (double tv = 0.1; tv < 1.0; tv += 0.2) {
                       const auto r = canonical_system_residual(
                           Hd, tr, VectorXd::Constant(1, tv), k);
                       worst = std::max(worst, r.momentum_eq.cwiseAbs().maxCoeff());
                       worst = std::max(worst, r.velocity_eq.cwiseAbs().maxCoeff());
                     }
                     return worst;
                   }});
  }

  if (p.lagrangian && p.slope) {
    const Lagrangian L = *p.lagrangian;
    const SlopeField g = *p.slope;
    const int k = p.k;
    const auto pts = p.sample_points();
    out.push_back({"canonical.calibrand_expansion", "calibrand.block_vs_minor_expansion",
                   1e-9, [L, g, k, pts](Rng& rng, CheckRecord&) {
                     double worst = 0.0;
                     for (int trial = 0; trial < 10; ++trial) {
                       const auto& [t, x] = pts[trial % pts.size()];
                       const MatrixXd q = g.eval(t, x) + rng.matrix(L.n, L.nu, -1, 1);
                       const double a = poincare_cartan_blocks(L, g, t, x, q, k);
                       const double b = poincare_cartan_expansion(L, g, t, x, q, k);
                       worst = std::max(worst, std::abs(a - b));
                     }
                     return worst;
                   }});
  }
}

// ------------------------------------------------------------------- geometry

void add_geometry_checks(CheckList& out, const ProblemSpec& p) {
  if (p.hamiltonian && p.actions) {
    const HamiltonianData Hd = *p.hamiltonian;
    const ActionFunctions S = *p.actions;
    const int nu = p.nu;

    // Reference trajectory of the oscillator flow.
    Trajectory ref;
    ref.x = [nu](const VectorXd& t) {
      return VectorXd(VectorXd::Constant(nu, std::cos(t(0))));
    };
    ref.q_star = [nu](const VectorXd& t) {
      return MatrixXd(MatrixXd::Constant(1, nu, std::sin(t(0))));
    };
    const BlocksProvider blocks =
        p.hamiltonian_blocks ? *p.hamiltonian_blocks : blocks_from_hamiltonian(Hd, ref);

    out.push_back({"geometry.variational_closed_form", "linearized_flow.fundamental_solution",
                   1e-6, [blocks, nu](Rng&, CheckRecord&) {
                     StateField st = [nu](const VectorXd& t) {
                       VariationalState s;
                       s.V = std::cos(t(0)) * MatrixXd::Identity(nu, nu);
                       s.U = {std::sin(t(0)) * MatrixXd::Identity(nu, nu)};
                       return s;
                     };
                     double worst = 0.0;
                     for (double tv = 0.2; tv < 1.2; tv += 0.2) {
                       const auto r = variational_residual(blocks, st,
                                                           VectorXd::Constant(1, tv), 1, nu);
                       worst = std::max(worst, r.first[0].cwiseAbs().maxCoeff());
                       worst = std::max(worst, r.second.cwiseAbs().maxCoeff());
                     }
                     return worst;
                   }});

    out.push_back({"geometry.variational_perturbed", "linearized_flow.detects_bad_solution",
                   1e-12, [blocks, nu](Rng&, CheckRecord& rec) {
                     StateField st = [nu](const VectorXd& t) {
                       VariationalState s;
                       s.V = std::cos(t(0)) * MatrixXd::Identity(nu, nu);
                       s.V(0, 0) += 0.1 * t(0) * t(0);
                       s.U = {std::sin(t(0)) * MatrixXd::Identity(nu, nu)};
                       return s;
                     };
                     double top = 0.0;
                     for (double tv = 0.4; tv < 1.2; tv += 0.2) {
                       const auto r = variational_residual(blocks, st,
                                                           VectorXd::Constant(1, tv), 1, nu);
                       top = std::max(top, r.first[0].cwiseAbs().maxCoeff());
                     }
                     rec.witness["max_residual_seen"] = top;
                     return std::max(0.0, 1e-3 - top);
                   }});

    out.push_back({"geometry.riccati_closed_form", "riccati.tangent_solution", 1e-8,
                   [blocks, nu](Rng&, CheckRecord&) {
                     WField W = [nu](const VectorXd& t) {
                       return std::vector<MatrixXd>{std::tan(t(0)) *
                                                    MatrixXd::Identity(nu, nu)};
                     };
                     double worst = 0.0;
                     for (double tv = 0.2; tv < 1.2; tv += 0.2)
                       worst = std::max(worst,
                                        riccati_residual(blocks, W, VectorXd::Constant(1, tv),
                                                         1, nu)
                                            .cwiseAbs()
                                            .maxCoeff());
                     return worst;
                   }});

    out.push_back({"geometry.riccati_integrated", "riccati.from_linearized_flow", 1e-4,
                   [blocks, nu](Rng&, CheckRecord&) {
                     // Integrate the linearized flow and push W = U V^{-1}
                     // through the Riccati equation.
                     auto flow = [blocks, nu](double tv, const VectorXd& y) {
                       const HamiltonianBlocks b = blocks(VectorXd::Constant(1, tv));
                       const MatrixXd V = Eigen::Map<const MatrixXd>(y.data(), nu, nu);
                       const MatrixXd U = Eigen::Map<const MatrixXd>(y.data() + nu * nu, nu, nu);
                       const MatrixXd dV = -(b.hxq.transpose() * V) - b.hqq * U;
                       const MatrixXd dU = b.hxx * V + b.hxq * U;
                       VectorXd dy(2 * nu * nu);
                       Eigen::Map<MatrixXd>(dy.data(), nu, nu) = dV;
                       Eigen::Map<MatrixXd>(dy.data() + nu * nu, nu, nu) = dU;
                       return dy;
                     };
                     VectorXd y0(2 * nu * nu);
                     Eigen::Map<MatrixXd>(y0.data(), nu, nu) = MatrixXd::Identity(nu, nu);
                     Eigen::Map<MatrixXd>(y0.data() + nu * nu, nu, nu) =
                         0.3 * MatrixXd::Identity(nu, nu);
                     // A fixed step count keeps W smooth in t for the
                     // differentiation inside the residual.
                     WField W = [flow, y0, nu](const VectorXd& t) {
                       const VectorXd y = rk4_integrate(flow, y0, 0.0, t(0), 400);
                       const MatrixXd V = Eigen::Map<const MatrixXd>(y.data(), nu, nu);
                       const MatrixXd U = Eigen::Map<const MatrixXd>(y.data() + nu * nu, nu, nu);
                       return std::vector<MatrixXd>{U * V.inverse()};
                     };
                     double worst = 0.0;
                     for (double tv = 0.2; tv <= 1.0; tv += 0.2)
                       worst = std::max(worst,
                                        riccati_residual(blocks, W, VectorXd::Constant(1, tv),
                                                         1, nu)
                                            .cwiseAbs()
                                            .maxCoeff());
                     return worst;
                   }});

    out.push_back({"geometry.action_riccati", "riccati.action_hessian_solution", 1e-4,
                   [S, blocks, nu](Rng&, CheckRecord&) {
                     SurfaceField surf;
                     surf.x = [nu](const VectorXd& t) {
                       return VectorXd(VectorXd::Constant(nu, std::cos(t(0))));
                     };
                     WField W = [S, surf](const VectorXd& t) {
                       return w_from_actions(S, surf, t, 1);
                     };
                     double worst = 0.0;
                     for (double tv = 0.3; tv <= 0.9; tv += 0.2) {
                       const VectorXd t = VectorXd::Constant(1, tv);
                       worst = std::max(
                           worst,
                           riccati_residual(blocks, W, t, 1, nu).cwiseAbs().maxCoeff());
                       // Degree-one specialization is the x-Hessian of the actions.
                       const MatrixXd expected =
                           std::tan(tv) * MatrixXd::Identity(nu, nu);
                       worst = std::max(
                           worst, (W(t)[0] - expected).cwiseAbs().maxCoeff() * 1e-1);
                     }
                     return worst;
                   }});
  }

  // Connection and curvature checks run on synthetic two-direction data.
  out.push_back({"geometry.flatness", "connection.field_generated_flatness", 1e-4,
                 [](Rng& rng, CheckRecord&) {
                   const int nu = 2;
                   // Invertible polynomial frame V(t1,t2) of degree <= 3.
                   std::vector<MatrixXd> C;
                   for (int d = 0; d < 4; ++d) C.push_back(rng.matrix(nu, nu, -0.1, 0.1));
                   auto V = [C, nu](const VectorXd& t) {
                     MatrixXd v = (2.0 + 0.3 * t(0)) * MatrixXd::Identity(nu, nu);
                     v += C[0] * t(0) + C[1] * t(1) + C[2] * (t(0) * t(1)) +
                          C[3] * (t(0) * t(0) * t(1));
                     return v;
                   };
                   ConnectionField y = [V, nu](const VectorXd& t) {
                     std::vector<MatrixXd> ys;
                     const MatrixXd vinv = V(t).inverse();
                     for (int i = 0; i < 2; ++i) {
                       VectorXd tp = t, tm = t;
                       const double h = 1e-6 * std::max(1.0, std::abs(t(i)));
                       tp(i) += h;
                       tm(i) -= h;
                       ys.push_back(-((V(tp) - V(tm)) / (2.0 * h)) * vinv);
                     }
                     return ys;
                   };
                   double worst = 0.0;
                   for (int s = 0; s < 5; ++s) {
                     const VectorXd t = rng.vector(2, -0.5, 0.5);
                     worst = std::max(worst, curvature(y, t, 0, 1).cwiseAbs().maxCoeff());
                   }
                   // Transported sections are horizontal in their direction.
                   const VectorXd x0 = rng.vector(nu, -1, 1);
                   auto section = [y, x0](const VectorXd& t) {
                     auto f = [&](double s, const VectorXd& xv) {
                       VectorXd tt(2);
                       tt << s, t(1);
                       return VectorXd(y(tt)[0] * xv);
                     };
                     return rk4_integrate(f, x0, 0.0, t(0), 200);
                   };
                   VectorXd e1(2), tpt(2);
                   e1 << 1.0, 0.0;
                   tpt << 0.4, -0.3;
                   worst = std::max(
                       worst,
                       covariant_derivative(y, section, e1, tpt).cwiseAbs().maxCoeff());
                   return worst;
                 }});

  out.push_back({"geometry.curvature_control", "connection.noncommuting_control", 1e-12,
                 [](Rng&, CheckRecord& rec) {
                   ConnectionField y = [](const VectorXd&) {
                     MatrixXd y1(2, 2), y2(2, 2);
                     y1 << 0, 1, 0, 0;
                     y2 << 0, 0, 1, 0;
                     return std::vector<MatrixXd>{y1, y2};
                   };
                   const MatrixXd R = curvature(y, VectorXd::Zero(2), 0, 1);
                   rec.witness["norm"] = R.norm();
                   return std::max(0.0, 0.5 - R.norm());
                 }});

  if (p.actions && p.lagrangian && p.n >= 2) {
    const ActionFunctions S = *p.actions;
    const Lagrangian L = *p.lagrangian;
    const int n = p.n, nu = p.nu;
    out.push_back({"geometry.transversality_kernel", "moving_boundary.level_set_kernel",
                   1e-9, [S, L, n, nu](Rng& rng, CheckRecord& rec) {
                     // Boundary displacements inside the level sets of the
                     // actions annihilate the residual; the solution space has
                     // dimension nu.
                     SurfaceField surf;
                     const MatrixXd jet0 = rng.matrix(n, nu, -0.3, 0.3);
                     surf.x = [jet0](const VectorXd& t) { return VectorXd(jet0.transpose() * t); };
                     surf.jet = [jet0](const VectorXd&) { return jet0; };
                     const VectorXd t0 = rng.vector(n, -0.5, 0.5);
                     const VectorXd x0 = surf.x(t0);
                     MatrixXd Mt, Mx;
                     action_jacobians(S, t0, x0, Mt, Mx);
                     MatrixXd G(n, n + nu);
                     G << Mt, Mx;
                     // Kernel basis from the full SVD.
                     Eigen::JacobiSVD<MatrixXd> svd(G, Eigen::ComputeFullV);
                     const int kd = n + nu - int(svd.rank());
                     rec.witness["kernel_dimension"] = kd;
                     double worst = (kd == nu) ? 0.0 : 1.0;
                     for (int c = 0; c < kd; ++c) {
                       const VectorXd w = svd.matrixV().col(n + nu - 1 - c);
                       BoundaryFieldPair pair;
                       pair.T = [w, n](const VectorXd&, const VectorXd&) {
                         return VectorXd(w.head(n));
                       };
                       pair.X = [w, n, nu](const VectorXd&, const VectorXd&) {
                         return VectorXd(w.tail(nu));
                       };
                       worst = std::max(
                           worst,
                           transversality_residual(L, surf, pair, t0).cwiseAbs().maxCoeff());
                     }
                     // Zero displacement gives a zero residual.
                     BoundaryFieldPair zero;
                     zero.T = [n](const VectorXd&, const VectorXd&) {
                       return VectorXd(VectorXd::Zero(n));
                     };
                     zero.X = [nu](const VectorXd&, const VectorXd&) {
                       return VectorXd(VectorXd::Zero(nu));
                     };
                     worst = std::max(
                         worst, transversality_residual(L, surf, zero, t0).cwiseAbs().maxCoeff());
                     return worst;
                   }});
  }
}

// ----------------------------------------------------------------------- hopf

void add_hopf_checks(CheckList& out, const ProblemSpec& p) {
  if (p.variant == "hopf3") {
    const int res = p.samples;
    out.push_back({"hopf.obstruction_formula", "contact_form.nonintegrability_coefficient",
                   1e-6, [res](Rng&, CheckRecord&) {
                     double worst = 0.0;
                     for (int i = 0; i < res; ++i)
                       for (int j = 0; j < res; ++j)
                         for (int l = 0; l < res; ++l) {
                           auto coord = [res](int c) {
                             return -1.0 + 2.0 * c / double(res - 1);
                           };
                           const Chart3Point pt{coord(i), coord(j), coord(l)};
                           const double expect =
                               -(pt.zeta1 * pt.zeta1 + pt.zeta2 * pt.zeta2);
                           worst = std::max(worst,
                                            std::abs(contact_obstruction(pt) - expect));
                         }
                     return worst;
                   }});

    out.push_back({"hopf.obstruction_nonzero", "contact_form.dense_obstruction", 0.01,
                   [](Rng& rng, CheckRecord& rec) {
                     int nonzero = 0;
                     const int total = 500;
                     for (int s = 0; s < total; ++s) {
                       const Chart3Point pt{rng.uniform(-1, 1), rng.uniform(-1, 1),
                                            rng.uniform(-1, 1)};
                       if (std::abs(contact_obstruction(pt)) > 1e-9) ++nonzero;
                     }
                     rec.note = "transversal plane field admits no generating functions";
                     rec.witness["nonzero_fraction"] = double(nonzero) / total;
                     return 1.0 - double(nonzero) / total;  // expect >= 99% nonzero
                   }});

    out.push_back({"hopf.fiber_vector_route", "fiber_field.projection_derivative", 1e-7,
                   [](Rng& rng, CheckRecord&) {
                     double worst = 0.0;
                     for (int s = 0; s < 50; ++s) {
                       const Chart3Point pt{rng.uniform(-1, 1), rng.uniform(-1, 1),
                                            rng.uniform(-1, 1)};
                       const double h = 1e-6;
                       const Eigen::Vector3d d =
                           (hopf3_fiber_projection(pt, h) - hopf3_fiber_projection(pt, -h)) /
                           (2.0 * h);
                       worst = std::max(worst, (d - hopf3_data(pt).X).cwiseAbs().maxCoeff());
                     }
                     return worst;
                   }});

    out.push_back({"hopf.metric_norm", "fiber_field.metric_length", 1e-12,
                   [](Rng& rng, CheckRecord&) {
                     double worst = 0.0;
                     for (int s = 0; s < 50; ++s) {
                       const Chart3Point pt{rng.uniform(-1, 1), rng.uniform(-1, 1),
                                            rng.uniform(-1, 1)};
                       const Hopf3Data d = hopf3_data(pt);
                       const double lhs = d.conformal * d.X.squaredNorm();
                       // The form coefficients coincide with the vector components.
                       double rhs = 0.0;
                       for (int c = 0; c < 3; ++c) rhs += d.xi.coeffs()(c) * d.X(c);
                       rhs *= d.conformal;
                       worst = std::max(worst, std::abs(lhs - rhs));
                       if (lhs <= 0.0) worst = std::max(worst, 1.0);
                     }
                     return worst;
                   }});
  }

  if (p.variant == "hopf7") {
    out.push_back({"hopf.s7_unit_minor", "volume_integrand.normalization", 1e-14,
                   [](Rng&, CheckRecord&) {
                     MatrixXd q = MatrixXd::Zero(3, 7);
                     q(0, 0) = q(1, 1) = q(2, 2) = 1.0;
                     return std::abs(s7_integrand(VectorXd::Zero(7), q) - 1.0);
                   }});

    out.push_back({"hopf.s7_homogeneity", "volume_integrand.cubic_homogeneity", 1e-10,
                   [](Rng& rng, CheckRecord&) {
                     double worst = 0.0;
                     for (int s = 0; s < 100; ++s) {
                       const VectorXd pt = rng.vector(7, -1, 1);
                       const MatrixXd q = rng.matrix(3, 7, -1, 1);
                       const double lam = rng.uniform(-2, 2);
                       const double lhs = s7_integrand(pt, lam * q);
                       const double rhs =
                           std::pow(std::abs(lam), 3.0) * s7_integrand(pt, q);
                       worst = std::max(worst, std::abs(lhs - rhs) /
                                                   std::max(1.0, std::abs(rhs)));
                     }
                     return worst;
                   }});

    out.push_back({"hopf.s7_jet_nonconvex", "volume_integrand.jet_midpoint_violations", 0.5,
                   [](Rng& rng, CheckRecord& rec) {
                     const VectorXd pt = VectorXd::Zero(7);
                     int violations = 0;
                     for (int s = 0; s < 10000; ++s) {
                       const MatrixXd q1 = rng.matrix(3, 7, -1, 1);
                       const MatrixXd q2 = rng.matrix(3, 7, -1, 1);
                       const double mid = s7_integrand(pt, 0.5 * (q1 + q2));
                       const double avg =
                           0.5 * (s7_integrand(pt, q1) + s7_integrand(pt, q2));
                       if (mid > avg + 1e-12) ++violations;
                     }
                     rec.witness["violations"] = violations;
                     rec.note = "midpoint convexity fails in jet coordinates";
                     return violations > 0 ? 0.0 : 1.0;
                   }});

    out.push_back({"hopf.s7_minor_convex", "volume_integrand.minor_midpoint_convexity", 0.5,
                   [](Rng& rng, CheckRecord& rec) {
                     const VectorXd pt = VectorXd::Zero(7);
                     const int dim = int(binom_l(7, 3));
                     int violations = 0;
                     for (int s = 0; s < 10000; ++s) {
                       const VectorXd m1 = rng.vector(dim, -1, 1);
                       const VectorXd m2 = rng.vector(dim, -1, 1);
                       const double mid = s7_integrand_on_minors(pt, 0.5 * (m1 + m2));
                       const double avg = 0.5 * (s7_integrand_on_minors(pt, m1) +
                                                 s7_integrand_on_minors(pt, m2));
                       if (mid > avg + 1e-12) ++violations;
                     }
                     rec.witness["violations"] = violations;
                     rec.note = "norm of the minor vector is midpoint convex";
                     return violations == 0 ? 0.0 : 1.0;
                   }});

    out.push_back({"hopf.s7_fiber_chart", "fiber_field.chart_sampling", 1e-12,
                   [](Rng& rng, CheckRecord&) {
                     double worst = 0.0;
                     for (int s = 0; s < 20; ++s) {
                       Quat sigma{1.0 + rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3),
                                  rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3)};
                       const Quat z{0.8, 0.1, -0.2, 0.05};
                       const Quat w{0.3, -0.1, 0.25, 0.4};
                       const VectorXd c = hopf7_fiber_point(sigma, z, w);
                       if (!c.allFinite()) worst = 1.0;
                     }
                     return worst;
                   }});
  }
}

int thread_cap() {
  const char* env = std::getenv("VARFIELD_THREADS");
  if (!env) return 1;
  const int v = std::atoi(env);
  return v > 0 ? v : 1;
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"transforms", "excess", "conditions", "canonical", "geometry", "hopf"};
}

Report run_suite(const ProblemSpec& problem, const std::vector<std::string>& suites,
                 std::uint64_t seed, double tol_scale) {
  CheckList checks;
  for (const auto& s : suites) {
    if (s == "transforms") add_transform_checks(checks, problem);
    else if (s == "excess") add_excess_checks(checks, problem);
    else if (s == "conditions") add_condition_checks(checks, problem);
    else if (s == "canonical") add_canonical_checks(checks, problem);
    else if (s == "geometry") add_geometry_checks(checks, problem);
    else if (s == "hopf") add_hopf_checks(checks, problem);
    else throw std::invalid_argument("unknown suite '" + s + "'");
  }

  Report report;
  report.problem = problem.name;
  report.seed = seed;
  report.tol_scale = tol_scale;
  report.checks.resize(checks.size());

  auto run_one = [&](size_t i) {
    const Check& c = checks[i];
    CheckRecord rec;
    rec.name = c.name;
    rec.law = c.law;
    rec.tolerance = c.tol * tol_scale;
    Rng rng(hash_name(seed, c.name.c_str()));
    try {
      rec.max_residual = c.run(rng, rec);
      rec.pass = rec.max_residual <= rec.tolerance;
    } catch (const std::exception& e) {
      rec.max_residual = std::numeric_limits<double>::infinity();
      rec.pass = false;
      rec.note = std::string("check aborted: ") + e.what();
    }
    report.checks[i] = std::move(rec);
  };

  const int workers = std::min<int>(thread_cap(), int(checks.size() ? checks.size() : 1));
  if (workers <= 1) {
    for (size_t i = 0; i < checks.size(); ++i) run_one(i);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::future<void>> pool;
    for (int w = 0; w < workers; ++w)
      pool.push_back(std::async(std::launch::async, [&]() {
        for (size_t i = next.fetch_add(1); i < checks.size(); i = next.fetch_add(1)) run_one(i);
      }));
    for (auto& f : pool) f.get();
  }
  return report;
}

}  // namespace varfield

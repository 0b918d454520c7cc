#include <doctest.h>

#include <algorithm>

#include "varfield/catalog.hpp"
#include "varfield/canonical.hpp"

using namespace varfield;

namespace {

// Linear action family S^i = c t^i + N(i,:) x with explicit Jacobians.
ActionFunctions linear_actions(double c, const MatrixXd& N) {
  ActionFunctions S;
  S.n = int(N.rows());
  S.nu = int(N.cols());
  for (int i = 0; i < S.n; ++i)
    S.S.push_back([i, c, N](const VectorXd& t, const VectorXd& x) {
      return c * t(i) + N.row(i).dot(x);
    });
  return S;
}

}  // namespace

TEST_CASE("invariant form value") {
  Rng rng(61);
  const int n = 3, nu = 2;
  SUBCASE("pure time actions count the blocks") {
    ActionFunctions S = linear_actions(1.0, MatrixXd::Zero(n, nu));
    const MatrixXd xdot = rng.matrix(n, nu, -1, 1);
    for (int k = 1; k <= n; ++k)
      CHECK(invariant_form_value(S, VectorXd::Zero(n), VectorXd::Zero(nu), xdot, k) ==
            doctest::Approx(binom(n, k)).epsilon(1e-9));
  }
  SUBCASE("matches the principal minor sum of the full derivative") {
    const MatrixXd N = rng.matrix(n, nu, -1, 1);
    const MatrixXd Tc = rng.matrix(n, n, -1, 1);
    ActionFunctions S;
    S.n = n;
    S.nu = nu;
    for (int i = 0; i < n; ++i)
      S.S.push_back([i, Tc, N](const VectorXd& t, const VectorXd& x) {
        return Tc.row(i).dot(t) + N.row(i).dot(x);
      });
    const MatrixXd xdot = rng.matrix(n, nu, -1, 1);
    const MatrixXd C = Tc + N * xdot.transpose();
    for (int k = 1; k <= n; ++k)
      CHECK(invariant_form_value(S, rng.vector(n, -1, 1), rng.vector(nu, -1, 1), xdot, k) ==
            doctest::Approx(principal_minor_sum(C, k)).epsilon(1e-8));
  }
  SUBCASE("column expansion reproduces the direct value") {
    const MatrixXd N = rng.matrix(n, nu, -1, 1);
    const MatrixXd Tc = rng.matrix(n, n, -1, 1);
    ActionFunctions S;
    S.n = n;
    S.nu = nu;
    for (int i = 0; i < n; ++i)
      S.S.push_back([i, Tc, N](const VectorXd& t, const VectorXd& x) {
        return Tc.row(i).dot(t) + N.row(i).dot(x);
      });
    S.jacobians = [Tc, N](const VectorXd&, const VectorXd&, MatrixXd& Mt, MatrixXd& Mx) {
      Mt = Tc;
      Mx = N;
    };
    const VectorXd t = rng.vector(n, -1, 1), x = rng.vector(nu, -1, 1);
    for (int k = 1; k <= n; ++k)
      for (int trial = 0; trial < 5; ++trial) {
        const MatrixXd xdot = rng.matrix(n, nu, -1, 1);
        CHECK(invariant_form_expansion(S, t, x, xdot, k) ==
              doctest::Approx(invariant_form_value(S, t, x, xdot, k)).epsilon(1e-10));
      }
  }
}

TEST_CASE("calibrand expansion equals the block assembly") {
  Rng rng(62);
  const ProblemSpec p = load_catalog_problem("volume_kn");
  const auto pts = p.sample_points();
  const auto& [t, x] = pts.front();
  for (int trial = 0; trial < 10; ++trial) {
    const MatrixXd q = p.slope->eval(t, x) + rng.matrix(p.n, p.nu, -1, 1);
    const double blocks = poincare_cartan_blocks(*p.lagrangian, *p.slope, t, x, q, p.k);
    const double expansion = poincare_cartan_expansion(*p.lagrangian, *p.slope, t, x, q, p.k);
    CHECK(blocks == doctest::Approx(expansion).epsilon(1e-9));
  }
  // On the slope field both give f_hat.
  const MatrixXd g = p.slope->eval(t, x);
  CHECK(poincare_cartan_blocks(*p.lagrangian, *p.slope, t, x, g, p.k) ==
        doctest::Approx(p.lagrangian->eval(t, x, g)).epsilon(1e-12));
}

TEST_CASE("degree one calibrand has no higher minors") {
  Rng rng(63);
  const ProblemSpec p = load_catalog_problem("dirichlet_k1");
  const auto& [t, x] = p.sample_points().front();
  const MatrixXd g = p.slope->eval(t, x);
  const MatrixXd q = g + rng.matrix(p.n, p.nu, -1, 1);
  const MatrixXd ph = p.lagrangian->gradient(t, x, g);
  const double expect =
      p.lagrangian->eval(t, x, g) + (ph.array() * (q - g).array()).sum();
  CHECK(poincare_cartan_expansion(*p.lagrangian, *p.slope, t, x, q, 1) ==
        doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("canonical coordinate scaling") {
  Rng rng(64);
  const int n = 3, k = 2;
  const MatrixXd qs = rng.matrix(n, 2, -1, 1);
  SUBCASE("unit point") {
    const MatrixXd Q = canonical_coords(qs, double(n) / k, k, n);
    CHECK((Q - qs).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("round trip") {
    const double H = 1.7;
    const MatrixXd Q = canonical_coords(qs, H, k, n);
    CHECK((MatrixXd(k * H / double(n) * Q) - qs).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("vanishing H is rejected") {
    CHECK_THROWS_AS(canonical_coords(qs, 1e-15, k, n), std::runtime_error);
  }
  SUBCASE("both assemblies of the invariant form agree") {
    const double H = 0.9;
    const MatrixXd Q = canonical_coords(qs, H, k, n);
    const FormValue a = omega_value(H, Q, n, 2, k);
    const FormValue b = omega_value(H, MatrixXd(double(n) / (k * H) * qs), n, 2, k);
    CHECK((a.coeffs() - b.coeffs()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("invariant form coefficients") {
  const int n = 3, nu = 2, k = 2;
  SUBCASE("zero momenta leave only the base volume term") {
    const FormValue om = omega_value(2.0, MatrixXd::Zero(n, nu), n, nu, k);
    MultiIndex base{0, 1, 2};
    CHECK(om[base] == doctest::Approx(binom(n, k) * 2.0));
    CHECK(om.coeffs().cwiseAbs().sum() == doctest::Approx(binom(n, k) * 2.0));
  }
  SUBCASE("single base direction") {
    MatrixXd Q(1, 2);
    Q << 0.3, -0.7;
    const FormValue om = omega_value(1.5, Q, 1, 2, 1);
    CHECK(om[{0}] == doctest::Approx(1.5));
    CHECK(om[{1}] == doctest::Approx(1.5 * 0.3));
    CHECK(om[{2}] == doctest::Approx(1.5 * -0.7));
  }
}

TEST_CASE("closedness of the oscillator field") {
  const ProblemSpec p = load_catalog_problem("oscillator");
  REQUIRE(p.actions);
  const CanonicalField CF = canonical_from_actions(*p.actions, p.k);
  const auto pts = p.sample_points();

  SUBCASE("the derived field matches the closed-form solution data") {
    const auto& [t, x] = pts[3];
    CHECK(CF.H(t, x) ==
          doctest::Approx(0.5 / std::pow(std::cos(t(0)), 2) * x.squaredNorm())
              .epsilon(1e-7));
    const MatrixXd qs = CF.q_star(t, x);
    CHECK(qs(0, 0) == doctest::Approx(std::tan(t(0)) * x(0)).epsilon(1e-8));
    CHECK(qs(0, 1) == doctest::Approx(std::tan(t(0)) * x(1)).epsilon(1e-8));
  }

  SUBCASE("all closedness residuals vanish on the grid") {
    for (size_t i = 0; i < pts.size(); i += 7) {
      const auto& [t, x] = pts[i];
      CHECK(std::abs(closedness_residual(CF, t, x, {}, {0})) < 1e-5);
      CHECK(std::abs(closedness_residual(CF, t, x, {}, {1})) < 1e-5);
      CHECK(std::abs(closedness_residual(CF, t, x, {0}, {0, 1})) < 1e-5);
    }
  }

  SUBCASE("constant data is exactly closed") {
    CanonicalField flat;
    flat.n = 1;
    flat.nu = 2;
    flat.k = 1;
    flat.H = [](const VectorXd&, const VectorXd&) { return 2.0; };
    flat.Q = [](const VectorXd&, const VectorXd&) {
      MatrixXd Q(1, 2);
      Q << 0.4, -0.2;
      return Q;
    };
    flat.q_star = flat.Q;
    const auto& [t, x] = pts.front();
    CHECK(std::abs(closedness_residual(flat, t, x, {}, {0})) < 1e-12);
    CHECK(std::abs(closedness_residual(flat, t, x, {0}, {0, 1})) < 1e-12);
  }

  SUBCASE("a perturbed field is detected") {
    CanonicalField bad = CF;
    const TXMatrix q0 = CF.Q;
    bad.Q = [q0](const VectorXd& t, const VectorXd& x) {
      MatrixXd Q = q0(t, x);
      Q(0, 0) += 0.1 * x(0) * x(0);
      return Q;
    };
    int detected = 0, total = 0;
    for (const auto& [t, x] : pts) {
      double worst = 0.0;
      worst = std::max(worst, std::abs(closedness_residual(bad, t, x, {}, {0})));
      worst = std::max(worst, std::abs(closedness_residual(bad, t, x, {}, {1})));
      worst = std::max(worst, std::abs(closedness_residual(bad, t, x, {0}, {0, 1})));
      ++total;
      if (worst > 1e-3) ++detected;
    }
    CHECK(detected >= (9 * total) / 10);
  }

  SUBCASE("targeted coefficients match the generic exterior derivative") {
    const FormField om = omega_field(CF);
    const auto& [t, x] = pts[pts.size() / 2];
    VectorXd chart(3);
    chart << t, x;
    const FormValue d = ext_derivative(om, chart);
    CHECK(std::abs(closedness_residual(CF, t, x, {}, {0}) - d[{0, 1}]) < 1e-6);
    CHECK(std::abs(closedness_residual(CF, t, x, {}, {1}) - d[{0, 2}]) < 1e-6);
    CHECK(std::abs(closedness_residual(CF, t, x, {0}, {0, 1}) - d[{1, 2}]) < 1e-6);
  }

  SUBCASE("potential forms agree up to the block count") {
    const auto& [t, x] = pts[1];
    const double prod = product_potential_residual(CF, t, x, 0, 0, 1);
    const double mom = momentum_potential_residual(CF, t, x, 0, 0, 1);
    CHECK(prod == doctest::Approx(binom(1, 1) * mom).epsilon(1e-6).scale(1.0));
    CHECK(std::abs(mom) < 1e-6);  // exact field: momenta have a potential
    CHECK(std::abs(closedness_residual_div(CF, t, x, 0)) < 1e-6);
    CHECK(std::abs(closedness_residual_div(CF, t, x, 1)) < 1e-6);
  }
}

TEST_CASE("action identities on the shifted-diagonal family") {
  Rng rng(65);
  const int n = 3, nu = 2, k = 2;
  const double c = rng.uniform(0.6, 1.8);
  const MatrixXd N = rng.matrix(n, nu, -1, 1);
  const ActionFunctions S = linear_actions(c, N);
  const CanonicalField CF = canonical_from_actions(S, k);
  const VectorXd t = rng.vector(n, -1, 1), x = rng.vector(nu, -1, 1);

  SUBCASE("level zero recovers H") {
    CHECK(std::abs(action_plucker_identity(S, CF, t, x, {}, {}, k)) < 1e-9);
    CHECK(CF.H(t, x) == doctest::Approx(binom(n, k) * c * c).epsilon(1e-8));
  }
  SUBCASE("level one is the normalized replacement sum") {
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < nu; ++a)
        CHECK(std::abs(action_plucker_identity(S, CF, t, x, {i}, {a}, k)) < 1e-9);
    // q* for this family is c^{k-1} N.
    const MatrixXd qs = CF.q_star(t, x);
    CHECK((qs - MatrixXd(c * N)).cwiseAbs().maxCoeff() < 1e-8);
  }
  SUBCASE("level two closes with the quadratic minors") {
    for (const auto& J : combinations(n, 2))
      for (const auto& Xi : combinations(nu, 2))
        CHECK(std::abs(action_plucker_identity(S, CF, t, x, J, Xi, k)) < 1e-8);
  }
  SUBCASE("the restricted form reproduces the minor-sum integrand") {
    // Substituting dx = xdot dt into the product form leaves the principal
    // block minors of I + Q xdot^T, scaled by H / C(n,k).
    const MatrixXd xdot = rng.matrix(n, nu, -1, 1);
    const double lhs = invariant_form_value(S, t, x, xdot, k);
    const MatrixXd Q = CF.Q(t, x);
    const double Hom = CF.H(t, x) / binom(n, k);
    const double rhs =
        principal_minor_sum(MatrixXd::Identity(n, n) + Q * xdot.transpose(), k);
    CHECK(lhs == doctest::Approx(Hom * rhs).epsilon(1e-8));
  }
}

TEST_CASE("invariant form argument checking") {
  CHECK_THROWS_AS(omega_value(1e-15, MatrixXd::Zero(2, 2), 2, 2, 1), std::runtime_error);
  const ProblemSpec p = load_catalog_problem("oscillator");
  const CanonicalField CF = canonical_from_actions(*p.actions, 1);
  const auto& [t, x] = p.sample_points().front();
  CHECK_THROWS_AS(closedness_residual(CF, t, x, {0}, {0}), std::invalid_argument);
}

TEST_CASE("canonical system residuals") {
  const ProblemSpec p = load_catalog_problem("oscillator");
  REQUIRE(p.hamiltonian);

  SUBCASE("circular solution of the oscillator flow") {
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
    for (double tv = 0.1; tv < 1.0; tv += 0.3) {
      const auto r =
          canonical_system_residual(*p.hamiltonian, tr, VectorXd::Constant(1, tv), 1);
      CHECK(r.momentum_eq.cwiseAbs().maxCoeff() < 1e-5);
      CHECK(r.velocity_eq.cwiseAbs().maxCoeff() < 1e-5);
    }
  }
  SUBCASE("constant data on a constant hamiltonian") {
    HamiltonianData Hd;
    Hd.n = 1;
    Hd.nu = 2;
    Hd.eval = [](const VectorXd&, const VectorXd&, const MatrixXd&) { return 3.0; };
    Trajectory tr;
    tr.x = [](const VectorXd&) { return VectorXd(VectorXd::Constant(2, 0.7)); };
    tr.q_star = [](const VectorXd&) { return MatrixXd(MatrixXd::Constant(1, 2, -0.2)); };
    const auto r = canonical_system_residual(Hd, tr, VectorXd::Constant(1, 0.5), 1);
    CHECK(r.momentum_eq.cwiseAbs().maxCoeff() < 1e-9);
    CHECK(r.velocity_eq.cwiseAbs().maxCoeff() < 1e-9);
  }
  SUBCASE("field form of the momentum equation holds for the derived field") {
    // On the canonical field of the actions, the partial t-derivative of q*
    // balances the x-gradient of H pointwise.
    const CanonicalField CF = canonical_from_actions(*p.actions, 1);
    const auto pts = p.sample_points();
    for (size_t i = 0; i < pts.size(); i += 11) {
      const auto& [t, x] = pts[i];
      const double h = 1e-6;
      VectorXd tp = t, tm = t;
      tp(0) += h;
      tm(0) -= h;
      const MatrixXd dq = (CF.q_star(tp, x) - CF.q_star(tm, x)) / (2.0 * h);
      for (int mu = 0; mu < 2; ++mu) {
        VectorXd xp = x, xm = x;
        xp(mu) += h;
        xm(mu) -= h;
        const double dH = (CF.H(t, xp) - CF.H(t, xm)) / (2.0 * h);
        CHECK(dq(0, mu) == doctest::Approx(dH).epsilon(1e-4).scale(1.0));
      }
    }
  }
}

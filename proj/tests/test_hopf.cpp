#include <doctest.h>

#include "varfield/hopf.hpp"
#include "varfield/rng.hpp"

using namespace varfield;

TEST_CASE("chart data at the origin") {
  const Hopf3Data d = hopf3_data({0, 0, 0});
  CHECK(d.conformal == doctest::Approx(1.0));
  CHECK(d.X(0) == doctest::Approx(1.0));
  CHECK(d.X(1) == doctest::Approx(0.0));
  CHECK(d.X(2) == doctest::Approx(0.0));
}

TEST_CASE("form coefficients equal the vector components") {
  Rng rng(81);
  for (int s = 0; s < 20; ++s) {
    const Chart3Point p{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const Hopf3Data d = hopf3_data(p);
    for (int c = 0; c < 3; ++c) CHECK(d.xi.coeffs()(c) == doctest::Approx(d.X(c)));
    // Squared metric length is the conformal factor times the flat length.
    CHECK(d.conformal * d.X.squaredNorm() > 0.0);
  }
}

TEST_CASE("fiber projection differentiates to the printed field") {
  Rng rng(82);
  for (int s = 0; s < 30; ++s) {
    const Chart3Point p{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const double h = 1e-6;
    const Eigen::Vector3d d =
        (hopf3_fiber_projection(p, h) - hopf3_fiber_projection(p, -h)) / (2.0 * h);
    CHECK((d - hopf3_data(p).X).cwiseAbs().maxCoeff() < 1e-7);
  }
}

TEST_CASE("exterior derivative of the annihilator form") {
  // d xi = -zeta1 d(eta)^d(zeta1) + zeta2 d(eta)^d(zeta2), no zeta-zeta term.
  Rng rng(83);
  for (int s = 0; s < 10; ++s) {
    const VectorXd c = rng.vector(3, -1, 1);
    const FormValue dxi = ext_derivative(hopf3_xi_field(), c);
    CHECK(dxi[{0, 1}] == doctest::Approx(-c(1)).epsilon(1e-6));
    CHECK(dxi[{0, 2}] == doctest::Approx(c(2)).epsilon(1e-6));
    CHECK(std::abs(dxi[{1, 2}]) < 1e-6);
  }
}

TEST_CASE("contact obstruction") {
  SUBCASE("matches the closed form everywhere sampled") {
    Rng rng(84);
    for (int s = 0; s < 40; ++s) {
      const Chart3Point p{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
      CHECK(contact_obstruction(p) ==
            doctest::Approx(-(p.zeta1 * p.zeta1 + p.zeta2 * p.zeta2))
                .epsilon(1e-6)
                .scale(1.0));
    }
  }
  SUBCASE("pinned values") {
    CHECK(contact_obstruction({0, 1, 0}) == doctest::Approx(-1.0).epsilon(1e-7));
    CHECK(contact_obstruction({0, 1, 1}) == doctest::Approx(-2.0).epsilon(1e-7));
    CHECK(std::abs(contact_obstruction({0.7, 0, 0})) < 1e-8);
    CHECK(std::abs(contact_obstruction({-1.3, 0, 0})) < 1e-8);
  }
}

TEST_CASE("seven sphere integrand") {
  SUBCASE("unit minor at the pole") {
    MatrixXd q = MatrixXd::Zero(3, 7);
    q(0, 0) = q(1, 1) = q(2, 2) = 1.0;
    CHECK(s7_integrand(VectorXd::Zero(7), q) == doctest::Approx(1.0));
  }
  SUBCASE("zero jet") {
    CHECK(s7_integrand(VectorXd::Zero(7), MatrixXd::Zero(3, 7)) == doctest::Approx(0.0));
  }
  SUBCASE("cubic homogeneity in the jet") {
    Rng rng(85);
    for (int s = 0; s < 30; ++s) {
      const VectorXd p = rng.vector(7, -1, 1);
      const MatrixXd q = rng.matrix(3, 7, -1, 1);
      const double lam = rng.uniform(-2.0, 2.0);
      CHECK(s7_integrand(p, lam * q) ==
            doctest::Approx(std::pow(std::abs(lam), 3.0) * s7_integrand(p, q))
                .epsilon(1e-10));
    }
  }
  SUBCASE("midpoint convexity holds on minor vectors, fails on jets") {
    Rng rng(86);
    const VectorXd p = VectorXd::Zero(7);
    int jet_violations = 0;
    for (int s = 0; s < 10000; ++s) {
      const MatrixXd q1 = rng.matrix(3, 7, -1, 1);
      const MatrixXd q2 = rng.matrix(3, 7, -1, 1);
      if (s7_integrand(p, 0.5 * (q1 + q2)) >
          0.5 * (s7_integrand(p, q1) + s7_integrand(p, q2)) + 1e-12)
        ++jet_violations;
    }
    CHECK(jet_violations > 0);

    const int dim = int(binom_l(7, 3));
    int minor_violations = 0;
    for (int s = 0; s < 10000; ++s) {
      const VectorXd m1 = rng.vector(dim, -1, 1);
      const VectorXd m2 = rng.vector(dim, -1, 1);
      if (s7_integrand_on_minors(p, 0.5 * (m1 + m2)) >
          0.5 * (s7_integrand_on_minors(p, m1) + s7_integrand_on_minors(p, m2)) + 1e-12)
        ++minor_violations;
    }
    CHECK(minor_violations == 0);
  }
}

TEST_CASE("quaternion fiber sampling") {
  // sigma = 1 reproduces the base point's chart coordinates.
  const Quat z{0.8, 0.1, -0.2, 0.05};
  const Quat w{0.3, -0.1, 0.25, 0.4};
  const VectorXd c = hopf7_fiber_point({1, 0, 0, 0}, z, w);
  CHECK(c(0) == doctest::Approx(z[1] / z[0]));
  CHECK(c(3) == doctest::Approx(w[0] / z[0]));

  // Quaternion product is associative and norm-multiplicative.
  Rng rng(87);
  auto norm2 = [](const Quat& q) {
    return q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3];
  };
  for (int s = 0; s < 10; ++s) {
    Quat a{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    Quat b{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    Quat q{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const Quat lhs = quat_mul(quat_mul(a, b), q);
    const Quat rhs = quat_mul(a, quat_mul(b, q));
    for (int i = 0; i < 4; ++i) CHECK(lhs[i] == doctest::Approx(rhs[i]).epsilon(1e-12));
    CHECK(norm2(quat_mul(a, b)) == doctest::Approx(norm2(a) * norm2(b)).epsilon(1e-12));
  }
}

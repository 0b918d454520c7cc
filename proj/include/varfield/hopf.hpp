#pragma once

#include <Eigen/Dense>
#include <array>

#include "varfield/forms.hpp"

namespace varfield {

/// Projective chart coordinates (eta, zeta1, zeta2) on the 3-sphere bundle.
struct Chart3Point {
  double eta = 0.0;
  double zeta1 = 0.0;
  double zeta2 = 0.0;

  Eigen::Vector3d coords() const { return {eta, zeta1, zeta2}; }
};

struct Hopf3Data {
  double conformal = 0.0;     // (1 + eta^2 + zeta1^2 + zeta2^2)^{-2}
  Eigen::Vector3d X;          // tangent vector of the fiber through the point
  FormValue xi;               // annihilator 1-form of the transversal planes
};

Hopf3Data hopf3_data(const Chart3Point& p);

/// The fiber through (eta, zeta1, zeta2), rotated by the angle phi and
/// centrally re-projected onto the chart. Differentiating at phi = 0
/// recovers the field X.
Eigen::Vector3d hopf3_fiber_projection(const Chart3Point& p, double phi);

FormField hopf3_xi_field();

/// Coefficient of d(eta) ^ d(zeta1) ^ d(zeta2) in xi ^ d(xi), computed by
/// finite-difference exterior differentiation. Nonzero on a dense set: the
/// transversal plane distribution is not integrable.
double contact_obstruction(const Chart3Point& p);

/// Quaternion helpers for the 7-sphere chart.
using Quat = std::array<double, 4>;

Quat quat_mul(const Quat& a, const Quat& b);

/// Chart coordinates (eta_1..eta_3, zeta_0..zeta_3) of the fiber point
/// sigma . (z, w), centrally projected. Throws when the projection leaves
/// the chart (first coordinate of sigma z vanishes).
Eigen::VectorXd hopf7_fiber_point(const Quat& sigma, const Quat& z, const Quat& w);

/// Volume integrand on the 7-dimensional chart: the conformal factor
/// (1 + |p|^2)^{-3} times the Euclidean norm of the grade-3 minor vector of
/// the 3 x 7 jet.
double s7_integrand(const Eigen::VectorXd& p, const MatrixXd& q);

/// The same norm as a function of a free grade-3 minor vector.
double s7_integrand_on_minors(const Eigen::VectorXd& p, const VectorXd& minors);

}  // namespace varfield

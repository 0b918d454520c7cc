#include "varfield/hopf.hpp"

#include <cmath>
#include <stdexcept>

namespace varfield {

Hopf3Data hopf3_data(const Chart3Point& p) {
  Hopf3Data d;
  const double r2 = p.eta * p.eta + p.zeta1 * p.zeta1 + p.zeta2 * p.zeta2;
  d.conformal = 1.0 / ((1.0 + r2) * (1.0 + r2));
  d.X << 1.0 + p.eta * p.eta, -p.eta * p.zeta1 + p.zeta2, p.zeta1 + p.eta * p.zeta2;
  d.xi = FormValue(3, 1);
  d.xi.coeffs() << d.X(0), d.X(1), d.X(2);
  return d;
}

Eigen::Vector3d hopf3_fiber_projection(const Chart3Point& p, double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  const double a0 = c + p.eta * s;
  const double a1 = s - p.eta * c;
  const double a2 = p.zeta1 * c + p.zeta2 * s;
  const double a3 = p.zeta1 * s - p.zeta2 * c;
  if (std::abs(a0) < 1e-12) throw std::runtime_error("hopf3_fiber_projection: point leaves the chart");
  return {a1 / a0, a2 / a0, a3 / a0};
}

FormField hopf3_xi_field() {
  FormField f;
  f.dim = 3;
  f.grade = 1;
  f.eval = [](const VectorXd& c) {
    return hopf3_data({c(0), c(1), c(2)}).xi;
  };
  return f;
}

double contact_obstruction(const Chart3Point& p) {
  const VectorXd c = p.coords();
  const FormValue dxi = ext_derivative(hopf3_xi_field(), c);
  const FormValue prod = wedge(hopf3_data(p).xi, dxi);
  return prod[{0, 1, 2}];
}

Quat quat_mul(const Quat& a, const Quat& b) {
  return {a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
          a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
          a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
          a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
}

Eigen::VectorXd hopf7_fiber_point(const Quat& sigma, const Quat& z, const Quat& w) {
  const Quat sz = quat_mul(sigma, z);
  const Quat sw = quat_mul(sigma, w);
  if (std::abs(sz[0]) < 1e-12) throw std::runtime_error("hopf7_fiber_point: point leaves the chart");
  Eigen::VectorXd out(7);
  out << sz[1] / sz[0], sz[2] / sz[0], sz[3] / sz[0],
         sw[0] / sz[0], sw[1] / sz[0], sw[2] / sz[0], sw[3] / sz[0];
  return out;
}

double s7_integrand(const Eigen::VectorXd& p, const MatrixXd& q) {
  if (p.size() != 7 || q.rows() != 3 || q.cols() != 7)
    throw std::invalid_argument("s7_integrand: expects a 7-chart point and a 3 x 7 jet");
  double sum2 = 0.0;
  for (const auto& C : combinations(7, 3)) {
    Eigen::Matrix3d m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = q(i, C[j]);
    const double d = m.determinant();
    sum2 += d * d;
  }
  const double factor = std::pow(1.0 + p.squaredNorm(), -3.0);
  return factor * std::sqrt(sum2);
}

double s7_integrand_on_minors(const Eigen::VectorXd& p, const VectorXd& minors) {
  const double factor = std::pow(1.0 + p.squaredNorm(), -3.0);
  return factor * minors.norm();
}

}  // namespace varfield

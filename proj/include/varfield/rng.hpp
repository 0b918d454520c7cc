#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

namespace varfield {

/// Deterministic random source. Draws go through the raw 64-bit stream so
/// that sequences do not depend on standard-library distribution details.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double unit() { return double(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * unit(); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + int(eng_() % std::uint64_t(hi - lo + 1));
  }

  Eigen::MatrixXd matrix(int r, int c, double a, double b) {
    Eigen::MatrixXd m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = uniform(a, b);
    return m;
  }

  Eigen::VectorXd vector(int n, double a, double b) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = uniform(a, b);
    return v;
  }

  Eigen::VectorXd unit_vector(int n) {
    Eigen::VectorXd v(n);
    // Box-Muller on the raw stream keeps the draw portable.
    for (int i = 0; i < n; ++i) {
      double u1 = unit(), u2 = unit();
      while (u1 <= 1e-300) u1 = unit();
      v(i) = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }
    const double nrm = v.norm();
    return nrm > 0 ? Eigen::VectorXd(v / nrm) : unit_vector(n);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace varfield

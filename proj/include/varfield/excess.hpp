#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>

#include "varfield/multilinear.hpp"
#include "varfield/rng.hpp"

namespace varfield {

/// Evaluatable integrand f(t, x, q) with derivative access in q. The jet
/// matrix q is n x nu with the base index as the row. Analytic derivatives
/// are optional; callers fall back to central differences.
struct Lagrangian {
  int n = 0;
  int nu = 0;
  std::function<double(const VectorXd& t, const VectorXd& x, const MatrixXd& q)> eval;
  std::function<MatrixXd(const VectorXd&, const VectorXd&, const MatrixXd&)> grad_q;    // optional
  std::function<Tensor4(const VectorXd&, const VectorXd&, const MatrixXd&)> hess_q;     // optional

  MatrixXd gradient(const VectorXd& t, const VectorXd& x, const MatrixXd& q) const;
  Tensor4 hessian(const VectorXd& t, const VectorXd& x, const MatrixXd& q) const;
};

struct SlopeField {
  std::function<MatrixXd(const VectorXd& t, const VectorXd& x)> eval;
};

/// Degree-k excess of the integrand over its calibration along the slope
/// field: f(q) minus the block-determinant sum built from the field values
/// f_hat, p_hat and the deviation q - g. Vanishes with zero q-gradient at
/// q = g.
double excess_value(const Lagrangian& L, const SlopeField& g, const VectorXd& t,
                    const VectorXd& x, const MatrixXd& q, int k);

struct StationarityReport {
  MatrixXd gradient;      // finite-difference gradient of the excess at q = g
  double residual = 0.0;  // cofactor-assembled stationarity residual at q = g
};

StationarityReport excess_stationarity(const Lagrangian& L, const SlopeField& g,
                                       const VectorXd& t, const VectorXd& x, int k);

/// Second q-derivative of the excess at q = g:
/// hess f - n(k-1) / (k(n-1) f_hat) * (p^l_a p^m_b - p^l_b p^m_a),
/// the skew correction vanishing on rank-one increments.
Tensor4 corrected_hessian(const Lagrangian& L, const SlopeField& g, const VectorXd& t,
                          const VectorXd& x, int k);

enum class GeodesicMode { local, global };

struct GeodesicVerdict {
  bool geodesic = true;
  double worst = 0.0;            // most negative eigenvalue / excess found
  std::optional<MatrixXd> witness;
  VectorXd witness_t, witness_x;
};

/// Checks the slope field pointwise over the sample set. Local mode tests
/// positive semidefiniteness of the corrected Hessian; global mode runs a
/// multistart descent of the excess in q and looks for negative values.
GeodesicVerdict geodesic_field_check(const Lagrangian& L, const SlopeField& g,
                                     const std::vector<std::pair<VectorXd, VectorXd>>& samples,
                                     int k, GeodesicMode mode, Rng& rng,
                                     int starts = 32, double radius = 5.0);

}  // namespace varfield

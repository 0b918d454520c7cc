#pragma once

#include <Eigen/Dense>

#include "varfield/multilinear.hpp"
#include "varfield/rng.hpp"

namespace varfield {

/// Coefficients a(alpha, beta, i, j) of a quadratic form on n x nu jet
/// matrices, symmetric under the pair swap (alpha,i) <-> (beta,j).
struct QuadFormTensor {
  int n = 0;
  int nu = 0;
  Tensor4 a;  // dims (nu, nu, n, n)

  double pair_swap_defect() const;
};

/// Tensor r(alpha, beta, i, j), antisymmetric in (i,j) and in (alpha,beta).
struct SkewTensor {
  int n = 0;
  int nu = 0;
  Tensor4 r;

  double antisymmetry_defect() const;
};

/// Full contraction a(alpha,beta,i,j) xi^alpha xi^beta eta_i eta_j.
double biquadratic_eval(const QuadFormTensor& a, const VectorXd& xi, const VectorXd& eta);

/// Value of the quadratic form on an arbitrary jet matrix.
double quadratic_eval(const QuadFormTensor& a, const MatrixXd& q);

/// Builds the form tensor from a Hessian in jet layout (i,a,j,b).
QuadFormTensor quadform_from_hessian(const Tensor4& hess, int n, int nu);

enum class Rank1Verdict { fails, marginal, strict };

struct Rank1Report {
  double min_value = 0.0;   // minimum of the biquadratic over unit pairs
  double epsilon = 0.0;     // the strictness margin (equals min_value)
  Rank1Verdict verdict = Rank1Verdict::marginal;
  VectorXd xi, eta;         // minimizing pair
};

/// Minimum of the biquadratic form over |xi| = |eta| = 1 by alternating
/// smallest-eigenvalue iterations with random restarts.
Rank1Report hadamard_legendre_check(const QuadFormTensor& a, Rng& rng,
                                    int restarts = 64, int max_iters = 200);

/// Coarse cross-check of the rank-one minimum on a product-of-spheres grid
/// (angles only; intended for small n, nu).
double rank1_grid_min(const QuadFormTensor& a, int resolution = 20);

/// Smallest eigenvalue of the (n nu) x (n nu) symmetric representation.
double quadratic_min_full(const QuadFormTensor& a);

/// Adds the symmetrized skew contribution; leaves every rank-one value
/// unchanged.
QuadFormTensor skew_addition(const QuadFormTensor& a, const SkewTensor& r);

}  // namespace varfield

#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "varfield/combi.hpp"
#include "varfield/multilinear.hpp"

namespace varfield {

/// Value of an exterior form at a point of a chart of the given dimension:
/// a dense coefficient vector over increasing multi-indices of length
/// `grade`, in lexicographic order. Grade 0 is a scalar.
class FormValue {
 public:
  FormValue() : dim_(0), grade_(0) {}
  // Grades above the chart dimension carry no components (the zero form).
  FormValue(int dim, int grade)
      : dim_(dim), grade_(grade), coeffs_(VectorXd::Zero(binom_l(dim, grade))) {
    if (grade < 0) throw std::invalid_argument("FormValue: negative grade");
  }

  int dim() const { return dim_; }
  int grade() const { return grade_; }
  const VectorXd& coeffs() const { return coeffs_; }
  VectorXd& coeffs() { return coeffs_; }

  double& operator[](const MultiIndex& idx) { return coeffs_(combination_rank(idx, dim_)); }
  double operator[](const MultiIndex& idx) const { return coeffs_(combination_rank(idx, dim_)); }

  double norm() const { return coeffs_.size() ? coeffs_.cwiseAbs().maxCoeff() : 0.0; }

  FormValue& operator+=(const FormValue& o) {
    coeffs_ += o.coeffs_;
    return *this;
  }
  FormValue& operator*=(double s) {
    coeffs_ *= s;
    return *this;
  }

  /// Basis covector dx^c as a grade-1 form.
  static FormValue basis(int dim, int c) {
    FormValue f(dim, 1);
    f.coeffs()(c) = 1.0;
    return f;
  }

 private:
  int dim_, grade_;
  VectorXd coeffs_;
};

FormValue wedge(const FormValue& a, const FormValue& b);

/// Scalar field over a chart (coordinates packed into one vector).
struct ScalarField {
  int dim = 0;
  std::function<double(const VectorXd&)> eval;
};

/// Form-valued field over a chart.
struct FormField {
  int dim = 0;
  int grade = 0;
  std::function<FormValue(const VectorXd&)> eval;
};

/// Exterior derivative by central finite differences of the coefficient
/// functions, with antisymmetrization supplied by the wedge structure.
FormValue ext_derivative(const FormField& field, const VectorXd& point,
                         const FdOptions& opt = {});

/// Form-valued rank-one determinant expansion: phi_k and a_k are 1-forms,
/// b_k scalars; factors of each product are wedged in row order.
FormValue det_rank1_update(const std::vector<FormValue>& phi,
                           const std::vector<FormValue>& a, const VectorXd& b);

}  // namespace varfield
